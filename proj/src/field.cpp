#include "pplab/field.hpp"

#include <cmath>

namespace pplab {

namespace {

/// Combine up to four corner values with nonnegative weights, honoring the
/// flag-propagation rule: any flagged corner with positive weight dominates;
/// mixed flags are an error.
ExtReal combine(const ExtReal* vals, const double* w, int n) {
    int flag = 0;
    for (int k = 0; k < n; ++k) {
        if (w[k] <= 0.0) continue;
        if (!vals[k].finite()) {
            const int f = vals[k].flag();
            if (flag != 0 && flag != f)
                throw PreconditionError("interpolate: mixed infinity flags in stencil");
            flag = f;
        }
    }
    if (flag > 0) return ExtReal::pos_inf();
    if (flag < 0) return ExtReal::neg_inf();
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += w[k] * vals[k].value();
    return ExtReal(s);
}

ExtReal interp_polar(const GridFunction& f, double px, double py) {
    const Grid2D& g = *f.grid();
    const double r = std::hypot(px, py);
    const double theta = wrap_angle(std::atan2(py, px));
    if (r > 1.0 + 1e-12 || (g.kind == DomainKind::Annulus && r < g.r_in - 1e-12))
        throw PreconditionError("interpolate: point outside domain");

    // Angular bracket at shell resolution.
    const double tj = theta / g.dtheta;
    int j0 = static_cast<int>(std::floor(tj));
    const double wt = tj - j0;
    const int j1 = j0 + 1;

    // Radial bracket: shells plus the center (disk) and the boundary circles.
    auto value_at = [&](int shell, int col) -> ExtReal {
        if (shell < 0) {
            if (g.kind == DomainKind::UnitDisk) return f[g.center_node()];
            return f[g.boundary_node(1, g.trace_index_of_column(col))];
        }
        if (shell >= g.n_r) return f[g.boundary_node(0, g.trace_index_of_column(col))];
        return f[g.shell_node(shell, col)];
    };
    const double fi = (r - g.r_in) / g.dr - 1.0;  // shell index as a real
    int i0 = static_cast<int>(std::floor(fi));
    double wr = fi - i0;
    if (i0 < -1) { i0 = -1; wr = 0.0; }
    if (i0 >= g.n_r) { i0 = g.n_r - 1; wr = 1.0; }

    if (g.kind == DomainKind::UnitDisk && i0 < 0) {
        // Innermost cell: linear in r between the center and shell 0
        // (the center has no angular coordinate).
        const ExtReal vals[3] = {f[g.center_node()], value_at(0, j0), value_at(0, j1)};
        const double rr = r / g.shell_radius(0);
        const double w[3] = {1.0 - rr, rr * (1.0 - wt), rr * wt};
        return combine(vals, w, 3);
    }
    const ExtReal vals[4] = {value_at(i0, j0), value_at(i0, j1), value_at(i0 + 1, j0),
                             value_at(i0 + 1, j1)};
    const double w[4] = {(1.0 - wr) * (1.0 - wt), (1.0 - wr) * wt, wr * (1.0 - wt), wr * wt};
    return combine(vals, w, 4);
}

ExtReal interp_toric(const GridFunction& f, double px, double py) {
    const Grid2D& g = *f.grid();
    const double fi = (px - g.x_min) / g.h;
    const double fj = (py - g.x_min) / g.h;
    int i0 = static_cast<int>(std::floor(fi));
    int j0 = static_cast<int>(std::floor(fj));
    i0 = std::min(std::max(i0, 0), g.nx - 2);
    j0 = std::min(std::max(j0, 0), g.ny - 2);
    const double wx = fi - i0, wy = fj - j0;
    if (wx < -1e-9 || wy < -1e-9 || wx > 1.0 + 1e-9 || wy > 1.0 + 1e-9)
        throw PreconditionError("interpolate: point outside domain");
    const int ids[4] = {g.toric_node(i0, j0), g.toric_node(i0 + 1, j0), g.toric_node(i0, j0 + 1),
                        g.toric_node(i0 + 1, j0 + 1)};
    for (int id : ids)
        if (id < 0) throw PreconditionError("interpolate: point outside the grid hull");
    const ExtReal vals[4] = {f[ids[0]], f[ids[1]], f[ids[2]], f[ids[3]]};
    const double w[4] = {(1.0 - wx) * (1.0 - wy), wx * (1.0 - wy), (1.0 - wx) * wy, wx * wy};
    return combine(vals, w, 4);
}

}  // namespace

ExtReal interpolate(const GridFunction& f, double px, double py) {
    if (!f.grid()) throw PreconditionError("interpolate: empty field");
    if (f.grid()->kind == DomainKind::ToricBallLog) return interp_toric(f, px, py);
    return interp_polar(f, px, py);
}

}  // namespace pplab
