#include "pplab/quadrature.hpp"

#include <cmath>

#include "pplab/poisson.hpp"

namespace pplab {

namespace {

/// Integral of a * log|2 sin(w/2)| + b over [w0, w1], 0 <= w0 < w1 (graded
/// quadrature; the integrand is log-singular at 0 only).
double log_cell_integral(double a, double b, double w0, double w1) {
    auto f = [&](double w) { return a * std::log(2.0 * std::abs(std::sin(0.5 * w))) + b; };
    if (w0 > 1e-14) {
        // regular panel
        double s = 0.0;
        const int n = 16;
        for (int q = 0; q < n; ++q) {
            const double x = w0 + (w1 - w0) * (q + 0.5) / n;
            s += f(x);
        }
        return s * (w1 - w0) / n;
    }
    // panel touching the singularity: substitute w = w1 * e^{-s}
    double s = 0.0;
    const int panels = 48;
    for (int p = 0; p < panels; ++p) {
        const double sa = p * 1.0, sb = (p + 1) * 1.0;
        const int n = 8;
        for (int q = 0; q < n; ++q) {
            const double sq = sa + (sb - sa) * (q + 0.5) / n;
            const double w = w1 * std::exp(-sq);
            s += f(w) * w * (sb - sa) / n;
        }
    }
    return s;
}

/// One circle of radius `radius` with n uniformly spaced nodes; values may
/// carry flags. Returns the arc-length integral.
double circle_quadrature(const std::vector<ExtReal>& vals, const std::vector<uint8_t>& singular,
                         double radius) {
    const int n = static_cast<int>(vals.size());
    const double h = kTwoPi / n;

    bool any_finite = false;
    for (const auto& v : vals)
        if (v.finite()) any_finite = true;
    if (!any_finite) throw PreconditionError("degenerate trace: all boundary nodes singular");

    std::vector<double> angles(n);
    for (int k = 0; k < n; ++k) angles[k] = k * h;

    double total = 0.0;
    std::vector<uint8_t> handled(n, 0);
    for (int k = 0; k < n; ++k) {
        const bool excluded = !vals[k].finite();
        if (!excluded) {
            total += h * vals[k].value();
            continue;
        }
        if (handled[k]) continue;
        // Cluster of excluded nodes around k.
        std::vector<int> cl{k};
        handled[k] = 1;
        for (int f = (k + 1) % n; f != k && !vals[f].finite() && !handled[f]; f = (f + 1) % n) {
            cl.push_back(f);
            handled[f] = 1;
        }
        for (int b = (k - 1 + n) % n; b != k && !vals[b].finite() && !handled[b];
             b = (b - 1 + n) % n) {
            cl.insert(cl.begin(), b);
            handled[b] = 1;
        }
        double cx = 0.0, cy = 0.0;
        for (int j : cl) {
            cx += std::cos(angles[j]);
            cy += std::sin(angles[j]);
        }
        const double theta_c = wrap_angle(std::atan2(cy, cx));
        LogModel m = fit_log_model(angles, vals, cl, theta_c);
        // The cluster's cells span [-half_span, half_span] around theta_c;
        // the slope term integrates to zero over the symmetric interval.
        const double half_span = (cl.size() * h) / 2.0;
        total += 2.0 * log_cell_integral(m.a, m.b, 0.0, half_span);
        (void)singular;
    }
    return total * radius;
}

double toric_trace_quadrature(const BoundaryTrace& trace, const Grid2D& g) {
    // Trapezoid along the ordered trace polyline; singular nodes excluded
    // with their segment measure assigned from the nearest finite value.
    const int n = trace.size();
    double total = 0.0;
    for (int k = 0; k < n; ++k) {
        double ds = 0.0;
        const int id = g.boundary[k];
        if (k > 0) {
            const int p = g.boundary[k - 1];
            ds += 0.5 * std::hypot(g.xs[id] - g.xs[p], g.ys[id] - g.ys[p]);
        }
        if (k + 1 < n) {
            const int q = g.boundary[k + 1];
            ds += 0.5 * std::hypot(g.xs[id] - g.xs[q], g.ys[id] - g.ys[q]);
        }
        double v;
        if (trace.values[k].finite()) {
            v = trace.values[k].value();
        } else {
            int j = -1;
            for (int step = 1; step < n; ++step) {
                const int cand = (k + step) % n;
                if (trace.values[cand].finite()) { j = cand; break; }
                const int cand2 = (k - step + n) % n;
                if (trace.values[cand2].finite()) { j = cand2; break; }
            }
            if (j < 0) throw PreconditionError("degenerate trace: all boundary nodes singular");
            v = trace.values[j].value();
        }
        total += ds * v;
    }
    return total;
}

}  // namespace

double boundary_quadrature(const BoundaryTrace& trace, const GridPtr& grid) {
    if (trace.size() != grid->n_boundary_nodes())
        throw PreconditionError("boundary_quadrature: trace size does not match grid");
    switch (grid->kind) {
        case DomainKind::UnitDisk: {
            return circle_quadrature(trace.values, trace.singular, 1.0);
        }
        case DomainKind::Annulus: {
            std::vector<ExtReal> outer(trace.values.begin(), trace.values.begin() + grid->n_b);
            std::vector<ExtReal> inner(trace.values.begin() + grid->n_b, trace.values.end());
            std::vector<uint8_t> so(trace.singular.begin(), trace.singular.begin() + grid->n_b);
            std::vector<uint8_t> si(trace.singular.begin() + grid->n_b, trace.singular.end());
            return circle_quadrature(outer, so, 1.0) + circle_quadrature(inner, si, grid->r_in);
        }
        case DomainKind::ToricBallLog:
            return toric_trace_quadrature(trace, *grid);
    }
    throw PreconditionError("boundary_quadrature: unknown grid kind");
}

}  // namespace pplab
