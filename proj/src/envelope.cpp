#include "pplab/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pplab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Precomputed polar stencil for one shell node.
struct PolarTerm {
    int outer, inner, left, right;
    double wp, wm, wt, wsum;
};

struct IterationPlan {
    const Grid2D* g = nullptr;
    ConeConstraint cone;
    std::vector<PolarTerm> polar;        // per shell node (interior order, skipping center)
    std::vector<int> ring0;              // first-ring node ids (disk center constraint)
    std::vector<double> obstacle;        // per node id, +inf when unconstrained
    std::vector<std::pair<int, int>> neumann;  // (boundary node, inward node)
};

IterationPlan make_plan(const ConeConstraint& cone, const ObstacleSpec& obs, const Grid2D& g) {
    IterationPlan plan;
    plan.g = &g;
    plan.cone = cone;

    plan.obstacle.assign(g.n_nodes, kInf);
    if (obs.obstacle.grid()) {
        for (int id = 0; id < g.n_nodes; ++id) {
            const ExtReal& o = obs.obstacle[id];
            if (o.finite())
                plan.obstacle[id] = o.value();
            else if (o.is_neg_inf())
                throw PreconditionError("upper_envelope: obstacle must not be -inf");
        }
    }

    if (g.kind != DomainKind::ToricBallLog) {
        if (cone.kind != ConeKind::Subharmonic2D)
            throw PreconditionError("envelope: toric cone on a polar grid");
        const double kappa = 2.0 * (1.0 - std::cos(g.dtheta));
        plan.polar.reserve(static_cast<size_t>(g.n_r) * g.n_theta);
        for (int i = 0; i < g.n_r; ++i) {
            const double r = g.shell_radius(i);
            const double wp = 1.0 / (g.dr * g.dr) + 1.0 / (2.0 * r * g.dr);
            const double wm = 1.0 / (g.dr * g.dr) - 1.0 / (2.0 * r * g.dr);
            const double wt = 1.0 / (r * r * kappa);
            for (int j = 0; j < g.n_theta; ++j) {
                PolarTerm t;
                t.outer = i + 1 < g.n_r ? g.shell_node(i + 1, j)
                                        : g.boundary_node(0, g.trace_index_of_column(j));
                if (i > 0)
                    t.inner = g.shell_node(i - 1, j);
                else
                    t.inner = g.kind == DomainKind::UnitDisk
                                  ? g.center_node()
                                  : g.boundary_node(1, g.trace_index_of_column(j));
                t.left = g.shell_node(i, j - 1);
                t.right = g.shell_node(i, j + 1);
                t.wp = wp;
                t.wm = wm;
                t.wt = wt;
                t.wsum = wp + wm + 2.0 * wt;
                plan.polar.push_back(t);
            }
        }
        if (g.has_center)
            for (int j = 0; j < g.n_theta; ++j) plan.ring0.push_back(g.shell_node(0, j));
    }

    // Neumann faces (toric asymptotic cuts).
    if (g.kind == DomainKind::ToricBallLog && !obs.boundary.neumann.empty()) {
        for (int k = 0; k < g.n_boundary_nodes(); ++k) {
            if (!obs.boundary.neumann[k]) continue;
            const int id = g.boundary[k];
            const int i = static_cast<int>(std::lround((g.xs[id] - g.x_min) / g.h));
            const int j = static_cast<int>(std::lround((g.ys[id] - g.x_min) / g.h));
            const uint8_t face = g.bface[k];
            int ii = i, jj = j;
            if (face == 1 || face == 3) ii = i + 1;
            if (face == 2 || face == 3) jj = j + 1;
            const int inward = g.toric_node(ii, jj);
            if (inward >= 0) plan.neumann.emplace_back(id, inward);
        }
    }
    return plan;
}

double projection(const IterationPlan& plan, const std::vector<double>& v, int interior_idx) {
    const Grid2D& g = *plan.g;
    if (g.kind != DomainKind::ToricBallLog) {
        int k = interior_idx;
        if (g.has_center) {
            if (k == 0) {
                double s = 0.0;
                for (int id : plan.ring0) s += v[id];
                return s / plan.ring0.size();
            }
            --k;
        }
        const PolarTerm& t = plan.polar[k];
        return (t.wp * v[t.outer] + t.wm * v[t.inner] + t.wt * (v[t.left] + v[t.right])) / t.wsum;
    }
    double best = kInf;
    for (int d = 0; d < plan.cone.directions; ++d) {
        const DirStencil& ds = g.stencil(interior_idx, d);
        const double vp = ds.plus.w0 * v[ds.plus.n0] + ds.plus.w1 * v[ds.plus.n1];
        const double vm = ds.minus.w0 * v[ds.minus.n0] + ds.minus.w1 * v[ds.minus.n1];
        const double avg = (ds.minus.s * vp + ds.plus.s * vm) / (ds.plus.s + ds.minus.s);
        best = std::min(best, avg);
    }
    if (plan.cone.enforce_monotone) {
        const DirStencil& east = g.stencil(interior_idx, 0);
        const DirStencil& north = g.stencil(interior_idx, 1);
        best = std::min(best, east.plus.w0 * v[east.plus.n0] + east.plus.w1 * v[east.plus.n1]);
        best = std::min(best, north.plus.w0 * v[north.plus.n0] + north.plus.w1 * v[north.plus.n1]);
    }
    return best;
}

}  // namespace

double cone_projection_at(const ConeConstraint& cone, const Grid2D& grid,
                          const std::vector<double>& values, int interior_idx) {
    ObstacleSpec dummy;
    dummy.boundary = BoundaryTrace(grid.n_boundary_nodes());
    static thread_local const Grid2D* cached_grid = nullptr;
    static thread_local ConeConstraint cached_cone;
    static thread_local IterationPlan cached;
    if (cached_grid != &grid || cached_cone.kind != cone.kind ||
        cached_cone.enforce_monotone != cone.enforce_monotone ||
        cached_cone.directions != cone.directions) {
        cached = make_plan(cone, dummy, grid);
        cached_grid = &grid;
        cached_cone = cone;
    }
    return projection(cached, values, interior_idx);
}

std::pair<double, double> cone_violation(const ConeConstraint& cone, const GridFunction& f) {
    const Grid2D& g = *f.grid();
    std::vector<double> v(g.n_nodes, 0.0);
    for (int id = 0; id < g.n_nodes; ++id)
        if (g.cls[id] != NodeClass::Invalid) v[id] = f[id].value();
    double conv = 0.0, mono = 0.0;
    ConeConstraint pure = cone;
    pure.enforce_monotone = false;
    for (int k = 0; k < g.n_interior(); ++k) {
        const int id = g.interior[k];
        conv = std::max(conv, v[id] - cone_projection_at(pure, g, v, k));
        if (cone.kind == ConeKind::ConvexMonotoneToric && cone.enforce_monotone) {
            const DirStencil& east = g.stencil(k, 0);
            const DirStencil& north = g.stencil(k, 1);
            const double ve = east.plus.w0 * v[east.plus.n0] + east.plus.w1 * v[east.plus.n1];
            const double vn = north.plus.w0 * v[north.plus.n0] + north.plus.w1 * v[north.plus.n1];
            mono = std::max(mono, std::max(v[id] - ve, v[id] - vn));
        }
    }
    return {conv, mono};
}

EnvelopeResult upper_envelope(const ConeConstraint& cone, const ObstacleSpec& obs,
                              const GridPtr& grid, const EnvelopeOptions& opts) {
    const Grid2D& g = *grid;
    if (obs.boundary.size() != g.n_boundary_nodes())
        throw PreconditionError("upper_envelope: boundary trace size mismatch");
    IterationPlan plan = make_plan(cone, obs, g);

    bool any_finite_obstacle = false;
    for (int id : g.interior) any_finite_obstacle |= plan.obstacle[id] < kInf;

    // Pinned boundary values (penalty included).
    std::vector<double> pinned(g.n_boundary_nodes());
    for (int k = 0; k < g.n_boundary_nodes(); ++k) {
        if (!obs.boundary.values[k].finite())
            throw PreconditionError("upper_envelope: boundary data must be finite");
        double p = obs.boundary.values[k].value();
        if (!obs.penalty_mask.empty() && obs.penalty_mask[k])
            p = std::min(p, -obs.penalty_level);
        pinned[k] = p;
    }

    // Start field: warm start if given, else the obstacle (or the sup of the
    // pinned data where the obstacle is unconstrained). The fixed point with
    // pinned boundary is unique, so the start only affects iteration counts.
    std::vector<double> cur(g.n_nodes, 0.0), nxt;
    double data_sup = -kInf;
    for (int k = 0; k < g.n_boundary_nodes(); ++k) data_sup = std::max(data_sup, pinned[k]);
    for (int id : g.interior) {
        double s;
        if (opts.warm_start) {
            s = (*opts.warm_start)[id].value();
            if (plan.obstacle[id] < kInf) s = std::min(s, plan.obstacle[id]);
        } else {
            s = plan.obstacle[id] < kInf ? plan.obstacle[id] : data_sup;
        }
        cur[id] = s;
    }
    for (int k = 0; k < g.n_boundary_nodes(); ++k) cur[g.boundary[k]] = pinned[k];
    for (const auto& [bid, inward] : plan.neumann) cur[bid] = cur[inward];
    nxt = cur;

    EnvelopeResult res;
    const int axis = g.kind == DomainKind::ToricBallLog ? g.nx : std::max(g.n_r, g.n_theta);
    const long max_iter = static_cast<long>(opts.max_iter_factor) * axis;
    double update = kInf;
    long it = 0;
    for (; it < max_iter; ++it) {
        update = 0.0;
        for (int k = 0; k < g.n_interior(); ++k) {
            const int id = g.interior[k];
            double val = projection(plan, cur, k);
            if (plan.obstacle[id] < kInf) val = std::min(val, plan.obstacle[id]);
            update = std::max(update, std::abs(val - cur[id]));
            nxt[id] = val;
        }
        for (const auto& [bid, inward] : plan.neumann) {
            update = std::max(update, std::abs(nxt[inward] - cur[bid]));
            nxt[bid] = nxt[inward];
        }
        std::swap(cur, nxt);
        if (it % opts.log_stride == 0) res.run_log.emplace_back(static_cast<int>(it), update);
        if (update <= opts.tol) break;
    }
    if (update > opts.tol)
        throw ConvergenceError("upper_envelope: no convergence within max_iter", update);
    res.run_log.emplace_back(static_cast<int>(it), update);
    res.iterations = static_cast<int>(std::min(it + 1, max_iter));
    res.final_update = update;

    res.field = GridFunction(grid);
    for (int id = 0; id < g.n_nodes; ++id)
        if (g.cls[id] != NodeClass::Invalid) res.field[id] = ExtReal(cur[id]);
    res.active_mask.assign(g.n_interior(), 0);
    if (any_finite_obstacle) {
        for (int k = 0; k < g.n_interior(); ++k) {
            const int id = g.interior[k];
            if (plan.obstacle[id] < kInf &&
                std::abs(cur[id] - plan.obstacle[id]) <=
                    1e-10 * (1.0 + std::abs(plan.obstacle[id])))
                res.active_mask[k] = 1;
        }
    }
    return res;
}

EnvelopeResult relative_extremal(const std::vector<uint8_t>& e_mask, const GridPtr& grid,
                                 const ConeConstraint& cone, const EnvelopeOptions& opts) {
    GridFunction zero(grid, ExtReal(0.0));
    EnvelopeResult res = penalized_singularity_envelope(e_mask, 1.0, cone, zero, grid, opts);
    for (int id : grid->interior) {
        const double v = res.field[id].value();
        if (v < -1.0 - 1e-9 || v > 1e-9)
            throw InvariantError("relative_extremal: output escaped [-1, 0]");
    }
    return res;
}

double delta_bpluripolar(const GridPtr& grid, double floor_value) {
    return std::max(4.0 / grid->n_boundary_nodes(), floor_value);
}

namespace {

/// Interior core: half-scale margin from the boundary. The discrete extremal
/// field of any pinned boundary node carries an O(1) dip of width ~h in the
/// adjacent layer; the continuum regularization (*) removes it, and on the
/// grid the core sup is the statistic that scales with the set's measure.
bool in_core(const Grid2D& g, int id) {
    if (g.kind == DomainKind::ToricBallLog) {
        const double X = g.spec.x_window;
        const double x = g.xs[id], y = g.ys[id];
        return x >= -0.75 * X && y >= -0.75 * X &&
               std::exp(2.0 * x) + std::exp(2.0 * y) <= 0.5;
    }
    const double r = std::hypot(g.xs[id], g.ys[id]);
    if (g.kind == DomainKind::UnitDisk) return r <= 0.5;
    const double w = 1.0 - g.r_in;
    return r >= g.r_in + 0.25 * w && r <= 1.0 - 0.25 * w;
}

}  // namespace

std::pair<bool, double> is_bpluripolar(const std::vector<uint8_t>& e_mask, const GridPtr& grid,
                                       const ConeConstraint& cone, const EnvelopeOptions& opts) {
    bool any = false;
    for (auto m : e_mask) any |= m != 0;
    if (!any) return {true, 0.0};

    EnvelopeResult rex = relative_extremal(e_mask, grid, cone, opts);
    double depth = 0.0;
    for (int id : grid->interior)
        if (in_core(*grid, id)) depth = std::max(depth, std::abs(rex.field[id].value()));

    bool pure_face = grid->kind == DomainKind::ToricBallLog;
    bool fx = false, fy = false;
    if (grid->kind == DomainKind::ToricBallLog) {
        for (int k = 0; k < grid->n_boundary_nodes(); ++k) {
            if (!e_mask[k]) continue;
            if (grid->bface[k] == 0) pure_face = false;
            if (grid->bface[k] == 1 || grid->bface[k] == 3) fx = true;
            if (grid->bface[k] == 2 || grid->bface[k] == 3) fy = true;
        }
    } else {
        pure_face = false;
    }

    if (!pure_face) return {depth < delta_bpluripolar(grid), depth};

    // Window-doubling trend for asymptotic faces: the face stands in for a
    // set at log-coordinate -infinity, so its extremal depth at a fixed
    // reference point must shrink as the window grows.
    DomainSpec half = grid->spec;
    half.x_window = grid->spec.x_window / 2.0;
    GridPtr hg = build_grid(half);
    std::vector<uint8_t> hmask(hg->n_boundary_nodes(), 0);
    for (int k = 0; k < hg->n_boundary_nodes(); ++k) {
        if (fx && (hg->bface[k] == 1 || hg->bface[k] == 3)) hmask[k] = 1;
        if (fy && (hg->bface[k] == 2 || hg->bface[k] == 3)) hmask[k] = 1;
    }
    EnvelopeResult hrex = relative_extremal(hmask, hg, cone, opts);
    const double q = grid->spec.x_window / 4.0;
    const double d_full = std::abs(interpolate(rex.field, -q, -q).value());
    const double d_half = std::abs(interpolate(hrex.field, -q, -q).value());
    const bool polar = d_full < delta_bpluripolar(grid) || d_full <= 0.75 * d_half;
    return {polar, depth};
}

EnvelopeResult penalized_singularity_envelope(const std::vector<uint8_t>& e_mask, double L,
                                              const ConeConstraint& cone,
                                              const GridFunction& upper, const GridPtr& grid,
                                              const EnvelopeOptions& opts) {
    bool any = false;
    for (auto m : e_mask) any |= m != 0;
    if (any && L <= 0.0)
        throw PreconditionError("penalized_singularity_envelope: penalty level must be positive");
    ObstacleSpec obs;
    obs.obstacle = upper;
    obs.boundary = BoundaryTrace(grid->n_boundary_nodes());
    for (int k = 0; k < grid->n_boundary_nodes(); ++k)
        obs.boundary.values[k] = upper[grid->boundary[k]];
    obs.penalty_mask = e_mask;
    obs.penalty_level = L;

    // Warm start from the scaled harmonic-measure extension when the upper
    // obstacle is identically zero on a polar grid (closed form available).
    EnvelopeOptions o = opts;
    GridFunction warm;
    bool zero_upper = true;
    for (int id = 0; id < grid->n_nodes; ++id)
        if (grid->cls[id] != NodeClass::Invalid &&
            (!upper[id].finite() || upper[id].value() != 0.0))
            zero_upper = false;
    if (!o.warm_start && zero_upper && grid->kind != DomainKind::ToricBallLog) {
        bool closed_form_ok = true;
        if (grid->kind == DomainKind::Annulus && any) {
            bool outer_all = true, inner_all = true, outer_any = false, inner_any = false;
            for (int k = 0; k < grid->n_boundary_nodes(); ++k) {
                const bool m = e_mask[k] != 0;
                if (grid->bcircle[k] == 0) { outer_all &= m; outer_any |= m; }
                else { inner_all &= m; inner_any |= m; }
            }
            closed_form_ok = (!outer_any || outer_all) && (!inner_any || inner_all);
        }
        if (!any) {
            warm = GridFunction(grid, ExtReal(0.0));
            o.warm_start = &warm;
        } else if (closed_form_ok) {
            warm = harmonic_measure_field(e_mask, grid);
            for (int id = 0; id < grid->n_nodes; ++id)
                if (grid->cls[id] != NodeClass::Invalid) warm[id] = ExtReal(-L * warm[id].value());
            o.warm_start = &warm;
        }
    }
    return upper_envelope(cone, obs, grid, o);
}

}  // namespace pplab
