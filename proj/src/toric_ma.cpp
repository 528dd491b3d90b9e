#include "pplab/toric_ma.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace pplab {

namespace {

void require_toric(const GridPtr& grid, const char* who) {
    if (!grid || grid->kind != DomainKind::ToricBallLog)
        throw PreconditionError(std::string(who) + ": toric grid required");
}

/// One full-hop orthogonal direction pair at a node. The second difference
/// along direction i is alpha_i * (A_i - t) with A_i the arm average.
struct PairTerm {
    double alpha1, alpha2;
    int p1, m1, p2, m2;
};

struct SolvePlan {
    const Grid2D* g;
    ConeConstraint cone;
    std::vector<std::vector<PairTerm>> pairs;  // per interior node

    static SolvePlan make(const GridPtr& grid, const ConeConstraint& cone) {
        SolvePlan plan;
        plan.g = grid.get();
        plan.cone = cone;
        const Grid2D& g = *grid;
        plan.pairs.resize(g.n_interior());
        for (int k = 0; k < g.n_interior(); ++k) {
            for (const auto& [d1, d2] : kOrthogonalPairs) {
                const DirStencil& s1 = g.stencil(k, d1);
                const DirStencil& s2 = g.stencil(k, d2);
                if (!s1.full_pair || !s2.full_pair) continue;
                const auto e1 = kToricDirections[d1], e2 = kToricDirections[d2];
                PairTerm t;
                t.alpha1 = 2.0 / ((e1[0] * e1[0] + e1[1] * e1[1]) * g.h * g.h);
                t.alpha2 = 2.0 / ((e2[0] * e2[0] + e2[1] * e2[1]) * g.h * g.h);
                t.p1 = s1.plus.n0;
                t.m1 = s1.minus.n0;
                t.p2 = s2.plus.n0;
                t.m2 = s2.minus.n0;
                plan.pairs[k].push_back(t);
            }
        }
        return plan;
    }
};

/// Monge-Ampere densities: min over pairs of D2_1 * D2_2, negative second
/// differences clamped at zero.
void ma_density(const SolvePlan& plan, const std::vector<double>& v, std::vector<double>& out) {
    const Grid2D& g = *plan.g;
    out.resize(g.n_interior());
    for (int k = 0; k < g.n_interior(); ++k) {
        const double t = v[g.interior[k]];
        double best = std::numeric_limits<double>::infinity();
        for (const PairTerm& p : plan.pairs[k]) {
            const double d1 = std::max(0.0, p.alpha1 * (0.5 * (v[p.p1] + v[p.m1]) - t));
            const double d2 = std::max(0.0, p.alpha2 * (0.5 * (v[p.p2] + v[p.m2]) - t));
            best = std::min(best, d1 * d2);
        }
        out[k] = best;
    }
}

/// Root of min-over-pairs( D2_1(t) * D2_2(t) ) = dens with both factors kept
/// nonnegative, then the plain convexity/monotone projection.
double root_update(const SolvePlan& plan, const std::vector<double>& v, int k, double dens) {
    const Grid2D& g = *plan.g;
    double best = std::numeric_limits<double>::infinity();
    for (const PairTerm& p : plan.pairs[k]) {
        const double A1 = 0.5 * (v[p.p1] + v[p.m1]);
        const double A2 = 0.5 * (v[p.p2] + v[p.m2]);
        const double q = dens / (p.alpha1 * p.alpha2);
        const double disc = (A1 - A2) * (A1 - A2) + 4.0 * q;
        best = std::min(best, 0.5 * (A1 + A2 - std::sqrt(disc)));
    }
    best = std::min(best, cone_projection_at(plan.cone, g, v, k));
    return best;
}

}  // namespace

ToricField make_toric_field(const GridFunction& f, const ConeConstraint& cone) {
    ToricField tf;
    tf.f = f;
    auto [conv, mono] = cone_violation(cone, f);
    tf.convexity_violation = conv;
    tf.monotonicity_violation = mono;
    return tf;
}

MeasureDensity MeasureDensity::constant(double density, const GridPtr& grid) {
    if (density < 0.0) throw PreconditionError("MeasureDensity: negative density");
    MeasureDensity m;
    m.cell_mass.assign(grid->n_interior(), density * grid->h * grid->h);
    m.total_mass = density * grid->h * grid->h * grid->n_interior();
    return m;
}

MeasureDensity ma_operator(const GridFunction& f, const ConeConstraint& cone,
                           double feasibility_tol) {
    require_toric(f.grid(), "ma_operator");
    auto [conv, mono] = cone_violation(cone, f);
    const double scale = std::max(1.0, f.sup_abs_interior());
    if (conv > feasibility_tol * scale ||
        (cone.enforce_monotone && mono > feasibility_tol * scale))
        throw PreconditionError("ma_operator: field violates the cone constraint");

    const Grid2D& g = *f.grid();
    SolvePlan plan = SolvePlan::make(f.grid(), cone);
    std::vector<double> v(g.n_nodes, 0.0);
    for (int id = 0; id < g.n_nodes; ++id)
        if (g.cls[id] != NodeClass::Invalid) v[id] = f[id].value();
    std::vector<double> dens;
    ma_density(plan, v, dens);

    MeasureDensity m;
    m.cell_mass.resize(g.n_interior());
    const double area = g.h * g.h;
    for (int k = 0; k < g.n_interior(); ++k) {
        m.cell_mass[k] = dens[k] * area;
        m.total_mass += m.cell_mass[k];
    }
    return m;
}

GridFunction solve_dirichlet_bounded(const BoundaryTrace& phi, const MeasureDensity& mu,
                                     const GridPtr& grid, const ConeConstraint& cone,
                                     const MASolveOptions& opts) {
    require_toric(grid, "solve_dirichlet_bounded");
    if (phi.size() != grid->n_boundary_nodes())
        throw PreconditionError("solve_dirichlet_bounded: trace size mismatch");
    if (static_cast<int>(mu.cell_mass.size()) != grid->n_interior())
        throw PreconditionError("solve_dirichlet_bounded: measure size mismatch");
    if (mu.pluripolar_charge)
        throw PreconditionError("solve_dirichlet_bounded: measure charges a pluripolar set");
    for (const auto& v : phi.values)
        if (!v.finite())
            throw PreconditionError("solve_dirichlet_bounded: boundary data must be finite");

    const Grid2D& g = *grid;
    SolvePlan plan = SolvePlan::make(grid, cone);
    const double area = g.h * g.h;
    std::vector<double> dens(g.n_interior());
    double max_dens = 0.0;
    for (int k = 0; k < g.n_interior(); ++k) {
        if (mu.cell_mass[k] < 0.0)
            throw PreconditionError("solve_dirichlet_bounded: negative cell mass");
        dens[k] = mu.cell_mass[k] / area;
        max_dens = std::max(max_dens, dens[k]);
    }

    double data_min = std::numeric_limits<double>::infinity(), data_max = -data_min;
    for (const auto& v : phi.values) {
        data_min = std::min(data_min, v.value());
        data_max = std::max(data_max, v.value());
    }

    // Start field: warm start, cascade from the half-resolution solve, a
    // constant subsolution, or the constant supersolution.
    std::vector<double> cur(g.n_nodes, 0.0);
    if (opts.warm_start) {
        for (int id : g.interior) cur[id] = (*opts.warm_start)[id].value();
    } else if (opts.cascade && g.nx >= 48) {
        DomainSpec cspec = g.spec;
        cspec.nodes_radial = (g.nx + 1) / 2;
        GridPtr cgrid = build_grid(cspec);
        BoundaryTrace cphi(cgrid->n_boundary_nodes());
        for (int k = 0; k < cgrid->n_boundary_nodes(); ++k) {
            const int id = cgrid->boundary[k];
            double best = std::numeric_limits<double>::infinity(), val = 0.0;
            for (int kk = 0; kk < g.n_boundary_nodes(); ++kk) {
                const int fid = g.boundary[kk];
                const double d = std::hypot(g.xs[fid] - cgrid->xs[id], g.ys[fid] - cgrid->ys[id]);
                if (d < best) {
                    best = d;
                    val = phi.values[kk].value();
                }
            }
            cphi.values[k] = ExtReal(val);
        }
        MeasureDensity cmu;
        cmu.cell_mass.resize(cgrid->n_interior());
        const double carea = cgrid->h * cgrid->h;
        for (int k = 0; k < cgrid->n_interior(); ++k) {
            const int id = cgrid->interior[k];
            double d = 0.0;
            int cnt = 0;
            for (int kk = 0; kk < g.n_interior(); ++kk) {
                const int fid = g.interior[kk];
                if (std::abs(g.xs[fid] - cgrid->xs[id]) <= cgrid->h / 2 &&
                    std::abs(g.ys[fid] - cgrid->ys[id]) <= cgrid->h / 2) {
                    d += mu.cell_mass[kk] / area;
                    ++cnt;
                }
            }
            cmu.cell_mass[k] = (cnt > 0 ? d / cnt : 0.0) * carea;
        }
        MASolveOptions copts = opts;
        copts.warm_start = nullptr;
        copts.tol = std::max(opts.tol, 1e-11);
        GridFunction coarse = solve_dirichlet_bounded(cphi, cmu, cgrid, cone, copts);
        for (int id : g.interior) {
            double s;
            try {
                s = interpolate(coarse, g.xs[id], g.ys[id]).value();
            } catch (const PreconditionError&) {
                s = data_max;  // outside the coarse hull; fixed by local sweeps
            }
            cur[id] = s;
        }
    } else if (opts.init_below) {
        const double drop = g.spec.x_window * g.spec.x_window * std::sqrt(max_dens + 1.0);
        for (int id : g.interior) cur[id] = data_min - drop;
    } else {
        for (int id : g.interior) cur[id] = data_max;
    }
    for (int k = 0; k < g.n_boundary_nodes(); ++k) cur[g.boundary[k]] = phi.values[k].value();

    // Checkerboard successive overrelaxation with a fixed color order and a
    // fixed node order per color: deterministic, and fast enough where plain
    // damped Jacobi is not. Relaxation is damped multiplicatively whenever
    // the residual grows and ramped back toward the SOR target otherwise.
    std::vector<int> color[2];
    for (int k = 0; k < g.n_interior(); ++k) {
        const int id = g.interior[k];
        const int i = static_cast<int>(std::lround((g.xs[id] - g.x_min) / g.h));
        const int j = static_cast<int>(std::lround((g.ys[id] - g.x_min) / g.h));
        color[(i + j) & 1].push_back(k);
    }
    const double omega_target = 2.0 / (1.0 + std::sin(kPi / g.nx));
    const long max_iter = opts.max_iter_factor * g.nx;
    double omega = 1.0, prev_update = std::numeric_limits<double>::infinity();
    double update = prev_update;
    long it = 0;
    for (; it < max_iter; ++it) {
        update = 0.0;
        for (const auto& nodes : color) {
            for (int k : nodes) {
                const int id = g.interior[k];
                const double t = root_update(plan, cur, k, dens[k]);
                update = std::max(update, std::abs(t - cur[id]));
                cur[id] += omega * (t - cur[id]);
            }
        }
        if (update <= opts.tol) break;
        omega = update > prev_update ? std::max(0.25, omega * 0.5)
                                     : std::min(omega_target, std::max(1.0, omega * 1.25));
        prev_update = update;
        if (std::abs(cur[g.interior[g.n_interior() / 2]]) > 1e8)
            throw Error("solve_dirichlet_bounded: field diverged (measure too large for window?)");
    }
    if (update > opts.tol)
        throw ConvergenceError("solve_dirichlet_bounded: no convergence within max_iter", update);

    GridFunction f(grid);
    for (int id = 0; id < g.n_nodes; ++id)
        if (g.cls[id] != NodeClass::Invalid) f[id] = ExtReal(cur[id]);
    return f;
}

GridFunction laplace_extension(const BoundaryTrace& phi, const GridPtr& grid,
                               const MASolveOptions& opts) {
    require_toric(grid, "laplace_extension");
    const Grid2D& g = *grid;
    std::vector<double> cur(g.n_nodes, 0.0);
    double mean = 0.0;
    for (const auto& v : phi.values) mean += v.value();
    mean /= std::max(1, phi.size());
    for (int id : g.interior) cur[id] = mean;
    for (int k = 0; k < g.n_boundary_nodes(); ++k) cur[g.boundary[k]] = phi.values[k].value();

    std::vector<int> color[2];
    for (int k = 0; k < g.n_interior(); ++k) {
        const int id = g.interior[k];
        const int i = static_cast<int>(std::lround((g.xs[id] - g.x_min) / g.h));
        const int j = static_cast<int>(std::lround((g.ys[id] - g.x_min) / g.h));
        color[(i + j) & 1].push_back(k);
    }
    const double omega = 2.0 / (1.0 + std::sin(kPi / g.nx));
    const long max_iter = opts.max_iter_factor * g.nx;
    double update = std::numeric_limits<double>::infinity();
    long it = 0;
    for (; it < max_iter; ++it) {
        update = 0.0;
        for (const auto& nodes : color) {
            for (int k : nodes) {
                const int id = g.interior[k];
                const DirStencil& ex = g.stencil(k, 0);
                const DirStencil& ey = g.stencil(k, 1);
                const double t = 0.25 * (cur[ex.plus.n0] + cur[ex.minus.n0] + cur[ey.plus.n0] +
                                         cur[ey.minus.n0]);
                update = std::max(update, std::abs(t - cur[id]));
                cur[id] += omega * (t - cur[id]);
            }
        }
        if (update <= opts.tol) break;
    }
    if (update > opts.tol)
        throw ConvergenceError("laplace_extension: no convergence within max_iter", update);
    GridFunction f(grid);
    for (int id = 0; id < g.n_nodes; ++id)
        if (g.cls[id] != NodeClass::Invalid) f[id] = ExtReal(cur[id]);
    return f;
}

TruncationLadder lower_truncation_ladder(const MAProblem& prob, const std::vector<double>& levels,
                                         const GridPtr& grid, const ConeConstraint& cone,
                                         const MASolveOptions& opts) {
    require_toric(grid, "lower_truncation_ladder");
    if (!prob.minorant)
        throw PreconditionError("lower_truncation_ladder: minorant field required");
    for (size_t l = 1; l < levels.size(); ++l)
        if (!(levels[l] > levels[l - 1]))
            throw PreconditionError("lower_truncation_ladder: levels must increase");
    for (const auto& v : prob.phi.values)
        if (v.is_pos_inf())
            throw PreconditionError("lower_truncation_ladder: phi must be bounded above");

    TruncationLadder lad;
    lad.levels = levels;
    lad.direction = LadderDirection::Decreasing;
    const GridFunction& minor = *prob.minorant;
    MASolveOptions o = opts;
    GridFunction prev;
    for (double k : levels) {
        BoundaryTrace data(prob.phi.size());
        for (int j = 0; j < prob.phi.size(); ++j) {
            const ExtReal& v = prob.phi.values[j];
            data.values[j] = v.is_neg_inf() ? ExtReal(-k) : ExtReal(std::max(v.value(), -k));
        }
        if (!lad.rungs.empty()) o.warm_start = &prev;  // rungs decrease; warm from above
        GridFunction rung = solve_dirichlet_bounded(data, prob.mu, grid, cone, o);
        for (int id : grid->interior)
            if (rung[id].value() < minor[id].value() - 1e-8)
                throw InvariantError("lower_truncation_ladder: rung dipped below the minorant");
        prev = rung;
        lad.rungs.push_back(std::move(rung));
    }
    lad.limit_field = lad.rungs.back();
    lad.sup_residual.assign(levels.size(), 0.0);
    for (size_t l = 1; l < levels.size(); ++l)
        lad.sup_residual[l] = lad.rungs[l].sup_diff_interior(lad.rungs[l - 1]);
    lad.base_gap.assign(levels.size(), 0.0);
    for (size_t l = 0; l < levels.size(); ++l)
        lad.base_gap[l] = lad.rungs[l].sup_diff_interior(lad.limit_field);
    return lad;
}

UpperLadderResult upper_truncation_ladder(const MAProblem& prob, const std::vector<double>& levels,
                                          const GridPtr& grid, const ConeConstraint& cone,
                                          const MASolveOptions& opts, double identity_tol) {
    require_toric(grid, "upper_truncation_ladder");
    if (!prob.majorant_v)
        throw PreconditionError("upper_truncation_ladder: quasibounding majorant required");
    const GridFunction& v = *prob.majorant_v;
    for (int id = 0; id < grid->n_nodes; ++id)
        if (grid->cls[id] != NodeClass::Invalid && v[id].value() <= 0.0)
            throw PreconditionError("upper_truncation_ladder: majorant must be strictly positive");

    UpperLadderResult out;
    out.ladder.levels = levels;
    out.ladder.direction = LadderDirection::Increasing;
    MASolveOptions o = opts;
    GridFunction prev;
    for (double k : levels) {
        if (k <= 0.0) throw PreconditionError("upper_truncation_ladder: levels must be positive");
        double Mk = -std::numeric_limits<double>::infinity();
        for (int j = 0; j < prob.phi.size(); ++j) {
            if (!prob.phi.values[j].finite()) continue;
            const int id = grid->boundary[j];
            Mk = std::max(Mk, prob.phi.values[j].value() - v[id].value() / k);
        }
        out.data_caps.push_back(Mk);
        BoundaryTrace data(prob.phi.size());
        for (int j = 0; j < prob.phi.size(); ++j) {
            const ExtReal& p = prob.phi.values[j];
            data.values[j] = p.is_pos_inf() ? ExtReal(Mk) : ExtReal(std::min(p.value(), Mk));
        }
        if (!out.ladder.rungs.empty()) o.warm_start = &prev;
        GridFunction rung = solve_dirichlet_bounded(data, prob.mu, grid, cone, o);
        prev = rung;
        out.ladder.rungs.push_back(std::move(rung));
    }
    out.ladder.limit_field = out.ladder.rungs.back();

    // w_k = max(U - v/k, U_k) must coincide with U_k.
    const GridFunction& U = out.ladder.limit_field;
    for (size_t l = 0; l < levels.size(); ++l) {
        double sup = 0.0;
        for (int id : grid->interior) {
            const double wk = std::max(U[id].value() - v[id].value() / levels[l],
                                       out.ladder.rungs[l][id].value());
            sup = std::max(sup, std::abs(wk - out.ladder.rungs[l][id].value()));
        }
        out.w_identity_sup.push_back(sup);
        if (sup > identity_tol)
            throw InvariantError("upper_truncation_ladder: w_k = U_k identity violated");
    }
    out.ladder.sup_residual.assign(levels.size(), 0.0);
    for (size_t l = 1; l < levels.size(); ++l)
        out.ladder.sup_residual[l] =
            out.ladder.rungs[l].sup_diff_interior(out.ladder.rungs[l - 1]);
    out.ladder.base_gap.assign(levels.size(), 0.0);
    for (size_t l = 0; l < levels.size(); ++l)
        out.ladder.base_gap[l] = out.ladder.rungs[l].sup_diff_interior(out.ladder.limit_field);
    return out;
}

bool check_comparison(const GridFunction& u, const GridFunction& w, const ConeConstraint& cone,
                      double tol, double hypothesis_slack) {
    if (u.grid() != w.grid()) throw PreconditionError("check_comparison: grid mismatch");
    const Grid2D& g = *u.grid();
    for (int k = 0; k < g.n_boundary_nodes(); ++k) {
        const int id = g.boundary[k];
        if (std::abs(u[id].value() - w[id].value()) > 1e-10)
            throw PreconditionError("check_comparison: boundary traces differ");
    }
    MeasureDensity mu = ma_operator(u, cone);
    MeasureDensity mw = ma_operator(w, cone);
    for (int k = 0; k < g.n_interior(); ++k)
        if (mu.cell_mass[k] < mw.cell_mass[k] - hypothesis_slack)
            return true;  // hypothesis ma(u) >= ma(w) fails; implication is vacuous
    for (int id : g.interior)
        if (u[id].value() > w[id].value() + tol) return false;
    return true;
}

bool check_max_lemma(const GridFunction& u, const GridFunction& w, const MeasureDensity& mu,
                     const ConeConstraint& cone, double tau) {
    if (u.grid() != w.grid()) throw PreconditionError("check_max_lemma: grid mismatch");
    const Grid2D& g = *u.grid();
    const double area = g.h * g.h;
    MeasureDensity du = ma_operator(u, cone);
    MeasureDensity dw = ma_operator(w, cone);
    // tau compares densities (cell mass / cell area)
    for (int k = 0; k < g.n_interior(); ++k)
        if (du.cell_mass[k] < mu.cell_mass[k] - tau * area ||
            dw.cell_mass[k] < mu.cell_mass[k] - tau * area)
            throw PreconditionError("check_max_lemma: inputs do not dominate the measure");
    GridFunction m(u.grid());
    for (int id = 0; id < g.n_nodes; ++id)
        if (g.cls[id] != NodeClass::Invalid)
            m[id] = ExtReal(std::max(u[id].value(), w[id].value()));
    MeasureDensity dm = ma_operator(m, cone, 1e-5);
    for (int k = 0; k < g.n_interior(); ++k)
        if (dm.cell_mass[k] < mu.cell_mass[k] - tau * area) return false;
    return true;
}

GridFunction random_feasible_field(const GridPtr& grid, uint64_t seed, double min_density) {
    require_toric(grid, "random_feasible_field");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    // Quadratic base with determinant >= q^2, plus convex exponentials and an
    // affine tilt; determinants only grow under PSD addition.
    const double q = std::sqrt(std::max(min_density, 0.04)) + 0.4 * uni(rng);
    const double ax = -8.0 * uni(rng), ay = -8.0 * uni(rng);
    const double c1 = 0.5 * uni(rng), p1 = uni(rng), q1 = uni(rng);
    const double c2 = 0.5 * uni(rng), p2 = uni(rng), q2 = uni(rng);
    const double tx = uni(rng) - 0.5, ty = uni(rng) - 0.5;
    GridFunction f(grid);
    for (int id = 0; id < grid->n_nodes; ++id) {
        if (grid->cls[id] == NodeClass::Invalid) continue;
        const double x = grid->xs[id], y = grid->ys[id];
        double val = 0.5 * q * ((x - ax) * (x - ax) + (y - ay) * (y - ay));
        val += c1 * std::exp(p1 * x + q1 * y) + c2 * std::exp(p2 * x + q2 * y);
        val += tx * x + ty * y;
        f[id] = ExtReal(val);
    }
    return f;
}

double calibrate_max_lemma_constant(const GridPtr& grid, uint64_t seed, int n_pairs) {
    // Sampled smooth fields with true determinant >= 0.5 can dip below the
    // target density by their O(h^2) consistency error; the max of two such
    // fields inherits it. C reproduces the worst measured density deficit at
    // this resolution with a factor-2 margin, so tau(h) = C h^2.
    ConeConstraint cone{ConeKind::ConvexMonotoneToric, 2, 8, false};
    const double target = 0.5;
    const double area = grid->h * grid->h;
    double worst = 0.0;
    for (int p = 0; p < n_pairs; ++p) {
        for (uint64_t s : {seed + 2 * p, seed + 2 * p + 1}) {
            GridFunction u = random_feasible_field(grid, s, target);
            MeasureDensity du = ma_operator(u, cone);
            for (int k = 0; k < grid->n_interior(); ++k)
                worst = std::max(worst, target - du.cell_mass[k] / area);
        }
    }
    return std::max(2.0 * worst, 1e-6) / area;
}

RadialDensityResult compliant_density_from_radial(double alpha, const GridPtr& grid,
                                                  double mass_threshold,
                                                  const EnvelopeOptions& env_opts) {
    require_toric(grid, "compliant_density_from_radial");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw PreconditionError("compliant_density_from_radial: alpha must lie in (0,1)");
    GridFunction samples = sample_toric(grid, {"radial-alpha", {alpha}});
    ConeConstraint cone{ConeKind::ConvexMonotoneToric, 2, 8, true};
    ObstacleSpec obs;
    obs.obstacle = samples;
    obs.boundary = BoundaryTrace(grid->n_boundary_nodes());
    for (int k = 0; k < grid->n_boundary_nodes(); ++k)
        obs.boundary.values[k] = samples[grid->boundary[k]];
    EnvelopeResult env = upper_envelope(cone, obs, grid, env_opts);
    RadialDensityResult out;
    out.convexified = env.field;
    out.density = ma_operator(env.field, cone, 1e-5);
    out.mass_blowup = out.density.total_mass > mass_threshold;
    return out;
}

}  // namespace pplab
