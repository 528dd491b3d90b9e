#include <cmath>

#include "doctest.h"
#include "pplab/toric_ma.hpp"

using namespace pplab;

namespace {

GridPtr toric(int n, double window = 8.0) {
    DomainSpec s;
    s.kind = DomainKind::ToricBallLog;
    s.nodes_radial = n;
    s.x_window = window;
    return build_grid(s);
}

ConeConstraint convex_cone() { return {ConeKind::ConvexMonotoneToric, 2, 8, false}; }
ConeConstraint monotone_cone() { return {ConeKind::ConvexMonotoneToric, 2, 8, true}; }

double exp_density(double x, double y) { return 16.0 * std::exp(2.0 * x) * std::exp(2.0 * y); }

}  // namespace

TEST_CASE("ma_operator: quadratic has density one, affine is degenerate") {
    auto g = toric(32);
    GridFunction quad = sample_toric(g, {"quadratic", {}});
    MeasureDensity m = ma_operator(quad, convex_cone());
    const double area = g->h * g->h;
    for (int k = 0; k < g->n_interior(); ++k)
        CHECK(m.cell_mass[k] / area == doctest::Approx(1.0).epsilon(1e-10));

    GridFunction aff = sample_toric(g, {"affine-x", {}});
    MeasureDensity ma = ma_operator(aff, monotone_cone());
    for (int k = 0; k < g->n_interior(); ++k) CHECK(std::abs(ma.cell_mass[k]) < 1e-12);
}

TEST_CASE("ma_operator: exponential calibration density, O(h^2) consistent") {
    // oracle: hand-computed Hessian determinant det = 16 e^{2x} e^{2y}
    double errs[2];
    int idx = 0;
    for (int n : {33, 65}) {
        auto g = toric(n);
        GridFunction f = sample_toric(g, {"exp-calibration", {}});
        MeasureDensity m = ma_operator(f, monotone_cone());
        const double area = g->h * g->h;
        double err = 0.0;
        for (int k = 0; k < g->n_interior(); ++k) {
            const int id = g->interior[k];
            err = std::max(err,
                           std::abs(m.cell_mass[k] / area - exp_density(g->xs[id], g->ys[id])));
        }
        errs[idx++] = err;
    }
    CHECK(errs[1] < errs[0] / 2.5);  // ~ h^2
}

TEST_CASE("ma_operator rejects cone-infeasible fields") {
    auto g = toric(24);
    GridFunction bad(g);
    for (int id = 0; id < g->n_nodes; ++id)
        if (g->cls[id] != NodeClass::Invalid)
            bad[id] = ExtReal(-0.5 * (g->xs[id] * g->xs[id] + g->ys[id] * g->ys[id]));
    CHECK_THROWS_AS(ma_operator(bad, convex_cone()), PreconditionError);
}

TEST_CASE("solve: homogeneous problem with affine data is exact") {
    auto g = toric(32);
    BoundaryTrace phi = make_trace(g, {"affine-x", {}});
    MASolveOptions o;
    o.tol = 1e-13;
    GridFunction f = solve_dirichlet_bounded(phi, MeasureDensity::constant(0.0, g), g,
                                             monotone_cone(), o);
    double err = 0.0;
    for (int id : g->interior) err = std::max(err, std::abs(f[id].value() - g->xs[id]));
    CHECK(err < 1e-8);
}

TEST_CASE("solve: quadratic manufactured solution with unit density") {
    auto g = toric(48);
    BoundaryTrace phi = make_trace(g, {"quadratic", {}});
    MASolveOptions o;
    o.tol = 1e-12;
    GridFunction f =
        solve_dirichlet_bounded(phi, MeasureDensity::constant(1.0, g), g, convex_cone(), o);
    double err = 0.0;
    for (int id : g->interior)
        err = std::max(err, std::abs(f[id].value() -
                                     0.5 * (g->xs[id] * g->xs[id] + g->ys[id] * g->ys[id])));
    CHECK(err < 2e-3);
}

TEST_CASE("solve: exponential manufactured solution recovers the field") {
    auto g = toric(48);
    GridFunction exact = sample_toric(g, {"exp-calibration", {}});
    MeasureDensity mu = MeasureDensity::constant(0.0, g);
    const double area = g->h * g->h;
    for (int k = 0; k < g->n_interior(); ++k) {
        const int id = g->interior[k];
        mu.cell_mass[k] = exp_density(g->xs[id], g->ys[id]) * area;
    }
    BoundaryTrace phi = make_trace(g, {"exp-calibration", {}});
    MASolveOptions o;
    o.tol = 1e-12;
    GridFunction f = solve_dirichlet_bounded(phi, mu, g, monotone_cone(), o);
    CHECK(f.sup_diff_interior(exact) < 5e-3);
}

TEST_CASE("solve: uniqueness proxy, two initializations agree") {
    auto g = toric(32);
    BoundaryTrace phi = make_trace(g, {"quadratic", {}});
    MeasureDensity mu = MeasureDensity::constant(0.5, g);
    MASolveOptions above;
    above.tol = 1e-13;
    above.cascade = false;
    MASolveOptions below = above;
    below.init_below = true;
    GridFunction fa = solve_dirichlet_bounded(phi, mu, g, convex_cone(), above);
    GridFunction fb = solve_dirichlet_bounded(phi, mu, g, convex_cone(), below);
    CHECK(fa.sup_diff_interior(fb) < 1e-7);
}

TEST_CASE("discrete comparison: ordered measures give ordered solutions") {
    auto g = toric(32);
    BoundaryTrace phi = make_trace(g, {"quadratic", {}});
    MASolveOptions o;
    o.tol = 1e-12;
    GridFunction u =
        solve_dirichlet_bounded(phi, MeasureDensity::constant(1.0, g), g, convex_cone(), o);
    GridFunction w =
        solve_dirichlet_bounded(phi, MeasureDensity::constant(0.0, g), g, convex_cone(), o);
    for (int id : g->interior) CHECK(u[id].value() <= w[id].value() + 1e-8);
    CHECK(check_comparison(u, w, convex_cone()));
    CHECK(check_comparison(u, u, convex_cone()));
}

TEST_CASE("discrete comparison: seeded random ordered pairs") {
    auto g = toric(24);
    MASolveOptions o;
    o.tol = 1e-12;
    o.cascade = false;
    for (uint64_t seed = 0; seed < 8; ++seed) {
        GridFunction boundary_field = random_feasible_field(g, 1000 + seed);
        BoundaryTrace phi(g->n_boundary_nodes());
        for (int k = 0; k < g->n_boundary_nodes(); ++k)
            phi.values[k] = boundary_field[g->boundary[k]];
        const double clo = 0.2 + 0.05 * seed, chi = clo + 0.3;
        GridFunction u =
            solve_dirichlet_bounded(phi, MeasureDensity::constant(chi, g), g, convex_cone(), o);
        GridFunction w =
            solve_dirichlet_bounded(phi, MeasureDensity::constant(clo, g), g, convex_cone(), o);
        CHECK(check_comparison(u, w, convex_cone()));
    }
}

TEST_CASE("max lemma: trivial and affine-shift cases") {
    auto g = toric(32);
    const double C = calibrate_max_lemma_constant(g, 42, 8);
    const double tau = C * g->h * g->h;
    GridFunction u = sample_toric(g, {"quadratic", {}});
    CHECK(check_max_lemma(u, u, MeasureDensity::constant(1.0, g), convex_cone(), tau));

    GridFunction w(g);
    for (int id = 0; id < g->n_nodes; ++id)
        if (g->cls[id] != NodeClass::Invalid)
            w[id] = ExtReal(u[id].value() + 0.3 * g->xs[id] - 0.1 * g->ys[id] + 0.2);
    CHECK(check_max_lemma(u, w, MeasureDensity::constant(1.0, g), convex_cone(), tau));
}

TEST_CASE("max lemma: seeded random feasible pairs with mu = 0.5") {
    auto g = toric(24);
    const double C = calibrate_max_lemma_constant(g, 42, 8);
    const double tau = C * g->h * g->h;
    MeasureDensity mu = MeasureDensity::constant(0.5, g);
    for (uint64_t seed = 0; seed < 12; ++seed) {
        GridFunction u = random_feasible_field(g, 500 + 2 * seed, 0.5);
        GridFunction w = random_feasible_field(g, 501 + 2 * seed, 0.5);
        CHECK(check_max_lemma(u, w, mu, convex_cone(), tau));
    }
}

TEST_CASE("lower ladder: bounded data is constant past its bound") {
    auto g = toric(24, 4.0);
    MAProblem prob;
    prob.phi = make_trace(g, {"affine-x", {}});  // bounded on the window
    prob.mu = MeasureDensity::constant(0.0, g);
    prob.minorant = sample_toric(g, {"affine-x", {}});
    MASolveOptions o;
    o.tol = 1e-12;
    o.cascade = false;
    auto lad = lower_truncation_ladder(prob, {1, 2, 4, 8}, g, monotone_cone(), o);
    CHECK(lad.direction == LadderDirection::Decreasing);
    // constant once k exceeds sup |phi| = 4
    CHECK(lad.rungs[3].sup_diff_interior(lad.rungs[2]) < 1e-9);
    // node-wise decreasing
    for (size_t l = 1; l < lad.rungs.size(); ++l)
        for (int id : g->interior)
            CHECK(lad.rungs[l][id].value() <= lad.rungs[l - 1][id].value() + 1e-10);
}

TEST_CASE("lower ladder: affine-x data converges to x") {
    auto g = toric(32);
    MAProblem prob;
    prob.phi = make_trace(g, {"affine-x", {}});
    prob.mu = MeasureDensity::constant(0.0, g);
    prob.minorant = sample_toric(g, {"affine-x", {}});
    MASolveOptions o;
    o.tol = 1e-13;
    o.cascade = false;
    auto lad = lower_truncation_ladder(prob, {2, 4, 8, 9}, g, monotone_cone(), o);
    // for k >= x_window the clamp is inactive and the rung equals x
    double err = 0.0;
    for (int id : g->interior)
        err = std::max(err, std::abs(lad.rungs.back()[id].value() - g->xs[id]));
    CHECK(err < 1e-6);
}

TEST_CASE("lower ladder: neglog-alpha data, monotone with minorant") {
    auto g = toric(32);
    MAProblem prob;
    prob.phi = make_trace(g, {"neglog-alpha", {0.25}});
    prob.mu = MeasureDensity::constant(0.0, g);
    prob.minorant = sample_toric(g, {"neglog-alpha", {0.25}});  // the profile itself is feasible
    MASolveOptions o;
    o.tol = 1e-12;
    o.cascade = false;
    auto lad = lower_truncation_ladder(prob, {0.5, 1.0, 1.5, 2.0}, g, monotone_cone(), o);
    for (size_t l = 1; l < lad.rungs.size(); ++l)
        for (int id : g->interior)
            CHECK(lad.rungs[l][id].value() <= lad.rungs[l - 1][id].value() + 1e-10);
    for (int id : g->interior)
        CHECK(lad.rungs.back()[id].value() >= prob.minorant.value()[id].value() - 1e-8);
}

TEST_CASE("upper ladder: w_k identity holds rung-wise") {
    auto g = toric(32);
    MAProblem prob;
    prob.phi = make_trace(g, {"neglog-alpha", {0.25}});
    prob.mu = MeasureDensity::constant(0.0, g);
    GridFunction v(g);
    for (int id = 0; id < g->n_nodes; ++id)
        if (g->cls[id] != NodeClass::Invalid) v[id] = ExtReal(1.0 - g->xs[id]);  // -x + 1 > 0
    prob.majorant_v = v;
    MASolveOptions o;
    o.tol = 1e-12;
    o.cascade = false;
    auto res = upper_truncation_ladder(prob, {1, 2, 4, 8}, g, monotone_cone(), o);
    for (double sup : res.w_identity_sup) CHECK(sup <= 1e-6);
    for (size_t l = 1; l < res.ladder.rungs.size(); ++l)
        for (int id : g->interior)
            CHECK(res.ladder.rungs[l][id].value() >=
                  res.ladder.rungs[l - 1][id].value() - 1e-10);
}

TEST_CASE("upper ladder: +inf corner node keeps the limit bounded off the corner") {
    auto g = toric(24, 4.0);
    MAProblem prob;
    prob.phi = make_trace(g, {"affine-y", {}});
    // plant a +inf at the window corner orbit node
    for (int k = 0; k < g->n_boundary_nodes(); ++k)
        if (g->bface[k] == 3) {
            prob.phi.values[k] = ExtReal::pos_inf();
            prob.phi.singular[k] = 1;
        }
    prob.mu = MeasureDensity::constant(0.0, g);
    GridFunction v(g);
    for (int id = 0; id < g->n_nodes; ++id)
        if (g->cls[id] != NodeClass::Invalid)
            v[id] = ExtReal(2.0 - g->xs[id] - g->ys[id]);
    prob.majorant_v = v;
    MASolveOptions o;
    o.tol = 1e-11;
    o.cascade = false;
    auto res = upper_truncation_ladder(prob, {1, 2, 4}, g, monotone_cone(), o, 1e-5);
    for (size_t l = 1; l < res.ladder.rungs.size(); ++l)
        for (int id : g->interior)
            CHECK(res.ladder.rungs[l][id].value() >=
                  res.ladder.rungs[l - 1][id].value() - 1e-9);
    // bounded limit away from the corner
    for (int id : g->interior)
        if (g->xs[id] > -3.0 && g->ys[id] > -3.0)
            CHECK(res.ladder.limit_field[id].value() < 10.0);
}

TEST_CASE("compliant density from the radial family: windowed mass trends") {
    EnvelopeOptions eo;
    eo.tol = 1e-10;
    // alpha small: mass grows markedly with the window
    auto small4 = compliant_density_from_radial(0.1, toric(40, 4.0), 100.0, eo);
    auto small8 = compliant_density_from_radial(0.1, toric(40, 8.0), 100.0, eo);
    CHECK(small8.density.total_mass > 1.3 * small4.density.total_mass);
    // alpha -> 1: near the smooth case, mass stabilizes
    auto big4 = compliant_density_from_radial(0.999, toric(40, 4.0), 100.0, eo);
    auto big8 = compliant_density_from_radial(0.999, toric(40, 8.0), 100.0, eo);
    CHECK(big8.density.total_mass < 1.2 * big4.density.total_mass);
    // alpha = 0.9 finite at both windows, larger at the bigger window
    auto mid4 = compliant_density_from_radial(0.9, toric(40, 4.0), 100.0, eo);
    auto mid8 = compliant_density_from_radial(0.9, toric(40, 8.0), 100.0, eo);
    CHECK(mid8.density.total_mass > mid4.density.total_mass);
    CHECK(!mid4.mass_blowup);
    CHECK_THROWS_AS(compliant_density_from_radial(1.5, toric(24, 4.0)), PreconditionError);
}

TEST_CASE("laplace extension: affine data reproduced") {
    auto g = toric(24, 4.0);
    BoundaryTrace phi = make_trace(g, {"affine-x", {}});
    MASolveOptions o;
    o.tol = 1e-12;
    GridFunction h = laplace_extension(phi, g, o);
    double err = 0.0;
    for (int id : g->interior) err = std::max(err, std::abs(h[id].value() - g->xs[id]));
    CHECK(err < 1e-7);
}
