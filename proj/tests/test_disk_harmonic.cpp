#include <cmath>

#include "doctest.h"
#include "pplab/disk_harmonic.hpp"
#include "support/oracles.hpp"

using namespace pplab;

namespace {

GridPtr disk(int nr, int nt, int nb = 0) {
    DomainSpec s;
    s.kind = DomainKind::UnitDisk;
    s.nodes_radial = nr;
    s.nodes_angular = nt;
    s.nodes_boundary = nb;
    return build_grid(s);
}

double node_r(const Grid2D& g, int id) { return std::hypot(g.xs[id], g.ys[id]); }

}  // namespace

TEST_CASE("poisson: kernel normalization, phi = 1") {
    auto g = disk(16, 16, 256);
    auto res = poisson_solve(make_trace(g, {"const", {1.0}}), g);
    for (int id : g->interior) CHECK(res.field[id].value() == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("poisson: cos data reproduces Re z") {
    auto g = disk(32, 32, 512);
    auto res = poisson_solve(make_trace(g, {"cos", {}}), g);
    double err = 0.0;
    for (int id : g->interior) err = std::max(err, std::abs(res.field[id].value() - g->xs[id]));
    CHECK(err < 1e-10);
}

TEST_CASE("poisson: positivity on nonnegative trig data") {
    auto g = disk(16, 16, 256);
    // 1.5 + cos t + 0.4 sin 2t >= 0
    auto res = poisson_solve(make_trace(g, {"trig", {1.5, 1.0, 0.0, 0.0, 0.4}}), g);
    for (int id : g->interior) CHECK(res.field[id].value() >= -1e-12);
}

TEST_CASE("poisson: singular L1 data reproduces log|z-1| off the singularity") {
    auto g = disk(32, 64, 1024);
    auto trace = make_trace(g, {"log-distance", {}});
    REQUIRE(trace.values[0].is_neg_inf());
    auto res = poisson_solve(trace, g);
    double err = 0.0;
    for (int id : g->interior) {
        const double dist = std::hypot(g->xs[id] - 1.0, g->ys[id]);
        if (dist < 0.1) continue;
        err = std::max(err, std::abs(res.field[id].value() - std::log(dist)));
    }
    CHECK(err < 1e-6);

    // Spot check one node against the fine-quadrature oracle for the integral.
    const int id = g->shell_node(10, 7);
    const double r = node_r(*g, id), th = std::atan2(g->ys[id], g->xs[id]);
    const double oracle = oracles::singular_quadrature(
        [&](double t) {
            return oracles::poisson_kernel(r, th - t) *
                   std::log(2.0 * std::abs(std::sin(0.5 * t)));
        },
        0.0, kTwoPi, 0.0, 1e-13) / kTwoPi;
    CHECK(res.field[id].value() == doctest::Approx(oracle).epsilon(1e-9));
}

TEST_CASE("poisson: non-log-integrable data is rejected") {
    auto g = disk(16, 16, 256);
    auto trace = make_trace(g, {"abs-inv-distance", {}});  // ~ 1/|t| near 0
    CHECK_THROWS_WITH_AS(poisson_solve(trace, g), doctest::Contains("not quasibounded"),
                         PreconditionError);
}

TEST_CASE("truncation ladder: bounded data is constant past its bound") {
    auto g = disk(12, 16, 256);
    // max |phi| = 5
    auto trace = make_trace(g, {"trig", {0.0, 5.0}});
    auto lad = truncation_ladder(trace, g, {1, 2, 4, 8});
    REQUIRE(lad.rungs.size() == 4);
    CHECK(lad.rungs[3].sup_diff_interior(lad.limit_field) == 0.0);  // clamp past the bound
    // positive part increases, negative part decreases; both monotone
    for (size_t l = 1; l < lad.rungs.size(); ++l) CHECK(lad.sup_residual[l] >= 0.0);
}

TEST_CASE("truncation ladder: neglog data, monotone rungs, closed-form limit") {
    auto g = disk(24, 32, 1024);
    auto trace = make_trace(g, {"neglog-distance", {}});  // -log|e^{it}-1| + log 2
    std::vector<double> levels;
    for (int k = 0; k <= 6; ++k) levels.push_back(std::pow(2.0, k));
    auto lad = truncation_ladder(trace, g, levels);
    CHECK(lad.direction == LadderDirection::Increasing);

    // node-wise monotone to 1e-12
    for (size_t l = 1; l < lad.rungs.size(); ++l)
        for (int id : g->interior)
            CHECK(lad.rungs[l][id].value() >= lad.rungs[l - 1][id].value() - 1e-12);

    // u_64 vs closed form away from theta = 0
    double err = 0.0;
    for (int id : g->interior) {
        const double th = wrap_angle(std::atan2(g->ys[id], g->xs[id]));
        if (th < 0.5 || th > kTwoPi - 0.5) continue;
        const double dist = std::hypot(g->xs[id] - 1.0, g->ys[id]);
        err = std::max(err, std::abs(lad.rungs.back()[id].value() -
                                     (-std::log(dist) + std::log(2.0))));
    }
    CHECK(err < 1e-4);
}

TEST_CASE("truncation ladder: removable +inf node converges at the base point") {
    auto g = disk(12, 16, 256);
    BoundaryTrace t = make_trace(g, {"const", {0.0}});
    t.values[0] = ExtReal::pos_inf();
    t.singular[0] = 1;
    // data looks like a*log|..| only through the fitted model of the 0-data
    // neighborhood; the fit sees zeros, so a ~ 0 and the ladder is flat.
    // Use a genuine log spike instead: neglog-distance has its +inf at node 0.
    auto spike = make_trace(g, {"neglog-distance", {}});
    std::vector<double> levels;
    for (int k = 0; k <= 6; ++k) levels.push_back(std::pow(2.0, k));
    auto lad = truncation_ladder(spike, g, levels);
    // increments at the base point decay at least geometrically
    for (size_t l = 2; l < lad.levels.size(); ++l) {
        const double prev = lad.base_gap[l - 1], cur = lad.base_gap[l];
        if (prev > 1e-14) CHECK(cur <= 0.75 * prev);
    }
}

TEST_CASE("build_majorant: bounded case carries M0 = sup|u|") {
    auto g = disk(12, 16, 256);
    auto trace = make_trace(g, {"cos", {}});
    auto lad = truncation_ladder(trace, g, {2, 4, 8});
    auto u = poisson_solve(trace, g).field;
    auto cert = build_majorant(u, lad);
    CHECK(cert.bounded_case);
    CHECK(cert.bound_M0 == doctest::Approx(u.sup_abs_interior()));
    auto rep = check_quasibounded(u, cert);
    CHECK(rep.pass);
}

TEST_CASE("build_majorant: log-singular field gets a sound certificate") {
    auto g = disk(32, 64, 1024);
    auto trace = make_trace(g, {"neglog-distance", {}});
    std::vector<double> levels;
    for (int i = 1; i <= 64; ++i) levels.push_back(0.125 * i);
    auto lad = truncation_ladder(trace, g, levels);
    auto u = poisson_solve(trace, g).field;
    auto cert = build_majorant(u, lad);
    REQUIRE(!cert.bounded_case);
    for (int id : g->interior) CHECK(cert.v[id].value() > 0.0);

    auto rep = check_quasibounded(u, cert);
    CHECK(rep.pass);
    CHECK(rep.ratio_nondecreasing);
    CHECK(rep.deepest_ratio >= 10.0);

    // the stated threshold T_10 where the ratio first clears 10 is finite
    double t10 = -1.0;
    for (auto& [T, R] : rep.ratio_curve)
        if (R >= 10.0) { t10 = T; break; }
    CHECK(t10 > 0.0);

    // a halved majorant must fail at deep sublevel nodes
    QuasiboundCertificate bad = cert;
    for (int id : g->interior) bad.v[id] = ExtReal(0.5 * bad.v[id].value());
    // keep the table: inequalities were tight, so halving v breaks them
    auto rep2 = check_quasibounded(u, bad);
    CHECK(!rep2.pass);
}

TEST_CASE("gauge breakpoints are nondecreasing (convex gauge)") {
    auto g = disk(24, 32, 512);
    auto trace = make_trace(g, {"neglog-distance", {}});
    std::vector<double> levels;
    for (int i = 1; i <= 24; ++i) levels.push_back(0.25 * i);
    auto lad = truncation_ladder(trace, g, levels);
    auto u = poisson_solve(trace, g).field;
    auto cert = build_majorant(u, lad);
    for (size_t k = 1; k < cert.gauge_breakpoints.size(); ++k)
        CHECK(cert.gauge_breakpoints[k] >= cert.gauge_breakpoints[k - 1] - 1e-12);
}

TEST_CASE("harmonic measure: normalization, mean value, additivity") {
    auto g = disk(8, 8, 512);
    std::vector<uint8_t> all(g->n_boundary_nodes(), 1);
    CHECK(harmonic_measure(all, g, 0.3, -0.2) == doctest::Approx(1.0).epsilon(1e-13));

    std::vector<uint8_t> half(g->n_boundary_nodes(), 0);
    for (int k = 0; k < 256; ++k) half[k] = 1;  // arc of length pi
    CHECK(harmonic_measure(half, g, 0.0, 0.0) == doctest::Approx(0.5).epsilon(1e-13));

    std::vector<uint8_t> sixth(g->n_boundary_nodes(), 0);
    for (int k = 0; k < 512 / 6 + 1; ++k) sixth[k] = 1;  // 86 nodes != exact pi/3
    // mean value at the center equals node measure
    CHECK(harmonic_measure(sixth, g, 0.0, 0.0) == doctest::Approx(86.0 / 512.0).epsilon(1e-13));

    // additivity over disjoint arcs
    std::vector<uint8_t> a(g->n_boundary_nodes(), 0), b(g->n_boundary_nodes(), 0),
        ab(g->n_boundary_nodes(), 0);
    for (int k = 10; k < 60; ++k) a[k] = ab[k] = 1;
    for (int k = 200; k < 280; ++k) b[k] = ab[k] = 1;
    const double za[2] = {0.4, 0.1};
    CHECK(harmonic_measure(ab, g, za[0], za[1]) ==
          doctest::Approx(harmonic_measure(a, g, za[0], za[1]) +
                          harmonic_measure(b, g, za[0], za[1]))
              .epsilon(1e-13));
}

TEST_CASE("nonuniqueness witness: arc of length pi") {
    auto g = disk(24, 32, 1024);
    BoundaryTrace phi = make_trace(g, {"const", {0.0}});
    for (int k = 0; k < 512; ++k) phi.singular[k] = 1;
    auto w = nonuniqueness_witness(phi, g);
    CHECK(w.center_difference == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(w.sup_limit_disagreement < 1e-6);
    // difference field equals the harmonic measure field
    for (int id : g->interior)
        CHECK(w.second[id].value() - w.first[id].value() ==
              doctest::Approx(w.measure_field[id].value()).epsilon(1e-12));

    // same with cos data off E
    BoundaryTrace phic = make_trace(g, {"cos", {}});
    for (int k = 0; k < 512; ++k) phic.singular[k] = 1;
    auto wc = nonuniqueness_witness(phic, g);
    for (int id : g->interior)
        CHECK(wc.second[id].value() - wc.first[id].value() ==
              doctest::Approx(wc.measure_field[id].value()).epsilon(1e-12));
}

TEST_CASE("nonuniqueness witness: single node is rejected") {
    auto g = disk(12, 16, 1024);
    BoundaryTrace phi = make_trace(g, {"const", {0.0}});
    phi.singular[5] = 1;
    CHECK_THROWS_WITH_AS(nonuniqueness_witness(phi, g), doctest::Contains("non-null"),
                         PreconditionError);
}

TEST_CASE("riesz demo: constant function") {
    auto g = disk(12, 16, 256);
    AnalyticSampler f{"const", {2.0}};
    GridFunction h(g, ExtReal(3.0));
    auto res = riesz_demo(f, h, g);
    CHECK(res.chain_ok);
    for (int id : g->interior)
        CHECK(res.h_prime[id].value() == doctest::Approx(std::log(2.0)).epsilon(1e-10));
    CHECK(res.cert_report.pass);
}

TEST_CASE("riesz demo: f = 1/(1-z)") {
    auto g = disk(16, 64, 1024);
    AnalyticSampler f{"one-over-one-minus-z", {}};
    GridFunction h = make_riesz_majorant(f, g);
    auto res = riesz_demo(f, h, g);
    CHECK(res.chain_ok);
    CHECK(res.cert_report.pass);
    // h''_n increasing
    for (size_t l = 1; l < res.hpp_rungs.size(); ++l)
        for (int id : g->interior)
            CHECK(res.hpp_rungs[l][id].value() >= res.hpp_rungs[l - 1][id].value() - 1e-10);
}

TEST_CASE("riesz demo: violated majorant is rejected") {
    auto g = disk(12, 16, 256);
    AnalyticSampler f{"const", {2.0}};
    GridFunction h(g, ExtReal(1.0));  // |f| = 2 > 1
    CHECK_THROWS_AS(riesz_demo(f, h, g), PreconditionError);
}

TEST_CASE("complex data via the 4-way split") {
    auto g = disk(16, 16, 256);
    auto [re, im] =
        poisson_solve_complex(make_trace(g, {"cos", {}}), make_trace(g, {"sin", {}}), g);
    for (int id : g->interior) {
        CHECK(re.field[id].value() == doctest::Approx(g->xs[id]).epsilon(1e-10));
        CHECK(im.field[id].value() == doctest::Approx(g->ys[id]).epsilon(1e-10));
    }
}

TEST_CASE("annulus: two-trace harmonic extension against the closed form") {
    DomainSpec s;
    s.kind = DomainKind::Annulus;
    s.nodes_radial = 16;
    s.nodes_angular = 32;
    s.nodes_boundary = 128;
    s.r_inner = 0.5;
    auto g = build_grid(s);

    // data: cos t on the outer circle, 0 on the inner circle
    BoundaryTrace t(g->n_boundary_nodes());
    for (int k = 0; k < g->n_b; ++k) {
        const int id = g->boundary[k];
        t.values[k] = ExtReal(g->xs[id]);  // cos(theta) at radius 1
        t.values[g->n_b + k] = ExtReal(0.0);
    }
    auto res = poisson_solve(t, g);
    // closed form: u = a r cos t + b cos t / r with a + b = 1, a r_in + b/r_in = 0
    const double ri = 0.5;
    const double a = 1.0 / (1.0 - ri * ri), b = 1.0 - a;
    for (int id : g->interior) {
        const double r = node_r(*g, id), th = std::atan2(g->ys[id], g->xs[id]);
        CHECK(res.field[id].value() ==
              doctest::Approx((a * r + b / r) * std::cos(th)).epsilon(1e-10));
    }

    // whole-circle harmonic measures sum to 1
    std::vector<uint8_t> outer(g->n_boundary_nodes(), 0), inner(g->n_boundary_nodes(), 0);
    for (int k = 0; k < g->n_b; ++k) outer[k] = 1, inner[g->n_b + k] = 1;
    const double mo = harmonic_measure(outer, g, 0.7, 0.0);
    const double mi = harmonic_measure(inner, g, 0.7, 0.0);
    CHECK(mo + mi == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(mo == doctest::Approx(1.0 - std::log(0.7) / std::log(0.5)).epsilon(1e-12));
}
