#include <cmath>
#include <cstring>

#include "doctest.h"
#include "pplab/expressions.hpp"
#include "pplab/field.hpp"
#include "pplab/grid.hpp"
#include "pplab/quadrature.hpp"

using namespace pplab;

namespace {
DomainSpec disk_spec(int nr, int nt, int nb = 0) {
    DomainSpec s;
    s.kind = DomainKind::UnitDisk;
    s.nodes_radial = nr;
    s.nodes_angular = nt;
    s.nodes_boundary = nb;
    return s;
}
}  // namespace

TEST_CASE("disk grid: shell and boundary counts") {
    auto g = build_grid(disk_spec(16, 16));
    CHECK(g->n_r * g->n_theta == 16 * 16);
    CHECK(g->n_boundary_nodes() == 16);
    CHECK(g->interior.size() == 1 + 16 * 16);  // center + shells
    for (int id : g->interior) CHECK(std::hypot(g->xs[id], g->ys[id]) < 1.0);
}

TEST_CASE("annulus grid: two boundary circles") {
    DomainSpec s = disk_spec(32, 32);
    s.kind = DomainKind::Annulus;
    s.r_inner = 0.5;
    auto g = build_grid(s);
    CHECK(g->n_boundary_nodes() == 64);
    int outer = 0, inner = 0;
    for (auto c : g->bcircle) (c == 0 ? outer : inner)++;
    CHECK(outer == 32);
    CHECK(inner == 32);
    for (int id : g->interior) {
        const double r = std::hypot(g->xs[id], g->ys[id]);
        CHECK(r > 0.5);
        CHECK(r < 1.0);
    }
}

TEST_CASE("toric grid: membership predicate holds at every node") {
    DomainSpec s;
    s.kind = DomainKind::ToricBallLog;
    s.nodes_radial = 64;
    s.x_window = 8.0;
    auto g = build_grid(s);
    CHECK(g->n_interior() > 0);
    for (int id = 0; id < g->n_nodes; ++id) {
        if (g->cls[id] == NodeClass::Invalid) continue;
        CHECK(std::exp(2.0 * g->xs[id]) + std::exp(2.0 * g->ys[id]) < 1.0);
        CHECK(g->xs[id] < 0.0);
        CHECK(g->ys[id] < 0.0);
    }
    // every interior node has a complete stencil
    for (int k = 0; k < g->n_interior(); ++k)
        for (int d = 0; d < 8; ++d) {
            CHECK(g->stencil(k, d).plus.ok);
            CHECK(g->stencil(k, d).minus.ok);
        }
}

TEST_CASE("build_grid rejects bad specs") {
    CHECK_THROWS_AS(build_grid(disk_spec(4, 16)), PreconditionError);
    DomainSpec s = disk_spec(16, 16);
    s.kind = DomainKind::Annulus;
    s.r_inner = 1.5;
    CHECK_THROWS_AS(build_grid(s), PreconditionError);
}

TEST_CASE("build_grid is deterministic") {
    auto a = build_grid(disk_spec(16, 32, 64));
    auto b = build_grid(disk_spec(16, 32, 64));
    REQUIRE(a->n_nodes == b->n_nodes);
    CHECK(std::memcmp(a->xs.data(), b->xs.data(), a->xs.size() * sizeof(double)) == 0);
    CHECK(std::memcmp(a->ys.data(), b->ys.data(), a->ys.size() * sizeof(double)) == 0);

    DomainSpec t;
    t.kind = DomainKind::ToricBallLog;
    t.nodes_radial = 48;
    auto c = build_grid(t), d = build_grid(t);
    REQUIRE(c->n_nodes == d->n_nodes);
    CHECK(std::memcmp(c->xs.data(), d->xs.data(), c->xs.size() * sizeof(double)) == 0);
}

TEST_CASE("interpolate: constants, node values, flags") {
    auto g = build_grid(disk_spec(16, 16));
    GridFunction f(g, ExtReal(3.0));
    CHECK(interpolate(f, 0.3, 0.2).value() == doctest::Approx(3.0).epsilon(1e-14));

    // node reproduction
    const int id = g->shell_node(7, 3);
    GridFunction u(g);
    for (int i = 0; i < g->n_nodes; ++i) u[i] = ExtReal(static_cast<double>(i % 17));
    CHECK(interpolate(u, g->xs[id], g->ys[id]).value() ==
          doctest::Approx(u[id].value()).epsilon(1e-12));

    // flag propagation
    GridFunction w(g, ExtReal(1.0));
    w[g->shell_node(7, 3)] = ExtReal::neg_inf();
    const double rmid = 0.5 * (g->shell_radius(6) + g->shell_radius(7));
    const double tmid = (3 + 0.4) * g->dtheta;
    CHECK(interpolate(w, rmid * std::cos(tmid), rmid * std::sin(tmid)).is_neg_inf());

    CHECK_THROWS_AS(interpolate(f, 1.5, 0.0), PreconditionError);
}

TEST_CASE("interpolate: affine exact at toric cell centers") {
    DomainSpec s;
    s.kind = DomainKind::ToricBallLog;
    s.nodes_radial = 32;
    auto g = build_grid(s);
    GridFunction f(g);
    for (int id = 0; id < g->n_nodes; ++id)
        if (g->cls[id] != NodeClass::Invalid) f[id] = ExtReal(2.0 * g->xs[id] - 3.0 * g->ys[id] + 1.0);
    // a cell center deep inside the window
    const double px = g->tx(5) + 0.5 * g->h, py = g->ty(5) + 0.5 * g->h;
    CHECK(interpolate(f, px, py).value() ==
          doctest::Approx(2.0 * px - 3.0 * py + 1.0).epsilon(1e-12));
}

TEST_CASE("boundary_quadrature: constants and pure harmonics are exact") {
    auto g = build_grid(disk_spec(8, 8, 512));
    BoundaryTrace one = make_trace(g, {"const", {1.0}});
    CHECK(boundary_quadrature(one, g) == doctest::Approx(kTwoPi).epsilon(1e-13));

    BoundaryTrace c = make_trace(g, {"cos", {}});
    CHECK(std::abs(boundary_quadrature(c, g)) < 1e-12);

    // trig polynomial of degree < N/2
    BoundaryTrace tp = make_trace(g, {"trig", {0.5, 1.0, -2.0, 0.25, 0.0}});
    CHECK(boundary_quadrature(tp, g) == doctest::Approx(0.5 * kTwoPi).epsilon(1e-12));
}

TEST_CASE("boundary_quadrature: log singularity handled by one-sided model") {
    auto g = build_grid(disk_spec(8, 8, 512));
    BoundaryTrace t = make_trace(g, {"log-distance", {}});
    REQUIRE(t.values[0].is_neg_inf());
    REQUIRE(t.singular[0] == 1);
    // Oracle: the integral of log|e^{it} - 1| over the circle is 0.
    CHECK(std::abs(boundary_quadrature(t, g)) < 2e-3);
}

TEST_CASE("boundary_quadrature: degenerate trace rejected") {
    auto g = build_grid(disk_spec(8, 8));
    BoundaryTrace t(g->n_boundary_nodes());
    for (auto& v : t.values) v = ExtReal::neg_inf();
    for (auto& m : t.singular) m = 1;
    CHECK_THROWS_WITH_AS(boundary_quadrature(t, g), doctest::Contains("degenerate"),
                         PreconditionError);
}
