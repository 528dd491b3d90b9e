#include "pplab/grid.hpp"

#include <algorithm>
#include <cmath>

namespace pplab {

namespace {

GridPtr build_polar(const DomainSpec& spec) {
    auto g = std::make_shared<Grid2D>();
    g->spec = spec;
    g->kind = spec.kind;
    const bool disk = spec.kind == DomainKind::UnitDisk;

    g->n_r = spec.nodes_radial;
    g->n_theta = spec.nodes_angular;
    g->n_b = spec.nodes_boundary > 0 ? spec.nodes_boundary : spec.nodes_angular;
    if (g->n_b % g->n_theta != 0)
        throw PreconditionError("boundary node count must be a multiple of angular columns");
    g->r_in = disk ? 0.0 : spec.r_inner;
    g->dr = (1.0 - g->r_in) / (g->n_r + 1);
    g->dtheta = kTwoPi / g->n_theta;
    g->has_center = disk;

    const int circles = disk ? 1 : 2;
    g->n_nodes = (disk ? 1 : 0) + g->n_r * g->n_theta + circles * g->n_b;
    g->xs.resize(g->n_nodes);
    g->ys.resize(g->n_nodes);
    g->cls.assign(g->n_nodes, NodeClass::Interior);

    int id = 0;
    if (disk) {
        g->xs[id] = 0.0;
        g->ys[id] = 0.0;
        g->interior.push_back(id);
        ++id;
    }
    for (int i = 0; i < g->n_r; ++i) {
        const double r = g->shell_radius(i);
        for (int j = 0; j < g->n_theta; ++j) {
            const double t = j * g->dtheta;
            g->xs[id] = r * std::cos(t);
            g->ys[id] = r * std::sin(t);
            g->interior.push_back(id);
            ++id;
        }
    }
    const double db = kTwoPi / g->n_b;
    for (int c = 0; c < circles; ++c) {
        const double rc = c == 0 ? 1.0 : g->r_in;
        for (int j = 0; j < g->n_b; ++j) {
            const double t = j * db;
            g->xs[id] = rc * std::cos(t);
            g->ys[id] = rc * std::sin(t);
            g->cls[id] = NodeClass::Boundary;
            g->boundary.push_back(id);
            g->bparam.push_back(rc * t);  // arc length along the circle
            g->bcircle.push_back(static_cast<uint8_t>(c));
            ++id;
        }
    }
    return g;
}

// Resolve one arm of a toric stencil direction. `inside` answers whether a
// lattice node carries a value.
StencilArm resolve_arm(const Grid2D& g, int i, int j, int a, int b,
                       const std::vector<uint8_t>& inside) {
    auto ok = [&](int ii, int jj) {
        return ii >= 0 && jj >= 0 && ii < g.nx && jj < g.ny &&
               inside[static_cast<size_t>(ii) * g.ny + jj];
    };
    StencilArm arm;
    if (ok(i + a, j + b)) {
        arm.n0 = arm.n1 = (i + a) * g.ny + (j + b);
        arm.w0 = 1.0;
        arm.w1 = 0.0;
        arm.s = 1.0;
        arm.ok = true;
        return arm;
    }
    // Half hop: linear interpolation between the two lattice nodes flanking
    // the midpoint of the direction vector. Axis directions have no half hop.
    int f0i, f0j, f1i, f1j;
    if (a != 0 && b != 0 && std::abs(a) == 1 && std::abs(b) == 1) {
        f0i = i + a; f0j = j;
        f1i = i;     f1j = j + b;
    } else if (std::abs(a) == 2) {
        f0i = i + a / 2; f0j = j;
        f1i = i + a / 2; f1j = j + b;
    } else if (std::abs(b) == 2) {
        f0i = i;     f0j = j + b / 2;
        f1i = i + a; f1j = j + b / 2;
    } else {
        return arm;  // axis direction, no half hop
    }
    if (ok(f0i, f0j) && ok(f1i, f1j)) {
        arm.n0 = f0i * g.ny + f0j;
        arm.n1 = f1i * g.ny + f1j;
        arm.w0 = arm.w1 = 0.5;
        arm.s = 0.5;
        arm.ok = true;
    }
    return arm;
}

GridPtr build_toric(const DomainSpec& spec) {
    auto g = std::make_shared<Grid2D>();
    g->spec = spec;
    g->kind = spec.kind;
    g->nx = g->ny = spec.nodes_radial;
    g->x_min = -spec.x_window;
    g->h = spec.x_window / (g->nx - 1);

    const int n = g->nx;
    std::vector<uint8_t> inside(static_cast<size_t>(n) * n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            inside[static_cast<size_t>(i) * n + j] = g->inside_toric(g->tx(i), g->ty(j)) ? 1 : 0;

    // Classify: faces are window edges; interior needs every direction pair
    // resolvable; remaining inside nodes form the curve fringe.
    std::vector<NodeClass> lattice_cls(static_cast<size_t>(n) * n, NodeClass::Invalid);
    std::vector<std::array<DirStencil, 8>> lattice_sten(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const size_t li = static_cast<size_t>(i) * n + j;
            if (!inside[li]) continue;
            if (i == 0 || j == 0) {
                lattice_cls[li] = NodeClass::Boundary;
                continue;
            }
            bool complete = true;
            for (int d = 0; d < 8; ++d) {
                const auto [a, b] = kToricDirections[d];
                DirStencil ds;
                ds.plus = resolve_arm(*g, i, j, a, b, inside);
                ds.minus = resolve_arm(*g, i, j, -a, -b, inside);
                ds.full_pair = ds.plus.ok && ds.minus.ok && ds.plus.s == 1.0 && ds.minus.s == 1.0;
                if (!ds.plus.ok || !ds.minus.ok) complete = false;
                lattice_sten[li][d] = ds;
            }
            lattice_cls[li] = complete ? NodeClass::Interior : NodeClass::Boundary;
        }
    }

    // Assign node ids: interior in lattice order, then boundary in trace
    // order (x-face descending y is appended last so the trace runs
    // y-face -> curve -> x-face; parameter is the running index).
    g->node_at.assign(static_cast<size_t>(n) * n, -1);
    int id = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (lattice_cls[static_cast<size_t>(i) * n + j] == NodeClass::Interior)
                g->node_at[static_cast<size_t>(i) * n + j] = id++;
    const int n_int = id;

    struct BNode { int i, j; uint8_t face; };
    std::vector<BNode> bnodes;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const size_t li = static_cast<size_t>(i) * n + j;
            if (lattice_cls[li] != NodeClass::Boundary) continue;
            uint8_t face = 0;
            if (i == 0 && j == 0) face = 3;
            else if (i == 0) face = 1;
            else if (j == 0) face = 2;
            bnodes.push_back({i, j, face});
        }
    std::sort(bnodes.begin(), bnodes.end(), [](const BNode& l, const BNode& r) {
        auto key = [](const BNode& b) {
            // y-face left-to-right, curve by ascending x then descending y,
            // x-face bottom-to-top.
            int section = b.face == 2 || b.face == 3 ? 0 : (b.face == 0 ? 1 : 2);
            return std::array<int, 3>{section, section == 2 ? b.j : b.i,
                                      section == 1 ? -b.j : b.j};
        };
        return key(l) < key(r);
    });
    for (const auto& b : bnodes) {
        g->node_at[static_cast<size_t>(b.i) * n + b.j] = id;
        g->boundary.push_back(id);
        g->bface.push_back(b.face);
        ++id;
    }
    g->n_nodes = id;

    g->xs.resize(g->n_nodes);
    g->ys.resize(g->n_nodes);
    g->cls.assign(g->n_nodes, NodeClass::Invalid);
    g->interior.reserve(n_int);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const int nid = g->node_at[static_cast<size_t>(i) * n + j];
            if (nid < 0) continue;
            g->xs[nid] = g->tx(i);
            g->ys[nid] = g->ty(j);
            g->cls[nid] = lattice_cls[static_cast<size_t>(i) * n + j];
            if (g->cls[nid] == NodeClass::Interior) g->interior.push_back(nid);
        }
    g->bparam.resize(g->boundary.size());
    for (size_t k = 0; k < g->boundary.size(); ++k) g->bparam[k] = static_cast<double>(k);

    // Stencils, with lattice indices remapped to node ids.
    g->stencils.resize(static_cast<size_t>(n_int) * 8);
    int ii = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const size_t li = static_cast<size_t>(i) * n + j;
            if (lattice_cls[li] != NodeClass::Interior) continue;
            for (int d = 0; d < 8; ++d) {
                DirStencil ds = lattice_sten[li][d];
                for (StencilArm* arm : {&ds.plus, &ds.minus}) {
                    arm->n0 = g->node_at[arm->n0];
                    arm->n1 = g->node_at[arm->n1];
                }
                g->stencils[static_cast<size_t>(ii) * 8 + d] = ds;
            }
            ++ii;
        }
    return g;
}

}  // namespace

GridPtr build_grid(const DomainSpec& spec) {
    if (spec.nodes_radial < 8)
        throw PreconditionError("build_grid: need at least 8 nodes per axis");
    switch (spec.kind) {
        case DomainKind::UnitDisk:
            if (spec.nodes_angular < 8)
                throw PreconditionError("build_grid: need at least 8 nodes per axis");
            return build_polar(spec);
        case DomainKind::Annulus:
            if (spec.nodes_angular < 8)
                throw PreconditionError("build_grid: need at least 8 nodes per axis");
            if (!(spec.r_inner > 0.0 && spec.r_inner < 1.0))
                throw PreconditionError("build_grid: annulus r_inner must lie in (0,1)");
            return build_polar(spec);
        case DomainKind::ToricBallLog:
            if (spec.x_window <= 0.0)
                throw PreconditionError("build_grid: toric window must be positive");
            return build_toric(spec);
    }
    throw PreconditionError("build_grid: unknown domain kind");
}

}  // namespace pplab
