#pragma once

#include <array>
#include <memory>
#include <vector>

#include "pplab/core.hpp"

namespace pplab {

enum class DomainKind { UnitDisk, Annulus, ToricBallLog };

/// Discretization request. Disk/annulus grids are polar tensor grids
/// (radial shells x angular columns) with a separately resolved boundary
/// trace; the toric domain is the log image of the torus-invariant unit
/// ball of C^2, truncated to the window [-x_window, 0]^2.
struct DomainSpec {
    DomainKind kind = DomainKind::UnitDisk;
    int nodes_radial = 32;   // shells (disk/annulus) or lattice nodes per axis (toric)
    int nodes_angular = 32;  // angular columns (disk/annulus); ignored for toric
    int nodes_boundary = 0;  // boundary nodes per circle; 0 -> nodes_angular
    double r_inner = 0.5;    // annulus only
    double x_window = 8.0;   // toric only: window is [-x_window, 0]^2

    bool operator==(const DomainSpec&) const = default;
};

enum class NodeClass : uint8_t { Invalid = 0, Interior = 1, Boundary = 2 };

/// One arm of a directional stencil: value = w0*f[n0] + w1*f[n1],
/// at distance `s` lattice steps along the direction (s = 1 full hop,
/// s = 1/2 interpolated half hop).
struct StencilArm {
    int n0 = -1, n1 = -1;
    double w0 = 1.0, w1 = 0.0;
    double s = 1.0;
    bool ok = false;
};

struct DirStencil {
    StencilArm plus, minus;
    bool full_pair = false;  // both arms are plain full hops
};

/// The 8 stencil directions: axis, diagonal, and knight-move pairs.
inline constexpr std::array<std::array<int, 2>, 8> kToricDirections = {
    {{1, 0}, {0, 1}, {1, 1}, {1, -1}, {2, 1}, {1, 2}, {2, -1}, {1, -2}}};

/// Orthogonal direction pairs (indices into kToricDirections) used by the
/// discrete Monge-Ampere determinant.
inline constexpr std::array<std::array<int, 2>, 4> kOrthogonalPairs = {
    {{0, 1}, {2, 3}, {4, 7}, {5, 6}}};

/// Immutable discretized domain. Node ids cover every value-carrying node
/// (interior and boundary); coordinates are Cartesian for every kind.
class Grid2D {
  public:
    DomainSpec spec;
    DomainKind kind = DomainKind::UnitDisk;

    int n_nodes = 0;
    std::vector<double> xs, ys;       // Cartesian coordinates per node
    std::vector<NodeClass> cls;       // per node
    std::vector<int> interior;        // interior node ids (fixed order)
    std::vector<int> boundary;        // boundary node ids in trace order
    std::vector<double> bparam;       // trace parameter per boundary node
    std::vector<uint8_t> bcircle;     // annulus: 0 outer, 1 inner
    std::vector<uint8_t> bface;       // toric: 0 curve, 1 x-face, 2 y-face, 3 corner

    // Polar structure (disk/annulus).
    int n_r = 0, n_theta = 0, n_b = 0;
    double dr = 0.0, dtheta = 0.0, r_in = 0.0;
    bool has_center = false;

    // Toric lattice structure.
    int nx = 0, ny = 0;
    double h = 0.0, x_min = 0.0;
    std::vector<int> node_at;          // lattice (i*ny + j) -> node id, -1 invalid
    std::vector<DirStencil> stencils;  // interior.size() * 8, row-major per interior node

    // --- polar helpers -----------------------------------------------------
    double shell_radius(int i) const { return r_in + (i + 1) * dr; }  // i in [0, n_r)
    int shell_node(int i, int j) const {
        int base = has_center ? 1 : 0;
        return base + i * n_theta + wrap_col(j);
    }
    int wrap_col(int j) const { return ((j % n_theta) + n_theta) % n_theta; }
    int center_node() const { return 0; }
    /// Boundary trace index for angular column j (outer circle).
    int trace_index_of_column(int j) const { return wrap_col(j) * (n_b / n_theta); }
    int boundary_node(int circle, int trace_idx) const {
        return boundary[circle * n_b + trace_idx];
    }

    // --- toric helpers ------------------------------------------------------
    double tx(int i) const { return x_min + i * h; }
    double ty(int j) const { return x_min + j * h; }
    int toric_node(int i, int j) const {
        if (i < 0 || j < 0 || i >= nx || j >= ny) return -1;
        return node_at[static_cast<size_t>(i) * ny + j];
    }
    const DirStencil& stencil(int interior_idx, int dir) const {
        return stencils[static_cast<size_t>(interior_idx) * 8 + dir];
    }
    bool inside_toric(double x, double y) const {
        return std::exp(2.0 * x) + std::exp(2.0 * y) < 1.0;
    }

    int n_interior() const { return static_cast<int>(interior.size()); }
    int n_boundary_nodes() const { return static_cast<int>(boundary.size()); }
};

using GridPtr = std::shared_ptr<const Grid2D>;

/// Build a grid from a spec. Pure: identical specs give bit-identical grids.
/// Throws PreconditionError for resolutions below 8 per axis or annulus
/// r_inner outside (0, 1).
GridPtr build_grid(const DomainSpec& spec);

}  // namespace pplab
