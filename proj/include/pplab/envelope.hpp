#pragma once

#include "pplab/disk_harmonic.hpp"
#include "pplab/field.hpp"

namespace pplab {

enum class ConeKind { Subharmonic2D, ConvexMonotoneToric };

/// Cone of admissible fields: subharmonic on polar grids (node value below
/// the positive-weight stencil average), or convex with coordinatewise
/// nondecreasing slopes in toric-log coordinates. `enforce_monotone` exists
/// because calibration fields (quadratics) are convex but not monotone.
struct ConeConstraint {
    ConeKind kind = ConeKind::Subharmonic2D;
    int stencil_width = 2;
    int directions = 8;
    bool enforce_monotone = true;
};

struct ObstacleSpec {
    GridFunction obstacle;              // +inf flags mean unconstrained
    BoundaryTrace boundary;             // pinned boundary data
    std::vector<uint8_t> penalty_mask;  // boundary subset pinned to <= -L
    double penalty_level = 0.0;         // L
};

struct EnvelopeOptions {
    double tol = 1e-10;           // sup-norm update threshold
    int max_iter_factor = 200;    // cap = factor * nodes per axis
    const GridFunction* warm_start = nullptr;  // any upper/near start
    int log_stride = 64;
};

struct EnvelopeResult {
    GridFunction field;
    int iterations = 0;
    double final_update = 0.0;
    std::vector<uint8_t> active_mask;            // per interior node
    std::vector<std::pair<int, double>> run_log;  // (iteration, sup_update)
};

/// Largest cone-constrained fixed point of u <- min(obstacle, projection(u))
/// with boundary data and penalty pinned. Jacobi sweeps, fixed direction
/// order, double-buffered; deterministic. The fixed point with pinned
/// boundary is unique, so warm starts change iteration counts only.
EnvelopeResult upper_envelope(const ConeConstraint& cone, const ObstacleSpec& obs,
                              const GridPtr& grid, const EnvelopeOptions& opts = {});

/// Boundary relative extremal function: obstacle 0, boundary 0 off E,
/// pinned -1 on E. Output lies in [-1, 0].
EnvelopeResult relative_extremal(const std::vector<uint8_t>& e_mask, const GridPtr& grid,
                                 const ConeConstraint& cone, const EnvelopeOptions& opts = {});

double delta_bpluripolar(const GridPtr& grid, double floor_value = 1e-3);

/// Numerical b-pluripolarity: sup |omega*| over interior nodes below the
/// grid threshold. Masks consisting solely of asymptotic window faces are
/// classified by the window-doubling trend instead (the face proxies a set
/// at log-coordinate -infinity; its extremal depth at a fixed point scales
/// like 1/x_window, so the depth ratio across windows decides).
std::pair<bool, double> is_bpluripolar(const std::vector<uint8_t>& e_mask, const GridPtr& grid,
                                       const ConeConstraint& cone,
                                       const EnvelopeOptions& opts = {});

/// Largest cone-constrained field below `upper` with boundary values pinned
/// at min(upper, -L) on E and at upper off E.
EnvelopeResult penalized_singularity_envelope(const std::vector<uint8_t>& e_mask, double L,
                                              const ConeConstraint& cone,
                                              const GridFunction& upper, const GridPtr& grid,
                                              const EnvelopeOptions& opts = {});

/// Cone-projection value at one interior node given the current field
/// values (the largest admissible node value). Exposed for feasibility
/// checks and the MA solver.
double cone_projection_at(const ConeConstraint& cone, const Grid2D& grid,
                          const std::vector<double>& values, int interior_idx);

/// Max violation of the cone constraint over interior nodes: positive parts
/// of value - projection (convexity/average side) and of the negative
/// monotone slopes, reported separately.
std::pair<double, double> cone_violation(const ConeConstraint& cone, const GridFunction& f);

}  // namespace pplab
