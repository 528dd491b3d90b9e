#pragma once

#include <optional>

#include "pplab/disk_harmonic.hpp"
#include "pplab/envelope.hpp"

namespace pplab {

/// Field on the toric-log grid with its cone-violation diagnostics.
struct ToricField {
    GridFunction f;
    double convexity_violation = 0.0;
    double monotonicity_violation = 0.0;
};

ToricField make_toric_field(const GridFunction& f, const ConeConstraint& cone);

/// Per-cell nonnegative Monge-Ampere masses (cell = node-centered h^2 square,
/// indexed in interior order).
struct MeasureDensity {
    std::vector<double> cell_mass;
    double total_mass = 0.0;
    bool pluripolar_charge = false;  // compliant measures cannot charge pluripolar sets

    static MeasureDensity constant(double density, const GridPtr& grid);
};

struct MAProblem {
    BoundaryTrace phi;
    MeasureDensity mu;
    std::optional<GridFunction> majorant_v;  // positive plurisuperharmonic (concave-monotone)
    std::optional<GridFunction> minorant;    // lower barrier with ma(minorant) >= mu
    std::vector<uint8_t> e_mask;             // E_phi on the boundary trace
};

/// Discrete Monge-Ampere masses of a cone-feasible field: per node the
/// minimum over full-hop orthogonal direction pairs of the product of second
/// differences, times the cell area. Nonnegative on feasible fields.
MeasureDensity ma_operator(const GridFunction& f, const ConeConstraint& cone,
                           double feasibility_tol = 1e-7);

struct MASolveOptions {
    double tol = 1e-12;          // sup-norm fixed-point update
    long max_iter_factor = 1200;  // cap = factor * nodes per axis
    bool cascade = true;         // coarse-to-fine warm start
    bool init_below = false;     // start from a constant subsolution instead
    const GridFunction* warm_start = nullptr;
};

/// Bounded Dirichlet solve ma(f) = mu with pinned boundary data, by damped
/// nonlinear Gauss-Jacobi on the monotone wide-stencil scheme.
GridFunction solve_dirichlet_bounded(const BoundaryTrace& phi, const MeasureDensity& mu,
                                     const GridPtr& grid, const ConeConstraint& cone,
                                     const MASolveOptions& opts = {});

/// Coordinate-harmonic (Laplace) extension of boundary data on the toric
/// window; the stand-in for the quasibounded harmonic majorant h_phi.
GridFunction laplace_extension(const BoundaryTrace& phi, const GridPtr& grid,
                               const MASolveOptions& opts = {});

/// Decreasing ladder u_k from data max(phi, -k); every rung must stay above
/// the problem's minorant.
TruncationLadder lower_truncation_ladder(const MAProblem& prob, const std::vector<double>& levels,
                                         const GridPtr& grid, const ConeConstraint& cone,
                                         const MASolveOptions& opts = {});

struct UpperLadderResult {
    TruncationLadder ladder;              // increasing rungs U_k
    std::vector<double> data_caps;        // M_k = sup_boundary(phi - v/k)
    std::vector<double> w_identity_sup;   // sup |w_k - U_k| per rung
};

/// Increasing ladder U_k from data min(phi, M_k) with the pairing
/// M_k = sup(phi - v/k); forms w_k = max(U_est - v/k, U_k) and checks the
/// identity w_k = U_k at every rung.
UpperLadderResult upper_truncation_ladder(const MAProblem& prob, const std::vector<double>& levels,
                                          const GridPtr& grid, const ConeConstraint& cone,
                                          const MASolveOptions& opts = {},
                                          double identity_tol = 1e-6);

/// Discrete comparison: with equal boundary traces,
/// ma(u) >= ma(w) cell-wise implies u <= w + tol node-wise.
bool check_comparison(const GridFunction& u, const GridFunction& w, const ConeConstraint& cone,
                      double tol = 1e-8, double hypothesis_slack = 1e-9);

/// Discrete max lemma: ma(u) >= mu and ma(w) >= mu (up to tau) imply
/// ma(max(u, w)) >= mu - tau cell-wise.
bool check_max_lemma(const GridFunction& u, const GridFunction& w, const MeasureDensity& mu,
                     const ConeConstraint& cone, double tau);

/// Random cone-feasible analytic fields (quadratic + exponential + affine
/// combinations) for the seeded property suites.
GridFunction random_feasible_field(const GridPtr& grid, uint64_t seed, double min_density = 0.0);

/// tau(h) = C h^2 calibration for the max-lemma consistency tolerance:
/// measures the worst sampling deficit over seeded feasible pairs.
double calibrate_max_lemma_constant(const GridPtr& grid, uint64_t seed, int n_pairs = 20);

/// Density of the convexified profile -(1 - e^{2x} - e^{2y})^alpha, the toric
/// port of the disk's compliant-but-infinite-mass family. Flags when the
/// windowed total mass exceeds `mass_threshold`.
struct RadialDensityResult {
    MeasureDensity density;
    GridFunction convexified;
    bool mass_blowup = false;
};
RadialDensityResult compliant_density_from_radial(double alpha, const GridPtr& grid,
                                                  double mass_threshold = 100.0,
                                                  const EnvelopeOptions& env_opts = {});

}  // namespace pplab
