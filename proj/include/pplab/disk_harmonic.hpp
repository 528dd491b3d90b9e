#pragma once

#include <optional>
#include <string>
#include <utility>

#include "pplab/poisson.hpp"
#include "pplab/quadrature.hpp"

namespace pplab {

enum class LadderDirection { Increasing, Decreasing };

/// Monotone family of bounded solutions with data clamped at the truncation
/// levels. Positive and negative parts are laddered separately and summed;
/// rung increments are evaluated with positive-weight quadrature so the
/// node-wise monotonicity is structural, not accidental.
struct TruncationLadder {
    std::vector<double> levels;
    std::vector<GridFunction> rungs;   // summed rung fields
    std::vector<double> sup_residual;  // sup |rung_l - rung_{l-1}| over interior
    std::vector<double> base_gap;      // |rung_l(base) - limit(base)|
    LadderDirection direction = LadderDirection::Increasing;
    bool mixed = false;  // both parts active at some level
    GridFunction limit_field;
    std::pair<double, double> base_point{0.0, 0.0};
    double tol_mono = 1e-12;
};

TruncationLadder truncation_ladder(const BoundaryTrace& phi, const GridPtr& grid,
                                   const std::vector<double>& levels,
                                   std::pair<double, double> base_point = {0.0, 0.0});

/// Majorant v plus the finite (eps, M) table and the piecewise-linear convex
/// gauge, witnessing |u| <= eps v + M_eps for every tabulated eps.
struct QuasiboundCertificate {
    GridFunction v;
    bool bounded_case = false;
    double bound_M0 = 0.0;
    std::vector<std::pair<double, double>> eps_table;  // (eps_i, M_i)
    std::vector<double> gauge_breakpoints;             // n_k = sup |u_k|, selected rungs
    std::vector<int> selected_rungs;                   // indices into the ladder
    std::string certified_id;
};

QuasiboundCertificate build_majorant(
    const GridFunction& u, const TruncationLadder& ladder,
    std::pair<double, double> base = {0.0, 0.0},
    const std::vector<double>& eps_schedule = {1.0, 0.3, 0.1, 0.03, 0.01},
    double series_tol = 1e-12, int max_terms = 48);

struct QuasiboundReport {
    bool pass = false;
    std::vector<int> violating_nodes;
    std::vector<std::pair<double, double>> ratio_curve;  // (T, R(T)), R nondecreasing
    bool ratio_nondecreasing = false;
    double deepest_ratio = 0.0;
};

QuasiboundReport check_quasibounded(const GridFunction& u, const QuasiboundCertificate& cert,
                                    int n_thresholds = 8);

// ---------------------------------------------------------------------------
// Harmonic measure and the non-uniqueness witness
// ---------------------------------------------------------------------------

/// Boundary-node mask -> union of node-cell arcs (disk).
std::vector<ArcSpec> mask_to_arcs(const std::vector<uint8_t>& mask, const GridPtr& grid);

/// omega(z, E) for E a union of boundary-node cells. Disk: closed form.
/// Annulus: supported for whole-circle masks only.
double harmonic_measure(const std::vector<uint8_t>& mask, const GridPtr& grid, double px,
                        double py);

GridFunction harmonic_measure_field(const std::vector<uint8_t>& mask, const GridPtr& grid);

/// Numerical b-polarity threshold on the disk: E is declared b-polar when
/// omega(center, E) < max(2/N_boundary, floor).
double delta_bpolar(const GridPtr& grid, double floor_value = 1e-4);

struct WitnessResult {
    GridFunction first, second;   // h and h + omega(., E)
    GridFunction measure_field;   // omega(., E)
    double center_difference;     // omega(0, E)
    double sup_limit_disagreement;  // radial limits of the difference off E
};

/// Two harmonic solutions with identical boundary limits off E_phi, differing
/// by the harmonic measure field. Requires E_phi numerically non-b-polar.
WitnessResult nonuniqueness_witness(const BoundaryTrace& phi, const GridPtr& grid,
                                    double delta_floor = 1e-4);

// ---------------------------------------------------------------------------
// F. & M. Riesz demonstration
// ---------------------------------------------------------------------------

/// Analytic samplers for the Riesz chain, by id: const(c), one-over-one-minus-z.
struct AnalyticSampler {
    std::string id;
    std::vector<double> params;
    ExtReal boundary_abs(double theta) const;      // |f(e^{it})|
    double interior_abs(double r, double theta) const;  // |f(z)|
};

/// Harmonic majorant of |f| built as the Poisson integral of the node-clamped
/// boundary modulus (clamp at the largest finite sample).
GridFunction make_riesz_majorant(const AnalyticSampler& f, const GridPtr& grid);

struct RieszResult {
    GridFunction f_abs;             // |f| on the grid
    GridFunction h;                 // the supplied majorant
    GridFunction h_prime;           // least harmonic majorant of max(log|f|, 0)
    GridFunction h_dprime;          // limit of the smallest majorants of e^{h'_n}
    std::vector<double> ladder_levels;
    std::vector<GridFunction> hpp_rungs;
    bool chain_ok = false;          // max(log|f|,0) <= h' <= log(h+1) node-wise
    QuasiboundCertificate cert;     // certificate for |f| with v = h
    QuasiboundReport cert_report;
};

RieszResult riesz_demo(const AnalyticSampler& f, const GridFunction& h, const GridPtr& grid);

/// Complex data via the 4-way split phi = phi1 - phi2 + i(phi3 - phi4):
/// each nonnegative part is laddered separately; returns (Re, Im) solutions.
std::pair<PoissonResult, PoissonResult> poisson_solve_complex(const BoundaryTrace& re,
                                                              const BoundaryTrace& im,
                                                              const GridPtr& grid);

/// Abel-type radial boundary limit of an analytic extension along the ray at
/// `theta` (averaged over radii approaching 1).
double radial_boundary_limit(const HarmonicExtension& ext, double theta,
                             double probe_eps = 1e-9);

}  // namespace pplab
