#pragma once

#include <optional>
#include <vector>

#include "pplab/expressions.hpp"
#include "pplab/field.hpp"

namespace pplab {

/// Local model of a boundary singularity at angle theta_c, fitted from
/// one-sided finite samples:  data(t) ~ a * log|2 sin((t - theta_c)/2)| + b + c_slope * sin(t - theta_c).
/// Its harmonic extension is a * log|z - e^{i theta_c}| plus smooth terms.
struct LogModel {
    double theta_c = 0.0;
    double a = 0.0, b = 0.0, c_slope = 0.0;
    double fit_rms = 0.0;     // rms misfit of the local least-squares fit
    double sample_scale = 0;  // scale of the samples used by the fit
    std::vector<int> trace_nodes;
};

/// Fit a log model at the singular cluster centered at theta_c, using the
/// nearest `per_side` finite samples on each side.
LogModel fit_log_model(const std::vector<double>& angles, const std::vector<ExtReal>& values,
                       const std::vector<int>& cluster, double theta_c, int per_side = 3);

/// Real trigonometric interpolation data (DFT of N uniform samples).
struct FourierData {
    std::vector<double> a, b;  // cos / sin coefficients, index n
    int n_samples = 0;
    /// Harmonic extension of the band-limited interpolant at (r, theta).
    double eval(double r, double theta) const;
};

FourierData fourier_of_samples(const std::vector<double>& samples);

/// Positive-weight kernel quadrature (periodic trapezoid against the Poisson
/// kernel). Used where one-signed data must yield one-signed output.
double kernel_trapezoid(const std::vector<double>& samples, double r, double theta);

/// Harmonic measure of the boundary arc [alpha, beta] at z = r e^{i phi}
/// (closed form, exact up to rounding).
double harmonic_measure_arc(double r, double phi, double alpha, double beta);

/// Harmonic extension of the clamp correction (-t - log|2 sin(w/2)|)^+
/// centered at theta_c, evaluated at (r, theta). Positive; decreasing in t.
double clamp_correction(double t, double theta_c, double r, double theta);

/// Integral over the cell of the clamp correction data (kernel-free),
/// i.e. (1/2pi) * int (-t - l)^+ dw. Used for far-field evaluation and
/// singular-cell quadrature.
double clamp_correction_mass(double t);

/// A disk (or annulus) harmonic extension split into fitted singular models
/// plus a band-limited smooth remainder. Evaluable anywhere in the domain.
class HarmonicExtension {
  public:
    GridPtr grid;
    std::vector<LogModel> models;
    FourierData smooth;                       // disk: residual data; annulus: outer trace
    std::optional<FourierData> smooth_inner;  // annulus inner trace
    double r_inner = 0.0;

    double eval(double r, double theta) const;
    /// Evaluate at every node: interior nodes by evaluation, boundary nodes
    /// from the supplied trace (keeping its flags).
    GridFunction to_field(const BoundaryTrace& trace) const;
};

/// Result of a Poisson solve: the field plus its analytic evaluator.
struct PoissonResult {
    GridFunction field;
    HarmonicExtension extension;
};

/// Poisson integral of boundary data on the disk or annulus. Data flagged
/// +-inf is split off through fitted log models; the smooth remainder is
/// extended spectrally. Non-log-integrable singular data raises
/// PreconditionError("not quasibounded ...").
PoissonResult poisson_solve(const BoundaryTrace& trace, const GridPtr& grid);

/// Residual-and-models split of a singular trace (shared by the solver and
/// the truncation ladder).
struct SingularSplit {
    std::vector<LogModel> models;
    std::vector<double> residual;  // finite residual samples, model part removed
};
SingularSplit split_singular_trace(const BoundaryTrace& trace, const GridPtr& grid,
                                   double fit_tol = 0.02);

}  // namespace pplab
