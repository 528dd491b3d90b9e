#include "pplab/poisson.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace pplab {

namespace {

double log_profile(double w) {  // l(w) = log|2 sin(w/2)|
    const double s = 2.0 * std::abs(std::sin(0.5 * w));
    return std::log(s);
}

double poisson_kernel(double r, double x) {
    return (1.0 - r * r) / (1.0 - 2.0 * r * std::cos(x) + r * r);
}

// Gauss-Legendre nodes/weights on [-1, 1], 16 points.
constexpr std::array<double, 8> kGx = {0.0950125098376374, 0.2816035507792589,
                                       0.4580167776572274, 0.6178762444026438,
                                       0.7554044083550030, 0.8656312023878318,
                                       0.9445750230732326, 0.9894009349916499};
constexpr std::array<double, 8> kGw = {0.1894506104550685, 0.1826034150449236,
                                       0.1691565193950025, 0.1495959888165767,
                                       0.1246289712555339, 0.0951585116824928,
                                       0.0622535239386479, 0.0271524594117541};

template <typename F>
double gauss16(F&& f, double lo, double hi) {
    const double c = 0.5 * (lo + hi), hw = 0.5 * (hi - lo);
    double s = 0.0;
    for (int q = 0; q < 8; ++q)
        s += kGw[q] * (f(c + hw * kGx[q]) + f(c - hw * kGx[q]));
    return s * hw;
}

// Integrate g over (0, delta] with a log-type singularity at 0, via the
// substitution w = delta * e^{-s} (three panels in s cover the mass down to
// ~1e-19 * delta).
template <typename F>
double graded_integral(F&& g, double delta) {
    auto in_s = [&](double s) {
        const double w = delta * std::exp(-s);
        return g(w) * w;  // Jacobian dw = -w ds
    };
    return gauss16(in_s, 0.0, 6.0) + gauss16(in_s, 6.0, 18.0) + gauss16(in_s, 18.0, 45.0);
}

}  // namespace

// ---------------------------------------------------------------------------
// Fourier / kernel evaluation
// ---------------------------------------------------------------------------

FourierData fourier_of_samples(const std::vector<double>& samples) {
    const int n = static_cast<int>(samples.size());
    const int half = n / 2;
    FourierData fd;
    fd.n_samples = n;
    fd.a.assign(half + 1, 0.0);
    fd.b.assign(half + 1, 0.0);
    const double dt = kTwoPi / n;
    for (int m = 0; m <= half; ++m) {
        double ca = 0.0, cb = 0.0;
        for (int j = 0; j < n; ++j) {
            ca += samples[j] * std::cos(m * j * dt);
            cb += samples[j] * std::sin(m * j * dt);
        }
        const double norm = (m == 0 || (m == half && n % 2 == 0)) ? 1.0 : 2.0;
        fd.a[m] = norm * ca / n;
        fd.b[m] = norm * cb / n;
    }
    return fd;
}

double FourierData::eval(double r, double theta) const {
    const int half = n_samples / 2;
    double s = a[0];
    double cn = std::cos(theta), sn = std::sin(theta);
    const double c1 = cn, s1 = sn;
    double rn = r;
    for (int m = 1; m <= half; ++m) {
        s += rn * (a[m] * cn + b[m] * sn);
        const double cnext = cn * c1 - sn * s1;
        sn = sn * c1 + cn * s1;
        cn = cnext;
        rn *= r;
    }
    return s;
}

double kernel_trapezoid(const std::vector<double>& samples, double r, double theta) {
    const int n = static_cast<int>(samples.size());
    const double dt = kTwoPi / n;
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += poisson_kernel(r, theta - j * dt) * samples[j];
    return s / n;
}

double harmonic_measure_arc(double r, double phi, double alpha, double beta) {
    // d/dt [ t + 2 atan( r sin(t - phi) / (1 - r cos(t - phi)) ) ] = P_r(t - phi)
    auto anti = [&](double t) {
        const double x = t - phi;
        return t + 2.0 * std::atan(r * std::sin(x) / (1.0 - r * std::cos(x)));
    };
    return (anti(beta) - anti(alpha)) / kTwoPi;
}

// ---------------------------------------------------------------------------
// Clamp corrections (harmonic extension of (-t - l)^+)
// ---------------------------------------------------------------------------

double clamp_correction_mass(double t) {
    if (t < 0.0) t = 0.0;
    const double delta = 2.0 * std::asin(0.5 * std::exp(-t));
    auto data = [&](double w) { return -t - log_profile(w); };
    return 2.0 * graded_integral(data, delta) / kTwoPi;  // symmetric in w
}

double clamp_correction(double t, double theta_c, double r, double theta) {
    if (t < 0.0) t = 0.0;
    const double delta = 2.0 * std::asin(0.5 * std::exp(-t));
    const double d = theta - theta_c;
    auto g_plus = [&](double w) { return (-t - log_profile(w)) * poisson_kernel(r, d - w); };
    auto g_minus = [&](double w) { return (-t - log_profile(w)) * poisson_kernel(r, d + w); };
    return (graded_integral(g_plus, delta) + graded_integral(g_minus, delta)) / kTwoPi;
}

// ---------------------------------------------------------------------------
// Singular models
// ---------------------------------------------------------------------------

LogModel fit_log_model(const std::vector<double>& angles, const std::vector<ExtReal>& values,
                       const std::vector<int>& cluster, double theta_c, int per_side) {
    const int n = static_cast<int>(angles.size());
    LogModel m;
    m.theta_c = theta_c;
    m.trace_nodes = cluster;

    // Walk outward from the cluster edges collecting finite samples.
    std::vector<int> picks;
    const int lo = cluster.front(), hi = cluster.back();
    for (int step = 1, got = 0; step <= n && got < per_side; ++step) {
        const int j = ((hi + step) % n + n) % n;
        if (values[j].finite()) { picks.push_back(j); ++got; }
    }
    for (int step = 1, got = 0; step <= n && got < per_side; ++step) {
        const int j = ((lo - step) % n + n) % n;
        if (values[j].finite()) { picks.push_back(j); ++got; }
    }
    if (picks.size() < 3)
        throw PreconditionError("log model fit: not enough finite neighbors");

    // Least squares on basis { l(t - theta_c), 1, sin(t - theta_c) }.
    double A[3][3] = {};
    double rhs[3] = {};
    double scale = 0.0;
    for (int j : picks) {
        double dt = angles[j] - theta_c;
        const double base[3] = {log_profile(dt), 1.0, std::sin(dt)};
        const double y = values[j].value();
        scale = std::max(scale, std::abs(y));
        for (int r = 0; r < 3; ++r) {
            rhs[r] += base[r] * y;
            for (int c = 0; c < 3; ++c) A[r][c] += base[r] * base[c];
        }
    }
    // Cramer solve (3x3, well conditioned at these sample layouts).
    auto det3 = [](const double M[3][3]) {
        return M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) -
               M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
               M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]);
    };
    const double det = det3(A);
    if (std::abs(det) < 1e-30) throw PreconditionError("log model fit: singular system");
    double sol[3];
    for (int k = 0; k < 3; ++k) {
        double M[3][3];
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) M[r][c] = c == k ? rhs[r] : A[r][c];
        sol[k] = det3(M) / det;
    }
    m.a = sol[0];
    m.b = sol[1];
    m.c_slope = sol[2];
    double ss = 0.0;
    for (int j : picks) {
        const double dt = angles[j] - theta_c;
        const double fit = m.a * log_profile(dt) + m.b + m.c_slope * std::sin(dt);
        ss += (values[j].value() - fit) * (values[j].value() - fit);
    }
    m.fit_rms = std::sqrt(ss / picks.size());
    m.sample_scale = std::max(scale, 1.0);
    return m;
}

SingularSplit split_singular_trace(const BoundaryTrace& trace, const GridPtr& grid,
                                   double fit_tol) {
    if (grid->kind != DomainKind::UnitDisk)
        throw PreconditionError("singular boundary data is supported on the unit disk only");
    const int n = trace.size();
    std::vector<double> angles(n);
    for (int k = 0; k < n; ++k) angles[k] = kTwoPi * k / n;

    // Maximal clusters of infinite nodes (circular).
    std::vector<int> owner(n, -1);
    std::vector<std::vector<int>> clusters;
    for (int k = 0; k < n; ++k) {
        if (trace.values[k].finite() || owner[k] >= 0) continue;
        std::vector<int> cl{k};
        owner[k] = static_cast<int>(clusters.size());
        for (int f = (k + 1) % n; f != k && !trace.values[f].finite() && owner[f] < 0;
             f = (f + 1) % n) {
            cl.push_back(f);
            owner[f] = owner[k];
        }
        for (int b = (k - 1 + n) % n; b != k && !trace.values[b].finite() && owner[b] < 0;
             b = (b - 1 + n) % n) {
            cl.insert(cl.begin(), b);
            owner[b] = owner[k];
        }
        if (cl.size() == static_cast<size_t>(n))
            throw PreconditionError("degenerate trace: all boundary nodes singular");
        clusters.push_back(std::move(cl));
    }

    SingularSplit split;
    for (auto& cl : clusters) {
        // Circular mean angle of the cluster.
        double cx = 0.0, cy = 0.0;
        int sign = 0;
        for (int j : cl) {
            cx += std::cos(angles[j]);
            cy += std::sin(angles[j]);
            const int f = trace.values[j].flag();
            if (sign != 0 && f != 0 && f != sign)
                throw PreconditionError("not quasibounded: mixed infinity signs in one cluster");
            if (f != 0) sign = f;
        }
        const double theta_c = wrap_angle(std::atan2(cy, cx));
        LogModel m = fit_log_model(angles, trace.values, cl, theta_c);
        if (m.fit_rms > fit_tol * m.sample_scale)
            throw PreconditionError(
                "not quasibounded: boundary data is not log-integrable at this resolution");
        if ((sign < 0 && m.a <= 0.0) || (sign > 0 && m.a >= 0.0))
            throw PreconditionError("not quasibounded: singular sign inconsistent with local fit");
        split.models.push_back(std::move(m));
    }

    split.residual.resize(n);
    for (int k = 0; k < n; ++k) {
        if (trace.values[k].finite()) {
            double v = trace.values[k].value();
            for (const auto& m : split.models) v -= m.a * log_profile(angles[k] - m.theta_c);
            split.residual[k] = v;
        } else {
            // One-sided limit of the truncated data: the fitted local constant
            // minus the other clusters' log contributions at this node.
            const size_t own = static_cast<size_t>(owner[k]);
            double v = split.models[own].b;
            for (size_t c = 0; c < split.models.size(); ++c) {
                if (c == own) continue;
                v -= split.models[c].a * log_profile(angles[k] - split.models[c].theta_c);
            }
            split.residual[k] = v;
        }
    }
    return split;
}

// ---------------------------------------------------------------------------
// Harmonic extension / Poisson solve
// ---------------------------------------------------------------------------

double HarmonicExtension::eval(double r, double theta) const {
    if (smooth_inner) {
        // Annulus: per-mode radial blend of the two traces,
        //   u_n(r) = outer_n * phi1 + inner_n * phi2
        // with phi1, phi2 the stable basis vanishing on the opposite circle.
        const int half = smooth.n_samples / 2;
        const double ri = r_inner;
        double s = smooth.a[0] + (smooth_inner->a[0] - smooth.a[0]) * std::log(r) / std::log(ri);
        double cn = std::cos(theta), sn = std::sin(theta);
        const double c1 = cn, s1 = sn;
        double rn = r, rin_n = ri, rin_2n = ri * ri, ratio_pow = ri / r;
        const double ratio = ri / r;
        for (int m = 1; m <= half; ++m) {
            const double denom = 1.0 - rin_2n;
            const double phi1 = (rn - rin_2n / rn) / denom;
            const double phi2 = (ratio_pow - rin_n * rn) / denom;
            s += phi1 * (smooth.a[m] * cn + smooth.b[m] * sn);
            s += phi2 * (smooth_inner->a[m] * cn + smooth_inner->b[m] * sn);
            const double cnext = cn * c1 - sn * s1;
            sn = sn * c1 + cn * s1;
            cn = cnext;
            rn *= r;
            rin_n *= ri;
            rin_2n *= ri * ri;
            ratio_pow *= ratio;
        }
        return s;
    }
    double s = smooth.eval(r, theta);
    for (const auto& m : models) {
        const double d2 = 1.0 - 2.0 * r * std::cos(theta - m.theta_c) + r * r;
        s += m.a * 0.5 * std::log(d2);
    }
    return s;
}

GridFunction HarmonicExtension::to_field(const BoundaryTrace& trace) const {
    GridFunction f(grid);
    for (int id : grid->interior) {
        const double r = std::hypot(grid->xs[id], grid->ys[id]);
        const double t = std::atan2(grid->ys[id], grid->xs[id]);
        f[id] = ExtReal(eval(r, t));
    }
    for (int k = 0; k < grid->n_boundary_nodes(); ++k) f[grid->boundary[k]] = trace.values[k];
    return f;
}

PoissonResult poisson_solve(const BoundaryTrace& trace, const GridPtr& grid) {
    if (grid->kind == DomainKind::ToricBallLog)
        throw PreconditionError("poisson_solve: disk or annulus grid required");
    if (trace.size() != grid->n_boundary_nodes())
        throw PreconditionError("poisson_solve: trace size does not match grid");

    HarmonicExtension ext;
    ext.grid = grid;
    if (grid->kind == DomainKind::Annulus) {
        if (trace.any_singular_value())
            throw PreconditionError("poisson_solve: singular data not supported on the annulus");
        std::vector<double> outer(grid->n_b), inner(grid->n_b);
        for (int k = 0; k < grid->n_b; ++k) {
            outer[k] = trace.values[k].value();
            inner[k] = trace.values[grid->n_b + k].value();
        }
        ext.smooth = fourier_of_samples(outer);
        ext.smooth_inner = fourier_of_samples(inner);
        ext.r_inner = grid->r_in;
    } else if (!trace.any_singular_value()) {
        std::vector<double> samples(trace.size());
        for (int k = 0; k < trace.size(); ++k) samples[k] = trace.values[k].value();
        ext.smooth = fourier_of_samples(samples);
    } else {
        SingularSplit split = split_singular_trace(trace, grid);
        ext.models = std::move(split.models);
        ext.smooth = fourier_of_samples(split.residual);
    }
    PoissonResult res{ext.to_field(trace), std::move(ext)};
    return res;
}

}  // namespace pplab
