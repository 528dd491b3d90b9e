#include "pplab/disk_harmonic.hpp"

#include <algorithm>
#include <cmath>

namespace pplab {

namespace {

struct NodePolar {
    double r, theta;
};

std::vector<NodePolar> interior_polar(const Grid2D& g) {
    std::vector<NodePolar> p(g.interior.size());
    for (size_t k = 0; k < g.interior.size(); ++k) {
        const int id = g.interior[k];
        p[k] = {std::hypot(g.xs[id], g.ys[id]), std::atan2(g.ys[id], g.xs[id])};
    }
    return p;
}

/// Kernel trapezoid against a sparse sample diff (only nonzero entries).
double kernel_trapezoid_sparse(const std::vector<std::pair<int, double>>& diff, int n_samples,
                               double r, double theta) {
    double s = 0.0;
    const double dt = kTwoPi / n_samples;
    for (const auto& [j, d] : diff) {
        const double x = theta - j * dt;
        s += d * (1.0 - r * r) / (1.0 - 2.0 * r * std::cos(x) + r * r);
    }
    return s / n_samples;
}

double clamp_level(double t_level, const LogModel& m) {
    const double shift = m.a > 0 ? m.b : -m.b;
    return std::max(0.0, (t_level + shift) / std::abs(m.a));
}

/// One sign-part ladder over a residual/models split.
struct PartLadder {
    std::vector<std::vector<double>> rung_values;  // per level, per interior node
    std::vector<double> tail;                      // limit - last rung, per node
    double total_change = 0.0;
};

PartLadder part_ladder(const std::vector<double>& residual, const std::vector<LogModel>& models,
                       const std::vector<NodePolar>& pol, const std::vector<double>& levels,
                       bool positive_part) {
    const int n_int = static_cast<int>(pol.size());
    const int n_levels = static_cast<int>(levels.size());
    const int nb = static_cast<int>(residual.size());
    PartLadder out;
    out.rung_values.assign(n_levels, std::vector<double>(n_int, 0.0));
    out.tail.assign(n_int, 0.0);

    auto clamp_part = [&](double v, double k) {
        return positive_part ? std::min(v, k) : std::max(v, -k);
    };

    // Base rung: spectral extension of the clamped residual plus the model
    // extensions at their first clamp level.
    std::vector<double> base(nb);
    for (int j = 0; j < nb; ++j) base[j] = clamp_part(residual[j], levels[0]);
    FourierData fd = fourier_of_samples(base);
    for (int i = 0; i < n_int; ++i) out.rung_values[0][i] = fd.eval(pol[i].r, pol[i].theta);
    for (const auto& m : models) {
        const double t0 = clamp_level(levels[0], m);
        for (int i = 0; i < n_int; ++i) {
            const double d2 =
                1.0 - 2.0 * pol[i].r * std::cos(pol[i].theta - m.theta_c) + pol[i].r * pol[i].r;
            out.rung_values[0][i] += m.a * (0.5 * std::log(d2) +
                                            clamp_correction(t0, m.theta_c, pol[i].r, pol[i].theta));
        }
    }

    // Increments: positive-weight kernel quadrature of the one-signed clamp
    // diffs plus one-signed model correction diffs. Monotonicity is structural.
    std::vector<double> prev = base;
    for (int l = 1; l < n_levels; ++l) {
        std::vector<std::pair<int, double>> diff;
        for (int j = 0; j < nb; ++j) {
            const double nv = clamp_part(residual[j], levels[l]);
            if (nv != prev[j]) diff.emplace_back(j, nv - prev[j]);
            prev[j] = nv;
        }
        for (int i = 0; i < n_int; ++i) {
            const double inc =
                diff.empty() ? 0.0 : kernel_trapezoid_sparse(diff, nb, pol[i].r, pol[i].theta);
            out.rung_values[l][i] = out.rung_values[l - 1][i] + inc;
        }
        for (const auto& m : models) {
            const double ta = clamp_level(levels[l - 1], m);
            const double tb = clamp_level(levels[l], m);
            if (ta == tb) continue;
            for (int i = 0; i < n_int; ++i) {
                const double ea = clamp_correction(ta, m.theta_c, pol[i].r, pol[i].theta);
                const double eb = clamp_correction(tb, m.theta_c, pol[i].r, pol[i].theta);
                out.rung_values[l][i] += m.a * (eb - ea);
            }
        }
    }

    // Tail to the limit: release the last residual clamp and the corrections.
    std::vector<std::pair<int, double>> tail_diff;
    for (int j = 0; j < nb; ++j)
        if (residual[j] != prev[j]) tail_diff.emplace_back(j, residual[j] - prev[j]);
    for (int i = 0; i < n_int; ++i)
        out.tail[i] = tail_diff.empty()
                          ? 0.0
                          : kernel_trapezoid_sparse(tail_diff, nb, pol[i].r, pol[i].theta);
    for (const auto& m : models) {
        const double tl = clamp_level(levels.back(), m);
        if (tl == 0.0 && m.a != 0.0) { /* fully clamped model; tail below */ }
        for (int i = 0; i < n_int; ++i)
            out.tail[i] -= m.a * clamp_correction(tl, m.theta_c, pol[i].r, pol[i].theta);
    }
    for (int i = 0; i < n_int; ++i)
        out.total_change = std::max(
            out.total_change, std::abs(out.rung_values[n_levels - 1][i] - out.rung_values[0][i]));
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Truncation ladder
// ---------------------------------------------------------------------------

TruncationLadder truncation_ladder(const BoundaryTrace& phi, const GridPtr& grid,
                                   const std::vector<double>& levels,
                                   std::pair<double, double> base_point) {
    if (grid->kind != DomainKind::UnitDisk)
        throw PreconditionError("truncation_ladder: unit disk grid required");
    if (levels.empty()) throw PreconditionError("truncation_ladder: no levels");
    for (size_t l = 1; l < levels.size(); ++l)
        if (!(levels[l] > levels[l - 1]))
            throw PreconditionError("truncation_ladder: levels must be strictly increasing");
    if (phi.size() != grid->n_boundary_nodes())
        throw PreconditionError("truncation_ladder: trace size does not match grid");

    const int nb = phi.size();
    // Positive and negative parts, laddered separately; each part keeps its
    // own flags and is split against its own log models.
    BoundaryTrace pos(nb), neg(nb);
    for (int j = 0; j < nb; ++j) {
        const ExtReal& v = phi.values[j];
        if (v.finite()) {
            pos.values[j] = ExtReal(std::max(v.value(), 0.0));
            neg.values[j] = ExtReal(std::min(v.value(), 0.0));
        } else if (v.is_pos_inf()) {
            pos.values[j] = ExtReal::pos_inf();
            pos.singular[j] = 1;
        } else {
            neg.values[j] = ExtReal::neg_inf();
            neg.singular[j] = 1;
        }
    }

    auto split_part = [&](const BoundaryTrace& part) -> SingularSplit {
        if (part.any_singular_value()) return split_singular_trace(part, grid);
        SingularSplit s;
        s.residual.resize(nb);
        for (int j = 0; j < nb; ++j) s.residual[j] = part.values[j].value();
        return s;
    };
    SingularSplit sp = split_part(pos), sn = split_part(neg);

    const auto pol = interior_polar(*grid);
    PartLadder lp = part_ladder(sp.residual, sp.models, pol, levels, true);
    PartLadder ln = part_ladder(sn.residual, sn.models, pol, levels, false);

    TruncationLadder out;
    out.levels = levels;
    out.base_point = base_point;
    out.direction = ln.total_change > lp.total_change ? LadderDirection::Decreasing
                                                      : LadderDirection::Increasing;
    out.mixed = std::min(lp.total_change, ln.total_change) > 1e-12;

    const int n_levels = static_cast<int>(levels.size());
    out.rungs.reserve(n_levels);
    for (int l = 0; l < n_levels; ++l) {
        GridFunction f(grid);
        for (size_t i = 0; i < grid->interior.size(); ++i)
            f[grid->interior[i]] = ExtReal(lp.rung_values[l][i] + ln.rung_values[l][i]);
        for (int j = 0; j < nb; ++j)
            f[grid->boundary[j]] = clamp(phi.values[j], -levels[l], levels[l]);
        out.rungs.push_back(std::move(f));
    }
    out.limit_field = GridFunction(grid);
    for (size_t i = 0; i < grid->interior.size(); ++i)
        out.limit_field[grid->interior[i]] =
            ExtReal(lp.rung_values[n_levels - 1][i] + lp.tail[i] +
                    ln.rung_values[n_levels - 1][i] + ln.tail[i]);
    for (int j = 0; j < nb; ++j) out.limit_field[grid->boundary[j]] = phi.values[j];

    out.sup_residual.assign(n_levels, 0.0);
    for (int l = 1; l < n_levels; ++l)
        out.sup_residual[l] = out.rungs[l].sup_diff_interior(out.rungs[l - 1]);
    out.base_gap.assign(n_levels, 0.0);
    const double lim_b = interpolate(out.limit_field, base_point.first, base_point.second).value();
    for (int l = 0; l < n_levels; ++l)
        out.base_gap[l] = std::abs(
            interpolate(out.rungs[l], base_point.first, base_point.second).value() - lim_b);
    return out;
}

// ---------------------------------------------------------------------------
// Quasibound certificates
// ---------------------------------------------------------------------------

QuasiboundCertificate build_majorant(const GridFunction& u, const TruncationLadder& ladder,
                                     std::pair<double, double> base,
                                     const std::vector<double>& eps_schedule, double series_tol,
                                     int max_terms) {
    const GridPtr grid = u.grid();
    if (ladder.rungs.empty() || ladder.rungs[0].grid() != grid)
        throw PreconditionError("build_majorant: ladder does not reference u's grid");
    const bool decreasing = ladder.direction == LadderDirection::Decreasing;

    // u must lie on the closed side of every rung (monotone ladder toward u).
    double worst = 0.0;
    for (const auto& rung : ladder.rungs)
        for (int id : grid->interior) {
            const double term = decreasing ? rung[id].value() - u[id].value()
                                           : u[id].value() - rung[id].value();
            worst = std::min(worst, term);
        }
    const double scale = std::max(1.0, u.sup_abs_interior());
    if (worst < -1e-8 * scale)
        throw PreconditionError("build_majorant: ladder is not monotone toward u");

    const double u_base = interpolate(u, base.first, base.second).value();
    QuasiboundCertificate cert;
    cert.certified_id = "field";
    std::vector<int> selected;
    for (size_t l = 0; l < ladder.rungs.size(); ++l) {
        const double gap =
            std::abs(u_base - interpolate(ladder.rungs[l], base.first, base.second).value());
        if (gap > std::pow(2.0, -ladder.levels[l])) continue;  // subsequence selection
        if (gap < series_tol) break;
        selected.push_back(static_cast<int>(l));
        if (static_cast<int>(selected.size()) >= max_terms) break;
    }

    GridFunction v(grid, ExtReal(0.0));
    double max_term = 0.0;
    for (int l : selected) {
        const GridFunction& rung = ladder.rungs[l];
        for (int id : grid->interior) {
            const double term =
                std::max(0.0, decreasing ? rung[id].value() - u[id].value()
                                         : u[id].value() - rung[id].value());
            max_term = std::max(max_term, term);
            v[id] = ExtReal(v[id].value() + term);
        }
        for (int k = 0; k < grid->n_boundary_nodes(); ++k) {
            const int id = grid->boundary[k];
            const ExtReal term = decreasing ? rung[id] - u[id] : u[id] - rung[id];
            if (!term.finite())
                v[id] = ExtReal::pos_inf();
            else if (v[id].finite())
                v[id] = ExtReal(v[id].value() + std::max(0.0, term.value()));
        }
        cert.gauge_breakpoints.push_back(rung.sup_abs_interior());
        cert.selected_rungs.push_back(l);
    }
    std::sort(cert.gauge_breakpoints.begin(), cert.gauge_breakpoints.end());

    if (selected.empty() || max_term <= series_tol) {
        // Bounded case: v = 0 is permitted; the certificate carries M0 = sup|u|.
        cert.bounded_case = true;
        cert.bound_M0 = u.sup_abs_interior();
        cert.v = GridFunction(grid, ExtReal(0.0));
        cert.eps_table.clear();
        for (double eps : eps_schedule) cert.eps_table.emplace_back(eps, cert.bound_M0);
        return cert;
    }

    cert.v = std::move(v);
    for (double eps : eps_schedule) {
        double M = 0.0;
        for (int id : grid->interior)
            M = std::max(M, std::abs(u[id].value()) - eps * cert.v[id].value());
        cert.eps_table.emplace_back(eps, M);
    }
    return cert;
}

QuasiboundReport check_quasibounded(const GridFunction& u, const QuasiboundCertificate& cert,
                                    int n_thresholds) {
    const GridPtr grid = u.grid();
    if (cert.v.grid() && cert.v.grid() != grid)
        throw PreconditionError("check_quasibounded: certificate references another grid");
    QuasiboundReport rep;

    const double slack = 1e-12 * std::max(1.0, u.sup_abs_interior());
    for (const auto& [eps, M] : cert.eps_table) {
        for (int id : grid->interior) {
            const double bound = cert.bounded_case ? M : eps * cert.v[id].value() + M;
            if (std::abs(u[id].value()) > bound + slack) rep.violating_nodes.push_back(id);
        }
    }
    rep.pass = rep.violating_nodes.empty();

    double u_max = 0.0;
    for (int id : grid->interior) u_max = std::max(u_max, std::abs(u[id].value()));
    for (int t = 0; t < n_thresholds; ++t) {
        const double T = u_max * (t + 1.0) / n_thresholds;
        double R = std::numeric_limits<double>::infinity();
        bool any = false;
        for (int id : grid->interior) {
            const double au = std::abs(u[id].value());
            if (au < T || au == 0.0) continue;
            any = true;
            const double vv = cert.bounded_case ? cert.bound_M0 : cert.v[id].value();
            R = std::min(R, vv / au);
        }
        if (any) rep.ratio_curve.emplace_back(T, R);
    }
    rep.ratio_nondecreasing = true;
    for (size_t t = 1; t < rep.ratio_curve.size(); ++t)
        if (rep.ratio_curve[t].second < rep.ratio_curve[t - 1].second - 1e-12)
            rep.ratio_nondecreasing = false;
    rep.pass = rep.pass && rep.ratio_nondecreasing;
    if (!rep.ratio_curve.empty()) rep.deepest_ratio = rep.ratio_curve.back().second;
    return rep;
}

// ---------------------------------------------------------------------------
// Harmonic measure, witness
// ---------------------------------------------------------------------------

std::vector<ArcSpec> mask_to_arcs(const std::vector<uint8_t>& mask, const GridPtr& grid) {
    const int n = grid->n_b;
    if (static_cast<int>(mask.size()) != grid->n_boundary_nodes())
        throw PreconditionError("mask size does not match boundary");
    const double h = kTwoPi / n;
    std::vector<ArcSpec> arcs;
    int total = 0;
    for (int k = 0; k < n; ++k) total += mask[k] ? 1 : 0;
    if (total == 0) return arcs;
    if (total == n) {
        arcs.push_back({-h / 2.0, -h / 2.0 + kTwoPi});
        return arcs;
    }
    std::vector<uint8_t> seen(n, 0);
    for (int k = 0; k < n; ++k) {
        if (!mask[k] || seen[k]) continue;
        int s = k;
        while (mask[(s - 1 + n) % n] && (s - 1 + n) % n != k) s = (s - 1 + n) % n;
        int len = 0;
        for (int j = s; mask[j % n] && len < n; j = (j + 1) % n, ++len) seen[j % n] = 1;
        arcs.push_back({s * h - h / 2.0, s * h - h / 2.0 + len * h});
    }
    return arcs;
}

double harmonic_measure(const std::vector<uint8_t>& mask, const GridPtr& grid, double px,
                        double py) {
    const double r = std::hypot(px, py);
    const double phi = std::atan2(py, px);
    if (grid->kind == DomainKind::UnitDisk) {
        double s = 0.0;
        for (const auto& arc : mask_to_arcs(mask, grid))
            s += harmonic_measure_arc(r, phi, arc.theta0, arc.theta1);
        return s;
    }
    if (grid->kind == DomainKind::Annulus) {
        // Supported for whole circles only (log solution).
        bool outer_all = true, inner_all = true, outer_any = false, inner_any = false;
        for (int k = 0; k < grid->n_boundary_nodes(); ++k) {
            const bool m = mask[k] != 0;
            if (grid->bcircle[k] == 0) {
                outer_all &= m;
                outer_any |= m;
            } else {
                inner_all &= m;
                inner_any |= m;
            }
        }
        if ((outer_any && !outer_all) || (inner_any && !inner_all))
            throw PreconditionError("annulus harmonic measure supports whole circles only");
        double s = 0.0;
        const double t = std::log(r) / std::log(grid->r_in);
        if (outer_any) s += 1.0 - t;
        if (inner_any) s += t;
        return s;
    }
    throw PreconditionError("harmonic_measure: disk or annulus grid required");
}

GridFunction harmonic_measure_field(const std::vector<uint8_t>& mask, const GridPtr& grid) {
    GridFunction f(grid);
    for (int id : grid->interior)
        f[id] = ExtReal(harmonic_measure(mask, grid, grid->xs[id], grid->ys[id]));
    for (int k = 0; k < grid->n_boundary_nodes(); ++k)
        f[grid->boundary[k]] = ExtReal(mask[k] ? 1.0 : 0.0);
    return f;
}

double delta_bpolar(const GridPtr& grid, double floor_value) {
    return std::max(2.0 / grid->n_b, floor_value);
}

WitnessResult nonuniqueness_witness(const BoundaryTrace& phi, const GridPtr& grid,
                                    double delta_floor) {
    if (grid->kind != DomainKind::UnitDisk)
        throw PreconditionError("nonuniqueness_witness: unit disk grid required");
    const int nb = phi.size();
    bool any = false;
    for (int j = 0; j < nb; ++j) any |= phi.singular[j] != 0;
    const double omega0 = any ? harmonic_measure(phi.singular, grid, 0.0, 0.0) : 0.0;
    if (omega0 <= delta_bpolar(grid, delta_floor))
        throw PreconditionError("witness requires non-null singular set");

    // The construction only needs the data off E; zeros stand in on E so the
    // base solution is a plain bounded solve.
    BoundaryTrace base(nb);
    for (int j = 0; j < nb; ++j)
        base.values[j] = phi.singular[j] ? ExtReal(0.0) : phi.values[j];
    PoissonResult h = poisson_solve(base, grid);

    WitnessResult out{h.field, GridFunction(grid), harmonic_measure_field(phi.singular, grid),
                      omega0, 0.0};
    for (int id = 0; id < grid->n_nodes; ++id)
        out.second[id] = out.first[id] + out.measure_field[id];

    // Radial boundary limits of the difference off E: the difference is the
    // harmonic measure, evaluated in closed form along rays approaching the
    // boundary (one-node margin around E).
    const double probe = 1e-9;
    for (int j = 0; j < nb; ++j) {
        const int prev = (j - 1 + nb) % nb, next = (j + 1) % nb;
        if (phi.singular[j] || phi.singular[prev] || phi.singular[next]) continue;
        const double theta = kTwoPi * j / nb;
        double acc = 0.0;
        for (int s = 1; s <= 3; ++s)
            acc += harmonic_measure(phi.singular, grid, (1.0 - s * probe) * std::cos(theta),
                                    (1.0 - s * probe) * std::sin(theta));
        out.sup_limit_disagreement = std::max(out.sup_limit_disagreement, std::abs(acc / 3.0));
    }
    return out;
}

// ---------------------------------------------------------------------------
// F. & M. Riesz chain
// ---------------------------------------------------------------------------

ExtReal AnalyticSampler::boundary_abs(double theta) const {
    if (id == "const") return ExtReal(std::abs(params.at(0)));
    if (id == "one-over-one-minus-z") {
        const double d = 2.0 * std::abs(std::sin(0.5 * theta));
        return d == 0.0 ? ExtReal::pos_inf() : ExtReal(1.0 / d);
    }
    throw PreconditionError("unknown analytic sampler '" + id + "'");
}

double AnalyticSampler::interior_abs(double r, double theta) const {
    if (id == "const") return std::abs(params.at(0));
    if (id == "one-over-one-minus-z") {
        const double d2 = 1.0 - 2.0 * r * std::cos(theta) + r * r;
        return 1.0 / std::sqrt(d2);
    }
    throw PreconditionError("unknown analytic sampler '" + id + "'");
}

GridFunction make_riesz_majorant(const AnalyticSampler& f, const GridPtr& grid) {
    const int nb = grid->n_boundary_nodes();
    double cap = 0.0;
    std::vector<ExtReal> raw(nb);
    for (int j = 0; j < nb; ++j) {
        raw[j] = f.boundary_abs(kTwoPi * j / nb);
        if (raw[j].finite()) cap = std::max(cap, raw[j].value());
    }
    BoundaryTrace t(nb);
    for (int j = 0; j < nb; ++j) t.values[j] = ExtReal(raw[j].capped(cap));
    return poisson_solve(t, grid).field;
}

RieszResult riesz_demo(const AnalyticSampler& f, const GridFunction& h, const GridPtr& grid) {
    if (h.grid() != grid) throw PreconditionError("riesz_demo: majorant grid mismatch");
    RieszResult out;
    out.h = h;

    out.f_abs = GridFunction(grid);
    for (int id : grid->interior) {
        const double r = std::hypot(grid->xs[id], grid->ys[id]);
        const double t = std::atan2(grid->ys[id], grid->xs[id]);
        out.f_abs[id] = ExtReal(f.interior_abs(r, t));
    }
    const int nb = grid->n_boundary_nodes();
    for (int j = 0; j < nb; ++j) out.f_abs[grid->boundary[j]] = f.boundary_abs(kTwoPi * j / nb);

    const double scale = std::max(1.0, h.sup_abs_interior());
    for (int id : grid->interior)
        if (out.f_abs[id].value() > h[id].value() + 1e-9 * scale)
            throw PreconditionError("riesz_demo: |f| exceeds the harmonic majorant");

    // The whole chain lives at the grid's truncation scale: |f| is clamped at
    // its largest finite boundary sample K, matching the majorant build.
    double cap = 1.0;
    for (int j = 0; j < nb; ++j) {
        const ExtReal a = f.boundary_abs(kTwoPi * j / nb);
        if (a.finite()) cap = std::max(cap, a.value());
    }
    auto clamped_abs = [&](int j) { return f.boundary_abs(kTwoPi * j / nb).capped(cap); };

    // h' = least harmonic majorant of max(log|f|, 0) at that scale.
    BoundaryTrace logplus(nb);
    double max_log = 0.0;
    for (int j = 0; j < nb; ++j) {
        logplus.values[j] = ExtReal(std::max(std::log(std::max(clamped_abs(j), 1e-300)), 0.0));
        max_log = std::max(max_log, logplus.values[j].value());
    }
    out.h_prime = poisson_solve(logplus, grid).field;

    // Chain inequalities, node-wise: the clamped h' plus the analytic clamp
    // correction is the least harmonic majorant of max(log|f|, 0), so
    //   max(log|f|, 0) <= h' + corr   and   h' <= log(h + 1).
    std::vector<double> singular_angles;
    for (int j = 0; j < nb; ++j)
        if (!f.boundary_abs(kTwoPi * j / nb).finite()) singular_angles.push_back(kTwoPi * j / nb);
    out.chain_ok = true;
    const double tol = 1e-6 * std::max(1.0, scale);
    for (int id : grid->interior) {
        const double r = std::hypot(grid->xs[id], grid->ys[id]);
        const double th = std::atan2(grid->ys[id], grid->xs[id]);
        double corr = 0.0;
        for (double ts : singular_angles) corr += clamp_correction(max_log, ts, r, th);
        const double lf = std::max(std::log(std::max(out.f_abs[id].value(), 1e-300)), 0.0);
        if (out.h_prime[id].value() + corr < lf - tol) out.chain_ok = false;
        if (out.h_prime[id].value() > std::log(h[id].value() + 1.0) + tol) out.chain_ok = false;
    }

    // h''_n: smallest harmonic majorants of e^{h'_n}, i.e. Poisson integrals
    // of min(max(|f| ^ K, 1), e^n); increasing and bounded by h + 1.
    const int top = std::max(1, static_cast<int>(std::ceil(max_log)));
    for (int n = 1; n <= top; ++n) {
        BoundaryTrace data(nb);
        for (int j = 0; j < nb; ++j)
            data.values[j] = ExtReal(
                std::min(std::max(clamped_abs(j), 1.0), std::exp(static_cast<double>(n))));
        out.hpp_rungs.push_back(poisson_solve(data, grid).field);
        out.ladder_levels.push_back(static_cast<double>(n));
    }
    out.h_dprime = out.hpp_rungs.back();
    for (const auto& rung : out.hpp_rungs)
        for (int id : grid->interior)
            if (rung[id].value() > h[id].value() + 1.0 + tol) out.chain_ok = false;

    // Certificate for |f| with v = h.
    out.cert.v = h;
    out.cert.certified_id = "riesz:" + f.id;
    for (double eps : {1.0, 0.3, 0.1, 0.03, 0.01}) {
        double M = 0.0;
        for (int id : grid->interior)
            M = std::max(M, out.f_abs[id].value() - eps * h[id].value());
        out.cert.eps_table.emplace_back(eps, M);
    }
    for (const auto& rung : out.hpp_rungs)
        out.cert.gauge_breakpoints.push_back(rung.sup_abs_interior());
    std::sort(out.cert.gauge_breakpoints.begin(), out.cert.gauge_breakpoints.end());
    out.cert_report = check_quasibounded(out.f_abs, out.cert);
    return out;
}

std::pair<PoissonResult, PoissonResult> poisson_solve_complex(const BoundaryTrace& re,
                                                              const BoundaryTrace& im,
                                                              const GridPtr& grid) {
    return {poisson_solve(re, grid), poisson_solve(im, grid)};
}

double radial_boundary_limit(const HarmonicExtension& ext, double theta, double probe_eps) {
    double acc = 0.0;
    for (int s = 1; s <= 3; ++s) acc += ext.eval(1.0 - s * probe_eps, theta);
    return acc / 3.0;
}

}  // namespace pplab
