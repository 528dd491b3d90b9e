#include "pplab/expressions.hpp"

#include <cmath>

namespace pplab {

namespace {

double param(const Expression& e, size_t i, const char* what) {
    if (i >= e.params.size())
        throw PreconditionError(std::string("expression '") + e.id + "' needs parameter " + what);
    return e.params[i];
}

}  // namespace

bool is_disk_expression(const std::string& id) {
    return id == "const" || id == "cos" || id == "sin" || id == "cos-k" || id == "trig" ||
           id == "log-distance" || id == "neglog-distance" || id == "abs-inv-distance";
}

bool is_toric_expression(const std::string& id) {
    return id == "const" || id == "affine-x" || id == "affine-y" || id == "neg-x" ||
           id == "quadratic" || id == "exp-calibration" || id == "neglog-alpha" ||
           id == "radial-alpha";
}

ExtReal eval_disk_expression(const Expression& e, double theta) {
    if (e.id == "const") return ExtReal(param(e, 0, "c"));
    if (e.id == "cos") return ExtReal(std::cos(theta));
    if (e.id == "sin") return ExtReal(std::sin(theta));
    if (e.id == "cos-k") return ExtReal(std::cos(param(e, 0, "k") * theta));
    if (e.id == "trig") {
        // a0 + sum_k (a_k cos k t + b_k sin k t), params = a0, a1, b1, a2, b2, ...
        double s = param(e, 0, "a0");
        for (size_t k = 1; 2 * k < e.params.size() + 1 && 2 * k - 1 < e.params.size(); ++k) {
            s += e.params[2 * k - 1] * std::cos(k * theta);
            if (2 * k < e.params.size()) s += e.params[2 * k] * std::sin(k * theta);
        }
        return ExtReal(s);
    }
    const double d = 2.0 * std::abs(std::sin(0.5 * theta));  // |e^{it} - 1|
    if (e.id == "log-distance") return d == 0.0 ? ExtReal::neg_inf() : ExtReal(std::log(d));
    if (e.id == "neglog-distance")
        return d == 0.0 ? ExtReal::pos_inf() : ExtReal(-std::log(d) + std::log(2.0));
    if (e.id == "abs-inv-distance") return d == 0.0 ? ExtReal::pos_inf() : ExtReal(1.0 / d);
    throw PreconditionError("unknown disk expression id '" + e.id + "'");
}

ExtReal eval_toric_expression(const Expression& e, double x, double y) {
    if (e.id == "const") return ExtReal(param(e, 0, "c"));
    if (e.id == "affine-x") return ExtReal(x);
    if (e.id == "affine-y") return ExtReal(y);
    if (e.id == "neg-x") return ExtReal(-x);
    if (e.id == "quadratic") return ExtReal(0.5 * (x * x + y * y));
    if (e.id == "exp-calibration") return ExtReal(std::exp(2.0 * x) + std::exp(2.0 * y));
    if (e.id == "neglog-alpha") {
        const double a = param(e, 0, "alpha");
        if (x > 0.0) throw PreconditionError("neglog-alpha: x must be <= 0");
        return ExtReal(-std::pow(-x, a));
    }
    if (e.id == "radial-alpha") {
        const double a = param(e, 0, "alpha");
        const double s = 1.0 - std::exp(2.0 * x) - std::exp(2.0 * y);
        if (s <= 0.0) return ExtReal(0.0);
        return ExtReal(-std::pow(s, a));
    }
    throw PreconditionError("unknown toric expression id '" + e.id + "'");
}

std::vector<uint8_t> make_boundary_mask(const GridPtr& grid, const SingularSetSpec& spec) {
    const int n = grid->n_boundary_nodes();
    std::vector<uint8_t> mask(n, 0);
    switch (spec.kind) {
        case SingularSetSpec::Kind::None:
            break;
        case SingularSetSpec::Kind::Arc:
            for (int k = 0; k < n; ++k) {
                const int id = grid->boundary[k];
                const double theta = wrap_angle(std::atan2(grid->ys[id], grid->xs[id]));
                if (spec.arc.contains(theta)) mask[k] = 1;
            }
            break;
        case SingularSetSpec::Kind::Nodes:
            for (int t : spec.trace_nodes)
                if (t >= 0 && t < n) mask[t] = 1;
            break;
        case SingularSetSpec::Kind::XFace:
            for (int k = 0; k < n; ++k)
                if (grid->bface.size() > static_cast<size_t>(k) &&
                    (grid->bface[k] == 1 || grid->bface[k] == 3))
                    mask[k] = 1;
            break;
        case SingularSetSpec::Kind::YFace:
            for (int k = 0; k < n; ++k)
                if (grid->bface.size() > static_cast<size_t>(k) &&
                    (grid->bface[k] == 2 || grid->bface[k] == 3))
                    mask[k] = 1;
            break;
        case SingularSetSpec::Kind::Curve:
            for (int k = 0; k < n; ++k)
                if (grid->bface.size() > static_cast<size_t>(k) && grid->bface[k] == 0) mask[k] = 1;
            break;
    }
    return mask;
}

BoundaryTrace make_trace(const GridPtr& grid, const Expression& expr,
                         const SingularSetSpec& singular) {
    const int n = grid->n_boundary_nodes();
    BoundaryTrace trace(n);
    trace.singular = make_boundary_mask(grid, singular);
    const bool toric = grid->kind == DomainKind::ToricBallLog;
    for (int k = 0; k < n; ++k) {
        const int id = grid->boundary[k];
        ExtReal v = toric ? eval_toric_expression(expr, grid->xs[id], grid->ys[id])
                          : eval_disk_expression(
                                expr, wrap_angle(std::atan2(grid->ys[id], grid->xs[id])));
        trace.values[k] = v;
        if (!v.finite()) trace.singular[k] = 1;
    }
    trace.validate();
    return trace;
}

GridFunction sample_toric(const GridPtr& grid, const Expression& expr) {
    if (grid->kind != DomainKind::ToricBallLog)
        throw PreconditionError("sample_toric: toric grid required");
    GridFunction f(grid);
    for (int id = 0; id < grid->n_nodes; ++id) {
        if (grid->cls[id] == NodeClass::Invalid) continue;
        f[id] = eval_toric_expression(expr, grid->xs[id], grid->ys[id]);
    }
    return f;
}

}  // namespace pplab
