#pragma once

#include <string>
#include <vector>

#include "pplab/field.hpp"

namespace pplab {

/// Built-in closed-form boundary data families, addressed by string id so
/// configs can re-evaluate them exactly. Disk families are functions of the
/// boundary angle; toric families are profiles of (x, y) = (log|z1|, log|z2|).
///
/// Disk ids:   const(c), cos, sin, cos-k(k), trig(a0,a1,b1,...),
///             log-distance        = log|e^{it} - 1|
///             neglog-distance     = -log|e^{it} - 1| + log 2
///             abs-inv-distance    = 1 / |e^{it} - 1|
/// Toric ids:  const(c), affine-x, affine-y, neg-x, quadratic, exp-calibration,
///             neglog-alpha(alpha) = -(-x)^alpha
///             radial-alpha(alpha) = -(1 - e^{2x} - e^{2y})^alpha
struct Expression {
    std::string id;
    std::vector<double> params;
};

bool is_disk_expression(const std::string& id);
bool is_toric_expression(const std::string& id);

/// Evaluate a disk family at boundary angle theta. Singular angles yield flags.
ExtReal eval_disk_expression(const Expression& e, double theta);

/// Evaluate a toric family at log coordinates (x, y).
ExtReal eval_toric_expression(const Expression& e, double x, double y);

/// Boundary arc [theta0, theta1] (radians, counterclockwise, may wrap).
struct ArcSpec {
    double theta0 = 0.0, theta1 = 0.0;
    bool contains(double theta) const {
        const double w = wrap_angle(theta - theta0);
        return w <= wrap_angle(theta1 - theta0) + 1e-12;
    }
    double length() const { return wrap_angle(theta1 - theta0); }
};

/// Singular-set request for trace builders.
struct SingularSetSpec {
    enum class Kind { None, Arc, Nodes, XFace, YFace, Curve } kind = Kind::None;
    ArcSpec arc;                   // Kind::Arc
    std::vector<int> trace_nodes;  // Kind::Nodes (trace indices)
};

/// Sample an expression into a BoundaryTrace; marks E_phi from the explicit
/// spec plus any node where the sampled value is infinite.
BoundaryTrace make_trace(const GridPtr& grid, const Expression& expr,
                         const SingularSetSpec& singular = {});

/// Sample a toric expression at every node of a toric grid.
GridFunction sample_toric(const GridPtr& grid, const Expression& expr);

/// Boundary mask from a singular-set spec (no values).
std::vector<uint8_t> make_boundary_mask(const GridPtr& grid, const SingularSetSpec& spec);

}  // namespace pplab
