#pragma once

#include <vector>

#include "pplab/grid.hpp"

namespace pplab {

/// Extended-real-valued field over the nodes of one grid. Carries the grid
/// identity; mixing fields from different grids is an error.
class GridFunction {
  public:
    GridFunction() = default;
    explicit GridFunction(GridPtr grid, ExtReal fill = ExtReal(0.0))
        : grid_(std::move(grid)), v_(grid_->n_nodes, fill) {}

    const GridPtr& grid() const { return grid_; }
    int size() const { return static_cast<int>(v_.size()); }

    ExtReal& operator[](int i) { return v_[i]; }
    const ExtReal& operator[](int i) const { return v_[i]; }

    bool same_grid(const GridFunction& o) const { return grid_ == o.grid_; }

    bool all_finite() const {
        for (const auto& e : v_)
            if (!e.finite()) return false;
        return true;
    }

    double sup_abs_interior() const {
        double m = 0.0;
        for (int id : grid_->interior) m = std::max(m, std::abs(v_[id].value()));
        return m;
    }

    /// sup |this - o| over interior nodes (both finite there).
    double sup_diff_interior(const GridFunction& o) const {
        if (!same_grid(o)) throw PreconditionError("GridFunction: grid mismatch");
        double m = 0.0;
        for (int id : grid_->interior)
            m = std::max(m, std::abs(v_[id].value() - o.v_[id].value()));
        return m;
    }

    std::vector<ExtReal>& data() { return v_; }
    const std::vector<ExtReal>& data() const { return v_; }

  private:
    GridPtr grid_;
    std::vector<ExtReal> v_;
};

/// Boundary data phi with its marked singular set E_phi.
/// Indexing follows the grid's boundary trace order.
struct BoundaryTrace {
    std::vector<ExtReal> values;
    std::vector<uint8_t> singular;        // E_phi mask
    std::vector<uint8_t> cont_exception;  // continuity-exception mask
    std::vector<uint8_t> neumann;         // toric faces treated as asymptotic cuts

    explicit BoundaryTrace(int n = 0)
        : values(n, ExtReal(0.0)), singular(n, 0), cont_exception(n, 0), neumann(n, 0) {}

    int size() const { return static_cast<int>(values.size()); }

    /// Invariants: +-inf nodes lie inside E_phi; off E_phi values are finite.
    void validate() const {
        for (int i = 0; i < size(); ++i) {
            if (!values[i].finite() && !singular[i])
                throw InvariantError("BoundaryTrace: infinite value outside E_phi mask");
        }
    }

    bool any_singular_value() const {
        for (const auto& v : values)
            if (!v.finite()) return true;
        return false;
    }

    double max_finite_abs() const {
        double m = 0.0;
        for (const auto& v : values)
            if (v.finite()) m = std::max(m, std::abs(v.value()));
        return m;
    }
};

/// Bilinear interpolation in grid coordinates (polar tensor for the disk and
/// annulus, Cartesian for the toric window). Exact on functions affine in
/// grid coordinates; a stencil containing an infinity flag propagates it.
/// Throws PreconditionError outside the grid hull.
ExtReal interpolate(const GridFunction& f, double px, double py);

}  // namespace pplab
