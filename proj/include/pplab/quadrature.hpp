#pragma once

#include "pplab/field.hpp"

namespace pplab {

/// Integral of boundary data over the boundary (arc length measure).
/// Periodic trapezoid on each circle (disk/annulus); singular nodes are
/// excluded and their cells' measure is recovered from the one-sided local
/// log model fitted to the truncated data. Throws "degenerate trace" when
/// every node is singular.
double boundary_quadrature(const BoundaryTrace& trace, const GridPtr& grid);

}  // namespace pplab
