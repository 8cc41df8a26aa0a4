#pragma once

#include <span>

namespace debtrun {

enum class CrossingStatus {
    found,         ///< u crosses 1 from below inside the grid
    at_boundary,   ///< u >= 1 on every interior node: barrier sits on the insolvency boundary
    always_below,  ///< u < 1 on the whole grid: the creditor always runs
};

struct UnitCrossing {
    CrossingStatus status = CrossingStatus::always_below;
    double y = 0.0;      ///< root of u(y) = 1 on the piecewise-linear interpolant
    int crossings = 0;   ///< number of upward crossings seen on the grid
    int segment = -1;    ///< j such that the root lies in [y_j, y_{j+1}]
};

/// Locates the largest upward crossing of 1 in a slice sampled at y_j = j dy,
/// refining by bisection on the linear interpolant.
UnitCrossing find_unit_crossing(std::span<const double> u, double dy);

}  // namespace debtrun
