#include "debtrun/crossing.hpp"

#include <algorithm>

namespace debtrun {

UnitCrossing find_unit_crossing(std::span<const double> u, double dy) {
    UnitCrossing out;
    if (u.size() < 2) return out;
    if (std::all_of(u.begin() + 1, u.end(), [](double v) { return v >= 1.0; })) {
        out.status = CrossingStatus::at_boundary;
        out.y = 0.0;
        out.segment = 0;
        out.crossings = u.front() < 1.0 ? 1 : 0;
        return out;
    }
    for (std::size_t j = 0; j + 1 < u.size(); ++j) {
        if (u[j] < 1.0 && u[j + 1] >= 1.0) {
            ++out.crossings;
            out.segment = static_cast<int>(j);
        }
    }
    if (out.crossings == 0) return out;

    const auto j = static_cast<std::size_t>(out.segment);
    const double u0 = u[j];
    const double u1 = u[j + 1];
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        ((1.0 - mid) * u0 + mid * u1 < 1.0 ? lo : hi) = mid;
    }
    out.status = CrossingStatus::found;
    out.y = (static_cast<double>(j) + 0.5 * (lo + hi)) * dy;
    return out;
}

}  // namespace debtrun
