#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace debtrun {

/// One simulated trajectory of the ratio X_t = V_t / S_t together with the
/// short-term maturity arrivals seen along it.
struct SimPath {
    std::vector<double> times;                 ///< mesh, including arrival times
    std::vector<double> x_values;              ///< X at each mesh time
    std::vector<double> cumulative_intensity;  ///< integrated intensity at each mesh time
    std::vector<std::uint8_t> crossed;         ///< per mesh interval: insolvency crossed inside it
    std::vector<double> arrivals;              ///< maturity dates in (0, T]
    std::vector<double> arrival_x;             ///< X at each arrival
    std::optional<double> tau_ins;             ///< first insolvency time, if before T

    double horizon() const { return times.empty() ? 0.0 : times.back(); }
};

}  // namespace debtrun
