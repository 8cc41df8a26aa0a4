#include "debtrun/intensity.hpp"

#include "debtrun/errors.hpp"

#include <algorithm>
#include <cmath>

namespace debtrun {

IntensitySpec IntensitySpec::constant(double rate) {
    if (!(rate >= 0.0) || !std::isfinite(rate)) throw DomainError("intensity must be finite and >= 0");
    return IntensitySpec({}, {rate});
}

IntensitySpec IntensitySpec::tabulated(std::vector<double> knots, std::vector<double> rates) {
    if (knots.size() != rates.size() || knots.size() < 2) {
        throw DomainError("tabulated intensity needs >= 2 knots with matching rates");
    }
    for (std::size_t i = 0; i < knots.size(); ++i) {
        if (!(knots[i] > 0.0) || !std::isfinite(knots[i])) throw DomainError("intensity knots must be positive");
        if (i > 0 && !(knots[i] > knots[i - 1])) throw DomainError("intensity knots must be strictly increasing");
        if (!(rates[i] >= 0.0) || !std::isfinite(rates[i])) throw DomainError("intensity rates must be finite and >= 0");
    }
    return IntensitySpec(std::move(knots), std::move(rates));
}

double IntensitySpec::operator()(double x) const {
    if (knots_.empty()) return rates_.front();
    if (x <= knots_.front()) return rates_.front();
    if (x >= knots_.back()) return rates_.back();
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - knots_.begin());
    const double w = (x - knots_[i - 1]) / (knots_[i] - knots_[i - 1]);
    return (1.0 - w) * rates_[i - 1] + w * rates_[i];
}

double IntensitySpec::max_rate() const noexcept {
    return *std::max_element(rates_.begin(), rates_.end());
}

}  // namespace debtrun
