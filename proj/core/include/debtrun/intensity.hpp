#pragma once

#include <vector>

namespace debtrun {

/// Cox maturity intensity g(x) as a function of the ratio x = V/S.
///
/// Tabulated intensities interpolate linearly between knots and are clamped
/// at the table ends, so they stay nonnegative and bounded.
class IntensitySpec {
public:
    static IntensitySpec constant(double rate);
    static IntensitySpec tabulated(std::vector<double> knots, std::vector<double> rates);

    double operator()(double x) const;

    bool is_constant() const noexcept { return knots_.empty(); }
    double max_rate() const noexcept;
    const std::vector<double>& knots() const noexcept { return knots_; }
    const std::vector<double>& rates() const noexcept { return rates_; }

private:
    IntensitySpec(std::vector<double> knots, std::vector<double> rates)
        : knots_(std::move(knots)), rates_(std::move(rates)) {}

    std::vector<double> knots_;
    std::vector<double> rates_;  // a single entry when constant
};

}  // namespace debtrun
