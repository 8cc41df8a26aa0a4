#include "debtrun/beliefs.hpp"

#include "debtrun/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace debtrun {

double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double normal_pdf(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

BeliefSpec BeliefSpec::uniform() {
    return BeliefSpec(BeliefKind::uniform, 0.5, 1.0 / 12.0);
}

BeliefSpec BeliefSpec::truncated_normal(double mean, double variance) {
    if (!std::isfinite(mean) || !(variance > 0.0) || !std::isfinite(variance)) {
        throw DomainError("truncated normal belief needs finite mean and variance > 0");
    }
    return BeliefSpec(BeliefKind::truncated_normal, mean, variance);
}

double BeliefSpec::cdf(double z) const {
    z = std::clamp(z, 0.0, 1.0);
    if (kind_ == BeliefKind::uniform) return z;
    const double sd = std::sqrt(variance_);
    const double lo = normal_cdf(-mean_ / sd);
    const double hi = normal_cdf((1.0 - mean_) / sd);
    if (z >= 1.0) return 1.0;
    return (normal_cdf((z - mean_) / sd) - lo) / (hi - lo);
}

double BeliefSpec::density(double z) const {
    if (z < 0.0 || z > 1.0) return 0.0;
    if (kind_ == BeliefKind::uniform) return 1.0;
    const double sd = std::sqrt(variance_);
    const double mass = normal_cdf((1.0 - mean_) / sd) - normal_cdf(-mean_ / sd);
    return normal_pdf((z - mean_) / sd) / (sd * mass);
}

Moments BeliefSpec::truncated_moments() const {
    if (kind_ == BeliefKind::uniform) return {0.5, 1.0 / 12.0};
    const double sd = std::sqrt(variance_);
    const double a = -mean_ / sd;
    const double b = (1.0 - mean_) / sd;
    const double mass = normal_cdf(b) - normal_cdf(a);
    const double pa = normal_pdf(a);
    const double pb = normal_pdf(b);
    const double shift = (pa - pb) / mass;
    const double mean = mean_ + sd * shift;
    const double var = variance_ * (1.0 + (a * pa - b * pb) / mass - shift * shift);
    return {mean, var};
}

double theta(const ModelParams& p, const BeliefSpec& beliefs, double x) {
    if (!(x > 0.0)) throw DomainError("theta: ratio must be > 0");
    return beliefs.cdf(std::min(1.0, p.psi * x));
}

double untruncated_variance_for(double mean, double target) {
    if (!(target > 0.0 && target < 1.0 / 12.0)) {
        throw DomainError("target truncated variance must lie in (0, 1/12)");
    }
    auto truncated_var = [mean](double log_var) {
        return BeliefSpec::truncated_normal(mean, std::exp(log_var)).truncated_moments().variance;
    };
    // Past variance 1e4 the closed-form moments lose digits to cancellation,
    // and the truncated variance is already within 1e-6 of 1/12 there.
    double lo = std::log(1e-8);
    double hi = std::log(1e4);
    if (truncated_var(hi) < target) throw DomainError("target truncated variance not reachable");
    for (int i = 0; i < 200 && hi - lo > 1e-14; ++i) {
        const double mid = 0.5 * (lo + hi);
        (truncated_var(mid) < target ? lo : hi) = mid;
    }
    return std::exp(0.5 * (lo + hi));
}

}  // namespace debtrun
