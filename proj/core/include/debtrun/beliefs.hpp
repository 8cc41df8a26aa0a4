#pragma once

#include "debtrun/model.hpp"

namespace debtrun {

enum class BeliefKind { uniform, truncated_normal };

struct Moments {
    double mean;
    double variance;
};

/// Distribution of the run proportion xi on [0, 1].
///
/// Truncated normals are parameterized by the mean and variance of the
/// *untruncated* normal; `truncated_moments()` reports the effective moments.
class BeliefSpec {
public:
    static BeliefSpec uniform();
    static BeliefSpec truncated_normal(double mean, double variance);

    BeliefKind kind() const noexcept { return kind_; }
    double mean() const noexcept { return mean_; }
    double variance() const noexcept { return variance_; }

    /// P(xi <= z), with z clamped to [0, 1].
    double cdf(double z) const;
    /// Density of xi; zero outside [0, 1].
    double density(double z) const;

    Moments truncated_moments() const;

    bool operator==(const BeliefSpec&) const = default;

private:
    BeliefSpec(BeliefKind kind, double mean, double variance)
        : kind_(kind), mean_(mean), variance_(variance) {}

    BeliefKind kind_;
    double mean_;
    double variance_;
};

/// Standard normal CDF, accurate to double precision.
double normal_cdf(double z);
double normal_pdf(double z);

/// Survival probability of a run, theta(x) = P(xi <= min{1, psi x}).
double theta(const ModelParams& p, const BeliefSpec& beliefs, double x);

/// Untruncated variance whose [0,1]-truncation (same mean) has variance
/// `target`. Requires 0 < target < variance of the uniform law that the
/// truncation approaches, i.e. target < 1/12 for mean 0.5.
double untruncated_variance_for(double mean, double target);

}  // namespace debtrun
