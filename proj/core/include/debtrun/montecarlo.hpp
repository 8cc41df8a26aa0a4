#pragma once

#include "debtrun/beliefs.hpp"
#include "debtrun/discrete_tenor.hpp"
#include "debtrun/intensity.hpp"
#include "debtrun/model.hpp"
#include "debtrun/random.hpp"
#include "debtrun/sim_path.hpp"
#include "debtrun/staggered_tenor.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace debtrun {

struct McOptions {
    std::size_t n_paths = 100000;
    std::uint64_t seed = 1;
    double dt = 0.01;

    /// Throws ConfigError when n_paths < min_paths or dt is not positive.
    void validate(std::size_t min_paths = 1000) const;
};

enum class EventKind { mesh, arrival, insolvency, horizon };

struct PathEvent {
    EventKind kind = EventKind::mesh;
    double t = 0.0;
    double x = 0.0;      ///< ratio X at the event; the barrier ratio for insolvency
    double gamma = 0.0;  ///< integrated intensity up to t
};

/// Streams the events of one ratio path in time order. X moves by exact
/// log-normal steps on a mesh of width dt; maturities either arrive by the
/// canonical Cox construction or at fixed dates, which are mesh nodes.
/// Insolvency uses a sign check plus the Brownian-bridge crossing draw.
class PathEngine {
public:
    PathEngine(const ModelParams& p, const IntensitySpec& intensity, double x0, double dt, PathRng& rng);
    PathEngine(const ModelParams& p, std::span<const double> dates, double x0, double dt, PathRng& rng);

    /// Next event; returns false once the horizon event has been delivered.
    bool next(PathEvent& event);

    bool insolvent() const noexcept { return insolvent_; }

private:
    void start(double x0);
    void advance();
    void check_insolvency(double ta, double la, double tb, double lb);
    double log_barrier(double t) const noexcept { return log_barrier0_ + drift_barrier_ * t; }

    const ModelParams& p_;
    const IntensitySpec* intensity_ = nullptr;
    std::vector<double> dates_;
    std::size_t next_date_ = 0;
    PathRng& rng_;
    double dt_;
    double t_ = 0.0;
    double lx_ = 0.0;
    double gamma_ = 0.0;
    double threshold_ = 0.0;
    double log_barrier0_ = 0.0;
    double drift_barrier_ = 0.0;
    bool insolvent_ = false;
    bool done_ = false;
    std::vector<PathEvent> pending_;
    std::size_t head_ = 0;
};

/// Full path record with Cox arrivals. V0 is the initial firm value.
SimPath simulate_path(const ModelParams& p, const IntensitySpec& intensity, double v0, double dt, PathRng& rng);
/// Full path record with arrivals at the rollover dates.
SimPath simulate_path(const ModelParams& p, const DiscreteTenor& tenor, double v0, double dt, PathRng& rng);

/// Run and illiquidity thresholds in ratio space, read from either a
/// continuous barrier curve or a set of rollover-date barriers.
class RunBarrier {
public:
    RunBarrier(const BarrierCurve& curve);  // NOLINT: implicit on purpose
    RunBarrier(const DiscreteBarrierSet& set, const ModelParams& p);

    double x_star(double t) const;
    double x_ill(double t) const;

private:
    const BarrierCurve* curve_ = nullptr;
    const DiscreteBarrierSet* set_ = nullptr;
    ModelParams params_{};
};

enum class Outcome { insolvency_default, illiquidity_default, unsuccessful_run, survival };

const char* to_string(Outcome o);

struct ScenarioRecord {
    Outcome outcome = Outcome::survival;
    double event_time = 0.0;            ///< default time, or T
    double payoff = 0.0;                ///< discounted payoff of a creditor following the barrier
    std::vector<double> unsuccessful_runs;
};

/// Walks the path in time order: insolvency, then at each arrival a run if
/// X <= x*, which is an illiquidity default if X <= x_ill and an
/// unsuccessful run otherwise. DependencyError when the barrier has a gap.
ScenarioRecord classify_scenario(const SimPath& path, const RunBarrier& barrier, const ModelParams& p);

struct PayoffEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    double ci_halfwidth = 0.0;  ///< 95%
    std::size_t n_paths = 0;
};

/// Mean discounted payoff of a creditor who withdraws at the first own
/// maturity with X <= x*(t). At each maturity the firm first fails from
/// the other creditors' run with probability 1 - theta(X), which thins the
/// creditor's own arrivals into the successful-run default time.
PayoffEstimate strategy_payoff(const ModelParams& p, const BeliefSpec& beliefs, const IntensitySpec& intensity,
                               const BarrierCurve& strategy, double v0, const McOptions& options);
PayoffEstimate strategy_payoff(const ModelParams& p, const BeliefSpec& beliefs, const DiscreteTenor& tenor,
                               const DiscreteBarrierSet& strategy, double v0, const McOptions& options);

struct SeedMatch {
    bool found = false;
    std::uint64_t seed = 0;
    SimPath path;
    ScenarioRecord record;
};

/// First seed in [first, first + tries) whose classified path satisfies
/// `accept`; found is false when none does.
SeedMatch find_scenario_seed(const ModelParams& p, const IntensitySpec& intensity, const BarrierCurve& barrier,
                             double v0, double dt, std::uint64_t first, std::uint64_t tries,
                             const std::function<bool(const SimPath&, const ScenarioRecord&)>& accept);

/// One-sample Kolmogorov-Smirnov statistic against Exp(rate).
double ks_statistic_exponential(std::vector<double> samples, double rate);
/// Asymptotic p-value of the KS statistic d for n samples.
double ks_pvalue(double d, std::size_t n);

}  // namespace debtrun
