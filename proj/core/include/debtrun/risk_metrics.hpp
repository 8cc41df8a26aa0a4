#pragma once

#include "debtrun/beliefs.hpp"
#include "debtrun/discrete_tenor.hpp"
#include "debtrun/fd_engine.hpp"
#include "debtrun/intensity.hpp"
#include "debtrun/model.hpp"
#include "debtrun/montecarlo.hpp"
#include "debtrun/staggered_tenor.hpp"

#include <cstddef>

namespace debtrun {

/// Probability that y = log(X / (beta l)) started at log(V0 / (beta L0))
/// hits 0 within `horizon`; 1 when V0 is at or below the barrier.
double blackcox_pd(const ModelParams& p, double v0, double horizon);

enum class SurvivalVariant {
    paper_literal,  ///< keeps the zero-order (r_S - r) term
    corrected,      ///< drops it, so P stays a probability
};

const char* to_string(SurvivalVariant v);

struct SurvivalSurface {
    ValueSurface surface;
    SurvivalVariant variant;

    double survival_at(double t, double x) const { return surface.value_at(t, x); }
    /// Default probability 1 - P(0, V0 / S0).
    double pd(double v0) const;
};

/// Linear survival PDE with the illiquidity indicator frozen on each slice
/// at the later time of the step. DependencyError when the curve is empty
/// or does not cover [0, T].
SurvivalSurface solve_survival_staggered(const ModelParams& p, const IntensitySpec& intensity,
                                         const BarrierCurve& illiquidity, const Grid& grid,
                                         SurvivalVariant variant = SurvivalVariant::corrected);

struct DefaultDecomposition {
    double pd_total = 0.0;
    double pd_insolvency = 0.0;
    double pd_illiquidity = 0.0;
    double pd_baseline_blackcox = 0.0;
    double std_error = 0.0;     ///< of pd_total
    double mc_halfwidth = 0.0;  ///< 95% half-width of pd_total
    std::size_t n_paths = 0;
    std::size_t n_survive = 0;
    std::size_t n_insolvency = 0;
    std::size_t n_illiquidity = 0;
};

/// Default by simulation with runs checked at the rollover dates.
DefaultDecomposition mc_default_discrete(const ModelParams& p, const DiscreteBarrierSet& barriers,
                                         const DiscreteTenor& tenor, double v0, const McOptions& options);

/// Default by simulation with runs checked at Cox arrivals.
DefaultDecomposition mc_default_staggered(const ModelParams& p, const IntensitySpec& intensity,
                                          const BarrierCurve& barrier, double v0, const McOptions& options);

struct ProbabilityEstimate {
    double p = 0.0;
    double std_error = 0.0;
    std::size_t n_paths = 0;
};

/// Insolvency-only first passage by simulation with the bridge correction.
ProbabilityEstimate mc_first_passage_pd(const ModelParams& p, double v0, double horizon, const McOptions& options);

}  // namespace debtrun
