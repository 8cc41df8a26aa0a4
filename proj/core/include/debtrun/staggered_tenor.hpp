#pragma once

#include "debtrun/beliefs.hpp"
#include "debtrun/fd_engine.hpp"
#include "debtrun/intensity.hpp"
#include "debtrun/model.hpp"
#include "debtrun/sim_path.hpp"

#include <vector>

namespace debtrun {

struct StaggeredOptions {
    FarField farfield = FarField::asymptotic;
    NewtonOptions newton;
};

struct SolveStats {
    std::vector<int> newton_iterations;  ///< per time step
    int max_iterations = 0;
};

/// Semilinear value PDE of the Cox maturity structure, stepped forward in
/// tau with the implicit scheme and a Newton solve per step.
ValueSurface solve_staggered_value(const ModelParams& p, const BeliefSpec& beliefs,
                                   const IntensitySpec& intensity, const Grid& grid,
                                   const StaggeredOptions& options = {}, SolveStats* stats = nullptr);

struct BarrierSample {
    double t = 0.0;
    double x_star = 0.0;
    double d_run = 0.0;
    double d_ill = 0.0;
    double d_ins = 0.0;
    double pasting_gap = 0.0;         ///< |U_x(x*+) - U_x(x*-)| from one-sided differences
    bool terminal_dominated = false;  ///< the t = T sample, taken from the previous slice
    bool always_run = false;
    bool at_boundary = false;
    int crossings = 1;
};

/// Debt-run, illiquidity and insolvency barriers sampled on a time mesh.
class BarrierCurve {
public:
    BarrierCurve() = default;
    BarrierCurve(ModelParams p, std::vector<BarrierSample> samples);

    /// Curve with x*(t) = x_star at the given times (x_star may be 0 or +inf).
    static BarrierCurve constant_ratio(const ModelParams& p, double x_star, std::vector<double> times);

    const std::vector<BarrierSample>& samples() const noexcept { return samples_; }
    const ModelParams& params() const noexcept { return params_; }
    bool empty() const noexcept { return samples_.empty(); }
    bool covers(double t) const noexcept;

    /// Run threshold in ratio space, linear in t between samples.
    double x_star_at(double t) const;
    /// Illiquidity threshold in ratio space, min{x*, (1 + l_t) / psi}.
    double x_ill_at(double t) const;

    /// x* multiplied by `factor` (barriers recomputed from it).
    BarrierCurve scaled(double factor) const;
    /// x*(t) replaced by x*(t + shift), clamped to the curve's range.
    BarrierCurve time_shifted(double shift) const;

private:
    ModelParams params_{};
    std::vector<BarrierSample> samples_;
};

/// Builds a barrier sample from a run threshold x*.
BarrierSample make_barrier_sample(const ModelParams& p, double t, double x_star);

BarrierCurve extract_free_boundary(const ValueSurface& surface, const ModelParams& p);

/// First arrival at which X is at or below x*, or T if none.
double run_stopping_time(const SimPath& path, const BarrierCurve& barrier);

}  // namespace debtrun
