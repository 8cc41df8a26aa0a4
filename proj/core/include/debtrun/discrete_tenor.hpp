#pragma once

#include "debtrun/beliefs.hpp"
#include "debtrun/fd_engine.hpp"
#include "debtrun/model.hpp"

#include <string>
#include <vector>

namespace debtrun {

/// Common rollover dates 0 < T_1 < ... < T_N <= T of all short-term debt.
class DiscreteTenor {
public:
    DiscreteTenor(std::vector<double> dates, double horizon);

    /// N dates T_n = n T / (N + 1), the spacing used for the four-date example.
    static DiscreteTenor equally_spaced(int n, double horizon);

    const std::vector<double>& dates() const noexcept { return dates_; }
    std::size_t size() const noexcept { return dates_.size(); }
    double horizon() const noexcept { return horizon_; }
    bool contains(double t, double tol = 1e-9) const;

private:
    std::vector<double> dates_;
    double horizon_;
};

/// Backward induction over the rollover intervals. Every rollover date is a
/// mesh node; the node stores the continuation value W_n(T_n, .), and the
/// post-jump slice W_{n-1}(T_n, .) is kept in the surface's jump slices.
ValueSurface solve_discrete_value(const ModelParams& p, const BeliefSpec& beliefs,
                                  const DiscreteTenor& tenor, const Grid& grid,
                                  FarField farfield = FarField::asymptotic);

/// Run/rollover jump at a rollover date:
/// theta max{1, u} + (1 - theta) R. Boundary entries are left untouched.
std::vector<double> apply_rollover_jump(const ModelParams& p, const BeliefSpec& beliefs,
                                        const Grid& grid, double t, std::span<const double> u);

struct DiscreteBarrier {
    double date = 0.0;
    double x_star = 0.0;
    double d_run = 0.0;
    double d_ill = 0.0;
    double d_ins = 0.0;
    bool inception = false;    ///< the T_0 = 0 entry; no debt is rolled at inception
    bool always_run = false;   ///< U < 1 on the whole grid, barrier is +inf
    bool at_boundary = false;  ///< U > 1 on every interior node
    int crossings = 1;
};

struct DiscreteBarrierSet {
    std::vector<DiscreteBarrier> entries;
    std::vector<std::string> diagnostics;

    /// Entry at rollover date t, or nullptr.
    const DiscreteBarrier* at(double t, double tol = 1e-9) const;
};

DiscreteBarrierSet extract_discrete_barriers(const ValueSurface& surface, const ModelParams& p,
                                             const DiscreteTenor& tenor);

}  // namespace debtrun
