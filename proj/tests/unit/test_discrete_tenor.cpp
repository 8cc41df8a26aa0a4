#include "debtrun/discrete_tenor.hpp"
#include "debtrun/errors.hpp"
#include "debtrun/greens.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace debtrun;

namespace {

const Grid kGrid{6.0, 400, 1000};

ValueSurface filled_surface(const ModelParams& p, const DiscreteTenor& tenor, double level) {
    std::vector<double> breaks;
    for (double d : tenor.dates()) breaks.push_back(p.horizon - d);
    const Grid grid{6.0, 40, 10};
    ValueSurface s(p, grid, TimeMesh::build(p.horizon, grid.n_tau, breaks), FarField::asymptotic);
    for (std::size_t k = 0; k < s.node_count(); ++k) {
        auto row = s.slice(k);
        std::fill(row.begin(), row.end(), level);
        row[0] = 0.2;
    }
    return s;
}

}  // namespace

TEST(Tenor, EquallySpaced) {
    const DiscreteTenor t = DiscreteTenor::equally_spaced(4, 10.0);
    ASSERT_EQ(t.size(), 4u);
    EXPECT_DOUBLE_EQ(t.dates()[0], 2.0);
    EXPECT_DOUBLE_EQ(t.dates()[3], 8.0);
    EXPECT_TRUE(t.contains(6.0));
    EXPECT_FALSE(t.contains(5.0));
    EXPECT_EQ(DiscreteTenor::equally_spaced(0, 10.0).size(), 0u);
}

TEST(Tenor, Validation) {
    EXPECT_THROW(DiscreteTenor({0.0, 2.0}, 10.0), DomainError);
    EXPECT_THROW(DiscreteTenor({2.0, 11.0}, 10.0), DomainError);
    EXPECT_THROW(DiscreteTenor({4.0, 2.0}, 10.0), DomainError);
    EXPECT_THROW(DiscreteTenor({2.0, 2.0}, 10.0), DomainError);
    EXPECT_NO_THROW(DiscreteTenor({2.0, 10.0}, 10.0));
    EXPECT_THROW(DiscreteTenor::equally_spaced(-1, 10.0), DomainError);
}

TEST(DiscreteValue, NoRolloverMatchesGreensOverWholeHorizon) {
    ModelParams p;
    const ValueSurface s = solve_discrete_value(p, BeliefSpec::uniform(), DiscreteTenor({}, p.horizon), kGrid);
    double gap = 0.0;
    for (double t : {0.0, 3.0, 7.0}) {
        const std::size_t k = s.node_at_time(t);
        for (int j = 4; j < 200; j += 8) {
            const double x = s.x(k, j);
            gap = std::max(gap, std::abs(greens_final_interval_value(p, 0.0, t, x) - s.interpolate(k, x)));
        }
    }
    EXPECT_LT(gap, 2e-3);
}

TEST(DiscreteValue, BoundaryCarriesRecoveryOnInsolvency) {
    ModelParams p;
    const ValueSurface s =
        solve_discrete_value(p, BeliefSpec::uniform(), DiscreteTenor::equally_spaced(4, p.horizon), kGrid);
    for (std::size_t k = 1; k < s.node_count(); ++k) {
        const double l = debt_ratio(p, std::max(0.0, s.t(k)));
        EXPECT_NEAR(s.slice(k)[0], p.alpha * p.beta * l / (1.0 + l), 1e-14);
    }
}

TEST(DiscreteValue, MonotoneAndBounded) {
    ModelParams p;
    const ValueSurface s =
        solve_discrete_value(p, BeliefSpec::uniform(), DiscreteTenor::equally_spaced(4, p.horizon), kGrid);
    // The implicit step grows by at most 1 / (1 - c dtau); the product tends
    // to the continuous bound e^{c (T - t)} as dtau -> 0.
    const double c = p.carry();
    double hi = 1.0;
    for (std::size_t k = 0; k < s.node_count(); ++k) {
        const auto row = s.slice(k);
        const double t = std::max(0.0, s.t(k));
        const double l = debt_ratio(p, t);
        const double lo = p.alpha * p.beta * l / (1.0 + l);
        if (k > 0) hi /= 1.0 - c * (s.mesh().tau(k) - s.mesh().tau(k - 1));
        const double tau = p.horizon - t;
        EXPECT_LE(hi / std::exp(c * tau) - 1.0, c * c * tau * 0.01 + 1e-15);
        for (std::size_t j = 0; j < row.size(); ++j) {
            ASSERT_TRUE(std::isfinite(row[j]));
            if (j > 0) EXPECT_GE(row[j], row[j - 1] - 1e-12);
            if (k > 0) EXPECT_GE(row[j], lo - 1e-12);
            EXPECT_LE(row[j], hi * (1.0 + 1e-13));
        }
    }
}

TEST(DiscreteValue, RolloverAtHorizonIsJumpOnTerminalSlice) {
    ModelParams p;
    const ValueSurface s = solve_discrete_value(p, BeliefSpec::uniform(), DiscreteTenor({5.0, 10.0}, p.horizon), kGrid);
    ASSERT_NE(s.jump_slice(0), nullptr);
    ASSERT_NE(s.jump_slice(s.node_at_time(5.0)), nullptr);
    EXPECT_EQ(s.jump_slices().size(), 2u);
}

TEST(RolloverJump, Formula) {
    ModelParams p;
    const Grid grid{6.0, 20, 10};
    std::vector<double> u(21);
    for (std::size_t j = 0; j < u.size(); ++j) u[j] = 0.5 + 0.05 * static_cast<double>(j);
    const double t = 4.0;
    const auto out = apply_rollover_jump(p, BeliefSpec::uniform(), grid, t, u);
    EXPECT_EQ(out.front(), u.front());
    EXPECT_EQ(out.back(), u.back());
    for (int j = 1; j < 20; ++j) {
        const double x = insolvency_ratio(p, t) * std::exp(grid.y(j));
        const double th = theta(p, BeliefSpec::uniform(), x);
        const double expect = th * std::max(1.0, u[j]) + (1.0 - th) * recovery_rate(p, t, x);
        EXPECT_NEAR(out[j], expect, 1e-15);
    }
}

TEST(DiscreteBarriers, OrderingAndInceptionFlag) {
    ModelParams p;
    const DiscreteTenor tenor = DiscreteTenor::equally_spaced(4, p.horizon);
    const ValueSurface s = solve_discrete_value(p, BeliefSpec::uniform(), tenor, kGrid);
    const DiscreteBarrierSet set = extract_discrete_barriers(s, p, tenor);
    ASSERT_EQ(set.entries.size(), 5u);
    EXPECT_TRUE(set.entries.front().inception);
    for (std::size_t i = 0; i < set.entries.size(); ++i) {
        const DiscreteBarrier& b = set.entries[i];
        if (i > 0) EXPECT_FALSE(b.inception);
        EXPECT_LE(b.d_ins, b.d_ill);
        EXPECT_LE(b.d_ill, b.d_run);
        EXPECT_NEAR(b.d_run, b.x_star * p.s0 * std::exp(p.r_short * b.date), 1e-12);
        EXPECT_NEAR(b.d_ill, std::min(b.d_run, firesale_cap(p, b.date)), 1e-12);
        EXPECT_GE(b.x_star, insolvency_ratio(p, b.date));
        // x* is rooted on the continuation slice stored at the node.
        EXPECT_NEAR(s.interpolate(s.node_at_time(b.date), b.x_star), 1.0, 1e-9);
    }
    ASSERT_NE(set.at(6.0), nullptr);
    EXPECT_EQ(set.at(5.0), nullptr);
}

TEST(DiscreteBarriers, EmptyTenorReportsInceptionOnly) {
    ModelParams p;
    const DiscreteTenor tenor({}, p.horizon);
    const ValueSurface s = solve_discrete_value(p, BeliefSpec::uniform(), tenor, kGrid);
    const DiscreteBarrierSet set = extract_discrete_barriers(s, p, tenor);
    ASSERT_EQ(set.entries.size(), 1u);
    EXPECT_TRUE(set.entries.front().inception);
}

TEST(DiscreteBarriers, ValueAboveOneEverywhereGivesBoundary) {
    ModelParams p;
    const DiscreteTenor tenor = DiscreteTenor::equally_spaced(1, p.horizon);
    const DiscreteBarrierSet set = extract_discrete_barriers(filled_surface(p, tenor, 1.5), p, tenor);
    for (const auto& b : set.entries) {
        EXPECT_TRUE(b.at_boundary);
        EXPECT_NEAR(b.x_star, insolvency_ratio(p, b.date), 1e-14);
        EXPECT_NEAR(b.d_run, b.d_ins, 1e-12);
    }
}

TEST(DiscreteBarriers, ValueBelowOneEverywhereAlwaysRuns) {
    ModelParams p;
    const DiscreteTenor tenor = DiscreteTenor::equally_spaced(1, p.horizon);
    const DiscreteBarrierSet set = extract_discrete_barriers(filled_surface(p, tenor, 0.9), p, tenor);
    EXPECT_FALSE(set.diagnostics.empty());
    for (const auto& b : set.entries) {
        EXPECT_TRUE(b.always_run);
        EXPECT_TRUE(std::isinf(b.x_star));
        EXPECT_NEAR(b.d_ill, firesale_cap(p, b.date), 1e-12);
    }
}

TEST(DiscreteValue, HorizonMismatchRejected) {
    ModelParams p;
    EXPECT_THROW(solve_discrete_value(p, BeliefSpec::uniform(), DiscreteTenor({2.0}, 5.0), kGrid), DomainError);
}
