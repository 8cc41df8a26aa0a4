#include "debtrun/errors.hpp"
#include "debtrun/risk_metrics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace debtrun;

namespace {

const Grid kGrid{6.0, 400, 1000};

// x*(t) = beta l_t on every mesh time: the illiquidity indicator never binds.
BarrierCurve insolvency_curve(const ModelParams& p, int steps) {
    std::vector<BarrierSample> samples;
    for (int k = 0; k <= steps; ++k) {
        const double t = p.horizon * k / steps;
        samples.push_back(make_barrier_sample(p, t, insolvency_ratio(p, t)));
    }
    return BarrierCurve(p, std::move(samples));
}

McOptions small_mc(std::size_t n, std::uint64_t seed) {
    McOptions o;
    o.n_paths = n;
    o.seed = seed;
    return o;
}

}  // namespace

TEST(BlackCox, StartOnBarrier) {
    ModelParams p;
    EXPECT_EQ(blackcox_pd(p, p.beta * p.l0, 5.0), 1.0);
    EXPECT_EQ(blackcox_pd(p, 0.5, 5.0), 1.0);
}

TEST(BlackCox, DeterministicUpwardPathNeverHits) {
    ModelParams p;
    p.sigma = 1e-4;
    p.r_asset = 0.2;
    ASSERT_GT(p.log_drift(), 0.0);
    EXPECT_EQ(blackcox_pd(p, 4.0, 10.0), 0.0);
}

TEST(BlackCox, ZeroHorizonAndMonotonicity) {
    ModelParams p;
    EXPECT_EQ(blackcox_pd(p, 4.0, 0.0), 0.0);
    double prev = 1.0;
    for (double v0 = 1.0; v0 <= 20.0; v0 += 1.0) {
        const double pd = blackcox_pd(p, v0, p.horizon);
        EXPECT_LE(pd, prev);
        EXPECT_GE(pd, 0.0);
        prev = pd;
    }
    EXPECT_THROW(blackcox_pd(p, 4.0, -1.0), DomainError);
}

TEST(BlackCox, FirstPassageSimulation) {
    ModelParams p;
    p.horizon = 5.0;
    p.r_asset = 0.07;
    const ProbabilityEstimate mc = mc_first_passage_pd(p, 4.0, 5.0, small_mc(20000, 5));
    EXPECT_LT(std::abs(mc.p - blackcox_pd(p, 4.0, 5.0)), 4.0 * mc.std_error);
}

TEST(Survival, NoIntensityIsBlackCoxSurvival) {
    ModelParams p;
    const BarrierCurve curve = BarrierCurve::constant_ratio(p, 5.0, {0.0, p.horizon});
    const SurvivalSurface s = solve_survival_staggered(p, IntensitySpec::constant(0.0), curve, kGrid);
    for (double v0 : {1.0, 2.0, 4.0, 8.0, 16.0}) {
        EXPECT_NEAR(s.pd(v0), blackcox_pd(p, v0, p.horizon), 2e-3) << v0;
    }
}

TEST(Survival, IlliquidityAtInsolvencyMatchesNoIntensity) {
    ModelParams p;
    const SurvivalSurface a =
        solve_survival_staggered(p, IntensitySpec::constant(0.4), insolvency_curve(p, 1000), kGrid);
    const SurvivalSurface b = solve_survival_staggered(
        p, IntensitySpec::constant(0.0), BarrierCurve::constant_ratio(p, 5.0, {0.0, p.horizon}), kGrid);
    for (std::size_t i = 0; i < a.surface.raw().size(); ++i) {
        EXPECT_NEAR(a.surface.raw()[i], b.surface.raw()[i], 1e-13);
    }
}

TEST(Survival, BoundsForBothVariants) {
    ModelParams p;
    const auto g = IntensitySpec::constant(0.4);
    const BarrierCurve curve = BarrierCurve::constant_ratio(p, 4.0, {0.0, p.horizon});
    const SurvivalSurface c = solve_survival_staggered(p, g, curve, kGrid, SurvivalVariant::corrected);
    const SurvivalSurface l = solve_survival_staggered(p, g, curve, kGrid, SurvivalVariant::paper_literal);
    bool literal_exceeds_one = false;
    double hi = 1.0;  // discrete maximum-principle bound of the literal variant
    for (std::size_t k = 0; k < c.surface.node_count(); ++k) {
        const auto rc = c.surface.slice(k);
        const auto rl = l.surface.slice(k);
        const auto& mesh = l.surface.mesh();
        if (k > 0) hi /= 1.0 - p.carry() * (mesh.tau(k) - mesh.tau(k - 1));
        EXPECT_EQ(rc[0], 0.0);
        for (std::size_t j = 0; j < rc.size(); ++j) {
            EXPECT_GE(rc[j], 0.0);
            EXPECT_LE(rc[j], 1.0 + 1e-14);
            EXPECT_LE(rl[j], hi * (1.0 + 1e-13));
            literal_exceeds_one = literal_exceeds_one || rl[j] > 1.0;
        }
    }
    for (std::size_t j = 1; j < c.surface.width(); ++j) EXPECT_EQ(c.surface.slice(0)[j], 1.0);
    EXPECT_TRUE(literal_exceeds_one);
    EXPECT_STREQ(to_string(SurvivalVariant::paper_literal), "paper_literal");
}

TEST(Survival, NeedsCoveringCurve) {
    ModelParams p;
    const auto g = IntensitySpec::constant(0.4);
    EXPECT_THROW(solve_survival_staggered(p, g, BarrierCurve{}, kGrid), DependencyError);
    EXPECT_THROW(solve_survival_staggered(p, g, BarrierCurve::constant_ratio(p, 3.0, {0.0, 5.0}), kGrid),
                 DependencyError);
}

TEST(McDefault, BelowInsolvencyDefaultsAtOnce) {
    ModelParams p;
    const DiscreteTenor tenor = DiscreteTenor::equally_spaced(4, p.horizon);
    DiscreteBarrierSet set;
    for (double d : {0.0, 2.0, 4.0, 6.0, 8.0}) set.entries.push_back({d, 3.0, 0, 0, 0, d == 0.0, false, false, 1});
    const DefaultDecomposition d = mc_default_discrete(p, set, tenor, 0.5, small_mc(1000, 1));
    EXPECT_EQ(d.pd_total, 1.0);
    EXPECT_EQ(d.pd_insolvency, 1.0);
    EXPECT_EQ(d.n_insolvency, 1000u);
}

TEST(McDefault, BarrierBelowInsolvencyNeverIlliquid) {
    ModelParams p;
    p.psi = 0.99;
    const DiscreteTenor tenor = DiscreteTenor::equally_spaced(4, p.horizon);
    DiscreteBarrierSet set;
    for (double d : {0.0, 2.0, 4.0, 6.0, 8.0}) set.entries.push_back({d, 0.0, 0, 0, 0, d == 0.0, false, false, 1});
    const DefaultDecomposition d = mc_default_discrete(p, set, tenor, 4.0, small_mc(5000, 2));
    EXPECT_EQ(d.pd_illiquidity, 0.0);
    EXPECT_EQ(d.n_survive + d.n_insolvency, d.n_paths);
}

TEST(McDefault, MissingDateIsDependencyError) {
    ModelParams p;
    const DiscreteTenor tenor = DiscreteTenor::equally_spaced(4, p.horizon);
    DiscreteBarrierSet set;
    set.entries.push_back({0.0, 3.0, 0, 0, 0, true, false, false, 1});
    EXPECT_THROW(mc_default_discrete(p, set, tenor, 4.0, small_mc(1000, 1)), DependencyError);
}

TEST(McDefault, NoIntensityIsBlackCox) {
    ModelParams p;
    const BarrierCurve curve = BarrierCurve::constant_ratio(p, 10.0, {0.0, p.horizon});
    const DefaultDecomposition d =
        mc_default_staggered(p, IntensitySpec::constant(0.0), curve, 4.0, small_mc(20000, 3));
    EXPECT_EQ(d.pd_illiquidity, 0.0);
    EXPECT_LT(std::abs(d.pd_total - d.pd_baseline_blackcox), 4.0 * d.std_error);
    EXPECT_DOUBLE_EQ(d.pd_baseline_blackcox, blackcox_pd(p, 4.0, p.horizon));
}

TEST(McDefault, AlwaysRunMakesFirstArrivalFatal) {
    ModelParams p;
    p.psi = 0.01;
    const auto g = IntensitySpec::constant(0.4);
    const BarrierCurve curve =
        BarrierCurve::constant_ratio(p, std::numeric_limits<double>::infinity(), {0.0, p.horizon});
    const McOptions o = small_mc(3000, 4);
    const DefaultDecomposition d = mc_default_staggered(p, g, curve, 8.0, o);
    // Replay the same streams: the first of arrival and insolvency decides.
    std::size_t ill = 0, ins = 0;
    for (std::size_t i = 0; i < o.n_paths; ++i) {
        PathRng rng(o.seed, i);
        PathEngine e(p, g, 8.0 / p.s0, o.dt, rng);
        PathEvent ev;
        while (e.next(ev)) {
            if (ev.kind == EventKind::arrival) {
                ASSERT_LT(ev.x, (1.0 + debt_ratio(p, ev.t)) / p.psi);
                ++ill;
                break;
            }
            if (ev.kind == EventKind::insolvency) {
                ++ins;
                break;
            }
        }
    }
    EXPECT_EQ(d.n_illiquidity, ill);
    EXPECT_EQ(d.n_insolvency, ins);
}

TEST(McDefault, CountsAreExhaustiveAndValidated) {
    ModelParams p;
    const auto g = IntensitySpec::constant(0.4);
    const BarrierCurve curve = BarrierCurve::constant_ratio(p, 3.0, {0.0, p.horizon});
    const DefaultDecomposition d = mc_default_staggered(p, g, curve, 6.0, small_mc(4000, 9));
    EXPECT_EQ(d.n_survive + d.n_insolvency + d.n_illiquidity, d.n_paths);
    EXPECT_NEAR(d.pd_total, d.pd_insolvency + d.pd_illiquidity, 1e-15);
    EXPECT_NEAR(d.mc_halfwidth, 1.96 * d.std_error, 1e-15);
    EXPECT_THROW(mc_default_staggered(p, g, curve, 6.0, small_mc(999, 9)), ConfigError);
    EXPECT_THROW(mc_default_staggered(p, g, BarrierCurve::constant_ratio(p, 3.0, {0.0, 5.0}), 6.0, small_mc(1000, 9)),
                 DependencyError);
}

TEST(McDefault, DecreasingInFirmValue) {
    ModelParams p;
    const auto g = IntensitySpec::constant(0.4);
    const BarrierCurve curve = BarrierCurve::constant_ratio(p, 3.0, {0.0, p.horizon});
    double prev = 1.0;
    for (double v0 : {2.0, 4.0, 8.0, 16.0}) {
        const DefaultDecomposition d = mc_default_staggered(p, g, curve, v0, small_mc(4000, 10));
        EXPECT_LE(d.pd_total, prev + 3.0 * d.std_error);
        EXPECT_GE(d.pd_total, d.pd_baseline_blackcox - 3.0 * d.std_error);
        prev = d.pd_total;
    }
}
