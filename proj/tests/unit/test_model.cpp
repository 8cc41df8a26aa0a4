#include "debtrun/errors.hpp"
#include "debtrun/model.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <string>

using namespace debtrun;

namespace {

ModelParams with_debt(double l0, double s0, double r_short, double r_long) {
    ModelParams p;
    p.l0 = l0;
    p.s0 = s0;
    p.r_short = r_short;
    p.r_long = r_long;
    return p;
}

}  // namespace

TEST(DebtRatio, InitialRatio) {
    EXPECT_DOUBLE_EQ(debt_ratio(with_debt(2, 2, 0.03, 0.05), 0.0), 1.0);
}

TEST(DebtRatio, ClosedFormAtTen) {
    EXPECT_NEAR(debt_ratio(with_debt(2, 2, 0.03, 0.05), 10.0), std::exp(0.2), 1e-14);
    EXPECT_NEAR(std::exp(0.2), 1.221402, 1e-6);
}

TEST(DebtRatio, ZeroDrift) {
    EXPECT_DOUBLE_EQ(debt_ratio(with_debt(4, 2, 0.04, 0.04), 7.0), 2.0);
}

TEST(DebtRatio, OutsideHorizonThrows) {
    ModelParams p;
    EXPECT_THROW(debt_ratio(p, -0.1), DomainError);
    EXPECT_THROW(debt_ratio(p, p.horizon + 0.1), DomainError);
}

TEST(DebtState, ClosedForms) {
    ModelParams p;
    const DebtState d = debt_state(p, 3.0);
    EXPECT_DOUBLE_EQ(d.short_debt, p.s0 * std::exp(p.r_short * 3.0));
    EXPECT_DOUBLE_EQ(d.long_debt, p.l0 * std::exp(p.r_long * 3.0));
    EXPECT_NEAR(d.ratio, d.long_debt / d.short_debt, 1e-14);
}

TEST(Recovery, Interior) {
    ModelParams p;  // alpha 0.6, l_0 = 1
    EXPECT_DOUBLE_EQ(recovery_rate(p, 0.0, 1.5), 0.45);
}

TEST(Recovery, CappedAtOne) {
    ModelParams p;
    EXPECT_DOUBLE_EQ(recovery_rate(p, 0.0, 10.0), 1.0);
}

TEST(Recovery, TerminalDropsAlpha) {
    ModelParams p;
    const double l_end = std::exp(0.2);
    EXPECT_NEAR(recovery_rate(p, p.horizon, 1.0), 1.0 / (1.0 + l_end), 1e-14);
    EXPECT_NEAR(recovery_rate(p, p.horizon, 1.0), 0.450166, 1e-6);
}

TEST(Recovery, BelowOneOnInsolvencyBoundary) {
    ModelParams p;
    for (double t = 0.0; t < p.horizon; t += 0.5) {
        const double l = debt_ratio(p, t);
        const double r = recovery_rate(p, t, insolvency_ratio(p, t));
        EXPECT_NEAR(r, p.alpha * p.beta * l / (1.0 + l), 1e-14);
        EXPECT_LT(r, 1.0);
    }
}

TEST(Recovery, RejectsNonPositiveRatio) {
    ModelParams p;
    EXPECT_THROW(recovery_rate(p, 1.0, 0.0), DomainError);
}

TEST(Insolvency, AtInception) {
    ModelParams p;
    p.r_long = 0.05;
    EXPECT_DOUBLE_EQ(insolvency_barrier(p, 0.0), 0.8);
}

TEST(Insolvency, ClosedFormAtTen) {
    ModelParams p;
    EXPECT_NEAR(insolvency_barrier(p, 10.0), 0.8 * std::exp(0.5), 1e-13);
    EXPECT_NEAR(insolvency_barrier(p, 10.0), 1.31897, 1e-5);
}

TEST(Insolvency, ZeroBetaRejected) {
    ModelParams p;
    p.beta = 0.0;
    EXPECT_THROW(insolvency_barrier(p, 1.0), DomainError);
    EXPECT_THROW(p.validate(), DomainError);
}

TEST(Insolvency, IncreasingInTime) {
    ModelParams p;
    double prev = insolvency_barrier(p, 0.0);
    for (double t = 0.25; t <= p.horizon; t += 0.25) {
        const double d = insolvency_barrier(p, t);
        EXPECT_GT(d, prev);
        EXPECT_NEAR(d, short_debt(p, t) * insolvency_ratio(p, t), 1e-12);
        prev = d;
    }
}

TEST(Validate, DefaultsAreAdmissible) {
    EXPECT_NO_THROW(ModelParams{}.validate());
}

TEST(Validate, CollectsEveryProblem) {
    ModelParams p;
    p.sigma = -1.0;
    p.alpha = 1.5;
    p.r = 0.1;
    try {
        p.validate();
        FAIL() << "expected DomainError";
    } catch (const DomainError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("sigma"), std::string::npos);
        EXPECT_NE(msg.find("alpha"), std::string::npos);
        EXPECT_NE(msg.find("r_long > r_short > r"), std::string::npos);
    }
}

TEST(Validate, CovenantCheckedAtBothEnds) {
    ModelParams p;
    // l_T = e^{0.2}, so the binding bound is 1/l_T + 1 ~ 1.8187.
    p.beta = 1.81;
    EXPECT_NO_THROW(p.validate());
    p.beta = 1.83;
    EXPECT_THROW(p.validate(), DomainError);
}
