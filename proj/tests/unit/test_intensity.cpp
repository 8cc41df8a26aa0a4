#include "debtrun/errors.hpp"
#include "debtrun/intensity.hpp"

#include <gtest/gtest.h>

using namespace debtrun;

TEST(Intensity, Constant) {
    const IntensitySpec g = IntensitySpec::constant(0.4);
    EXPECT_TRUE(g.is_constant());
    EXPECT_DOUBLE_EQ(g(0.1), 0.4);
    EXPECT_DOUBLE_EQ(g(100.0), 0.4);
    EXPECT_DOUBLE_EQ(g.max_rate(), 0.4);
}

TEST(Intensity, ZeroAllowed) {
    EXPECT_DOUBLE_EQ(IntensitySpec::constant(0.0)(3.0), 0.0);
}

TEST(Intensity, TabulatedInterpolatesAndClamps) {
    const IntensitySpec g = IntensitySpec::tabulated({1.0, 2.0, 4.0}, {1.0, 0.5, 0.1});
    EXPECT_FALSE(g.is_constant());
    EXPECT_DOUBLE_EQ(g(0.5), 1.0);
    EXPECT_DOUBLE_EQ(g(1.5), 0.75);
    EXPECT_DOUBLE_EQ(g(3.0), 0.3);
    EXPECT_DOUBLE_EQ(g(9.0), 0.1);
    EXPECT_DOUBLE_EQ(g.max_rate(), 1.0);
}

TEST(Intensity, RejectsBadTables) {
    EXPECT_THROW(IntensitySpec::constant(-0.1), DomainError);
    EXPECT_THROW(IntensitySpec::tabulated({1.0}, {1.0}), DomainError);
    EXPECT_THROW(IntensitySpec::tabulated({1.0, 2.0}, {1.0}), DomainError);
    EXPECT_THROW(IntensitySpec::tabulated({2.0, 1.0}, {1.0, 1.0}), DomainError);
    EXPECT_THROW(IntensitySpec::tabulated({1.0, 2.0}, {1.0, -1.0}), DomainError);
    EXPECT_THROW(IntensitySpec::tabulated({0.0, 2.0}, {1.0, 1.0}), DomainError);
}
