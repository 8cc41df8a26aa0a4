#include "debtrun/crossing.hpp"

#include <gtest/gtest.h>

#include <vector>

using namespace debtrun;

TEST(Crossing, BracketedRoot) {
    const std::vector<double> u{0.2, 0.9, 1.1, 1.3};
    const UnitCrossing c = find_unit_crossing(u, 0.5);
    ASSERT_EQ(c.status, CrossingStatus::found);
    EXPECT_EQ(c.segment, 1);
    EXPECT_GT(c.y, 0.5);
    EXPECT_LT(c.y, 1.0);
    const double w = (c.y - 0.5) / 0.5;
    EXPECT_LT(std::abs((1.0 - w) * 0.9 + w * 1.1 - 1.0), 1e-6);
    EXPECT_NEAR(c.y, 0.75, 1e-12);
}

TEST(Crossing, AboveOneEverywhereSitsOnBoundary) {
    const std::vector<double> u{0.5, 1.2, 1.5, 2.0};
    const UnitCrossing c = find_unit_crossing(u, 0.1);
    EXPECT_EQ(c.status, CrossingStatus::at_boundary);
    EXPECT_EQ(c.y, 0.0);
}

TEST(Crossing, BelowOneEverywhere) {
    const std::vector<double> u{0.1, 0.5, 0.9, 0.99};
    EXPECT_EQ(find_unit_crossing(u, 0.1).status, CrossingStatus::always_below);
}

TEST(Crossing, LargestOfSeveralCrossings) {
    const std::vector<double> u{0.5, 1.1, 0.95, 0.97, 1.2, 1.4};
    const UnitCrossing c = find_unit_crossing(u, 1.0);
    EXPECT_EQ(c.crossings, 2);
    EXPECT_EQ(c.segment, 3);
    EXPECT_NEAR(c.y, 3.0 + 0.03 / 0.23, 1e-12);
}

TEST(Crossing, ExactOneAtNode) {
    const std::vector<double> u{0.5, 0.8, 1.0, 1.3};
    const UnitCrossing c = find_unit_crossing(u, 1.0);
    EXPECT_EQ(c.status, CrossingStatus::found);
    EXPECT_NEAR(c.y, 2.0, 1e-12);
}
