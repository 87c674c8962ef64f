#include <gtest/gtest.h>

#include <cmath>

#include "sobomark/numeric.hpp"

using namespace sobomark;

TEST(ForwardDiff, SquareFirstDifference) {
  auto sq = [](double x) { return x * x; };
  EXPECT_DOUBLE_EQ(forward_diff(sq, 1, 3.0), 7.0);
}

TEST(ForwardDiff, ConstantVanishes) {
  EXPECT_DOUBLE_EQ(forward_diff([](double) { return 5.0; }, 1, 0.0), 0.0);
}

TEST(ForwardDiff, SecondDifferenceOfLinear) {
  EXPECT_DOUBLE_EQ(forward_diff([](double x) { return x; }, 2, 10.0), 0.0);
}

TEST(ForwardDiff, ZeroOrderIsIdentity) {
  EXPECT_DOUBLE_EQ(forward_diff([](double x) { return x * x * x; }, 0, 2.0), 8.0);
}

TEST(BackwardDiff, SquareFirstDifference) {
  EXPECT_DOUBLE_EQ(backward_diff([](double x) { return x * x; }, 1, 3.0), 5.0);
}

TEST(BackwardDiff, LinearAtZero) {
  EXPECT_DOUBLE_EQ(backward_diff([](double x) { return x; }, 1, 0.0), 1.0);
}

TEST(BackwardDiff, ShiftedForward) {
  auto f = [](double x) { return std::exp(0.3 * x) - x * x; };
  const double fwd = forward_diff(f, 1, 2.0);
  EXPECT_NEAR(fwd, backward_diff(f, 1, 3.0), 4 * std::numeric_limits<double>::epsilon() * std::abs(fwd));
}

TEST(FallingFactorial, Examples) {
  EXPECT_DOUBLE_EQ(falling_factorial<double>(5.0, 2), 20.0);
  EXPECT_DOUBLE_EQ(falling_factorial<double>(-3.7, 0), 1.0);
  EXPECT_DOUBLE_EQ(falling_factorial<double>(3.0, 4), 0.0);
}

TEST(Binomial, SmallValues) {
  EXPECT_DOUBLE_EQ(binomial<double>(5, 2), 10.0);
  EXPECT_DOUBLE_EQ(binomial<double>(5, 0), 1.0);
  EXPECT_DOUBLE_EQ(binomial<double>(5, 6), 0.0);
}

TEST(Residual, RelativeToSumOfMagnitudes) {
  auto r = Residual<double>::of({1e6, -1e6, 1e-3});
  EXPECT_DOUBLE_EQ(r.scale, 2e6 + 1e-3);
  EXPECT_NEAR(r.relative(), 5e-10, 1e-18);
  EXPECT_TRUE(r.within(1e-9));
  EXPECT_FALSE(r.within(1e-10));
}

TEST(Residual, ZeroTermsAreExact) {
  auto r = Residual<double>::of({0.0, 0.0});
  EXPECT_EQ(r.relative(), 0.0);
  EXPECT_TRUE(r.within(0.0));
}

TEST(CompensatedSum, RecoversCancelledTail) {
  EXPECT_DOUBLE_EQ(compensated_sum<double>({1e16, 1.0, -1e16, 1.0}), 2.0);
}
