#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fracbloch/errors.hpp"
#include "fracbloch/grid.hpp"
#include "fracbloch/quadrature.hpp"

using namespace fracbloch;

TEST(Quadrature, PolynomialAndOscillatory) {
  EXPECT_NEAR(integrate([](double x) { return x * x * x; }, 0.0, 2.0).value, 4.0, 1e-13);
  EXPECT_NEAR(integrate([](double x) { return std::sin(20 * x); }, 0.0, std::numbers::pi, {.abs_tol = 1e-12}).value, 0.0, 1e-12);
  EXPECT_NEAR(integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0).value, 2.0, 1e-9);
}

TEST(Quadrature, ZeroIntegralWithoutAbsoluteToleranceExhaustsBudget) {
  EXPECT_THROW(integrate([](double x) { return std::sin(20 * x); }, 0.0, std::numbers::pi, {.max_evals = 1 << 16}),
               NumericError);
}

TEST(Quadrature, HalfLine) {
  auto r = integrate_halfline([](double u) { return std::exp(-u); }, 0.0, 1.0 / 64);
  EXPECT_NEAR(r.value, 1.0, 1e-13);
  auto g = integrate_halfline([](double u) { return std::exp(-u * u); }, 0.0, 0.25);
  EXPECT_NEAR(g.value, std::sqrt(std::numbers::pi) / 2, 1e-13);
}

TEST(Quadrature, GaussLegendreIsExactForHighDegree) {
  const auto rule = gauss_legendre(256);
  double sum = 0.0, moment = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i];
    moment += rule.weights[i] * std::pow(rule.nodes[i], 500);
  }
  EXPECT_NEAR(sum, 2.0, 1e-13);
  EXPECT_NEAR(moment, 2.0 / 501.0, 1e-13);
}

TEST(Grid, GeometricComplementsAreExactPowersOfTwo) {
  const auto g = RadialGrid::geometric(106, 4);
  ASSERT_EQ(g.size(), 107u);
  EXPECT_EQ(g.radius(0), 0.0);
  for (std::size_t j = 0; j < g.size(); j += 4) EXPECT_EQ(g.complement(j), std::ldexp(1.0, -static_cast<int>(j / 4)));
  EXPECT_LT(g.complements().back(), 1e-8 * 1.2);
  const auto fine = RadialGrid::geometric(212, 8);
  for (std::size_t j = 0; j < g.size(); ++j) EXPECT_EQ(g.complement(j), fine.complement(2 * j));
}

TEST(Grid, RejectsBadRadii) {
  EXPECT_THROW(RadialGrid::from_radii({0.5, 0.4}), DomainError);
  EXPECT_THROW(RadialGrid::from_radii({1.0}), DomainError);
}

TEST(Grid, BandsAndStability) {
  auto band = make_band("x", {1, 2, 3}, {2.0, NAN, 3.0});
  EXPECT_EQ(band.min, 2.0);
  EXPECT_EQ(band.max, 3.0);
  EXPECT_EQ(band.argmax, 2u);
  auto coarse = make_band("x", {1, 2}, {2.0, 3.1});
  assess_stability(band, coarse, 0.10);
  EXPECT_TRUE(band.stable);
  EXPECT_NEAR(band.drift, 0.1 / 3.1, 1e-15);
  EXPECT_TRUE(std::isinf(relative_change(0.0, 1.0)));
}

TEST(Grid, ExponentLadderDoublesExactly) {
  const auto xs = exponent_ladder(40, 4);
  for (std::size_t j = 0; j + 4 < xs.size(); ++j) EXPECT_EQ(2.0 * xs[j], xs[j + 4]);
}
