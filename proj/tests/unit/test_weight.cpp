#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "fracbloch/errors.hpp"
#include "fracbloch/weight.hpp"

using namespace fracbloch;

namespace {

std::vector<RadialWeight> densities() {
  return {constant_weight(),          standard_weight(0.5), standard_weight(2.0), standard_weight(3.7),
          exponential_weight(1, 1, 1), exponential_weight(2, 2, 0.5), lograpid_weight(2.0)};
}

// midpoint rule with many panels, independent of the library quadrature
double midpoint(const std::function<double(double)>& f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double s = 0.0;
  for (int i = 0; i < panels; ++i) s += f(a + (i + 0.5) * h);
  return s * h;
}

}  // namespace

TEST(Weight, ConstantTail) {
  const auto w = constant_weight();
  EXPECT_EQ(w.tail(0.5), 0.5);
  EXPECT_EQ(w.tail(0.0), 1.0);
  EXPECT_THROW(w.tail(1.0), DomainError);
  EXPECT_THROW(w.tail(-0.1), DomainError);
}

TEST(Weight, ExponentialTailMatchesMidpointOracle) {
  const auto w = exponential_weight(1, 1, 1);
  const double oracle = midpoint([](double r) { return std::exp(-1.0 / (1.0 - r)); }, 0.9, 1.0, 1000000);
  EXPECT_NEAR(w.tail(0.9) / oracle, 1.0, 1e-8);
}

TEST(Weight, TailIsIntegralOfDensity) {
  for (const auto& w : densities()) {
    const double t0 = w.tail(0.0);
    for (int i = 0; i < 100; ++i) {
      const double r = i / 100.0;
      EXPECT_NEAR(w.tail(r), tail_from_density(w, 1.0 - r), 1e-9 * t0) << w.name() << " r=" << r;
    }
  }
}

TEST(Weight, TailInvariants) {
  for (const auto& w : densities()) {
    const double t0 = w.tail(0.0);
    double prev = t0;
    for (int j = 1; j <= 200; ++j) {
      const double d = std::exp2(-j / 5.0);
      const double t = w.tail_c(d);
      EXPECT_GE(prev, t - 1e-12 * t0) << w.name();
      if (d > 1e-12) EXPECT_GT(w.log_tail_c(d), -1e300) << w.name();
      prev = t;
    }
    EXPECT_LT(w.tail_c(1e-300), 1e-2 * t0) << w.name();
  }
}

TEST(Weight, FamilyCollapseAndDensities) {
  const auto s1 = standard_weight(1.0);
  const auto c = constant_weight();
  for (double r : {0.0, 0.3, 0.9, 0.999}) {
    EXPECT_NEAR(s1.tail(r), c.tail(r), 1e-15);
    EXPECT_NEAR(s1.density(r), 1.0, 1e-15);
  }
  EXPECT_NEAR(lograpid_weight(2.0).density(0.0), 1.0, 1e-15);
  EXPECT_NEAR(standard_weight(2.0).density(0.5), 2.0 * 0.75, 1e-15);
  EXPECT_NEAR(exponential_weight(1, 1, 1).density(0.5), std::exp(-2.0), 1e-15);
}

TEST(Weight, ParameterRangesAreChecked) {
  EXPECT_THROW(standard_weight(0.0), ConfigError);
  EXPECT_THROW(exponential_weight(1, -1, 1), ConfigError);
  EXPECT_THROW(lograpid_weight(1.0), ConfigError);
}

TEST(Weight, ScalingAndNormalization) {
  const auto w = standard_weight(2.0);
  const auto v = w.normalized();
  EXPECT_NEAR(v.tail(0.0), 1.0, 1e-15);
  EXPECT_NEAR(v.tail(0.7) / w.tail(0.7), 1.0 / w.tail(0.0), 1e-15);
  const auto s = w.scaled(3.0);
  EXPECT_NEAR(s.tail(0.4), 3.0 * w.tail(0.4), 1e-15);
}

TEST(Weight, TabulatedInterpolatesMonotonically) {
  std::vector<double> r, t;
  for (int i = 0; i < 20; ++i) {
    r.push_back(1.0 - std::exp2(-i / 2.0));
    t.push_back(std::pow(1.0 - r.back(), 1.5));
  }
  const auto w = tabulated_weight(r, t);
  double prev = w.tail(0.0);
  for (int i = 1; i < 400; ++i) {
    const double x = 0.9999 * i / 400.0;
    const double v = w.tail(x);
    EXPECT_LE(v, prev + 1e-15);
    prev = v;
  }
  EXPECT_NEAR(w.tail(r[7]), t[7], 1e-15);
  const double beyond = std::exp2(-12.0);
  EXPECT_TRUE(w.extrapolates_at(beyond));
  EXPECT_FALSE(w.extrapolates_at(0.5));
  EXPECT_NEAR(w.tail_c(beyond), std::pow(beyond, 1.5), 1e-12 * std::pow(beyond, 1.5));
}

TEST(Weight, TabulatedValidation) {
  EXPECT_THROW(tabulated_weight({0, 0.1, 0.2}, {1, 0.9, 0.8}), ValidationError);
  EXPECT_THROW(tabulated_weight({0, 0.2, 0.1, 0.3}, {1, 0.9, 0.8, 0.7}), ValidationError);
  EXPECT_THROW(tabulated_weight({0, 0.1, 0.2, 0.3}, {1, 0.9, 0.95, 0.7}), ValidationError);
  EXPECT_THROW(tabulated_weight({0, 0.1, 0.2, 0.3}, {1, 0.9, 0.8, -0.1}), ValidationError);
  EXPECT_THROW(tabulated_weight({0, 0.1, 0.2, 1.0}, {1, 0.9, 0.8, 0.7}), ValidationError);
}

TEST(Weight, TabulatedCsv) {
  const std::string path = ::testing::TempDir() + "tab.csv";
  {
    std::ofstream out(path);
    out << "r, tail\n0,1\n0.5,0.5\n0.75,0.25\n0.875,0.125\n";
  }
  const auto w = tabulated_weight_from_csv(path);
  EXPECT_NEAR(w.tail(0.5), 0.5, 1e-15);
  EXPECT_EQ(w.params().file, path);
  {
    std::ofstream out(path);
    out << "radius,tail\n0,1\n";
  }
  EXPECT_THROW(tabulated_weight_from_csv(path), ValidationError);
  std::remove(path.c_str());
}
