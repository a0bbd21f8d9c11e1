#include <gtest/gtest.h>

#include <cmath>
#include <thread>

#include "fracbloch/moments.hpp"

using namespace fracbloch;

namespace {

std::vector<RadialWeight> builtins() {
  return {constant_weight(), standard_weight(0.5), standard_weight(2.0), standard_weight(3.7),
          exponential_weight(1, 1, 1), lograpid_weight(2.0)};
}

}  // namespace

TEST(Moments, ClosedFormExamples) {
  const auto c = constant_weight().without_moment_rule();
  EXPECT_NEAR(moment(c, 3.0), 0.25, 1e-15);
  EXPECT_NEAR(moment(c, 21.0), 1.0 / 22.0, 1e-15);
  EXPECT_NEAR(moment(c, 0.0), 1.0, 1e-15);
  EXPECT_NEAR(moment(standard_weight(2.0).without_moment_rule(), 3.0), 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(mixed_moment(c, 3.0), 1.0 / 20.0, 1e-15);
  for (double x : {0.5, 1.0, 7.0, 101.0, 1e4})
    EXPECT_NEAR(mixed_moment(c, x) * (x + 1) * (x + 2), 1.0, 1e-12) << x;
}

TEST(Moments, StandardOddMomentsMatchBetaOracle) {
  // beta = 2: mu_{2n+1} = 1 / ((n+1)(n+2))
  const auto w = standard_weight(2.0).without_moment_rule();
  for (int n : {0, 1, 5, 50, 500}) EXPECT_NEAR(moment(w, 2.0 * n + 1) * (n + 1.0) * (n + 2.0), 1.0, 1e-12) << n;
}

TEST(Moments, TailFormAgreesWithDensityForm) {
  for (const auto& w : builtins())
    for (double x : {1.0, 3.0, 7.0, 15.0, 31.0, 101.0}) {
      const double a = moment_tail_form(w, x);
      const double b = moment_density_form(w, x);
      EXPECT_NEAR(a / b, 1.0, 1e-8) << w.name() << " x=" << x;
    }
}

TEST(Moments, MixedMomentsAgreeWithDensityForm) {
  for (const auto& w : builtins())
    for (double x : {1.0, 7.0, 101.0}) {
      EXPECT_NEAR(mixed_moment(w, x) / mixed_moment_density_form(w, x), 1.0, 1e-8) << w.name() << " x=" << x;
      EXPECT_LE(mixed_moment(w, x), w.tail(0.0) * moment(w, x) * (1 + 1e-14));
    }
}

TEST(Moments, StrictlyDecreasingAndLowerBound) {
  for (const auto& w : builtins()) {
    double prev = moment(w, 0.5);
    for (double x = 1.0; x < 2000; x *= 1.7) {
      const double m = moment(w, x);
      EXPECT_GT(m, 0.0);
      EXPECT_LT(m, prev) << w.name() << " x=" << x;
      prev = m;
    }
    for (double eps : {0.25, 0.5, 0.81})
      for (int n = 0; n <= 200; n += 10) {
        const double bound = std::pow(eps, n + 0.5) * w.tail(std::sqrt(eps));
        EXPECT_GE(moment(w, 2.0 * n + 1), bound * (1 - 1e-12)) << w.name() << " n=" << n;
      }
  }
}

TEST(Moments, LogMomentsStayFiniteWhereMomentsUnderflow) {
  const auto w = exponential_weight(1, 1, 1);
  const double lm = log_moment(w, 1e7);
  EXPECT_TRUE(std::isfinite(lm));
  EXPECT_LT(lm, -700.0);
}

TEST(MomentTable, ConcurrentLookupsAreValueIdentical) {
  const MomentTable table(lograpid_weight(2.0));
  std::vector<double> a(64), b(64);
  std::thread t1([&] {
    for (int i = 0; i < 64; ++i) a[i] = table.log_moment(2.0 * i + 1);
  });
  std::thread t2([&] {
    for (int i = 63; i >= 0; --i) b[i] = table.log_moment(2.0 * i + 1);
  });
  t1.join();
  t2.join();
  EXPECT_EQ(a, b);
  const auto odd = table.odd_moments(63);
  for (int i = 0; i < 64; ++i) EXPECT_EQ(odd[i], std::exp(a[i]));
  EXPECT_GE(table.cached(), 64u);
}
