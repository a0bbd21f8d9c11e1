#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fracbloch/circle.hpp"
#include "fracbloch/errors.hpp"
#include "fracbloch/norms.hpp"
#include "fracbloch/series.hpp"

using namespace fracbloch;

namespace {

TaylorPoly random_poly(std::size_t degree, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<cplx> c(degree + 1);
  for (auto& v : c) {
    const double re = nd(rng);
    v = cplx(re, nd(rng));
  }
  return TaylorPoly(std::move(c));
}

double max_diff(const TaylorPoly& a, const TaylorPoly& b) {
  double d = 0.0;
  for (std::size_t n = 0; n <= std::max(a.degree(), b.degree()); ++n) d = std::max(d, std::abs(a[n] - b[n]));
  return d;
}

}  // namespace

TEST(TaylorPoly, EvaluationAndDerivative) {
  const TaylorPoly f({1.0, 2.0, 3.0});
  EXPECT_EQ(f(0.0), cplx(1.0));
  EXPECT_EQ(f(cplx(0, 1)), cplx(-2.0, 2.0));
  EXPECT_EQ(f.derivative()[1], cplx(6.0));
  EXPECT_EQ(TaylorPoly::monomial(3)(2.0), cplx(8.0));
}

TEST(FracDeriv, ConstantWeightMonomials) {
  const MomentTable one(constant_weight());
  for (std::size_t n : {0u, 1u, 7u, 300u}) {
    const auto g = frac_deriv(TaylorPoly::monomial(n), one);
    EXPECT_NEAR(g[n].real(), 2.0 * n + 2.0, 1e-12 * (2.0 * n + 2.0));
    EXPECT_EQ(g.degree(), n);
  }
  const MomentTable w(lograpid_weight(2.0));
  EXPECT_NEAR(frac_deriv(TaylorPoly::constant(1.0), w)[0].real(), 1.0 / w.moment(1.0), 1e-15);
}

TEST(FracDeriv, LinearityAndInverse) {
  const MomentTable w(exponential_weight(1, 1, 1));
  const auto f = random_poly(60, 1), g = random_poly(60, 2);
  const cplx a(0.3, -1.2), b(2.0, 0.5);
  const auto lhs = frac_deriv(a * f + b * g, w);
  const auto rhs = a * frac_deriv(f, w) + b * frac_deriv(g, w);
  for (std::size_t n = 0; n <= 60; ++n) EXPECT_LE(std::abs(lhs[n] - rhs[n]), 1e-12 * std::abs(lhs[n]) + 1e-300);
  const auto d = frac_deriv(f, w);
  for (std::size_t n = 0; n <= 60; ++n)
    EXPECT_LE(std::abs(d[n] * w.moment(2.0 * n + 1) - f[n]), 1e-13 * std::abs(f[n]));
}

TEST(ClassicalFracDeriv, GammaOracle) {
  for (double beta : {0.5, 1.0, 2.0, 3.7}) {
    const auto m = classical_multipliers(beta, 500);
    for (std::size_t n = 0; n <= 500; n += 7) {
      const double oracle = std::exp(std::log(2.0) + std::lgamma(n + beta + 1) - std::lgamma(beta + 1) -
                                     std::lgamma(n + 1.0));
      EXPECT_NEAR(m[n] / oracle, 1.0, 1e-11) << beta << " " << n;
    }
  }
  EXPECT_NEAR(classical_multipliers(2.0, 3)[3], 20.0, 1e-13);
  EXPECT_NEAR(classical_multipliers(1.0, 10)[10], 22.0, 1e-13);
  EXPECT_THROW(classical_multipliers(0.0, 3), DomainError);
}

TEST(ClassicalFracDeriv, AgreesWithStandardWeight) {
  const auto f = random_poly(500, 3);
  for (double beta : {0.5, 1.0, 2.0, 3.7}) {
    const auto a = frac_deriv(f, MomentTable(standard_weight(beta).without_moment_rule()));
    const auto b = classical_frac_deriv(f, beta);
    for (std::size_t n = 0; n <= 500; ++n) EXPECT_LE(std::abs(a[n] / b[n] - 1.0), 1e-10) << beta << " " << n;
  }
}

TEST(Multipliers, TransformAndHadamard) {
  const TaylorPoly f({1.0, 1.0});
  EXPECT_EQ(multiplier_transform(f, 1.0)[1], cplx(2.0));
  EXPECT_EQ(max_diff(multiplier_transform(f, 0.0), f), 0.0);
  const auto g = random_poly(40, 4);
  EXPECT_LT(max_diff(multiplier_transform(multiplier_transform(g, -1.0), 1.0), g), 1e-14 * 10);
  const auto h = hadamard(TaylorPoly({1.0, 1.0}), TaylorPoly({1.0, 2.0, 3.0}));
  EXPECT_EQ(h.degree(), 1u);
  EXPECT_EQ(h[1], cplx(2.0));
  EXPECT_EQ(hadamard(TaylorPoly::constant(1.0), g).degree(), 0u);
}

TEST(Multipliers, HadamardIsCircularConvolution) {
  const auto W = random_poly(12, 5), f = random_poly(9, 6);
  const auto h = hadamard(W, f);
  const int Q = 512;
  const double t = 0.7;
  cplx conv{};
  for (int j = 0; j < Q; ++j) {
    const double theta = 2 * std::numbers::pi * j / Q;
    conv += W(std::polar(1.0, t - theta)) * f(std::polar(1.0, theta));
  }
  conv /= static_cast<double>(Q);
  EXPECT_LT(std::abs(conv - h(std::polar(1.0, t))), 1e-10);
}

TEST(SmoothCutoff, ShapeAndValues) {
  const SmoothCutoff c;
  EXPECT_EQ(c.Psi(0.5), 1.0);
  EXPECT_EQ(c.Psi(3.0), 0.0);
  EXPECT_NEAR(c.Psi(1.5), 0.5, 1e-15);
  double prev = 1.0;
  for (double t = 1.0; t <= 2.0; t += 1e-3) {
    EXPECT_LE(c.Psi(t), prev);
    prev = c.Psi(t);
  }
  for (double t = -1.0; t <= 5.0; t += 1e-3) {
    EXPECT_GE(c.psi(t), 0.0);
    if (t <= 1.0 || t >= 4.0) EXPECT_EQ(c.psi(t), 0.0);
  }
  // second derivative of a smooth test function
  EXPECT_NEAR(numeric_derivative([](double x) { return std::sin(x); }, 0.4, 2), -std::sin(0.4), 1e-7);
  EXPECT_NEAR(numeric_derivative([](double x) { return std::exp(x); }, 0.1, 4), std::exp(0.1), 1e-3);
  EXPECT_THROW(numeric_derivative([](double x) { return x; }, 0.0, 5), DomainError);
}

TEST(Cesaro, BlocksAndPartition) {
  const auto V0 = cesaro_block(0);
  EXPECT_EQ(V0.degree(), 1u);
  EXPECT_EQ(V0[0], cplx(1.0));
  EXPECT_EQ(V0[1], cplx(1.0));
  const auto V1 = cesaro_block(1);
  EXPECT_EQ(V1[1], cplx(0.0));
  EXPECT_EQ(V1.degree(), 3u);
  const std::size_t top = std::size_t{1} << 14;
  std::vector<double> total(top + 1, 0.0);
  for (int n = 0; n < cesaro_block_count(top); ++n) {
    const auto V = cesaro_block(n);
    for (std::size_t k = 0; k <= std::min(top, V.degree()); ++k) total[k] += V[k].real();
  }
  for (std::size_t k = 0; k <= top; ++k) ASSERT_NEAR(total[k], 1.0, 1e-14) << k;
}

TEST(Cesaro, Reconstruction) {
  const auto f = random_poly(4096, 7);
  TaylorPoly sum;
  for (int n = 0; n < cesaro_block_count(f.degree()); ++n) sum = sum + hadamard(cesaro_block(n), f);
  EXPECT_LT(max_diff(sum, f), 1e-12);
}

TEST(Cesaro, WPhiAndAPhi) {
  const auto psi = psi_profile();
  EXPECT_LT(max_diff(w_phi(1.0, psi), cesaro_block(1)), 1e-15);
  const Profile bump{[](double t) { return t >= 1.0 && t <= 2.0 ? 1.0 : 0.0; }, 1.0, 2.0};
  const auto W = w_phi(4.0, bump);
  EXPECT_EQ(W.degree(), 8u);
  EXPECT_EQ(W[3], cplx(0.0));
  EXPECT_EQ(W[4], cplx(1.0));
  EXPECT_NEAR(a_phi_m(psi, 0), 1.0, 1e-12);
  const double a2 = a_phi_m(psi, 2);
  EXPECT_TRUE(std::isfinite(a2));
  EXPECT_NEAR(a2, 20.68, 0.05);
  EXPECT_THROW(a_phi_m(psi, 5), DomainError);
}

TEST(Cesaro, BoundedMultiplierActionOnHardySpace) {
  // ||W_n * f||_{H^1} <= C A_{psi,2} ||f||_{H^1} with one C for all n <= 10
  const auto psi = psi_profile();
  const double a2 = a_phi_m(psi, 2);
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 6; ++s) {
    const auto f = random_poly(2048, 100 + s);
    const double nf = integral_mean(f, 1.0, 1.0);
    for (int n = 1; n <= 10; ++n) {
      const double nw = integral_mean(hadamard(w_phi(std::ldexp(1.0, n - 1), psi), f), 1.0, 1.0);
      worst = std::max(worst, nw / (a2 * nf));
    }
  }
  EXPECT_LT(worst, 1.0);
}

TEST(Cesaro, BlockNormsAreComparable) {
  double lo = 1e300, hi = 0.0;
  for (int n = 2; n <= 12; ++n) {
    const double v = integral_mean(cesaro_block(n), 1.0, 1.0);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  EXPECT_LE(hi / lo, 10.0);
}

TEST(SparseSeries, MergesAndEvaluates) {
  const SparseSeries s({{5, 1.0}, {0, 2.0}, {5, 0.5}});
  ASSERT_EQ(s.terms().size(), 2u);
  EXPECT_EQ(s.terms()[1].second, cplx(1.5));
  EXPECT_NEAR(s.value_at_complement(0.5), 2.0 + 1.5 / 32.0, 1e-15);
  EXPECT_NEAR(std::abs(s(cplx(0.5)) - s.to_dense()(cplx(0.5))), 0.0, 1e-15);
}
