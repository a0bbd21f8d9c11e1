#pragma once

// Truncated power series and the coefficient multipliers acting on them.

#include <complex>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "fracbloch/moments.hpp"
#include "fracbloch/weight.hpp"

namespace fracbloch {

using cplx = std::complex<double>;

/// f(z) = sum_{n=0}^{N} c_n z^n with complex coefficients.
class TaylorPoly {
 public:
  TaylorPoly() : c_(1, cplx{}) {}
  explicit TaylorPoly(std::vector<cplx> coeffs);

  static TaylorPoly monomial(std::size_t n, cplx value = 1.0);
  static TaylorPoly constant(cplx value) { return TaylorPoly(std::vector<cplx>{value}); }

  std::size_t degree() const noexcept { return c_.size() - 1; }
  cplx operator[](std::size_t n) const { return n < c_.size() ? c_[n] : cplx{}; }
  const std::vector<cplx>& coeffs() const noexcept { return c_; }

  /// Horner evaluation.
  cplx operator()(cplx z) const;
  TaylorPoly derivative() const;

  /// true when every coefficient is real and >= 0
  bool nonnegative() const;

  friend TaylorPoly operator+(const TaylorPoly& a, const TaylorPoly& b);
  friend TaylorPoly operator-(const TaylorPoly& a, const TaylorPoly& b);
  friend TaylorPoly operator*(cplx s, const TaylorPoly& a);

 private:
  std::vector<cplx> c_;
};

/// Sparse series sum_k c_k z^{e_k} with strictly increasing exponents; used
/// for lacunary functions whose degree is far beyond any dense truncation.
class SparseSeries {
 public:
  SparseSeries() = default;
  /// Terms with equal exponents are summed.
  explicit SparseSeries(std::vector<std::pair<std::uint64_t, cplx>> terms);

  const std::vector<std::pair<std::uint64_t, cplx>>& terms() const noexcept { return terms_; }
  std::uint64_t degree() const { return terms_.empty() ? 0 : terms_.back().first; }
  bool nonnegative() const;

  cplx operator()(cplx z) const;
  /// Value at the positive real point r = 1 - delta, computed from the
  /// complement so that radii within 1e-12 of the circle keep their precision.
  double value_at_complement(double delta) const;

  TaylorPoly to_dense() const;

 private:
  std::vector<std::pair<std::uint64_t, cplx>> terms_;
};

/// Coefficient n multiplied by 1 / mu_{2n+1}.
TaylorPoly frac_deriv(const TaylorPoly& f, const MomentTable& moments);
TaylorPoly frac_deriv(const TaylorPoly& f, const RadialWeight& w);
SparseSeries frac_deriv(const SparseSeries& f, const MomentTable& moments);

/// 2 Gamma(n+beta+1) / (Gamma(beta+1) Gamma(n+1)) for n = 0..N.
std::vector<double> classical_multipliers(double beta, std::size_t N);
TaylorPoly classical_frac_deriv(const TaylorPoly& f, double beta);

/// Coefficient n multiplied by (n+1)^beta.
TaylorPoly multiplier_transform(const TaylorPoly& f, double beta);

/// Coefficientwise product; degree is the smaller of the two.
TaylorPoly hadamard(const TaylorPoly& W, const TaylorPoly& f);

/// Psi(t) = phi(2-t) / (phi(2-t) + phi(t-1)) with phi(s) = exp(-1/s) for s > 0:
/// identically 1 on (-inf, 1], 0 on [2, inf), decreasing in between.
class SmoothCutoff {
 public:
  static double phi(double s);
  double Psi(double t) const;
  /// psi(t) = Psi(t/2) - Psi(t), supported in [1, 4]
  double psi(double t) const;
  /// m-th derivative (m <= 4) of Psi or psi by Richardson-extrapolated central differences.
  double Psi_derivative(double t, int m) const;
  double psi_derivative(double t, int m) const;
};

/// m-th derivative of f at t (m <= 4), central differences with one Richardson step.
double numeric_derivative(const std::function<double(double)>& f, double t, int m);

/// V_0 = 1 + z; V_n(z) = sum_{k=2^{n-1}}^{2^{n+1}-1} psi(k / 2^{n-1}) z^k.
TaylorPoly cesaro_block(int n, const SmoothCutoff& cutoff = {});

/// Number of blocks V_0..V_{n} needed to cover degree N.
int cesaro_block_count(std::size_t N);

/// A compactly supported profile Phi on [lo, hi].
struct Profile {
  std::function<double(double)> f;
  double lo = 0.0;
  double hi = 0.0;
};

/// W_n^Phi(z) = sum_k Phi(k/n) z^k over the support of Phi.
TaylorPoly w_phi(double n, const Profile& Phi);

/// max|Phi| + m max|Phi^(m)| by sampling the support with step 1e-4.
double a_phi_m(const Profile& Phi, int m);

/// The bump psi on [1, 4].
Profile psi_profile(const SmoothCutoff& cutoff = {});

}  // namespace fracbloch
