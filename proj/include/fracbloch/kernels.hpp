#pragma once

// Reproducing kernels of weighted Bergman spaces with radial weights, their
// fractional derivatives, and the sequence-multiplier checks built on them.
// Kernel points a lie on the positive real axis.

#include <cstddef>
#include <vector>

#include "fracbloch/grid.hpp"
#include "fracbloch/moments.hpp"
#include "fracbloch/series.hpp"

namespace fracbloch {

inline constexpr std::size_t kDefaultKernelTruncation = 8192;

/// Coefficients a^n / (2 omega_{2n+1}), n = 0..N.
TaylorPoly kernel_coeffs(const MomentTable& omega, double a_mod, std::size_t N);

/// Coefficients a^n / (2 omega_{2n+1} mu_{2n+1}), n = 0..N.
TaylorPoly frac_kernel_coeffs(const MomentTable& omega, const MomentTable& mu, double a_mod, std::size_t N);

/// Ratio-test estimate of the dropped tail sum_{n>N} |c_n| r^n relative to the
/// retained sum sum_{n<=N} |c_n| r^n. Infinite when the terms stop decaying.
double truncation_fraction(const TaylorPoly& g, double r);

/// Throws TruncationError, with a suggested truncation, when
/// truncation_fraction(g, r) >= tol.
void require_admissible(const TaylorPoly& g, double r, double tol = 1e-8);

/// M_1(r, D^mu B^omega_a) with the kernel truncated at N.
double m1_frac_kernel(const MomentTable& omega, const MomentTable& mu, double a_mod, double r, std::size_t N);

/// 1 + integral_0^s dt / (tail_omega(t) tail_mu(t) (1 - t)).
double kernel_comparison(const RadialWeight& omega, const RadialWeight& mu, double s);

struct KernelPoint {
  double r = 0.0;
  double a_mod = 0.0;
  double m1 = 0.0;
  double comparison = 0.0;
  double ratio = 0.0;
  double truncation = 0.0;  // truncation_fraction at this r
  std::size_t truncation_used = 0;
};

struct KernelBand {
  RatioBand band;
  std::vector<KernelPoint> points;
  double max_truncation = 0.0;
};

/// Band of m1_frac_kernel / kernel_comparison(r * a_mod) over (r, a_mod) pairs.
/// Each point starts at truncation N and doubles it until the truncated tail
/// fraction is below `admissible_tail`; TruncationError past `max_truncation`.
KernelBand kernel_ratio_band(const MomentTable& omega, const MomentTable& mu,
                             const std::vector<std::pair<double, double>>& pairs, std::size_t N,
                             double admissible_tail = 1e-8, std::size_t max_truncation = std::size_t{1} << 20);

/// |integral_D f(zeta) D^mu(B^omega_zeta)(z) omega(zeta) dA(zeta) - D^mu f(z)|
/// with 256 radial Gauss-Legendre nodes and an angular trapezoid rule.
/// omega must have a density.
double repro_identity_residual(const TaylorPoly& f, const MomentTable& omega, const MomentTable& mu, cplx z,
                               std::size_t N);

/// |integral_D f(zeta) conj(B^omega_z(zeta)) omega(zeta) dA(zeta) - f(z)|
double kernel_reproduction_residual(const TaylorPoly& f, const MomentTable& omega, cplx z, std::size_t N);

/// lambda_n = mu_{2n+1}^2 / (mu tail)_{2n+1}, n = 0..N.
std::vector<double> lambda_sequence(const MomentTable& mu, std::size_t N);

struct MultiplierProfile {
  std::vector<double> radii;
  std::vector<double> values;  // (1 - r) M_1(r, lambda^[1])
  double sup = 0.0;
  double argmax_radius = 0.0;
  std::size_t skipped = 0;  // grid points beyond the admissible radius
};

/// (1 - r) M_1(r, sum (n+1) lambda_n z^n) over the grid points with
/// r^N N^2 < 1e-8. With `restrict_to_admissible` false, an inadmissible grid
/// point raises TruncationError instead of being skipped.
MultiplierProfile multiplier_condition(const std::vector<double>& lambda, const RadialGrid& grid,
                                       bool restrict_to_admissible = true);

/// Band of (mu tail)_{2x+1} / mu_{2x+1}^2 over xs.
RatioBand mixed_moment_equiv(const MomentTable& mu, const std::vector<double>& xs);

}  // namespace fracbloch
