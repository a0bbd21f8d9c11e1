#pragma once

// Dyadic radii of a normalized tail, the lacunary sum comparable to 1/tail,
// and the sparse series with bounded weighted Bloch-type norm whose
// coefficient sums diverge.

#include <cstdint>
#include <string>
#include <vector>

#include "fracbloch/grid.hpp"
#include "fracbloch/moments.hpp"
#include "fracbloch/norms.hpp"
#include "fracbloch/series.hpp"
#include "fracbloch/weight.hpp"

namespace fracbloch {

inline constexpr int kMaxLacunaryDepth = 40;

struct LacunaryData {
  std::string weight;
  double scale = 1.0;                // factor applied to make tail(0) = 1
  std::vector<double> complements;   // 1 - r_n
  std::vector<double> radii;         // r_n
  std::vector<std::uint64_t> exponents;  // M_n = floor(1 / (1 - r_n))
  int nmax = 0;
};

/// r_n = smallest radius with normalized tail(r_n) <= 2^{-n}, n = 0..nmax, by
/// bisection on the complement down to adjacent doubles. The weight is
/// normalized internally. Throws DepthError when the tail at 1 - 1e-14 is still
/// above 2^{-nmax}.
LacunaryData dyadic_radii(const RadialWeight& w, int nmax);

struct LacunarySum {
  double value = 0.0;  // 1 + sum_{n<=nmax} 2^n r^{M_n}
  double tail_estimate = 0.0;
};

/// The truncated lacunary sum at r = 1 - delta with an estimate of the
/// omitted terms, continuing M_n geometrically. Throws DepthError when the
/// estimate exceeds 1% of the sum.
LacunarySum lacunary_sum_c(const LacunaryData& d, double delta);
double lacunary_sum(const LacunaryData& d, double r);

/// lacunary_sum(r) * tail(r) over the grid points where the sum is resolved.
RatioBand lacunary_band(const LacunaryData& d, const RadialWeight& normalized, const RadialGrid& grid);

struct Counterexample {
  SparseSeries f;  // mu_1 + sum_n mu_{2 M_n + 1} 2^n z^{M_n}
  bool merged_duplicates = false;
};

/// `moments` must belong to the normalized weight.
Counterexample counterexample_function(const MomentTable& moments, const LacunaryData& d);

struct CounterexampleReport {
  std::string weight;
  double scale = 1.0;
  int nmax = 0;
  int nmax_extended = 0;
  double norm = 0.0;           // sup of tail * D^mu f at depth nmax
  double norm_extended = 0.0;  // the same at depth nmax_extended
  double norm_drift = 0.0;
  std::vector<double> partial_sums;  // S_0..S_nmax
  bool sums_increasing = false;
  double growth = 0.0;  // S_nmax / S_0
  bool merged_duplicates = false;
  std::vector<double> radii;
  std::vector<double> max_modulus;  // M_inf(r, f) = f(r)
  std::vector<std::uint64_t> exponents;
};

/// Builds the function at depths nmax and nmax + extra and reports norms,
/// coefficient sums and the radial profile.
CounterexampleReport counterexample_report(const RadialWeight& w, int nmax, const RadialGrid& grid, int extra = 5);

}  // namespace fracbloch
