#pragma once

// Integral means, the Bloch norm, the weighted Bloch-type norm built on the
// fractional derivative, and near-boundary decay profiles.

#include <cstdint>
#include <functional>
#include <vector>

#include "fracbloch/circle.hpp"
#include "fracbloch/grid.hpp"
#include "fracbloch/moments.hpp"
#include "fracbloch/series.hpp"
#include "fracbloch/weight.hpp"

namespace fracbloch {

/// M_p(r, f) by the trapezoid rule on angular_resolution(deg f) angles;
/// p = inf gives the sampled maximum. Throws DomainError for p <= 0.
double integral_mean(const TaylorPoly& f, double r, double p);
/// The same with r = 1 - delta.
double integral_mean_c(const TaylorPoly& f, double delta, double p);

struct NormProfile {
  std::vector<double> radii;
  std::vector<double> values;  // factor(r) * M_inf(r, g) per grid radius
  double sup = 0.0;            // after local refinement, >= every value
  double argmax_radius = 0.0;
  std::vector<double> decay_tail;  // values at the last five radii
  bool decaying = false;           // decay_tail nonincreasing
};

struct NormOptions {
  bool refine = true;          // maximize locally in r and in angle around the best grid point
  std::size_t resolution = 0;  // angular samples; 0 means angular_resolution(deg)
};

/// Profile of factor(delta) * M_inf(1 - delta, g) over the grid.
NormProfile sup_profile(const TaylorPoly& g, const std::function<double(double)>& factor, const RadialGrid& grid,
                        const NormOptions& opts = {});

/// Profile of (1 - r) M_inf(r, f').
NormProfile bloch_profile(const TaylorPoly& f, const RadialGrid& grid, const NormOptions& opts = {});
/// |f(0)| + sup (1 - r) M_inf(r, f')
double bloch_norm(const TaylorPoly& f, const RadialGrid& grid, const NormOptions& opts = {});

/// Profile of tail(r) M_inf(r, D^mu f); the sup is the norm.
NormProfile bmu_norm(const TaylorPoly& f, const MomentTable& mu, const RadialGrid& grid, const NormOptions& opts = {});
NormProfile bmu_norm(const TaylorPoly& f, const RadialWeight& mu, const RadialGrid& grid,
                     const NormOptions& opts = {});
/// For series with nonnegative coefficients, where M_inf(r, g) = g(r).
NormProfile bmu_norm(const SparseSeries& f, const MomentTable& mu, const RadialGrid& grid);

/// Per-radius values near the boundary: the Bloch factor when `mu` is null,
/// the weighted one otherwise.
NormProfile little_decay_profile(const TaylorPoly& f, const MomentTable* mu, const RadialGrid& grid);

/// f_rho(z) = f(rho z)
TaylorPoly dilate(const TaylorPoly& f, double rho);

/// Random polynomials with degrees uniform in [1, max_degree] and coefficients
/// whose real and imaginary parts are independent standard normals. The first
/// k members do not depend on `count`.
std::vector<TaylorPoly> random_corpus(std::uint64_t seed, std::size_t count, std::size_t max_degree = 512);

inline constexpr std::uint64_t kCorpusSeed = 20240601;
inline constexpr std::size_t kCorpusSize = 200;

}  // namespace fracbloch
