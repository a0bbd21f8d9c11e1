#pragma once

// Moments mu_x = integral_0^1 s^x mu(s) ds and mixed moments
// (mu mu-hat)_x = integral_0^1 s^x mu(s) tail(s) ds of a radial weight.
//
// Both are computed from the tail through integration by parts,
//     mu_x        = x     integral_0^1 s^{x-1} tail(s)   ds,
//     (mu mu^)_x  = (x/2) integral_0^1 s^{x-1} tail(s)^2 ds,
// in the variable u = -log(1 - s), where the peak of s^{x-1} near
// s = 1 - 1/x sits at u ~ log x with width O(1) for every x.

#include <cstdint>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "fracbloch/quadrature.hpp"
#include "fracbloch/weight.hpp"

namespace fracbloch {

/// mu_x, via the closed-form rule when the weight has one.
double moment(const RadialWeight& w, double x, const QuadratureOptions& opts = {});
/// log mu_x; finite even where mu_x underflows.
double log_moment(const RadialWeight& w, double x, const QuadratureOptions& opts = {});
/// mu_x from the tail by quadrature, ignoring any closed form.
double moment_tail_form(const RadialWeight& w, double x, const QuadratureOptions& opts = {});
/// mu_x = integral s^x density(s) ds by quadrature; requires a density.
double moment_density_form(const RadialWeight& w, double x, const QuadratureOptions& opts = {});

/// (mu mu-hat)_x from the tail.
double mixed_moment(const RadialWeight& w, double x, const QuadratureOptions& opts = {});
double log_mixed_moment(const RadialWeight& w, double x, const QuadratureOptions& opts = {});
/// integral s^x density(s) tail(s) ds by quadrature; requires a density.
double mixed_moment_density_form(const RadialWeight& w, double x, const QuadratureOptions& opts = {});

/// Memoized moments of one weight. Lookups and inserts are synchronized and
/// every value is computed by a deterministic schedule, so concurrent callers
/// always observe identical numbers.
class MomentTable {
 public:
  explicit MomentTable(RadialWeight w, QuadratureOptions opts = {});

  const RadialWeight& weight() const noexcept { return weight_; }
  const QuadratureOptions& options() const noexcept { return opts_; }

  double moment(double x) const;
  double log_moment(double x) const;
  double mixed(double x) const;
  double log_mixed(double x) const;

  /// mu_{2n+1} for n = 0..n_max, filled in parallel.
  std::vector<double> odd_moments(std::size_t n_max) const;
  /// log mu_{2n+1} for n = 0..n_max.
  std::vector<double> log_odd_moments(std::size_t n_max) const;

  std::size_t cached() const;

 private:
  enum class Kind : std::uint8_t { log_moment, log_mixed };
  double lookup(Kind kind, double x) const;

  RadialWeight weight_;
  QuadratureOptions opts_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<std::uint64_t, double> log_moments_;
  mutable std::unordered_map<std::uint64_t, double> log_mixed_;
};

}  // namespace fracbloch
