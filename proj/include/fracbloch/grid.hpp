#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace fracbloch {

/// Radii in [0, 1) stored through their complements delta = 1 - r, so that
/// points within 1e-8 of the boundary keep full relative precision.
class RadialGrid {
 public:
  RadialGrid() = default;
  explicit RadialGrid(std::vector<double> complements);

  static RadialGrid from_radii(const std::vector<double>& radii);

  /// Geometric grid r_j = 1 - 2^{-j/steps_per_octave}, j = 0..last (r_0 = 0).
  static RadialGrid geometric(int last, int steps_per_octave = 4);

  std::size_t size() const noexcept { return delta_.size(); }
  bool empty() const noexcept { return delta_.empty(); }
  double complement(std::size_t i) const { return delta_[i]; }
  double radius(std::size_t i) const { return 1.0 - delta_[i]; }
  const std::vector<double>& complements() const noexcept { return delta_; }
  std::vector<double> radii() const;

  /// Keeps only the points with complement >= min_complement.
  RadialGrid truncated(double min_complement) const;

 private:
  std::vector<double> delta_;  // strictly decreasing
};

/// Geometric grid depth reaching 1 - r ~ 1e-8 at four points per octave.
inline constexpr int kDefaultGridDepth = 106;

/// x_j = 2^{j/steps}, j = 0..last, built with ldexp so that multiplying a
/// ladder point by a power of two lands exactly on another ladder point.
std::vector<double> exponent_ladder(int last, int steps_per_octave = 4);

/// The base / deep / fine resolutions used for refinement-stability checks.
struct ResolutionLadder {
  RadialGrid base;  // half depth, 4 steps per octave
  RadialGrid deep;  // full depth, 4 steps per octave
  RadialGrid fine;  // full depth, 8 steps per octave
  static ResolutionLadder make(int depth = kDefaultGridDepth);
};

/// Empirical record of a two-sided comparability over a grid.
struct RatioBand {
  std::string label;
  std::vector<double> abscissae;
  std::vector<double> ratios;
  double min = 0.0;
  double max = 0.0;
  std::size_t argmin = 0;
  std::size_t argmax = 0;
  bool stable = false;
  double drift = 0.0;  // relative change of the band edges under refinement

  bool bounded() const { return std::isfinite(max) && min > 0.0; }
  double spread() const { return max / min; }
};

/// Fills min/max/argmin/argmax from `ratios`, ignoring non-finite entries for
/// min and letting +inf propagate into max.
RatioBand make_band(std::string label, std::vector<double> abscissae, std::vector<double> ratios);

/// Marks `fine` stable when both band edges moved less than `tolerance`
/// (relative) against `coarse`; records the drift.
void assess_stability(RatioBand& fine, const RatioBand& coarse, double tolerance = 0.10);

/// max(|a-b|/|a|) style relative change, inf when a is zero or either is not finite.
double relative_change(double from, double to);

}  // namespace fracbloch
