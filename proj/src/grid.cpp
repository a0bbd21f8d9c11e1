#include "fracbloch/grid.hpp"

#include <algorithm>
#include <limits>

#include "fracbloch/errors.hpp"

namespace fracbloch {

RadialGrid::RadialGrid(std::vector<double> complements) : delta_(std::move(complements)) {
  for (std::size_t i = 0; i < delta_.size(); ++i) {
    if (!(delta_[i] > 0.0 && delta_[i] <= 1.0))
      throw DomainError("grid radius outside [0,1)");
    if (i > 0 && !(delta_[i] < delta_[i - 1]))
      throw DomainError("grid radii must be strictly increasing");
  }
}

RadialGrid RadialGrid::from_radii(const std::vector<double>& radii) {
  std::vector<double> d;
  d.reserve(radii.size());
  for (double r : radii) d.push_back(1.0 - r);
  return RadialGrid(std::move(d));
}

RadialGrid RadialGrid::geometric(int last, int steps_per_octave) {
  if (last < 0 || steps_per_octave < 1) throw ConfigError("geometric grid: bad depth");
  std::vector<double> d;
  d.reserve(static_cast<std::size_t>(last) + 1);
  for (int j = 0; j <= last; ++j) {
    const int whole = j / steps_per_octave;
    const int part = j % steps_per_octave;
    d.push_back(std::ldexp(std::exp2(-static_cast<double>(part) / steps_per_octave), -whole));
  }
  return RadialGrid(std::move(d));
}

std::vector<double> RadialGrid::radii() const {
  std::vector<double> r;
  r.reserve(delta_.size());
  for (double d : delta_) r.push_back(1.0 - d);
  return r;
}

RadialGrid RadialGrid::truncated(double min_complement) const {
  std::vector<double> d;
  for (double x : delta_)
    if (x >= min_complement) d.push_back(x);
  return RadialGrid(std::move(d));
}

std::vector<double> exponent_ladder(int last, int steps_per_octave) {
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(last) + 1);
  for (int j = 0; j <= last; ++j) {
    const int whole = j / steps_per_octave;
    const int part = j % steps_per_octave;
    xs.push_back(std::ldexp(std::exp2(static_cast<double>(part) / steps_per_octave), whole));
  }
  return xs;
}

ResolutionLadder ResolutionLadder::make(int depth) {
  return {RadialGrid::geometric(depth / 2, 4), RadialGrid::geometric(depth, 4),
          RadialGrid::geometric(2 * depth, 8)};
}

RatioBand make_band(std::string label, std::vector<double> abscissae, std::vector<double> ratios) {
  RatioBand band;
  band.label = std::move(label);
  band.abscissae = std::move(abscissae);
  band.ratios = std::move(ratios);
  band.min = std::numeric_limits<double>::infinity();
  band.max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < band.ratios.size(); ++i) {
    const double v = band.ratios[i];
    if (std::isnan(v)) continue;
    if (v < band.min) {
      band.min = v;
      band.argmin = i;
    }
    if (v > band.max) {
      band.max = v;
      band.argmax = i;
    }
  }
  return band;
}

double relative_change(double from, double to) {
  if (!std::isfinite(from) || !std::isfinite(to)) return std::numeric_limits<double>::infinity();
  if (from == to) return 0.0;
  if (from == 0.0) return std::numeric_limits<double>::infinity();
  return std::abs(to - from) / std::abs(from);
}

void assess_stability(RatioBand& fine, const RatioBand& coarse, double tolerance) {
  fine.drift = std::max(relative_change(coarse.min, fine.min), relative_change(coarse.max, fine.max));
  fine.stable = fine.drift < tolerance;
}

}  // namespace fracbloch
