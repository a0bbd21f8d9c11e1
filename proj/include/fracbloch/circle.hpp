#pragma once

// Values of a polynomial on circles |z| = r and the angular means built from
// them. The fast path is an FFT per circle with an OpenMP sweep over radii;
// the reference path is serial Horner evaluation at every angle.

#include <cstddef>
#include <vector>

#include "fracbloch/series.hpp"

namespace fracbloch {

/// max(4096, 8 * degree)
std::size_t angular_resolution(std::size_t degree);

/// f(r e^{2 pi i j / Q}) for j = 0..Q-1 with r = 1 - delta, delta in [0, 1].
std::vector<cplx> circle_values(const TaylorPoly& f, double delta, std::size_t Q);
std::vector<cplx> circle_values_reference(const TaylorPoly& f, double delta, std::size_t Q);

struct CircleMeans {
  double m1 = 0.0;    // (1/Q) sum |f|
  double m2 = 0.0;    // sqrt((1/Q) sum |f|^2)
  double minf = 0.0;  // max over the sampled angles
  std::size_t argmax = 0;
};

CircleMeans circle_means(const std::vector<cplx>& values);

/// Means on every circle 1 - delta for delta in `complements`.
std::vector<CircleMeans> circle_sweep(const TaylorPoly& f, const std::vector<double>& complements,
                                      std::size_t Q);
std::vector<CircleMeans> circle_sweep_reference(const TaylorPoly& f, const std::vector<double>& complements,
                                                std::size_t Q);

}  // namespace fracbloch
