#pragma once

// Adaptive Gauss-Kronrod quadrature on finite intervals and on half-lines.
//
// Half-line integrals are covered by panels whose widths double, each panel
// refined adaptively; the sweep stops once two consecutive panels change the
// running total by less than the relative tolerance.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "fracbloch/errors.hpp"

namespace fracbloch {

struct QuadratureOptions {
  double rel_tol = 1e-12;
  double abs_tol = 0.0;
  std::size_t max_evals = std::size_t{1} << 24;
  int initial_subdivisions = 1;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t evals = 0;
  std::size_t panels = 0;
};

namespace detail {

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
inline constexpr std::array<double, 11> kKronrodNodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

inline constexpr std::array<double, 11> kKronrodWeights = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208745359993, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

// Gauss weights for the odd-indexed Kronrod nodes.
inline constexpr std::array<double, 5> kGaussWeights = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

template <class F>
Segment gauss_kronrod_21(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[10];
  double gauss = 0.0;
  double abs_sum = std::abs(kronrod);
  std::array<double, 21> values{};
  values[20] = fc;
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    values[2 * j] = f1;
    values[2 * j + 1] = f2;
    kronrod += kKronrodWeights[j] * (f1 + f2);
    abs_sum += kKronrodWeights[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * (f1 + f2);
  }
  const double mean = 0.5 * kronrod;
  double asc = kKronrodWeights[10] * std::abs(fc - mean);
  for (int j = 0; j < 10; ++j)
    asc += kKronrodWeights[j] * (std::abs(values[2 * j] - mean) + std::abs(values[2 * j + 1] - mean));

  const double result = kronrod * half;
  double err = std::abs((kronrod - gauss) * half);
  asc *= std::abs(half);
  abs_sum *= std::abs(half);
  if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * abs_sum;
  if (abs_sum > std::numeric_limits<double>::min() / (50.0 * std::numeric_limits<double>::epsilon()))
    err = std::max(err, roundoff);
  return {a, b, result, err};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod integration of f over [a, b].
/// `abs_floor` is an extra absolute tolerance, used by callers that know the
/// scale of a larger enclosing integral.
template <class F>
QuadratureResult integrate(F&& f, double a, double b, const QuadratureOptions& opts = {},
                           double abs_floor = 0.0) {
  QuadratureResult out;
  if (a == b) return out;
  const int pieces = std::max(1, opts.initial_subdivisions);
  std::vector<detail::Segment> heap;
  heap.reserve(64);
  double total = 0.0, total_err = 0.0;
  for (int i = 0; i < pieces; ++i) {
    const double lo = a + (b - a) * i / pieces;
    const double hi = (i + 1 == pieces) ? b : a + (b - a) * (i + 1) / pieces;
    heap.push_back(detail::gauss_kronrod_21(f, lo, hi));
    total += heap.back().value;
    total_err += heap.back().error;
    out.evals += 21;
  }
  std::make_heap(heap.begin(), heap.end());
  const double floor = std::max(opts.abs_tol, abs_floor);
  while (true) {
    if (!std::isfinite(total)) throw NumericError("non-finite integrand value", heap.size());
    if (total_err <= std::max(floor, opts.rel_tol * std::abs(total))) break;
    if (out.evals + 42 > opts.max_evals)
      throw NumericError("quadrature evaluation budget exhausted", heap.size());
    std::pop_heap(heap.begin(), heap.end());
    const detail::Segment worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // interval cannot be split further; accept its estimate
      heap.push_back({worst.a, worst.b, worst.value, 0.0});
      std::push_heap(heap.begin(), heap.end());
      total_err -= worst.error;
      continue;
    }
    const auto left = detail::gauss_kronrod_21(f, worst.a, mid);
    const auto right = detail::gauss_kronrod_21(f, mid, worst.b);
    out.evals += 42;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end());
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end());
  }
  // re-sum to shed accumulated cancellation in the running total
  total = 0.0;
  total_err = 0.0;
  for (const auto& s : heap) {
    total += s.value;
    total_err += s.error;
  }
  out.value = total;
  out.error = total_err;
  out.panels = heap.size();
  return out;
}

/// Integrates f over [a, inf) with panels [a + w(2^k - 1), a + w(2^{k+1} - 1)].
/// Stops when two consecutive panels each change the total by at most
/// rel_tol relative, or when the panel budget is spent.
template <class F>
QuadratureResult integrate_halfline(F&& f, double a, double first_width,
                                    const QuadratureOptions& opts = {}, int max_panels = 80) {
  QuadratureResult out;
  double left = a;
  double width = first_width;
  int quiet = 0;
  for (int k = 0; k < max_panels; ++k) {
    const double right = left + width;
    QuadratureOptions panel_opts = opts;
    panel_opts.max_evals = opts.max_evals > out.evals ? opts.max_evals - out.evals : 0;
    const auto panel = integrate(f, left, right, panel_opts, opts.rel_tol * std::abs(out.value));
    out.value += panel.value;
    out.error += panel.error;
    out.evals += panel.evals;
    out.panels += panel.panels;
    if (!std::isfinite(out.value)) throw NumericError("non-finite half-line integral", out.panels);
    if (out.value != 0.0 && std::abs(panel.value) <= opts.rel_tol * std::abs(out.value)) {
      if (++quiet >= 2) break;
    } else {
      quiet = 0;
    }
    left = right;
    width *= 2.0;
    if (!std::isfinite(left + width)) break;
  }
  return out;
}

/// Gauss-Legendre nodes and weights on [-1, 1] (Newton iteration on P_n).
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussLegendreRule gauss_legendre(int n);

}  // namespace fracbloch
