#include "fracbloch/moments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include <boost/math/tools/minima.hpp>

#include "fracbloch/errors.hpp"
#include "parallel.hpp"

namespace fracbloch {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_exponent(double x) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("moment exponent must be finite and >= 0");
}

// log of s^{x-1} at s = 1 - e^{-u}
double log_power(double x, double u) {
  if (x == 1.0) return 0.0;
  return (x - 1.0) * std::log1p(-std::exp(-u));
}

// log of (x/p) integral_0^1 s^{x-1} tail(s)^p ds for x >= 1
double log_tail_integral(const RadialWeight& w, double x, int p, const QuadratureOptions& opts) {
  auto g = [&](double u) { return log_power(x, u) + p * w.log_tail_u(u) - u; };
  // The integrand peaks at some u <= log x + 1; locate it so the quadrature
  // runs on values of order one.
  const double top = std::log(std::max(x, 1.0)) + 1.0;
  double shift = kNegInf;
  for (int i = 1; i <= 16; ++i) {
    const double v = g(top * i / 16.0);
    if (std::isfinite(v)) shift = std::max(shift, v);
  }
  const auto best = boost::math::tools::brent_find_minima(
      [&](double u) {
        const double v = g(u);
        return std::isfinite(v) ? -v : std::numeric_limits<double>::max();
      },
      top / 64.0, top, 30);
  double peak = top;
  for (int i = 1; i <= 16; ++i)
    if (g(top * i / 16.0) >= shift) peak = top * i / 16.0;
  if (std::isfinite(best.second) && -best.second >= shift) {
    shift = -best.second;
    peak = best.first;
  }
  if (!std::isfinite(shift)) throw NumericError("moment integrand vanishes on all probe points", 0);
  // peak width from the curvature of the log integrand, refined a few times
  double width = 1.0;
  for (int i = 0; i < 4; ++i) {
    const double h = std::min(width, 0.5 * std::max(peak, 1e-3));
    const double drop = shift - 0.5 * (g(peak - h) + g(peak + h));
    if (!(drop > 0.0) || !std::isfinite(drop)) break;
    width = std::clamp(h / std::sqrt(2.0 * drop), 1e-9, 1.0);
  }
  auto f = [&](double u) {
    const double v = g(u);
    return v == kNegInf ? 0.0 : std::exp(v - shift);
  };
  // Rounding in the large terms of the log integrand limits the attainable
  // relative accuracy.
  const double magnitude = std::abs(log_power(x, peak)) + std::abs(p * w.log_tail_u(peak)) + peak;
  QuadratureOptions local = opts;
  local.rel_tol = std::max(opts.rel_tol, 64.0 * std::numeric_limits<double>::epsilon() * magnitude);
  const auto right = integrate_halfline(f, peak, width, local);
  double left = 0.0;
  if (peak > 0.0) {
    auto mirrored = [&](double v) { return v >= peak ? 0.0 : f(peak - v); };
    left = integrate_halfline(mirrored, 0.0, std::min(width, peak), local).value;
  }
  const double value = left + right.value;
  if (!(value > 0.0) || !std::isfinite(value))
    throw NumericError("moment quadrature returned a non-positive value", right.panels);
  return std::log(x / p) + shift + std::log(value);
}

// Same quantity for 0 < x < 1. On [0, 1/2] the substitution v = s^x absorbs
// the singular factor x s^{x-1}; the outer half is done in u as above.
double log_tail_integral_small(const RadialWeight& w, double x, int p, const QuadratureOptions& opts) {
  auto inner = [&](double v) {
    const double delta = -std::expm1(std::log(v) / x);
    return std::pow(w.tail_c(delta), p);
  };
  const double head = integrate(inner, 0.0, std::exp2(-x), opts).value / p;
  auto outer = [&](double u) {
    return std::exp(log_power(x, u) + p * w.log_tail_u(u) - u);
  };
  const double rest = (x / p) * integrate_halfline(outer, std::log(2.0), 1.0, opts).value;
  const double value = head + rest;
  if (!(value > 0.0)) throw NumericError("moment quadrature returned a non-positive value", 0);
  return std::log(value);
}

double log_tail_form(const RadialWeight& w, double x, int p, const QuadratureOptions& opts) {
  check_exponent(x);
  if (x == 0.0) return p * std::log(w.tail_c(1.0)) - std::log(static_cast<double>(p));
  if (x < 1.0) return log_tail_integral_small(w, x, p, opts);
  return log_tail_integral(w, x, p, opts);
}

std::uint64_t key_of(double x) { return std::bit_cast<std::uint64_t>(x); }

}  // namespace

double log_moment(const RadialWeight& w, double x, const QuadratureOptions& opts) {
  check_exponent(x);
  if (auto rule = w.moment_rule(x)) return std::log(*rule);
  return log_tail_form(w, x, 1, opts);
}

double moment(const RadialWeight& w, double x, const QuadratureOptions& opts) {
  check_exponent(x);
  if (auto rule = w.moment_rule(x)) return *rule;
  return std::exp(log_tail_form(w, x, 1, opts));
}

double moment_tail_form(const RadialWeight& w, double x, const QuadratureOptions& opts) {
  return std::exp(log_tail_form(w, x, 1, opts));
}

double moment_density_form(const RadialWeight& w, double x, const QuadratureOptions& opts) {
  check_exponent(x);
  if (!w.has_density()) throw DomainError("weight '" + w.name() + "' has no density");
  auto f = [&](double u) {
    const double d = w.density_weighted(u);
    if (x == 0.0 || d == 0.0) return d;
    return std::exp(x * std::log1p(-std::exp(-u))) * d;
  };
  return integrate_halfline(f, 0.0, 1.0 / 64.0, opts).value;
}

double log_mixed_moment(const RadialWeight& w, double x, const QuadratureOptions& opts) {
  if (!(x > 0.0)) throw DomainError("mixed moment exponent must be > 0");
  return log_tail_form(w, x, 2, opts);
}

double mixed_moment(const RadialWeight& w, double x, const QuadratureOptions& opts) {
  return std::exp(log_mixed_moment(w, x, opts));
}

double mixed_moment_density_form(const RadialWeight& w, double x, const QuadratureOptions& opts) {
  check_exponent(x);
  if (!w.has_density()) throw DomainError("weight '" + w.name() + "' has no density");
  auto f = [&](double u) {
    const double d = w.density_weighted(u);
    if (d == 0.0) return 0.0;
    const double s_pow = x == 0.0 ? 1.0 : std::exp(x * std::log1p(-std::exp(-u)));
    return s_pow * d * w.tail_u(u);
  };
  return integrate_halfline(f, 0.0, 1.0 / 64.0, opts).value;
}

MomentTable::MomentTable(RadialWeight w, QuadratureOptions opts) : weight_(std::move(w)), opts_(opts) {}

double MomentTable::lookup(Kind kind, double x) const {
  auto& map = kind == Kind::log_moment ? log_moments_ : log_mixed_;
  const auto key = key_of(x);
  {
    std::lock_guard lock(mutex_);
    if (auto it = map.find(key); it != map.end()) return it->second;
  }
  const double v = kind == Kind::log_moment ? fracbloch::log_moment(weight_, x, opts_)
                                            : fracbloch::log_mixed_moment(weight_, x, opts_);
  std::lock_guard lock(mutex_);
  return map.emplace(key, v).first->second;
}

double MomentTable::moment(double x) const { return std::exp(lookup(Kind::log_moment, x)); }
double MomentTable::log_moment(double x) const { return lookup(Kind::log_moment, x); }
double MomentTable::mixed(double x) const { return std::exp(lookup(Kind::log_mixed, x)); }
double MomentTable::log_mixed(double x) const { return lookup(Kind::log_mixed, x); }

std::vector<double> MomentTable::log_odd_moments(std::size_t n_max) const {
  std::vector<double> out(n_max + 1);
  const auto count = static_cast<std::int64_t>(n_max + 1);
  detail::ExceptionRelay relay;
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t n = 0; n < count; ++n) relay.run([&] { out[n] = log_moment(2.0 * static_cast<double>(n) + 1.0); });
  relay.rethrow();
  return out;
}

std::vector<double> MomentTable::odd_moments(std::size_t n_max) const {
  auto out = log_odd_moments(n_max);
  for (double& v : out) v = std::exp(v);
  return out;
}

std::size_t MomentTable::cached() const {
  std::lock_guard lock(mutex_);
  return log_moments_.size() + log_mixed_.size();
}

}  // namespace fracbloch
