#include "fracbloch/lacunary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fracbloch/errors.hpp"
#include "parallel.hpp"

namespace fracbloch {

namespace {

constexpr double kNearestBoundary = 1e-14;
constexpr double kTailShare = 0.01;

double normalized_tail(const RadialWeight& w, double delta) { return w.tail_c(delta); }

// largest delta with tail(delta) <= target; tail is nondecreasing in delta
double largest_complement_below(const RadialWeight& w, double target) {
  if (normalized_tail(w, 1.0) <= target) return 1.0;
  double hi = 1.0;  // tail(hi) > target
  double lo = 0.5;
  while (normalized_tail(w, lo) > target) {
    hi = lo;
    lo *= 0.5;
  }
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (normalized_tail(w, mid) <= target)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

}  // namespace

LacunaryData dyadic_radii(const RadialWeight& w, int nmax) {
  if (nmax < 0 || nmax > kMaxLacunaryDepth) throw ConfigError("lacunary depth must lie in 0..40");
  const RadialWeight v = w.normalized();
  const double edge = v.tail_c(kNearestBoundary);
  if (edge > std::ldexp(1.0, -nmax)) {
    const int bound = static_cast<int>(std::floor(-std::log2(edge)));
    throw DepthError("lacunary depth unreachable for " + w.name(), std::max(bound, 0));
  }
  LacunaryData d;
  d.weight = w.name();
  d.scale = v.scale() / w.scale();
  d.nmax = nmax;
  d.complements.resize(static_cast<std::size_t>(nmax) + 1);
  const auto count = static_cast<std::int64_t>(d.complements.size());
  detail::ExceptionRelay relay;
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t n = 0; n < count; ++n) relay.run([&] {
    d.complements[n] = largest_complement_below(v, std::ldexp(1.0, -static_cast<int>(n)));
  });
  relay.rethrow();
  for (double c : d.complements) {
    d.radii.push_back(1.0 - c);
    d.exponents.push_back(static_cast<std::uint64_t>(std::floor(1.0 / c)));
  }
  return d;
}

LacunarySum lacunary_sum_c(const LacunaryData& d, double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("lacunary sum radius outside [0, 1)");
  const double log_r = std::log1p(-delta);
  LacunarySum out;
  out.value = 1.0;
  for (int n = 0; n <= d.nmax; ++n)
    out.value += std::exp(n * std::log(2.0) + static_cast<double>(d.exponents[n]) * log_r);
  if (d.nmax >= 1 && delta < 1.0) {
    const double growth = std::max(2.0, static_cast<double>(d.exponents[d.nmax]) /
                                            static_cast<double>(d.exponents[d.nmax - 1]));
    double m = static_cast<double>(d.exponents[d.nmax]);
    for (int n = d.nmax + 1; n < d.nmax + 200; ++n) {
      m *= growth;
      const double term = std::exp(n * std::log(2.0) + m * log_r);
      out.tail_estimate += term;
      if (term < 1e-18 * out.value) break;
    }
  } else if (delta == 1.0) {
    out.tail_estimate = 0.0;
  }
  if (out.tail_estimate > kTailShare * out.value)
    throw DepthError("lacunary sum not resolved at this radius", d.nmax + 5);
  return out;
}

double lacunary_sum(const LacunaryData& d, double r) {
  if (!(r >= 0.0 && r < 1.0)) throw DomainError("lacunary sum radius outside [0, 1)");
  return lacunary_sum_c(d, 1.0 - r).value;
}

RatioBand lacunary_band(const LacunaryData& d, const RadialWeight& normalized, const RadialGrid& grid) {
  std::vector<double> radii, ratios;
  for (double delta : grid.complements()) {
    try {
      const auto s = lacunary_sum_c(d, delta);
      radii.push_back(1.0 - delta);
      ratios.push_back(s.value * normalized.tail_c(delta));
    } catch (const DepthError&) {
      break;
    }
  }
  return make_band("lacunary*tail", std::move(radii), std::move(ratios));
}

Counterexample counterexample_function(const MomentTable& moments, const LacunaryData& d) {
  std::vector<std::pair<std::uint64_t, cplx>> terms;
  terms.emplace_back(0, moments.moment(1.0));
  for (int n = 0; n <= d.nmax; ++n) {
    const auto m = d.exponents[n];
    const double c = std::exp(n * std::log(2.0) + moments.log_moment(2.0 * static_cast<double>(m) + 1.0));
    terms.emplace_back(m, c);
  }
  Counterexample out;
  for (std::size_t i = 1; i < d.exponents.size(); ++i)
    if (d.exponents[i] == d.exponents[i - 1]) out.merged_duplicates = true;
  out.f = SparseSeries(std::move(terms));
  return out;
}

CounterexampleReport counterexample_report(const RadialWeight& w, int nmax, const RadialGrid& grid, int extra) {
  const RadialWeight v = w.normalized();
  const MomentTable moments(v);
  const LacunaryData deep = dyadic_radii(w, nmax + extra);
  LacunaryData shallow = deep;
  shallow.nmax = nmax;
  shallow.complements.resize(static_cast<std::size_t>(nmax) + 1);
  shallow.radii.resize(static_cast<std::size_t>(nmax) + 1);
  shallow.exponents.resize(static_cast<std::size_t>(nmax) + 1);

  const auto f = counterexample_function(moments, shallow);
  const auto f_ext = counterexample_function(moments, deep);

  CounterexampleReport rep;
  rep.weight = w.name();
  rep.scale = deep.scale;
  rep.nmax = nmax;
  rep.nmax_extended = nmax + extra;
  rep.exponents = shallow.exponents;
  rep.merged_duplicates = f.merged_duplicates || f_ext.merged_duplicates;
  rep.norm = bmu_norm(f.f, moments, grid).sup;
  rep.norm_extended = bmu_norm(f_ext.f, moments, grid).sup;
  rep.norm_drift = relative_change(rep.norm_extended, rep.norm);

  double s = moments.moment(1.0);
  for (int n = 0; n <= nmax; ++n) {
    s += std::exp(n * std::log(2.0) + moments.log_moment(2.0 * static_cast<double>(shallow.exponents[n]) + 1.0));
    rep.partial_sums.push_back(s);
  }
  rep.sums_increasing = true;
  for (std::size_t i = 1; i < rep.partial_sums.size(); ++i)
    if (!(rep.partial_sums[i] > rep.partial_sums[i - 1])) rep.sums_increasing = false;
  rep.growth = rep.partial_sums.back() / rep.partial_sums.front();

  for (double delta : grid.complements()) {
    rep.radii.push_back(1.0 - delta);
    rep.max_modulus.push_back(f.f.value_at_complement(delta));
  }
  return rep;
}

}  // namespace fracbloch
