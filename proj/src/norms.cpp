#include "fracbloch/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <boost/math/tools/minima.hpp>

#include "fracbloch/errors.hpp"
#include "parallel.hpp"

namespace fracbloch {

namespace {

constexpr int kBrentBits = 40;
constexpr int kAngularCandidates = 4;

// Maximum of |g(r e^{i theta})| near the sampled maximizers.
double refined_max_modulus(const TaylorPoly& g, double delta, std::size_t Q) {
  const auto values = circle_values(g, delta, Q);
  std::vector<std::size_t> order(values.size());
  for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
  const std::size_t k = std::min<std::size_t>(kAngularCandidates, order.size());
  std::partial_sort(order.begin(), order.begin() + k, order.end(),
                    [&](std::size_t a, std::size_t b) { return std::abs(values[a]) > std::abs(values[b]); });
  const double r = 1.0 - delta;
  const double h = 2.0 * std::numbers::pi / static_cast<double>(Q);
  double best = std::abs(values[order[0]]);
  for (std::size_t i = 0; i < k; ++i) {
    const double theta0 = h * static_cast<double>(order[i]);
    auto neg = [&](double t) { return -std::abs(g(std::polar(r, t))); };
    const auto [t, v] = boost::math::tools::brent_find_minima(neg, theta0 - h, theta0 + h, kBrentBits);
    best = std::max(best, -v);
  }
  return best;
}

double sampled_max_modulus(const TaylorPoly& g, double delta, std::size_t Q) {
  if (g.nonnegative()) return std::abs(g(cplx(1.0 - delta)));
  return circle_means(circle_values(g, delta, Q)).minf;
}

void finish_profile(NormProfile& p) {
  const std::size_t n = p.values.size();
  const std::size_t first = n > 5 ? n - 5 : 0;
  p.decay_tail.assign(p.values.begin() + static_cast<std::ptrdiff_t>(first), p.values.end());
  p.decaying = true;
  for (std::size_t i = 1; i < p.decay_tail.size(); ++i)
    if (p.decay_tail[i] > p.decay_tail[i - 1]) p.decaying = false;
}

}  // namespace

double integral_mean_c(const TaylorPoly& f, double delta, double p) {
  if (!(p > 0.0)) throw DomainError("integral mean exponent must be positive");
  const auto values = circle_values(f, delta, angular_resolution(f.degree()));
  if (std::isinf(p)) return circle_means(values).minf;
  if (p == 1.0) return circle_means(values).m1;
  if (p == 2.0) return circle_means(values).m2;
  double s = 0.0;
  for (const auto& v : values) s += std::pow(std::abs(v), p);
  return std::pow(s / static_cast<double>(values.size()), 1.0 / p);
}

double integral_mean(const TaylorPoly& f, double r, double p) {
  if (!(r >= 0.0 && r <= 1.0)) throw DomainError("integral mean radius outside [0, 1]");
  return integral_mean_c(f, 1.0 - r, p);
}

NormProfile sup_profile(const TaylorPoly& g, const std::function<double(double)>& factor, const RadialGrid& grid,
                        const NormOptions& opts) {
  const std::size_t Q = opts.resolution ? opts.resolution : angular_resolution(g.degree());
  NormProfile p;
  p.radii = grid.radii();
  p.values.assign(grid.size(), 0.0);
  const auto count = static_cast<std::int64_t>(grid.size());
  detail::ExceptionRelay relay;
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < count; ++i) {
    relay.run([&] {
      const double d = grid.complement(static_cast<std::size_t>(i));
      p.values[i] = factor(d) * sampled_max_modulus(g, d, Q);
    });
  }
  relay.rethrow();
  std::size_t best = 0;
  for (std::size_t i = 1; i < p.values.size(); ++i)
    if (p.values[i] > p.values[best]) best = i;
  p.sup = p.values.empty() ? 0.0 : p.values[best];
  p.argmax_radius = p.values.empty() ? 0.0 : p.radii[best];
  finish_profile(p);
  if (!opts.refine || p.values.empty() || p.sup == 0.0) return p;

  // local maximization in log(delta) between the neighbouring grid points
  const double hi = std::log(grid.complement(best == 0 ? 0 : best - 1));
  const double lo = std::log(grid.complement(std::min(best + 1, grid.size() - 1)));
  if (lo < hi) {
    auto neg = [&](double t) { return -factor(std::exp(t)) * sampled_max_modulus(g, std::exp(t), Q); };
    const auto [t, v] = boost::math::tools::brent_find_minima(neg, lo, hi, kBrentBits);
    const double d = std::exp(t);
    const double m = g.nonnegative() ? -v / factor(d) : refined_max_modulus(g, d, Q);
    const double value = factor(d) * m;
    if (value > p.sup) {
      p.sup = value;
      p.argmax_radius = 1.0 - d;
    }
  }
  if (!g.nonnegative()) {
    const double d = 1.0 - p.argmax_radius;
    p.sup = std::max(p.sup, factor(d) * refined_max_modulus(g, d, Q));
  }
  return p;
}

NormProfile bloch_profile(const TaylorPoly& f, const RadialGrid& grid, const NormOptions& opts) {
  return sup_profile(f.derivative(), [](double d) { return d; }, grid, opts);
}

double bloch_norm(const TaylorPoly& f, const RadialGrid& grid, const NormOptions& opts) {
  return std::abs(f[0]) + bloch_profile(f, grid, opts).sup;
}

NormProfile bmu_norm(const TaylorPoly& f, const MomentTable& mu, const RadialGrid& grid, const NormOptions& opts) {
  const RadialWeight& w = mu.weight();
  return sup_profile(frac_deriv(f, mu), [&w](double d) { return w.tail_c(d); }, grid, opts);
}

NormProfile bmu_norm(const TaylorPoly& f, const RadialWeight& mu, const RadialGrid& grid, const NormOptions& opts) {
  return bmu_norm(f, MomentTable(mu), grid, opts);
}

NormProfile bmu_norm(const SparseSeries& f, const MomentTable& mu, const RadialGrid& grid) {
  if (!f.nonnegative()) throw DomainError("sparse norm profile needs nonnegative coefficients");
  const SparseSeries g = frac_deriv(f, mu);
  const RadialWeight& w = mu.weight();
  auto value = [&](double d) { return w.tail_c(d) * g.value_at_complement(d); };
  NormProfile p;
  p.radii = grid.radii();
  p.values.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) p.values[i] = value(grid.complement(i));
  std::size_t best = 0;
  for (std::size_t i = 1; i < p.values.size(); ++i)
    if (p.values[i] > p.values[best]) best = i;
  p.sup = p.values.empty() ? 0.0 : p.values[best];
  p.argmax_radius = p.values.empty() ? 0.0 : p.radii[best];
  finish_profile(p);
  if (p.values.size() > 1) {
    const double hi = std::log(grid.complement(best == 0 ? 0 : best - 1));
    const double lo = std::log(grid.complement(std::min(best + 1, grid.size() - 1)));
    const auto [t, v] =
        boost::math::tools::brent_find_minima([&](double s) { return -value(std::exp(s)); }, lo, hi, kBrentBits);
    if (-v > p.sup) {
      p.sup = -v;
      p.argmax_radius = 1.0 - std::exp(t);
    }
  }
  return p;
}

NormProfile little_decay_profile(const TaylorPoly& f, const MomentTable* mu, const RadialGrid& grid) {
  NormOptions opts;
  opts.refine = false;
  return mu ? bmu_norm(f, *mu, grid, opts) : bloch_profile(f, grid, opts);
}

TaylorPoly dilate(const TaylorPoly& f, double rho) {
  std::vector<cplx> c = f.coeffs();
  double power = 1.0;
  for (auto& v : c) {
    v *= power;
    power *= rho;
  }
  return TaylorPoly(std::move(c));
}

std::vector<TaylorPoly> random_corpus(std::uint64_t seed, std::size_t count, std::size_t max_degree) {
  if (max_degree < 1) throw ConfigError("corpus degree bound must be >= 1");
  std::mt19937_64 rng(seed);
  std::vector<TaylorPoly> corpus;
  corpus.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uniform_int_distribution<std::size_t> degree(1, max_degree);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<cplx> c(degree(rng) + 1);
    for (auto& v : c) {
      const double re = normal(rng);
      v = cplx(re, normal(rng));
    }
    corpus.emplace_back(std::move(c));
  }
  return corpus;
}

}  // namespace fracbloch
