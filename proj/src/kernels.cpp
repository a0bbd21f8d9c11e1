#include "fracbloch/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "fracbloch/circle.hpp"
#include "fracbloch/errors.hpp"
#include "parallel.hpp"
#include "fracbloch/norms.hpp"

namespace fracbloch {

namespace {

constexpr int kRadialNodes = 256;
constexpr double kAdmissibleTail = 1e-8;

void check_modulus(double a) {
  if (!(a >= 0.0 && a < 1.0)) throw DomainError("kernel point modulus outside [0, 1)");
}

// c_n = a^n exp(-sum of log odd moments)
TaylorPoly kernel_from_logs(double a_mod, const std::vector<double>& log_denominator) {
  std::vector<cplx> c(log_denominator.size());
  const double log_a = std::log(a_mod);
  for (std::size_t n = 0; n < c.size(); ++n) {
    const double power = n == 0 ? 0.0 : static_cast<double>(n) * log_a;
    c[n] = std::exp(power - std::log(2.0) - log_denominator[n]);
  }
  return TaylorPoly(std::move(c));
}

// integral over the disc of f(zeta) sum_n m_n (z conj(zeta))^n omega(|zeta|) dA(zeta)
cplx disc_pairing(const TaylorPoly& f, const std::vector<double>& multipliers, const RadialWeight& omega, cplx z) {
  if (!omega.has_density()) throw DomainError("reproducing identity needs a weight with a density");
  const std::size_t N = multipliers.size() - 1;
  const std::size_t Q = std::max<std::size_t>(64, 8 * (f.degree() + N));
  // conj of the kernel's angular profile is a polynomial in e^{i theta}
  std::vector<cplx> k(N + 1);
  cplx zn = 1.0;
  for (std::size_t n = 0; n <= N; ++n) {
    k[n] = std::conj(multipliers[n] * zn);
    zn *= z;
  }
  const TaylorPoly kernel_conj(std::move(k));
  const auto rule = gauss_legendre(kRadialNodes);
  std::vector<cplx> radial(rule.nodes.size());
  const auto count = static_cast<std::int64_t>(rule.nodes.size());
  detail::ExceptionRelay relay;
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < count; ++i) {
    relay.run([&] {
      const double rho = 0.5 * (rule.nodes[i] + 1.0);
      const auto fv = circle_values(f, 1.0 - rho, Q);
      const auto kv = circle_values(kernel_conj, 1.0 - rho, Q);
      cplx mean{};
      for (std::size_t j = 0; j < Q; ++j) mean += fv[j] * std::conj(kv[j]);
      mean /= static_cast<double>(Q);
      // dA = rho d rho d theta / pi; the angular mean carries 2 pi
      radial[i] = 0.5 * rule.weights[i] * 2.0 * rho * omega.density(rho) * mean;
    });
  }
  relay.rethrow();
  cplx total{};
  for (const auto& v : radial) total += v;
  return total;
}

}  // namespace

TaylorPoly kernel_coeffs(const MomentTable& omega, double a_mod, std::size_t N) {
  check_modulus(a_mod);
  return kernel_from_logs(a_mod, omega.log_odd_moments(N));
}

TaylorPoly frac_kernel_coeffs(const MomentTable& omega, const MomentTable& mu, double a_mod, std::size_t N) {
  check_modulus(a_mod);
  auto lo = omega.log_odd_moments(N);
  const auto lm = mu.log_odd_moments(N);
  for (std::size_t n = 0; n <= N; ++n) lo[n] += lm[n];
  return kernel_from_logs(a_mod, lo);
}

namespace {

struct TailEstimate {
  double fraction = 0.0;
  std::size_t suggested = 0;
};

TailEstimate estimate_tail(const TaylorPoly& g, double r, double tol) {
  const auto& c = g.coeffs();
  const std::size_t N = g.degree();
  if (r == 0.0 || N < 2) return {0.0, N};
  const double log_r = std::log(r);
  auto log_term = [&](std::size_t n) {
    const double a = std::abs(c[n]);
    return a == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(a) + static_cast<double>(n) * log_r;
  };
  double log_max = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n <= N; ++n) log_max = std::max(log_max, log_term(n));
  double retained = 0.0;
  for (std::size_t n = 0; n <= N; ++n) retained += std::exp(log_term(n) - log_max);
  // the slowest decay among the last few ratios
  const std::size_t window = std::min<std::size_t>(8, N);
  double log_q = -std::numeric_limits<double>::infinity();
  for (std::size_t n = N - window + 1; n <= N; ++n) log_q = std::max(log_q, log_term(n) - log_term(n - 1));
  const double inf = std::numeric_limits<double>::infinity();
  if (!(log_q < 0.0)) return {inf, 2 * N};
  const double q = std::exp(log_q);
  const double log_tail = log_term(N) - log_max + log_q - std::log1p(-q);
  TailEstimate out;
  out.fraction = std::exp(log_tail) / retained;
  const double needed = (std::log(tol) - std::log(out.fraction)) / log_q;
  out.suggested = N + static_cast<std::size_t>(std::max(0.0, std::ceil(needed)));
  return out;
}

}  // namespace

double truncation_fraction(const TaylorPoly& g, double r) { return estimate_tail(g, r, kAdmissibleTail).fraction; }

void require_admissible(const TaylorPoly& g, double r, double tol) {
  const auto est = estimate_tail(g, r, tol);
  if (!(est.fraction < tol)) throw TruncationError("truncated kernel not accurate at r", est.suggested);
}

double m1_frac_kernel(const MomentTable& omega, const MomentTable& mu, double a_mod, double r, std::size_t N) {
  if (!(r >= 0.0 && r < 1.0)) throw DomainError("radius outside [0, 1)");
  return integral_mean(frac_kernel_coeffs(omega, mu, a_mod, N), r, 1.0);
}

double kernel_comparison(const RadialWeight& omega, const RadialWeight& mu, double s) {
  if (!(s >= 0.0 && s < 1.0)) throw DomainError("comparison endpoint outside [0, 1)");
  if (s == 0.0) return 1.0;
  // t = 1 - e^{-u}: dt / (1 - t) = du
  auto integrand = [&](double u) { return std::exp(-omega.log_tail_u(u) - mu.log_tail_u(u)); };
  return 1.0 + integrate(integrand, 0.0, -std::log1p(-s)).value;
}

KernelBand kernel_ratio_band(const MomentTable& omega, const MomentTable& mu,
                             const std::vector<std::pair<double, double>>& pairs, std::size_t N,
                             double admissible_tail, std::size_t max_truncation) {
  if (N < 2) throw ConfigError("kernel truncation must be >= 2");
  KernelBand out;
  out.points.resize(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto& p = out.points[i];
    std::tie(p.r, p.a_mod) = pairs[i];
    std::size_t n = N;
    TaylorPoly g = frac_kernel_coeffs(omega, mu, p.a_mod, n);
    while (!(truncation_fraction(g, p.r) < admissible_tail)) {
      if (2 * n > max_truncation) require_admissible(g, p.r, admissible_tail);
      n *= 2;
      g = frac_kernel_coeffs(omega, mu, p.a_mod, n);
    }
    p.truncation_used = n;
    p.m1 = integral_mean(g, p.r, 1.0);
    p.truncation = truncation_fraction(g, p.r);
    p.comparison = kernel_comparison(omega.weight(), mu.weight(), p.r * p.a_mod);
    p.ratio = p.m1 / p.comparison;
    out.max_truncation = std::max(out.max_truncation, p.truncation);
  }
  std::vector<double> index, ratios;
  for (std::size_t i = 0; i < out.points.size(); ++i) {
    index.push_back(static_cast<double>(i));
    ratios.push_back(out.points[i].ratio);
  }
  out.band = make_band("kernel-means/comparison", std::move(index), std::move(ratios));
  return out;
}

double repro_identity_residual(const TaylorPoly& f, const MomentTable& omega, const MomentTable& mu, cplx z,
                               std::size_t N) {
  const auto lo = omega.log_odd_moments(N);
  const auto lm = mu.log_odd_moments(N);
  std::vector<double> m(N + 1);
  for (std::size_t n = 0; n <= N; ++n) m[n] = 0.5 * std::exp(-lo[n] - lm[n]);
  const cplx rhs = disc_pairing(f, m, omega.weight(), z);
  return std::abs(rhs - frac_deriv(f, mu)(z));
}

double kernel_reproduction_residual(const TaylorPoly& f, const MomentTable& omega, cplx z, std::size_t N) {
  const auto lo = omega.log_odd_moments(N);
  std::vector<double> m(N + 1);
  for (std::size_t n = 0; n <= N; ++n) m[n] = 0.5 * std::exp(-lo[n]);
  return std::abs(disc_pairing(f, m, omega.weight(), z) - f(z));
}

std::vector<double> lambda_sequence(const MomentTable& mu, std::size_t N) {
  const auto lm = mu.log_odd_moments(N);
  std::vector<double> lambda(N + 1);
  const auto count = static_cast<std::int64_t>(N + 1);
  detail::ExceptionRelay relay;
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t n = 0; n < count; ++n) relay.run([&] {
    lambda[n] = std::exp(2.0 * lm[n] - mu.log_mixed(2.0 * static_cast<double>(n) + 1.0));
  });
  relay.rethrow();
  return lambda;
}

MultiplierProfile multiplier_condition(const std::vector<double>& lambda, const RadialGrid& grid,
                                       bool restrict_to_admissible) {
  if (lambda.empty()) throw DomainError("empty multiplier sequence");
  std::vector<cplx> c(lambda.size());
  for (std::size_t n = 0; n < c.size(); ++n) c[n] = (static_cast<double>(n) + 1.0) * lambda[n];
  const TaylorPoly g(std::move(c));
  const auto N = static_cast<double>(lambda.size() - 1);
  // admissible: r^N N^2 < 1e-8
  const double log_bound = std::log(kAdmissibleTail) - 2.0 * std::log(std::max(N, 1.0));
  std::vector<double> complements;
  MultiplierProfile out;
  for (double d : grid.complements()) {
    if (N * std::log1p(-d) < log_bound) {
      complements.push_back(d);
    } else if (!restrict_to_admissible) {
      std::size_t suggested = lambda.size();
      while (static_cast<double>(suggested) * std::log1p(-d) + 2.0 * std::log(static_cast<double>(suggested)) >=
             std::log(kAdmissibleTail))
        suggested *= 2;
      throw TruncationError("multiplier grid extends past the admissible radius", suggested);
    } else {
      ++out.skipped;
    }
  }
  const auto means = circle_sweep(g, complements, angular_resolution(g.degree()));
  for (std::size_t i = 0; i < complements.size(); ++i) {
    out.radii.push_back(1.0 - complements[i]);
    out.values.push_back(complements[i] * means[i].m1);
    if (out.values.back() > out.sup) {
      out.sup = out.values.back();
      out.argmax_radius = out.radii.back();
    }
  }
  return out;
}

RatioBand mixed_moment_equiv(const MomentTable& mu, const std::vector<double>& xs) {
  std::vector<double> ratios(xs.size());
  const auto count = static_cast<std::int64_t>(xs.size());
  detail::ExceptionRelay relay;
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < count; ++i) {
    relay.run([&] {
      const double x = 2.0 * xs[i] + 1.0;
      ratios[i] = std::exp(mu.log_mixed(x) - 2.0 * mu.log_moment(x));
    });
  }
  relay.rethrow();
  return make_band("mixed/moment^2", xs, std::move(ratios));
}

}  // namespace fracbloch
