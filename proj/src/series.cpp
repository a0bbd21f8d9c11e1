#include "fracbloch/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/special_functions/gamma.hpp>

#include "fracbloch/errors.hpp"
#include "parallel.hpp"

namespace fracbloch {

TaylorPoly::TaylorPoly(std::vector<cplx> coeffs) : c_(std::move(coeffs)) {
  if (c_.empty()) c_.assign(1, cplx{});
}

TaylorPoly TaylorPoly::monomial(std::size_t n, cplx value) {
  std::vector<cplx> c(n + 1, cplx{});
  c[n] = value;
  return TaylorPoly(std::move(c));
}

cplx TaylorPoly::operator()(cplx z) const {
  cplx acc{};
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

TaylorPoly TaylorPoly::derivative() const {
  if (c_.size() == 1) return TaylorPoly();
  std::vector<cplx> d(c_.size() - 1);
  for (std::size_t n = 1; n < c_.size(); ++n) d[n - 1] = static_cast<double>(n) * c_[n];
  return TaylorPoly(std::move(d));
}

bool TaylorPoly::nonnegative() const {
  return std::all_of(c_.begin(), c_.end(), [](cplx v) { return v.imag() == 0.0 && v.real() >= 0.0; });
}

TaylorPoly operator+(const TaylorPoly& a, const TaylorPoly& b) {
  std::vector<cplx> c(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t n = 0; n < c.size(); ++n) c[n] = a[n] + b[n];
  return TaylorPoly(std::move(c));
}

TaylorPoly operator-(const TaylorPoly& a, const TaylorPoly& b) { return a + cplx(-1.0) * b; }

TaylorPoly operator*(cplx s, const TaylorPoly& a) {
  std::vector<cplx> c = a.c_;
  for (auto& v : c) v *= s;
  return TaylorPoly(std::move(c));
}

SparseSeries::SparseSeries(std::vector<std::pair<std::uint64_t, cplx>> terms) {
  std::stable_sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& t : terms) {
    if (!terms_.empty() && terms_.back().first == t.first)
      terms_.back().second += t.second;
    else
      terms_.push_back(t);
  }
}

bool SparseSeries::nonnegative() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const auto& t) { return t.second.imag() == 0.0 && t.second.real() >= 0.0; });
}

cplx SparseSeries::operator()(cplx z) const {
  cplx acc{};
  for (const auto& [e, c] : terms_) acc += c * std::pow(z, static_cast<double>(e));
  return acc;
}

double SparseSeries::value_at_complement(double delta) const {
  const double log_r = std::log1p(-delta);
  double acc = 0.0;
  for (const auto& [e, c] : terms_) {
    if (e == 0)
      acc += c.real();
    else
      acc += c.real() * std::exp(static_cast<double>(e) * log_r);
  }
  return acc;
}

TaylorPoly SparseSeries::to_dense() const {
  std::vector<cplx> c(degree() + 1, cplx{});
  for (const auto& [e, v] : terms_) c[e] += v;
  return TaylorPoly(std::move(c));
}

TaylorPoly frac_deriv(const TaylorPoly& f, const MomentTable& moments) {
  std::vector<cplx> c = f.coeffs();
  std::vector<std::size_t> active;
  for (std::size_t n = 0; n < c.size(); ++n)
    if (c[n] != cplx{}) active.push_back(n);
  std::vector<double> log_mu(active.size());
  const auto count = static_cast<std::int64_t>(active.size());
  detail::ExceptionRelay relay;
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t i = 0; i < count; ++i) relay.run([&] { log_mu[i] = moments.log_moment(2.0 * static_cast<double>(active[i]) + 1.0); });
  relay.rethrow();
  for (std::size_t i = 0; i < active.size(); ++i) c[active[i]] *= std::exp(-log_mu[i]);
  return TaylorPoly(std::move(c));
}

TaylorPoly frac_deriv(const TaylorPoly& f, const RadialWeight& w) { return frac_deriv(f, MomentTable(w)); }

SparseSeries frac_deriv(const SparseSeries& f, const MomentTable& moments) {
  auto terms = f.terms();
  for (auto& [e, c] : terms) c *= std::exp(-moments.log_moment(2.0 * static_cast<double>(e) + 1.0));
  return SparseSeries(std::move(terms));
}

std::vector<double> classical_multipliers(double beta, std::size_t N) {
  if (!(beta > 0.0)) throw DomainError("classical fractional derivative needs beta > 0");
  const double g = boost::math::tgamma(beta + 1.0);
  std::vector<double> m(N + 1);
  for (std::size_t n = 0; n <= N; ++n) {
    // Gamma(n+1) / Gamma(n+1+beta) without overflow
    const double ratio = boost::math::tgamma_delta_ratio(static_cast<double>(n) + 1.0, beta);
    m[n] = 2.0 / (g * ratio);
  }
  return m;
}

TaylorPoly classical_frac_deriv(const TaylorPoly& f, double beta) {
  const auto m = classical_multipliers(beta, f.degree());
  std::vector<cplx> c = f.coeffs();
  for (std::size_t n = 0; n < c.size(); ++n) c[n] *= m[n];
  return TaylorPoly(std::move(c));
}

TaylorPoly multiplier_transform(const TaylorPoly& f, double beta) {
  std::vector<cplx> c = f.coeffs();
  for (std::size_t n = 0; n < c.size(); ++n) c[n] *= std::pow(static_cast<double>(n) + 1.0, beta);
  return TaylorPoly(std::move(c));
}

TaylorPoly hadamard(const TaylorPoly& W, const TaylorPoly& f) {
  const std::size_t n = std::min(W.degree(), f.degree()) + 1;
  std::vector<cplx> c(n);
  for (std::size_t k = 0; k < n; ++k) c[k] = W[k] * f[k];
  return TaylorPoly(std::move(c));
}

double SmoothCutoff::phi(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

double SmoothCutoff::Psi(double t) const {
  if (t <= 1.0) return 1.0;
  if (t >= 2.0) return 0.0;
  const double a = phi(2.0 - t);
  const double b = phi(t - 1.0);
  return a / (a + b);
}

double SmoothCutoff::psi(double t) const { return Psi(0.5 * t) - Psi(t); }

double numeric_derivative(const std::function<double(double)>& f, double t, int m) {
  if (m < 0 || m > 4) throw DomainError("derivative order must lie in 0..4");
  if (m == 0) return f(t);
  // step balancing truncation against cancellation for each order
  const double h = m <= 2 ? 1e-4 : std::pow(std::numeric_limits<double>::epsilon(), 1.0 / (m + 2));
  auto central = [&](double s) {
    switch (m) {
      case 1: return (f(t + s) - f(t - s)) / (2.0 * s);
      case 2: return (f(t + s) - 2.0 * f(t) + f(t - s)) / (s * s);
      case 3: return (f(t + 2 * s) - 2.0 * f(t + s) + 2.0 * f(t - s) - f(t - 2 * s)) / (2.0 * s * s * s);
      default:
        return (f(t + 2 * s) - 4.0 * f(t + s) + 6.0 * f(t) - 4.0 * f(t - s) + f(t - 2 * s)) / (s * s * s * s);
    }
  };
  return (4.0 * central(0.5 * h) - central(h)) / 3.0;
}

double SmoothCutoff::Psi_derivative(double t, int m) const {
  return numeric_derivative([this](double s) { return Psi(s); }, t, m);
}

double SmoothCutoff::psi_derivative(double t, int m) const {
  return numeric_derivative([this](double s) { return psi(s); }, t, m);
}

TaylorPoly cesaro_block(int n, const SmoothCutoff& cutoff) {
  if (n < 0) throw DomainError("block index must be >= 0");
  if (n == 0) return TaylorPoly(std::vector<cplx>{1.0, 1.0});
  if (n > 60) throw DomainError("block index too large");
  const std::uint64_t lo = std::uint64_t{1} << (n - 1);
  const std::uint64_t hi = (std::uint64_t{1} << (n + 1)) - 1;
  std::vector<cplx> c(hi + 1, cplx{});
  for (std::uint64_t k = lo; k <= hi; ++k)
    c[k] = cutoff.psi(std::ldexp(static_cast<double>(k), -(n - 1)));
  return TaylorPoly(std::move(c));
}

int cesaro_block_count(std::size_t N) {
  int n = 0;
  while (N >= (std::size_t{1} << n)) ++n;
  return n + 1;
}

TaylorPoly w_phi(double n, const Profile& Phi) {
  if (!(n >= 1.0)) throw DomainError("w_phi scale must be >= 1");
  const auto k_lo = static_cast<std::size_t>(std::max(0.0, std::ceil(Phi.lo * n)));
  const auto k_hi = static_cast<std::size_t>(std::floor(Phi.hi * n));
  std::vector<cplx> c(k_hi + 1, cplx{});
  for (std::size_t k = k_lo; k <= k_hi; ++k) c[k] = Phi.f(static_cast<double>(k) / n);
  return TaylorPoly(std::move(c));
}

double a_phi_m(const Profile& Phi, int m) {
  if (m < 0 || m > 4) throw DomainError("a_phi_m supports derivative orders 0..4");
  constexpr double step = 1e-4;
  const auto samples = static_cast<std::size_t>(std::ceil((Phi.hi - Phi.lo) / step));
  double max_f = 0.0, max_d = 0.0;
  for (std::size_t i = 0; i <= samples; ++i) {
    const double t = std::min(Phi.hi, Phi.lo + static_cast<double>(i) * step);
    max_f = std::max(max_f, std::abs(Phi.f(t)));
    if (m > 0) max_d = std::max(max_d, std::abs(numeric_derivative(Phi.f, t, m)));
  }
  return max_f + m * max_d;
}

Profile psi_profile(const SmoothCutoff& cutoff) {
  return {[cutoff](double t) { return cutoff.psi(t); }, 1.0, 4.0};
}

}  // namespace fracbloch
