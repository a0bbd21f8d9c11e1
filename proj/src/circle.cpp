#include "fracbloch/circle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include "fracbloch/errors.hpp"
#include "parallel.hpp"

namespace fracbloch {

namespace {

// The FFTW planner is not thread-safe; plan execution on fresh arrays is.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [q, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t Q) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(Q);
    if (it != plans_.end()) return it->second;
    std::vector<cplx> in(Q), out(Q);
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(Q), reinterpret_cast<fftw_complex*>(in.data()),
                                      reinterpret_cast<fftw_complex*>(out.data()), FFTW_BACKWARD,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) throw NumericError("FFTW could not create a plan", 0);
    plans_.emplace(Q, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::size_t, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

void check_circle(double delta, std::size_t Q) {
  if (!(delta >= 0.0 && delta <= 1.0)) throw DomainError("circle radius outside [0, 1]");
  if (Q == 0) throw DomainError("angular resolution must be positive");
}

// r^n from the complement, with 0^0 = 1
double radial_power(double log_r, std::size_t n) {
  return n == 0 ? 1.0 : std::exp(static_cast<double>(n) * log_r);
}

}  // namespace

std::size_t angular_resolution(std::size_t degree) { return std::max<std::size_t>(4096, 8 * degree); }

std::vector<cplx> circle_values(const TaylorPoly& f, double delta, std::size_t Q) {
  check_circle(delta, Q);
  const double log_r = std::log1p(-delta);
  std::vector<cplx> in(Q, cplx{}), out(Q);
  const auto& c = f.coeffs();
  for (std::size_t n = 0; n < c.size(); ++n) {
    if (c[n] == cplx{}) continue;
    in[n % Q] += c[n] * radial_power(log_r, n);
  }
  fftw_execute_dft(plan_cache().get(Q), reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

std::vector<cplx> circle_values_reference(const TaylorPoly& f, double delta, std::size_t Q) {
  check_circle(delta, Q);
  const double r = 1.0 - delta;
  std::vector<cplx> out(Q);
  for (std::size_t j = 0; j < Q; ++j) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(Q);
    out[j] = f(std::polar(r, theta));
  }
  return out;
}

CircleMeans circle_means(const std::vector<cplx>& values) {
  CircleMeans m;
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    const double a = std::abs(values[j]);
    s1 += a;
    s2 += a * a;
    if (a > m.minf) {
      m.minf = a;
      m.argmax = j;
    }
  }
  const auto q = static_cast<double>(values.size());
  m.m1 = s1 / q;
  m.m2 = std::sqrt(s2 / q);
  return m;
}

std::vector<CircleMeans> circle_sweep(const TaylorPoly& f, const std::vector<double>& complements,
                                      std::size_t Q) {
  std::vector<CircleMeans> out(complements.size());
  plan_cache().get(Q);
  const auto count = static_cast<std::int64_t>(complements.size());
  detail::ExceptionRelay relay;
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < count; ++i) relay.run([&] { out[i] = circle_means(circle_values(f, complements[i], Q)); });
  relay.rethrow();
  return out;
}

std::vector<CircleMeans> circle_sweep_reference(const TaylorPoly& f, const std::vector<double>& complements,
                                                std::size_t Q) {
  std::vector<CircleMeans> out;
  out.reserve(complements.size());
  for (double d : complements) out.push_back(circle_means(circle_values_reference(f, d, Q)));
  return out;
}

}  // namespace fracbloch
