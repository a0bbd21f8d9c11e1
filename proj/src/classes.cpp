#include "fracbloch/classes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "fracbloch/errors.hpp"
#include "parallel.hpp"

namespace fracbloch {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double ratio_from_logs(double num, double den) {
  if (num == -kInf && den == -kInf) return std::numeric_limits<double>::quiet_NaN();
  return std::exp(num - den);
}

// Fills the moment cache for every exponent in parallel; later lookups are hits.
void prefetch_moments(const MomentTable& table, const std::vector<double>& xs) {
  const auto count = static_cast<std::int64_t>(xs.size());
  detail::ExceptionRelay relay;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < count; ++i) relay.run([&] { (void)table.log_moment(xs[i]); });
  relay.rethrow();
}

std::vector<double> scaled(const std::vector<double>& xs, double k) {
  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back(k * x);
  return out;
}

bool truncated_logs(const std::vector<double>& logs) {
  return std::any_of(logs.begin(), logs.end(), [](double v) { return !std::isfinite(v); });
}

KWitness assess_witness(double K, const RatioBand& base, const RatioBand& deep, const RatioBand& fine,
                        const ClassifyOptions& opts) {
  KWitness w;
  w.K = K;
  w.inf_base = base.min;
  w.inf_deep = deep.min;
  w.inf_fine = fine.min;
  const double eb = base.min - 1.0, ed = deep.min - 1.0, ef = fine.min - 1.0;
  w.drift = std::max(relative_change(eb, ed), relative_change(ed, ef));
  w.qualifies = std::min({eb, ed, ef}) >= opts.margin && w.drift < opts.tolerance;
  return w;
}

}  // namespace

std::string to_string(Verdict v) { return v == Verdict::evidence_yes ? "evidence-yes" : "evidence-no"; }

std::vector<double> log_tails(const RadialWeight& w, const std::vector<double>& complements) {
  std::vector<double> out(complements.size());
  const auto count = static_cast<std::int64_t>(complements.size());
  detail::ExceptionRelay relay;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < count; ++i) relay.run([&] { out[i] = w.log_tail_c(complements[i]); });
  relay.rethrow();
  return out;
}

RatioBand dhat_band(const RadialWeight& w, const RadialGrid& grid) {
  return dcheck_band(w, 2.0, grid);
}

RatioBand dcheck_band(const RadialWeight& w, double K, const RadialGrid& grid) {
  if (!(K > 1.0)) throw DomainError("doubling factor K must exceed 1");
  const auto& d = grid.complements();
  const auto near = log_tails(w, d);
  const auto far = log_tails(w, scaled(d, 1.0 / K));
  std::vector<double> ratios(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) ratios[i] = ratio_from_logs(near[i], far[i]);
  return make_band("tail(r)/tail(1-(1-r)/K)", grid.radii(), std::move(ratios));
}

RatioBand m_band(const MomentTable& table, double K, const std::vector<double>& xs) {
  if (!(K > 1.0)) throw DomainError("doubling factor K must exceed 1");
  auto all = xs;
  const auto far = scaled(xs, K);
  all.insert(all.end(), far.begin(), far.end());
  prefetch_moments(table, all);
  std::vector<double> ratios(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    ratios[i] = ratio_from_logs(table.log_moment(xs[i]), table.log_moment(far[i]));
  return make_band("mu_x/mu_Kx", xs, std::move(ratios));
}

DhatProfile dhat_profile(const RadialWeight& w, const ClassifyOptions& opts) {
  const auto ladder = ResolutionLadder::make(opts.depth);
  DhatProfile p;
  const auto base = dhat_band(w, ladder.base);
  const auto deep = dhat_band(w, ladder.deep);
  p.band = dhat_band(w, ladder.fine);
  p.sup_base = base.max;
  p.sup_deep = deep.max;
  p.sup_fine = p.band.max;
  p.truncated = truncated_logs(log_tails(w, ladder.fine.complements()));
  p.drift = std::max(relative_change(p.sup_base, p.sup_deep), relative_change(p.sup_deep, p.sup_fine));
  p.band.drift = p.drift;
  p.band.stable = p.drift < opts.tolerance;
  p.verdict = p.band.stable ? Verdict::evidence_yes : Verdict::evidence_no;
  return p;
}

LadderProfile dcheck_profile(const RadialWeight& w, const ClassifyOptions& opts) {
  const auto ladder = ResolutionLadder::make(opts.depth);
  LadderProfile out;
  for (int k = 1; k <= opts.max_k_power; ++k) {
    const double K = std::ldexp(1.0, k);
    const auto wit = assess_witness(K, dcheck_band(w, K, ladder.base), dcheck_band(w, K, ladder.deep),
                                    dcheck_band(w, K, ladder.fine), opts);
    out.trace.push_back(wit);
    if (wit.qualifies) {
      out.witness = wit;
      out.verdict = Verdict::evidence_yes;
      break;
    }
  }
  return out;
}

ExponentLadder ExponentLadder::make(int depth) {
  return {exponent_ladder(depth / 4, 4), exponent_ladder(depth / 2, 4), exponent_ladder(depth, 8)};
}

LadderProfile m_profile(const MomentTable& table, const ClassifyOptions& opts) {
  const auto xs = ExponentLadder::make(opts.depth);
  LadderProfile out;
  for (int k = 1; k <= opts.max_k_power; ++k) {
    const double K = std::ldexp(1.0, k);
    const auto wit = assess_witness(K, m_band(table, K, xs.base), m_band(table, K, xs.deep),
                                    m_band(table, K, xs.fine), opts);
    out.trace.push_back(wit);
    if (wit.qualifies) {
      out.witness = wit;
      out.verdict = Verdict::evidence_yes;
      break;
    }
  }
  return out;
}

RatioBand moment_tail_band(const MomentTable& table, const std::vector<double>& xs) {
  prefetch_moments(table, xs);
  std::vector<double> inv(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) inv[i] = 1.0 / xs[i];
  const auto lt = log_tails(table.weight(), inv);
  std::vector<double> ratios(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) ratios[i] = ratio_from_logs(table.log_moment(xs[i]), lt[i]);
  return make_band("mu_x/tail(1-1/x)", xs, std::move(ratios));
}

RatioBand moment_doubling_band(const MomentTable& table, const std::vector<double>& ns) {
  auto band = m_band(table, 2.0, ns);
  band.label = "mu_n/mu_2n";
  return band;
}

RatioBand tail_integral_band(const RadialWeight& w, double gamma, const RadialGrid& grid) {
  if (!(gamma > 0.0)) throw DomainError("gamma must be positive");
  const auto& d = grid.complements();
  const std::size_t n = d.size();
  std::vector<double> u(n), lt(n), pieces(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = -std::log(d[i]);
  for (std::size_t i = 0; i < n; ++i) lt[i] = w.log_tail_u(u[i]);
  QuadratureOptions qo;
  qo.rel_tol = 1e-10;
  // piece i: integral over [u_{i-1}, u_i] of (tail(u_i)/tail(u))^gamma du
  const auto count = static_cast<std::int64_t>(n);
  detail::ExceptionRelay relay;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < count; ++i) {
    relay.run([&] {
      const double lo = i == 0 ? 0.0 : u[i - 1];
      const double end = lt[i];
      auto f = [&](double v) { return std::exp(gamma * (end - w.log_tail_u(v))); };
      pieces[i] = lo < u[i] ? integrate(f, lo, u[i], qo).value : 0.0;
    });
  }
  relay.rethrow();
  std::vector<double> values(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) acc *= std::exp(gamma * (lt[i] - lt[i - 1]));
    acc += pieces[i];
    values[i] = acc;
  }
  return make_band("tail(r)^g * int_0^r ds/(tail(s)^g (1-s))", grid.radii(), std::move(values));
}

RefinedBand refine(RatioBand base, RatioBand deep, RatioBand fine, double tolerance, double growth_limit) {
  RefinedBand out{std::move(base), std::move(deep), std::move(fine)};
  auto finite = [](const RatioBand& b) { return std::isfinite(b.max) && std::isfinite(b.min); };
  assess_stability(out.deep, out.base, tolerance);
  assess_stability(out.fine, out.deep, tolerance);
  out.deepening_drift = out.deep.drift;
  out.refinement_drift = out.fine.drift;
  out.bounded = finite(out.base) && finite(out.deep) && finite(out.fine) && out.deepening_drift < growth_limit;
  out.stable = out.bounded && out.refinement_drift < tolerance;
  return out;
}

RefinedBand moment_tail_check(const MomentTable& table, const ClassifyOptions& opts) {
  const auto xs = ExponentLadder::make(opts.depth);
  return refine(moment_tail_band(table, xs.base), moment_tail_band(table, xs.deep),
                moment_tail_band(table, xs.fine), opts.tolerance);
}

RefinedBand moment_doubling_check(const MomentTable& table, const ClassifyOptions& opts) {
  const auto xs = ExponentLadder::make(opts.depth);
  return refine(moment_doubling_band(table, xs.base), moment_doubling_band(table, xs.deep),
                moment_doubling_band(table, xs.fine), opts.tolerance);
}

RefinedBand tail_integral_check(const RadialWeight& w, double gamma, const ClassifyOptions& opts) {
  const auto ladder = ResolutionLadder::make(opts.depth);
  return refine(tail_integral_band(w, gamma, ladder.base), tail_integral_band(w, gamma, ladder.deep),
                tail_integral_band(w, gamma, ladder.fine), opts.tolerance);
}

namespace {

// max over pairs (i, j) allowed by `ordered` of
//   log tail_i - log tail_j - exponent * log(delta_i / delta_j)
template <class Ordered>
double worst_log_excess(const std::vector<double>& d, const std::vector<double>& lt, double exponent,
                        Ordered ordered) {
  double worst = -kInf;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!std::isfinite(lt[i])) continue;
    for (std::size_t j = 0; j < d.size(); ++j) {
      if (!ordered(i, j) || !std::isfinite(lt[j])) continue;
      worst = std::max(worst, lt[i] - lt[j] - exponent * std::log(d[i] / d[j]));
    }
  }
  return worst;
}

template <class Ordered>
PowerFit finish_fit(const RadialWeight& w, double exponent, Ordered ordered, const ClassifyOptions& opts) {
  const auto ladder = ResolutionLadder::make(opts.depth);
  PowerFit fit;
  fit.exponent = exponent;
  const auto& dd = ladder.deep.complements();
  fit.C = std::exp(worst_log_excess(dd, log_tails(w, dd), exponent, ordered));
  const auto& df = ladder.fine.complements();
  const auto lf = log_tails(w, df);
  const double bound = std::log(fit.C * (1.0 + opts.tolerance));
  std::size_t bad = 0;
  for (std::size_t i = 0; i < df.size(); ++i)
    for (std::size_t j = 0; j < df.size(); ++j) {
      if (!ordered(i, j) || !std::isfinite(lf[i]) || !std::isfinite(lf[j])) continue;
      ++fit.pairs;
      if (lf[i] - lf[j] - exponent * std::log(df[i] / df[j]) > bound) ++bad;
    }
  fit.violation_rate = fit.pairs ? static_cast<double>(bad) / static_cast<double>(fit.pairs) : 0.0;
  return fit;
}

}  // namespace

PowerFit fit_upper_power(const RadialWeight& w, const ClassifyOptions& opts) {
  const auto ladder = ResolutionLadder::make(opts.depth);
  const auto& d = ladder.deep.complements();
  const auto near = log_tails(w, d);
  const auto far = log_tails(w, scaled(d, 0.5));
  double alpha = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (std::isfinite(near[i]) && std::isfinite(far[i])) alpha = std::max(alpha, (near[i] - far[i]) / std::log(2.0));
  // s = r_i <= t = r_j: complements delta_i >= delta_j
  return finish_fit(w, alpha, [](std::size_t i, std::size_t j) { return i <= j; }, opts);
}

PowerFit fit_lower_power(const RadialWeight& w, const KWitness& witness, const ClassifyOptions& opts) {
  const double beta = std::log(witness.inf_deep) / std::log(witness.K);
  // t <= s: the numerator point s lies closer to the boundary
  return finish_fit(w, beta, [](std::size_t i, std::size_t j) { return i >= j; }, opts);
}

ClassReport classify(const RadialWeight& w, const ClassifyOptions& opts) {
  ClassReport rep;
  rep.weight = w.name();
  rep.depth = opts.depth;
  rep.dhat_detail = dhat_profile(w, opts);
  rep.dcheck_detail = dcheck_profile(w, opts);
  const MomentTable table(w);
  rep.m_detail = m_profile(table, opts);
  rep.dhat = rep.dhat_detail.verdict;
  rep.dcheck = rep.dcheck_detail.verdict;
  rep.m = rep.m_detail.verdict;
  rep.d = (rep.dhat == Verdict::evidence_yes && rep.dcheck == Verdict::evidence_yes) ? Verdict::evidence_yes
                                                                                       : Verdict::evidence_no;
  if (rep.dhat == Verdict::evidence_yes) rep.upper_fit = fit_upper_power(w, opts);
  if (rep.dcheck_detail.witness) rep.lower_fit = fit_lower_power(w, *rep.dcheck_detail.witness, opts);
  rep.resolution_failure = rep.dcheck == Verdict::evidence_yes && rep.m == Verdict::evidence_no;
  rep.refinement_stable = (rep.dhat == Verdict::evidence_no || rep.dhat_detail.drift < opts.tolerance) &&
                          (!rep.dcheck_detail.witness || rep.dcheck_detail.witness->drift < opts.tolerance) &&
                          (!rep.m_detail.witness || rep.m_detail.witness->drift < opts.tolerance);
  const auto fine = ResolutionLadder::make(opts.depth).fine;
  for (double d : fine.complements())
    if (w.extrapolates_at(d) || w.extrapolates_at(d / 2.0)) rep.extrapolated = true;
  return rep;
}

}  // namespace fracbloch
