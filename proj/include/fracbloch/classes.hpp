#pragma once

// Numerical evidence for membership of a radial weight in the doubling
// classes:
//   upper doubling   tail(r) <= C tail((1+r)/2)
//   lower doubling   tail(r) >= C tail(1 - (1-r)/K)        for some K, C > 1
//   moment doubling  mu_x    >= C mu_{Kx}                  for some K, C > 1
// together with the equivalent characterizations used to cross-check them.
//
// Membership is asymptotic near r = 1 and cannot be decided from finitely
// many samples. A verdict is "evidence-yes" when the defining quantity is
// finite and moves by less than 10% both when the grid is deepened toward
// the boundary and when its spacing is halved.

#include <optional>
#include <string>
#include <vector>

#include "fracbloch/grid.hpp"
#include "fracbloch/moments.hpp"
#include "fracbloch/weight.hpp"

namespace fracbloch {

enum class Verdict { evidence_yes, evidence_no };
std::string to_string(Verdict v);

struct ClassifyOptions {
  int depth = kDefaultGridDepth;
  double margin = 0.01;      // required excess over 1 for the lower-doubling and moment tests
  double tolerance = 0.10;   // allowed relative drift under refinement
  int max_k_power = 10;      // K ladder 2, 4, ..., 2^max_k_power
};

/// log tail(1 - delta) for every complement, evaluated in parallel.
std::vector<double> log_tails(const RadialWeight& w, const std::vector<double>& complements);

/// Band of tail(r) / tail((1+r)/2) over the grid.
RatioBand dhat_band(const RadialWeight& w, const RadialGrid& grid);
/// Band of tail(r) / tail(1 - (1-r)/K) over the grid.
RatioBand dcheck_band(const RadialWeight& w, double K, const RadialGrid& grid);
/// Band of mu_x / mu_{Kx} over the exponents.
RatioBand m_band(const MomentTable& table, double K, const std::vector<double>& xs);

struct DhatProfile {
  double sup_base = 0.0, sup_deep = 0.0, sup_fine = 0.0;
  double drift = 0.0;
  bool truncated = false;  // some tail underflowed even in log form
  Verdict verdict = Verdict::evidence_no;
  RatioBand band;  // on the fine grid
};
DhatProfile dhat_profile(const RadialWeight& w, const ClassifyOptions& opts = {});

struct KWitness {
  double K = 0.0;
  double inf_base = 0.0, inf_deep = 0.0, inf_fine = 0.0;
  double drift = 0.0;  // relative drift of the excess inf - 1
  bool qualifies = false;
};

/// Result of a search over the K ladder. `witness` is the first K that
/// qualifies; `trace` holds every K tried.
struct LadderProfile {
  Verdict verdict = Verdict::evidence_no;
  std::optional<KWitness> witness;
  std::vector<KWitness> trace;
};

LadderProfile dcheck_profile(const RadialWeight& w, const ClassifyOptions& opts = {});
LadderProfile m_profile(const MomentTable& table, const ClassifyOptions& opts = {});

/// Exponent ladders matching the base / deep / fine radial grids: x = 2^{j/s}
/// up to about 1 / min complement, capped at 1e4.
struct ExponentLadder {
  std::vector<double> base, deep, fine;
  static ExponentLadder make(int depth = kDefaultGridDepth);
};

/// Band of mu_x / tail(1 - 1/x).
RatioBand moment_tail_band(const MomentTable& table, const std::vector<double>& xs);
/// Band of mu_n / mu_{2n}.
RatioBand moment_doubling_band(const MomentTable& table, const std::vector<double>& ns);
/// Band of tail(r)^gamma * integral_0^r ds / (tail(s)^gamma (1-s)).
RatioBand tail_integral_band(const RadialWeight& w, double gamma, const RadialGrid& grid);

/// Base / deep / fine bands of one comparability.
///
/// A band counts as bounded when its edges are finite and grow by less than
/// `growth_limit` (relative) as the grid is deepened from 1 - r ~ 1e-4 to
/// 1e-8; a divergent comparability keeps growing at that scale. It is stable
/// when, in addition, halving the grid spacing moves the edges by less than
/// `tolerance`.
struct RefinedBand {
  RatioBand base, deep, fine;
  bool bounded = false;
  bool stable = false;
  double deepening_drift = 0.0;   // base -> deep
  double refinement_drift = 0.0;  // deep -> fine
};
inline constexpr double kBandGrowthLimit = 0.5;
RefinedBand refine(RatioBand base, RatioBand deep, RatioBand fine, double tolerance = 0.10,
                   double growth_limit = kBandGrowthLimit);

RefinedBand moment_tail_check(const MomentTable& table, const ClassifyOptions& opts = {});
RefinedBand moment_doubling_check(const MomentTable& table, const ClassifyOptions& opts = {});
RefinedBand tail_integral_check(const RadialWeight& w, double gamma, const ClassifyOptions& opts = {});

/// Constants of a power comparison tail(s) <= C ((1-s)/(1-t))^exponent tail(t).
struct PowerFit {
  double C = 0.0;
  double exponent = 0.0;
  double violation_rate = 0.0;  // on the fine grid, against the deep-grid fit
  std::size_t pairs = 0;
};
/// Pairs s <= t (upper-doubling form); exponent from dyadic ratios.
PowerFit fit_upper_power(const RadialWeight& w, const ClassifyOptions& opts = {});
/// Pairs t <= s (lower-doubling form); exponent log C / log K from the witness.
PowerFit fit_lower_power(const RadialWeight& w, const KWitness& witness, const ClassifyOptions& opts = {});

struct ClassReport {
  std::string weight;
  int depth = kDefaultGridDepth;
  Verdict dhat = Verdict::evidence_no;
  Verdict dcheck = Verdict::evidence_no;
  Verdict m = Verdict::evidence_no;
  Verdict d = Verdict::evidence_no;
  DhatProfile dhat_detail;
  LadderProfile dcheck_detail;
  LadderProfile m_detail;
  std::optional<PowerFit> upper_fit;  // present for upper-doubling evidence
  std::optional<PowerFit> lower_fit;  // present for lower-doubling evidence
  bool refinement_stable = true;      // every evidence-yes verdict passed both refinements
  bool resolution_failure = false;    // lower doubling without moment doubling
  bool extrapolated = false;          // tabulated data extrapolated on the grid
};

ClassReport classify(const RadialWeight& w, const ClassifyOptions& opts = {});

}  // namespace fracbloch
