#include "fracbloch/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>

#include "fracbloch/errors.hpp"
#include "fracbloch/kernels.hpp"

namespace fracbloch {

using json = nlohmann::ordered_json;

namespace {

// JSON has no infinities; non-finite values are written as strings.
json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

json numbers(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

json ladder_json(const LadderProfile& p) {
  json trace = json::array();
  for (const auto& k : p.trace)
    trace.push_back({{"K", k.K},
                     {"inf_base", number(k.inf_base)},
                     {"inf_deep", number(k.inf_deep)},
                     {"inf_fine", number(k.inf_fine)},
                     {"drift", number(k.drift)},
                     {"qualifies", k.qualifies}});
  json out = {{"verdict", to_string(p.verdict)}, {"trace", trace}};
  out["witness_K"] = p.witness ? json(p.witness->K) : json(nullptr);
  return out;
}

json fit_json(const std::optional<PowerFit>& f) {
  if (!f) return nullptr;
  return {{"C", number(f->C)},
          {"exponent", number(f->exponent)},
          {"violation_rate", f->violation_rate},
          {"pairs", f->pairs}};
}

std::vector<std::string> weights_or(const ExperimentConfig& cfg, std::vector<std::string> fallback) {
  return cfg.weights.empty() ? fallback : cfg.weights;
}

std::vector<double> kernel_radii(const ExperimentConfig& cfg) {
  return cfg.radii.empty() ? std::vector<double>{0.5, 0.9, 0.99, 0.999} : cfg.radii;
}

Check make_check(std::string name, double value, double limit, bool passed, std::string detail = {}) {
  return {std::move(name), value, limit, passed, std::move(detail)};
}

struct CorpusNorms {
  std::vector<double> bloch;
  std::vector<double> bmu;
};

CorpusNorms corpus_norms(const std::vector<TaylorPoly>& corpus, const MomentTable& mu, const RadialGrid& grid) {
  CorpusNorms out;
  for (const auto& f : corpus) {
    out.bloch.push_back(bloch_norm(f, grid));
    out.bmu.push_back(bmu_norm(f, mu, grid).sup);
  }
  return out;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
  out << '\n';
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

json to_json(const RatioBand& b) {
  return {{"label", b.label},      {"min", number(b.min)},     {"max", number(b.max)},
          {"argmin", b.argmin},    {"argmax", b.argmax},       {"stable", b.stable},
          {"drift", number(b.drift)}, {"points", b.ratios.size()}};
}

json to_json(const RefinedBand& b) {
  return {{"bounded", b.bounded},
          {"stable", b.stable},
          {"deepening_drift", number(b.deepening_drift)},
          {"refinement_drift", number(b.refinement_drift)},
          {"base", to_json(b.base)},
          {"deep", to_json(b.deep)},
          {"fine", to_json(b.fine)}};
}

json to_json(const ClassReport& r) {
  const auto& h = r.dhat_detail;
  return {{"weight", r.weight},
          {"depth", r.depth},
          {"verdicts",
           {{"upper_doubling", to_string(r.dhat)},
            {"lower_doubling", to_string(r.dcheck)},
            {"moment_doubling", to_string(r.m)},
            {"doubling", to_string(r.d)}}},
          {"upper_doubling",
           {{"sup_base", number(h.sup_base)},
            {"sup_deep", number(h.sup_deep)},
            {"sup_fine", number(h.sup_fine)},
            {"drift", number(h.drift)},
            {"truncated", h.truncated}}},
          {"lower_doubling", ladder_json(r.dcheck_detail)},
          {"moment_doubling", ladder_json(r.m_detail)},
          {"upper_fit", fit_json(r.upper_fit)},
          {"lower_fit", fit_json(r.lower_fit)},
          {"refinement_stable", r.refinement_stable},
          {"resolution_failure", r.resolution_failure},
          {"extrapolated", r.extrapolated}};
}

json to_json(const NormProfile& p) {
  return {{"radii", numbers(p.radii)},       {"values", numbers(p.values)},
          {"sup", number(p.sup)},            {"argmax_radius", number(p.argmax_radius)},
          {"decay_tail", numbers(p.decay_tail)}, {"decaying", p.decaying}};
}

json to_json(const LacunaryData& d) {
  return {{"weight", d.weight},
          {"scale", number(d.scale)},
          {"nmax", d.nmax},
          {"radii", numbers(d.radii)},
          {"complements", numbers(d.complements)},
          {"exponents", d.exponents}};
}

json to_json(const CounterexampleReport& r) {
  return {{"weight", r.weight},
          {"scale", number(r.scale)},
          {"nmax", r.nmax},
          {"nmax_extended", r.nmax_extended},
          {"norm", number(r.norm)},
          {"norm_extended", number(r.norm_extended)},
          {"norm_drift", number(r.norm_drift)},
          {"partial_sums", numbers(r.partial_sums)},
          {"sums_increasing", r.sums_increasing},
          {"growth", number(r.growth)},
          {"merged_duplicates", r.merged_duplicates},
          {"exponents", r.exponents},
          {"profile", {{"radii", numbers(r.radii)}, {"max_modulus", numbers(r.max_modulus)}}}};
}

bool SuiteReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

json to_json(const SuiteReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name},
                      {"value", number(c.value)},
                      {"limit", number(c.limit)},
                      {"passed", c.passed},
                      {"detail", c.detail}});
  return {{"suite", r.suite}, {"statement", r.statement}, {"passed", r.passed()}, {"checks", checks}};
}

SuiteReport verify_partition(const ExperimentConfig& cfg) {
  SuiteReport rep{"verify-partition",
                  "smooth dyadic blocks V_n form a partition of unity on the coefficients, "
                  "reconstruct every polynomial, and have H^1 norms bounded above and below",
                  {}};
  constexpr std::size_t kTop = std::size_t{1} << 14;
  const int blocks = cesaro_block_count(kTop);
  std::vector<double> total(kTop + 1, 0.0);
  for (int n = 0; n < blocks; ++n) {
    const auto V = cesaro_block(n);
    for (std::size_t k = 0; k <= std::min(kTop, V.degree()); ++k) total[k] += V[k].real();
  }
  double err = 0.0;
  for (double t : total) err = std::max(err, std::abs(t - 1.0));
  rep.checks.push_back(make_check("partition of unity up to degree 2^14", err, 1e-13, err <= 1e-13));

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal;
  std::vector<cplx> c(4097);
  for (auto& v : c) {
    const double re = normal(rng);
    v = cplx(re, normal(rng));
  }
  const TaylorPoly f(std::move(c));
  TaylorPoly sum;
  for (int n = 0; n < cesaro_block_count(f.degree()); ++n) sum = sum + hadamard(cesaro_block(n), f);
  double rec = 0.0, scale = 0.0;
  for (std::size_t k = 0; k <= f.degree(); ++k) {
    rec = std::max(rec, std::abs(sum[k] - f[k]));
    scale = std::max(scale, std::abs(f[k]));
  }
  rec /= scale;
  rep.checks.push_back(make_check("reconstruction of a degree-4096 polynomial", rec, 1e-12, rec <= 1e-12));

  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (int n = 2; n <= 12; ++n) {
    const double h1 = integral_mean(cesaro_block(n), 1.0, 1.0);
    lo = std::min(lo, h1);
    hi = std::max(hi, h1);
  }
  rep.checks.push_back(make_check("H^1 norm spread of V_2..V_12", hi / lo, 10.0, hi / lo <= 10.0,
                                  "min " + format_number(lo) + ", max " + format_number(hi)));
  return rep;
}

SuiteReport verify_embedding(const ExperimentConfig& cfg) {
  SuiteReport rep{"verify-thm12",
                  "Bloch norm bounded by a constant times the weighted fractional-derivative norm, "
                  "for every radial weight",
                  {}};
  const auto grid = RadialGrid::geometric(cfg.grid_depth, 4);
  const auto corpus = random_corpus(cfg.seed, 2 * cfg.corpus_size);
  for (const auto& spec : weights_or(cfg, builtin_catalog())) {
    const MomentTable mu(parse_weight_spec(spec));
    const auto norms = corpus_norms(corpus, mu, grid);
    double c_half = 0.0, c_full = 0.0;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const double ratio = norms.bloch[i] / norms.bmu[i];
      if (i < cfg.corpus_size) c_half = std::max(c_half, ratio);
      c_full = std::max(c_full, ratio);
    }
    const double drift = relative_change(c_half, c_full);
    rep.checks.push_back(make_check(spec + ": constant drift under corpus doubling", drift, 0.10,
                                    std::isfinite(c_full) && drift < 0.10,
                                    "C = " + format_number(c_half) + " -> " + format_number(c_full)));
  }
  return rep;
}

SuiteReport verify_equivalence(const ExperimentConfig& cfg) {
  SuiteReport rep{"verify-thm13",
                  "for doubling weights the weighted fractional-derivative norm is equivalent to the Bloch norm",
                  {}};
  const auto grid = RadialGrid::geometric(cfg.grid_depth, 4);
  const auto corpus = random_corpus(cfg.seed, 2 * cfg.corpus_size);
  ClassifyOptions copts;
  copts.depth = cfg.grid_depth;
  for (const auto& spec : weights_or(cfg, builtin_catalog())) {
    const RadialWeight w = parse_weight_spec(spec);
    const auto cls = classify(w, copts);
    if (cls.d != Verdict::evidence_yes) {
      rep.checks.push_back(make_check(spec + ": not a doubling weight, equivalence not required", 0.0, 0.0, true));
      continue;
    }
    const MomentTable mu(w);
    const auto norms = corpus_norms(corpus, mu, grid);
    double lo_h = std::numeric_limits<double>::infinity(), hi_h = 0.0, lo = lo_h, hi = 0.0;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const double ratio = norms.bmu[i] / norms.bloch[i];
      if (i < cfg.corpus_size) {
        lo_h = std::min(lo_h, ratio);
        hi_h = std::max(hi_h, ratio);
      }
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    rep.checks.push_back(make_check(spec + ": band spread", hi / lo, 100.0, hi / lo <= 100.0,
                                    "[" + format_number(lo) + ", " + format_number(hi) + "]"));
    const double drift = std::max(relative_change(lo_h, lo), relative_change(hi_h, hi));
    rep.checks.push_back(make_check(spec + ": band drift under corpus doubling", drift, 0.10, drift < 0.10));
  }
  const MomentTable one(constant_weight());
  double err = 0.0;
  for (int n : {1, 2, 10, 100}) {
    const auto f = TaylorPoly::monomial(static_cast<std::size_t>(n));
    const double bmu_exact = 2.0 * std::pow(n / (n + 1.0), n);
    const double bloch_exact = std::pow((n - 1.0) / n, n - 1);
    err = std::max(err, std::abs(bmu_norm(f, one, grid).sup / bmu_exact - 1.0));
    err = std::max(err, std::abs(bloch_norm(f, grid) / bloch_exact - 1.0));
  }
  rep.checks.push_back(make_check("monomial norms for the constant weight", err, 1e-9, err <= 1e-9));
  return rep;
}

SuiteReport verify_kernel_means(const ExperimentConfig& cfg) {
  SuiteReport rep{"verify-prop23",
                  "integral means of fractional derivatives of reproducing kernels are comparable to "
                  "1 + integral of 1 / (tail_omega tail_mu (1-t))",
                  {}};
  std::vector<std::pair<std::string, std::string>> pairs;
  if (!cfg.omega.empty() && !cfg.mu.empty()) {
    pairs.emplace_back(cfg.omega, cfg.mu);
  } else {
    for (const auto& a : {"constant", "standard:beta=2"})
      for (const auto& b : {"constant", "standard:beta=2"}) pairs.emplace_back(a, b);
  }
  std::vector<std::pair<double, double>> points;
  for (double r : kernel_radii(cfg))
    for (double a : kernel_radii(cfg)) points.emplace_back(r, a);
  const std::size_t N = cfg.truncation;
  for (const auto& [os, ms] : pairs) {
    const MomentTable omega(parse_weight_spec(os)), mu(parse_weight_spec(ms));
    const auto half = kernel_ratio_band(omega, mu, points, std::max<std::size_t>(2, N / 2));
    const auto full = kernel_ratio_band(omega, mu, points, N);
    const std::string name = os + " / " + ms;
    rep.checks.push_back(make_check(name + ": band spread", full.band.spread(), 50.0, full.band.spread() <= 50.0,
                                    "[" + format_number(full.band.min) + ", " + format_number(full.band.max) + "]"));
    const double drift =
        std::max(relative_change(half.band.min, full.band.min), relative_change(half.band.max, full.band.max));
    rep.checks.push_back(make_check(name + ": drift when the truncation doubles", drift, 0.10, drift < 0.10));
  }
  return rep;
}

SuiteReport verify_multiplier(const ExperimentConfig& cfg) {
  SuiteReport rep{"verify-multiplier",
                  "the sequence mu_{2n+1}^2 / (mu tail)_{2n+1} satisfies sup (1-r) M_1(r, lambda^[1]) < inf, "
                  "and mixed moments are comparable to squared moments",
                  {}};
  const auto deep = RadialGrid::geometric(cfg.grid_depth, 4);
  const auto fine = RadialGrid::geometric(2 * cfg.grid_depth, 8);
  for (const auto& spec : weights_or(cfg, {"constant", "standard:beta=2"})) {
    const MomentTable mu(parse_weight_spec(spec));
    const auto lambda = lambda_sequence(mu, cfg.truncation);
    const auto a = multiplier_condition(lambda, deep);
    const auto b = multiplier_condition(lambda, fine);
    const double drift = relative_change(a.sup, b.sup);
    rep.checks.push_back(make_check(spec + ": multiplier sup, refinement drift", drift, 0.10,
                                    std::isfinite(b.sup) && drift < 0.10, "sup " + format_number(b.sup)));
    const auto band = mixed_moment_equiv(mu, exponent_ladder(4 * 10, 4));
    if (mu.weight().family() == WeightFamily::constant) {
      const bool inside = band.min >= 2.0 / 3.0 && band.max <= 1.0;
      rep.checks.push_back(make_check(spec + ": mixed-moment band inside [2/3, 1]", band.max, 1.0, inside,
                                      "[" + format_number(band.min) + ", " + format_number(band.max) + "]"));
    } else {
      rep.checks.push_back(make_check(spec + ": mixed-moment band bounded", band.spread(), 0.0,
                                      band.bounded(),
                                      "[" + format_number(band.min) + ", " + format_number(band.max) + "]"));
    }
  }
  return rep;
}

namespace {

int emit_suite(const SuiteReport& rep, const ExperimentConfig& cfg, std::ostream& out) {
  if (cfg.effective_format() == OutputFormat::json) {
    out << to_json(rep).dump(2) << '\n';
  } else {
    out << "# " << rep.suite << ": " << rep.statement << '\n';
    write_csv_row(out, {"check", "value", "limit", "passed", "detail"});
    for (const auto& c : rep.checks)
      write_csv_row(out, {'"' + c.name + '"', format_number(c.value), format_number(c.limit),
                          c.passed ? "pass" : "fail", '"' + c.detail + '"'});
  }
  return rep.passed() ? 0 : 1;
}

RadialWeight single_weight(const ExperimentConfig& cfg) {
  if (cfg.weights.size() != 1) throw ConfigError(to_string(cfg.experiment) + " needs exactly one --weight");
  return parse_weight_spec(cfg.weights.front());
}

int run_classify(const ExperimentConfig& cfg, std::ostream& out) {
  ClassifyOptions opts;
  opts.depth = cfg.grid_depth;
  const auto specs = weights_or(cfg, builtin_catalog());
  if (cfg.effective_format() == OutputFormat::json) {
    json reports = json::array();
    for (const auto& s : specs) reports.push_back(to_json(classify(parse_weight_spec(s), opts)));
    out << reports.dump(2) << '\n';
    return 0;
  }
  write_csv_row(out, {"weight", "band", "r", "ratio"});
  for (const auto& s : specs) {
    const auto rep = classify(parse_weight_spec(s), opts);
    const auto& band = rep.dhat_detail.band;
    for (std::size_t i = 0; i < band.ratios.size(); ++i)
      write_csv_row(out, {s, "upper_doubling", format_number(band.abscissae[i]), format_number(band.ratios[i])});
  }
  return 0;
}

int run_dmu(const ExperimentConfig& cfg, std::ostream& out) {
  const auto w = single_weight(cfg);
  const auto f = read_coefficients_csv(cfg.coefficients);
  if (cfg.classical && w.family() != WeightFamily::standard)
    throw ConfigError("classical derivative needs a standard weight");
  const auto g = cfg.classical ? classical_frac_deriv(f, w.params().beta) : frac_deriv(f, w);
  if (cfg.effective_format() == OutputFormat::json) {
    json re = json::array(), im = json::array();
    for (const auto& c : g.coeffs()) {
      re.push_back(number(c.real()));
      im.push_back(number(c.imag()));
    }
    out << json{{"weight", w.name()}, {"re", re}, {"im", im}}.dump(2) << '\n';
    return 0;
  }
  write_csv_row(out, {"n", "re", "im"});
  for (std::size_t n = 0; n <= g.degree(); ++n)
    write_csv_row(out, {std::to_string(n), format_number(g[n].real()), format_number(g[n].imag())});
  return 0;
}

int run_norms(const ExperimentConfig& cfg, std::ostream& out) {
  const auto w = single_weight(cfg);
  const auto f = read_coefficients_csv(cfg.coefficients);
  const auto grid = RadialGrid::geometric(cfg.grid_depth, 4);
  const MomentTable mu(w);
  const auto bmu = bmu_norm(f, mu, grid);
  const auto bloch = bloch_profile(f, grid);
  if (cfg.effective_format() == OutputFormat::json) {
    out << json{{"weight", w.name()},
                {"bloch_norm", number(std::abs(f[0]) + bloch.sup)},
                {"bmu_norm", number(bmu.sup)},
                {"bmu_profile", to_json(bmu)},
                {"bloch_profile", to_json(bloch)}}
               .dump(2)
        << '\n';
    return 0;
  }
  write_csv_row(out, {"r", "bmu_value", "bloch_value"});
  for (std::size_t i = 0; i < bmu.radii.size(); ++i)
    write_csv_row(out, {format_number(bmu.radii[i]), format_number(bmu.values[i]), format_number(bloch.values[i])});
  return 0;
}

int run_kernel(const ExperimentConfig& cfg, std::ostream& out) {
  const std::string os = !cfg.omega.empty() ? cfg.omega : (cfg.weights.empty() ? "constant" : cfg.weights.front());
  const std::string ms = !cfg.mu.empty() ? cfg.mu : os;
  const MomentTable omega(parse_weight_spec(os)), mu(parse_weight_spec(ms));
  std::vector<std::pair<double, double>> points;
  for (double r : kernel_radii(cfg))
    for (double a : kernel_radii(cfg)) points.emplace_back(r, a);
  const auto band = kernel_ratio_band(omega, mu, points, cfg.truncation);
  if (cfg.effective_format() == OutputFormat::json) {
    json pts = json::array();
    for (const auto& p : band.points)
      pts.push_back({{"r", p.r},
                     {"a_mod", p.a_mod},
                     {"m1", number(p.m1)},
                     {"comparison", number(p.comparison)},
                     {"ratio", number(p.ratio)},
                     {"truncation", p.truncation_used},
                     {"tail_fraction", number(p.truncation)}});
    out << json{{"omega", os}, {"mu", ms}, {"band", to_json(band.band)}, {"points", pts}}.dump(2) << '\n';
    return 0;
  }
  write_csv_row(out, {"r", "a_mod", "M1", "comparison", "ratio", "truncation"});
  for (const auto& p : band.points)
    write_csv_row(out, {format_number(p.r), format_number(p.a_mod), format_number(p.m1), format_number(p.comparison),
                        format_number(p.ratio), std::to_string(p.truncation_used)});
  return 0;
}

int run_lacunary(const ExperimentConfig& cfg, std::ostream& out) {
  const auto w = single_weight(cfg);
  const auto d = dyadic_radii(w, cfg.nmax);
  const auto v = w.normalized();
  if (cfg.effective_format() == OutputFormat::json) {
    const auto band = lacunary_band(d, v, RadialGrid::geometric(cfg.grid_depth, 4));
    out << json{{"data", to_json(d)}, {"band", to_json(band)}}.dump(2) << '\n';
    return 0;
  }
  write_csv_row(out, {"n", "r_n", "complement", "M_n", "tail"});
  for (int n = 0; n <= d.nmax; ++n)
    write_csv_row(out, {std::to_string(n), format_number(d.radii[n]), format_number(d.complements[n]),
                        std::to_string(d.exponents[n]), format_number(v.tail_c(d.complements[n]))});
  return 0;
}

int run_counterexample(const ExperimentConfig& cfg, std::ostream& out) {
  const auto w = single_weight(cfg);
  const auto rep = counterexample_report(w, cfg.nmax, RadialGrid::geometric(cfg.grid_depth, 4));
  if (cfg.effective_format() == OutputFormat::json) {
    out << to_json(rep).dump(2) << '\n';
    return 0;
  }
  write_csv_row(out, {"r", "max_modulus"});
  for (std::size_t i = 0; i < rep.radii.size(); ++i)
    write_csv_row(out, {format_number(rep.radii[i]), format_number(rep.max_modulus[i])});
  return 0;
}

}  // namespace

int run(const ExperimentConfig& cfg, std::ostream& out) {
  cfg.validate();
  switch (cfg.experiment) {
    case Experiment::classify: return run_classify(cfg, out);
    case Experiment::dmu: return run_dmu(cfg, out);
    case Experiment::norms: return run_norms(cfg, out);
    case Experiment::kernel_asymptotics: return run_kernel(cfg, out);
    case Experiment::lacunary: return run_lacunary(cfg, out);
    case Experiment::counterexample: return run_counterexample(cfg, out);
    case Experiment::verify_thm12: return emit_suite(verify_embedding(cfg), cfg, out);
    case Experiment::verify_thm13: return emit_suite(verify_equivalence(cfg), cfg, out);
    case Experiment::verify_prop23: return emit_suite(verify_kernel_means(cfg), cfg, out);
    case Experiment::verify_partition: return emit_suite(verify_partition(cfg), cfg, out);
    case Experiment::verify_multiplier: return emit_suite(verify_multiplier(cfg), cfg, out);
  }
  throw ConfigError("unknown experiment");
}

}  // namespace fracbloch
