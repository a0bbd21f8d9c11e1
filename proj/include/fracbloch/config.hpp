#pragma once

// Weight-spec and coefficient parsing, and the serializable description of
// one experiment run.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fracbloch/grid.hpp"
#include "fracbloch/kernels.hpp"
#include "fracbloch/norms.hpp"
#include "fracbloch/series.hpp"
#include "fracbloch/weight.hpp"

namespace fracbloch {

/// Grammar: family [":" key "=" number ("," key "=" number)*], with families
/// constant, standard(beta), exp(alpha, l, beta), lograpid(alpha) and
/// tabulated(file=PATH). Throws ParseError with the 0-based offset of the
/// offending character; tabulated files are validated on load.
RadialWeight parse_weight_spec(std::string_view text);

/// The built-in weights exercised by the verification suites.
std::vector<std::string> builtin_catalog();

/// Coefficient CSV with header `re,im` or `n,re,im`; rows in order of n.
TaylorPoly read_coefficients_csv(const std::string& path);

enum class Experiment {
  classify,
  dmu,
  norms,
  kernel_asymptotics,
  lacunary,
  counterexample,
  verify_thm12,
  verify_thm13,
  verify_prop23,
  verify_partition,
  verify_multiplier,
};

std::string to_string(Experiment e);
/// Throws ConfigError for unknown names.
Experiment parse_experiment(std::string_view name);
std::vector<std::string> experiment_names();

enum class OutputFormat { csv, json };

std::string to_string(OutputFormat f);
OutputFormat parse_format(std::string_view name);

struct ExperimentConfig {
  Experiment experiment = Experiment::classify;
  std::vector<std::string> weights;
  std::string omega;
  std::string mu;
  std::size_t truncation = kDefaultKernelTruncation;
  int grid_depth = kDefaultGridDepth;
  std::uint64_t seed = kCorpusSeed;
  std::size_t corpus_size = kCorpusSize;
  int nmax = 20;
  std::vector<double> radii;  // kernel sweeps; empty means 0.5, 0.9, 0.99, 0.999
  std::string coefficients;   // CSV path for dmu and norms
  bool classical = false;     // dmu: Gamma-ratio multipliers of a standard weight
  std::string output;         // empty means stdout
  std::optional<OutputFormat> format;  // empty means the experiment's natural format

  OutputFormat effective_format() const;
  /// Throws ConfigError when a field is out of range.
  void validate() const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

void to_json(nlohmann::json& j, const ExperimentConfig& c);
void from_json(const nlohmann::json& j, ExperimentConfig& c);

ExperimentConfig load_config(const std::string& path);

}  // namespace fracbloch
