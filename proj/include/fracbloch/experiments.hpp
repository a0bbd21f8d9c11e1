#pragma once

// Experiment orchestration: one entry point per CLI subcommand, JSON/CSV
// report emission and the verification suites.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracbloch/classes.hpp"
#include "fracbloch/config.hpp"
#include "fracbloch/lacunary.hpp"
#include "fracbloch/norms.hpp"

namespace fracbloch {

nlohmann::ordered_json to_json(const RatioBand& band);
nlohmann::ordered_json to_json(const RefinedBand& band);
nlohmann::ordered_json to_json(const ClassReport& report);
nlohmann::ordered_json to_json(const NormProfile& profile);
nlohmann::ordered_json to_json(const LacunaryData& data);
nlohmann::ordered_json to_json(const CounterexampleReport& report);

/// Shortest round-tripping decimal form of a double.
std::string format_number(double v);

struct Check {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  bool passed = false;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::string statement;  // the mathematical statement exercised
  std::vector<Check> checks;
  bool passed() const;
};

nlohmann::ordered_json to_json(const SuiteReport& report);

SuiteReport verify_partition(const ExperimentConfig& cfg);
SuiteReport verify_embedding(const ExperimentConfig& cfg);
SuiteReport verify_equivalence(const ExperimentConfig& cfg);
SuiteReport verify_kernel_means(const ExperimentConfig& cfg);
SuiteReport verify_multiplier(const ExperimentConfig& cfg);

/// Runs the configured experiment and writes its report to `out`. Returns the
/// process exit code: 0 unless a verification suite failed.
int run(const ExperimentConfig& cfg, std::ostream& out);

}  // namespace fracbloch
