#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "fracbloch/config.hpp"
#include "fracbloch/errors.hpp"
#include "fracbloch/experiments.hpp"

namespace {

struct Flags {
  std::vector<std::string> weights;
  std::string omega, mu, coeffs, out, format;
  std::size_t trunc = 0;
  int grid_depth = 0;
  std::uint64_t seed = 0;
  std::size_t corpus_size = 0;
  int nmax = 0;
  std::vector<double> radii;
  bool classical = false;
};

void add_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--weight", f.weights, "weight spec, e.g. standard:beta=2 (repeatable)");
  sub->add_option("--omega", f.omega, "kernel weight spec");
  sub->add_option("--mu", f.mu, "derivative weight spec");
  sub->add_option("--trunc", f.trunc, "series truncation N");
  sub->add_option("--grid-depth", f.grid_depth, "geometric grid depth J (1 - r down to 2^{-J/4})");
  sub->add_option("--seed", f.seed, "corpus seed");
  sub->add_option("--corpus-size", f.corpus_size, "corpus size before doubling");
  sub->add_option("--nmax", f.nmax, "lacunary depth");
  sub->add_option("--radii", f.radii, "kernel radii and moduli")->delimiter(',');
  sub->add_option("--coeffs", f.coeffs, "coefficient CSV with header re,im or n,re,im");
  if (sub->get_name() == "dmu")
    sub->add_flag("--classical", f.classical, "apply the Gamma-ratio multipliers of the standard weight");
  sub->add_option("--out", f.out, "output path (default stdout)");
  sub->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

void apply(const CLI::App* sub, const Flags& f, fracbloch::ExperimentConfig& cfg) {
  auto given = [&](const char* name) { return sub->count(name) > 0; };
  if (given("--weight")) cfg.weights = f.weights;
  if (given("--omega")) cfg.omega = f.omega;
  if (given("--mu")) cfg.mu = f.mu;
  if (given("--trunc")) cfg.truncation = f.trunc;
  if (given("--grid-depth")) cfg.grid_depth = f.grid_depth;
  if (given("--seed")) cfg.seed = f.seed;
  if (given("--corpus-size")) cfg.corpus_size = f.corpus_size;
  if (given("--nmax")) cfg.nmax = f.nmax;
  if (given("--radii")) cfg.radii = f.radii;
  if (given("--coeffs")) cfg.coefficients = f.coeffs;
  if (sub->get_name() == "dmu" && given("--classical")) cfg.classical = f.classical;
  if (given("--out")) cfg.output = f.out;
  if (given("--format")) cfg.format = fracbloch::parse_format(f.format);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractional derivatives, weighted Bloch norms and radial weight classes on the unit disc"};
  app.require_subcommand(0, 1);
  std::string config_path;
  bool print_config = false;
  app.add_option("--config", config_path, "JSON experiment config; subcommand flags override its fields");
  app.add_flag("--print-config", print_config, "print the resolved config as JSON and exit");

  Flags flags;
  std::vector<CLI::App*> subs;
  for (const auto& name : fracbloch::experiment_names()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
    add_flags(sub, flags);
    subs.push_back(sub);
  }
  CLI11_PARSE(app, argc, argv);

  try {
    fracbloch::ExperimentConfig cfg;
    if (!config_path.empty()) cfg = fracbloch::load_config(config_path);
    const auto chosen = app.get_subcommands();
    if (!chosen.empty()) {
      cfg.experiment = fracbloch::parse_experiment(chosen.front()->get_name());
      apply(chosen.front(), flags, cfg);
    } else if (config_path.empty()) {
      std::cerr << app.help();
      return 2;
    }
    if (print_config) {
      nlohmann::json j = cfg;
      std::cout << j.dump(2) << '\n';
      return 0;
    }
    if (cfg.output.empty()) return fracbloch::run(cfg, std::cout);
    std::ofstream out(cfg.output);
    if (!out) throw fracbloch::ConfigError("cannot write '" + cfg.output + "'");
    return fracbloch::run(cfg, out);
  } catch (const fracbloch::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 3;
  } catch (const fracbloch::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
