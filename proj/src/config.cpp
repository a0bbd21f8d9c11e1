#include "fracbloch/config.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>

#include "fracbloch/errors.hpp"

namespace fracbloch {

namespace {

struct FamilySyntax {
  std::string_view name;
  WeightFamily family;
  std::vector<std::string_view> keys;
};

const std::vector<FamilySyntax>& families() {
  static const std::vector<FamilySyntax> table = {
      {"constant", WeightFamily::constant, {}},
      {"standard", WeightFamily::standard, {"beta"}},
      {"exp", WeightFamily::exponential, {"alpha", "l", "beta"}},
      {"lograpid", WeightFamily::lograpid, {"alpha"}},
      {"tabulated", WeightFamily::tabulated, {"file"}},
  };
  return table;
}

double parse_number(std::string_view text, std::size_t offset) {
  double v = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || text.empty()) throw ParseError("expected a number", offset);
  if (ptr != last) throw ParseError("unexpected character in number", offset + static_cast<std::size_t>(ptr - first));
  return v;
}

constexpr std::array<std::pair<Experiment, std::string_view>, 11> kExperiments = {{
    {Experiment::classify, "classify"},
    {Experiment::dmu, "dmu"},
    {Experiment::norms, "norms"},
    {Experiment::kernel_asymptotics, "kernel-asymptotics"},
    {Experiment::lacunary, "lacunary"},
    {Experiment::counterexample, "counterexample"},
    {Experiment::verify_thm12, "verify-thm12"},
    {Experiment::verify_thm13, "verify-thm13"},
    {Experiment::verify_prop23, "verify-prop23"},
    {Experiment::verify_partition, "verify-partition"},
    {Experiment::verify_multiplier, "verify-multiplier"},
}};

}  // namespace

RadialWeight parse_weight_spec(std::string_view text) {
  const std::size_t colon = text.find(':');
  const std::string_view family_name = text.substr(0, colon);
  const auto it = std::find_if(families().begin(), families().end(),
                               [&](const FamilySyntax& f) { return f.name == family_name; });
  if (family_name.empty()) throw ParseError("missing weight family", 0);
  if (it == families().end()) throw ParseError("unknown weight family '" + std::string(family_name) + "'", 0);

  std::map<std::string_view, std::string_view> values;
  if (colon != std::string_view::npos) {
    if (it->keys.empty()) throw ParseError("family takes no parameters", colon);
    std::size_t pos = colon + 1;
    while (true) {
      // a file path may contain commas, so it swallows the rest of the text
      const std::size_t eq = text.find('=', pos);
      if (eq == std::string_view::npos) throw ParseError("expected key=value", pos);
      const std::string_view key = text.substr(pos, eq - pos);
      if (std::find(it->keys.begin(), it->keys.end(), key) == it->keys.end())
        throw ParseError("unknown parameter '" + std::string(key) + "'", pos);
      if (values.count(key)) throw ParseError("repeated parameter '" + std::string(key) + "'", pos);
      std::size_t end = key == "file" ? text.size() : text.find(',', eq + 1);
      if (end == std::string_view::npos) end = text.size();
      const std::string_view value = text.substr(eq + 1, end - eq - 1);
      if (value.empty()) throw ParseError("empty value for '" + std::string(key) + "'", eq + 1);
      if (key != "file") parse_number(value, eq + 1);
      values[key] = value;
      if (end == text.size()) break;
      pos = end + 1;
    }
  }
  for (const auto& key : it->keys)
    if (!values.count(key)) throw ParseError("missing parameter '" + std::string(key) + "'", text.size());

  auto number = [&](std::string_view key) {
    const auto v = values.at(key);
    return parse_number(v, static_cast<std::size_t>(v.data() - text.data()));
  };
  WeightParams p;
  switch (it->family) {
    case WeightFamily::constant: break;
    case WeightFamily::standard: p.beta = number("beta"); break;
    case WeightFamily::exponential:
      p.alpha = number("alpha");
      p.l = number("l");
      p.beta = number("beta");
      break;
    case WeightFamily::lograpid: p.alpha = number("alpha"); break;
    case WeightFamily::tabulated: p.file = std::string(values.at("file")); break;
  }
  return builtin_weight(it->family, p);
}

std::vector<std::string> builtin_catalog() {
  return {"constant",         "standard:beta=0.5",      "standard:beta=2",
          "standard:beta=3.7", "exp:alpha=1,l=1,beta=1", "lograpid:alpha=2"};
}

TaylorPoly read_coefficients_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open coefficient file '" + path + "'");
  auto strip = [](std::string s) {
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
    return s;
  };
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("coefficient file is empty");
  const std::string header = strip(line);
  const bool indexed = header == "n,re,im";
  if (!indexed && header != "re,im") throw ValidationError("coefficient header must be 're,im' or 'n,re,im'");
  std::vector<cplx> c;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    line = strip(line);
    if (line.empty()) continue;
    std::vector<double> fields;
    std::size_t pos = 0;
    while (true) {
      const auto comma = line.find(',', pos);
      const std::string cell = line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      try {
        std::size_t used = 0;
        fields.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw ValidationError("bad number on line " + std::to_string(row));
      }
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (fields.size() != (indexed ? 3u : 2u)) throw ValidationError("wrong field count on line " + std::to_string(row));
    if (indexed && fields[0] != static_cast<double>(c.size()))
      throw ValidationError("coefficient index out of order on line " + std::to_string(row));
    c.emplace_back(fields[indexed ? 1 : 0], fields[indexed ? 2 : 1]);
  }
  if (c.empty()) throw ValidationError("coefficient file has no rows");
  return TaylorPoly(std::move(c));
}

std::string to_string(Experiment e) {
  for (const auto& [k, name] : kExperiments)
    if (k == e) return std::string(name);
  throw ConfigError("unknown experiment");
}

Experiment parse_experiment(std::string_view name) {
  for (const auto& [k, n] : kExperiments)
    if (n == name) return k;
  throw ConfigError("unknown experiment '" + std::string(name) + "'");
}

std::vector<std::string> experiment_names() {
  std::vector<std::string> out;
  for (const auto& [k, n] : kExperiments) out.emplace_back(n);
  return out;
}

std::string to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

OutputFormat parse_format(std::string_view name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw ConfigError("unknown output format '" + std::string(name) + "'");
}

OutputFormat ExperimentConfig::effective_format() const {
  if (format) return *format;
  switch (experiment) {
    case Experiment::dmu:
    case Experiment::kernel_asymptotics:
    case Experiment::lacunary: return OutputFormat::csv;
    default: return OutputFormat::json;
  }
}

void ExperimentConfig::validate() const {
  if (truncation < 2) throw ConfigError("truncation must be >= 2");
  if (grid_depth < 4 || grid_depth > 400) throw ConfigError("grid depth must lie in 4..400");
  if (corpus_size < 1) throw ConfigError("corpus size must be >= 1");
  if (nmax < 1 || nmax > 35) throw ConfigError("nmax must lie in 1..35");
  for (double r : radii)
    if (!(r >= 0.0 && r < 1.0)) throw ConfigError("kernel radii must lie in [0, 1)");
  if ((experiment == Experiment::dmu || experiment == Experiment::norms) && coefficients.empty())
    throw ConfigError(to_string(experiment) + " needs a coefficient file");
}

void to_json(nlohmann::json& j, const ExperimentConfig& c) {
  j = nlohmann::json{{"experiment", to_string(c.experiment)},
                     {"weights", c.weights},
                     {"omega", c.omega},
                     {"mu", c.mu},
                     {"truncation", c.truncation},
                     {"grid_depth", c.grid_depth},
                     {"seed", c.seed},
                     {"corpus_size", c.corpus_size},
                     {"nmax", c.nmax},
                     {"radii", c.radii},
                     {"coefficients", c.coefficients},
                     {"classical", c.classical},
                     {"output", c.output},
                     {"format", c.format ? nlohmann::json(to_string(*c.format)) : nlohmann::json(nullptr)}};
}

void from_json(const nlohmann::json& j, ExperimentConfig& c) {
  static const std::vector<std::string> known = {"experiment", "weights", "omega",  "mu",     "truncation",
                                                 "grid_depth", "seed",    "corpus_size", "nmax", "radii",
                                                 "coefficients", "classical", "output", "format"};
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end()) throw ConfigError("unknown config key '" + key + "'");
  ExperimentConfig d;
  try {
    d.experiment = parse_experiment(j.at("experiment").get<std::string>());
    if (j.contains("weights")) d.weights = j["weights"].get<std::vector<std::string>>();
    if (j.contains("omega")) d.omega = j["omega"].get<std::string>();
    if (j.contains("mu")) d.mu = j["mu"].get<std::string>();
    if (j.contains("truncation")) d.truncation = j["truncation"].get<std::size_t>();
    if (j.contains("grid_depth")) d.grid_depth = j["grid_depth"].get<int>();
    if (j.contains("seed")) d.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("corpus_size")) d.corpus_size = j["corpus_size"].get<std::size_t>();
    if (j.contains("nmax")) d.nmax = j["nmax"].get<int>();
    if (j.contains("radii")) d.radii = j["radii"].get<std::vector<double>>();
    if (j.contains("coefficients")) d.coefficients = j["coefficients"].get<std::string>();
    if (j.contains("classical")) d.classical = j["classical"].get<bool>();
    if (j.contains("output")) d.output = j["output"].get<std::string>();
    if (j.contains("format") && !j["format"].is_null()) d.format = parse_format(j["format"].get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  c = std::move(d);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return j.get<ExperimentConfig>();
}

}  // namespace fracbloch
