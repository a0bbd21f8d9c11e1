#include "fracbloch/weight.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/fpclassify.hpp>
#include <boost/math/interpolators/pchip.hpp>

#include "fracbloch/errors.hpp"

namespace fracbloch {

std::string to_string(WeightFamily family) {
  switch (family) {
    case WeightFamily::constant: return "constant";
    case WeightFamily::standard: return "standard";
    case WeightFamily::exponential: return "exp";
    case WeightFamily::lograpid: return "lograpid";
    case WeightFamily::tabulated: return "tabulated";
  }
  return "unknown";
}

double WeightModel::density_c(double) const {
  throw DomainError("weight has no density");
}

double WeightModel::density_weighted(double) const {
  throw DomainError("weight has no density");
}

namespace {

// Tolerance for tails obtained by quadrature; moments built on top of them
// are asked for 1e-12 relative.
QuadratureOptions inner_quadrature() {
  QuadratureOptions o;
  o.rel_tol = 1e-13;
  return o;
}

class ConstantModel final : public WeightModel {
 public:
  double tail_c(double delta) const override { return delta; }
  double log_tail_c(double delta) const override { return std::log(delta); }
  double log_tail_u(double u) const override { return -u; }
  bool has_density() const override { return true; }
  double density_c(double) const override { return 1.0; }
  double density_weighted(double u) const override { return std::exp(-u); }
  std::optional<double> moment_rule(double x) const override { return 1.0 / (x + 1.0); }
};

class StandardModel final : public WeightModel {
 public:
  explicit StandardModel(double beta)
      : beta_(beta), half_beta_integral_(0.5 * beta * boost::math::beta(beta, 0.5)) {}

  double tail_c(double delta) const override {
    if (delta <= 0.0) return 0.0;
    const double y = delta * (2.0 - delta);  // 1 - r^2 without cancellation
    return half_beta_integral_ * boost::math::ibeta(beta_, 0.5, std::min(1.0, y));
  }
  bool has_density() const override { return true; }
  double density_c(double delta) const override {
    return beta_ * std::pow(delta * (2.0 - delta), beta_ - 1.0);
  }
  double density_weighted(double u) const override {
    const double delta = std::exp(-u);
    return beta_ * std::exp(-beta_ * u + (beta_ - 1.0) * std::log(2.0 - delta));
  }
  std::optional<double> moment_rule(double x) const override {
    // integral_0^1 r^x beta (1-r^2)^{beta-1} dr = (beta/2) B((x+1)/2, beta)
    return 0.5 * beta_ * boost::math::beta(0.5 * (x + 1.0), beta_);
  }

 private:
  double beta_;
  double half_beta_integral_;
};

class ExponentialModel final : public WeightModel {
 public:
  ExponentialModel(double alpha, double l, double beta) : alpha_(alpha), l_(l), beta_(beta) {}

  double tail_c(double delta) const override { return std::exp(log_tail_c(delta)); }

  double log_tail_c(double delta) const override {
    if (delta <= 0.0) return -std::numeric_limits<double>::infinity();
    const double u0 = -std::log(delta);
    const double phi0 = log_density_c(delta);
    // width of the boundary layer in u where the density falls by e
    const double s = 1.0 - delta;
    const double q = one_minus_pow(delta);
    double log_slope = std::log(alpha_ * beta_ * l_) + std::log(delta) - (beta_ + 1.0) * std::log(q);
    if (l_ != 1.0) log_slope += (l_ - 1.0) * std::log(s);
    double h0 = 1e-3;
    if (std::isfinite(log_slope)) h0 = log_slope > 0.0 ? std::exp(-log_slope) / (1.0 + std::exp(-log_slope)) : 1.0 / (1.0 + std::exp(log_slope));
    // log density(u0 + t) - log density(u0) = -alpha q^{-beta} expm1(beta log(q / q')),
    // with q - q' formed directly so that the gap keeps full relative precision.
    const double scale = alpha_ * std::pow(q, -beta_);
    if (!std::isfinite(scale)) return -std::numeric_limits<double>::infinity();
    const double log_delta = std::log(delta);
    auto integrand = [&](double t) {
      const double d = delta * std::exp(-t);
      const double qd = one_minus_pow(d);
      const double step = std::min(1.0, -delta * std::expm1(-t) / -std::expm1(log_delta - t));
      const double diff = std::pow(1.0 - d, l_) * -std::expm1(l_ * std::log1p(-step));
      const double gap = std::log1p(diff / qd);
      return std::exp(-scale * std::expm1(beta_ * gap) - t);
    };
    const auto res = integrate_halfline(integrand, 0.0, h0, inner_quadrature());
    return phi0 - u0 + std::log(res.value);
  }

  bool has_density() const override { return true; }
  double density_c(double delta) const override { return std::exp(log_density_c(delta)); }
  double density_weighted(double u) const override {
    return std::exp(log_density_c(std::exp(-u)) - u);
  }

 private:
  // 1 - r^l at r = 1 - delta
  double one_minus_pow(double delta) const {
    if (delta >= 1.0) return 1.0;
    return -std::expm1(l_ * std::log1p(-delta));
  }
  double log_density_c(double delta) const {
    const double q = one_minus_pow(delta);
    if (q <= 0.0) return -std::numeric_limits<double>::infinity();
    return -alpha_ / std::pow(q, beta_);
  }

  double alpha_, l_, beta_;
};

// Tail by integration by parts on the outer half: with
//   g(s) = L(s)^{1-alpha} / (alpha - 1),  L(s) = log(e / (1 - s^2)),
// one has density(s) = -g'(s) / (2s), hence for rho >= 1/2
//   tail(rho) = g(rho)/(2 rho) - integral_rho^1 g(s) / (2 s^2) ds,
// whose integrand decays like e^{-u} instead of u^{-alpha}.
class LogRapidModel final : public WeightModel {
 public:
  explicit LogRapidModel(double alpha) : alpha_(alpha) { tail_half_ = outer_tail(0.5); }

  double tail_c(double delta) const override {
    if (delta <= 0.0) return 0.0;
    if (delta <= 0.5) return outer_tail(delta);
    const double r = 1.0 - delta;
    auto dens = [&](double s) {
      const double y = 1.0 - s * s;
      return 1.0 / (y * std::pow(1.0 - std::log(y), alpha_));
    };
    return integrate(dens, r, 0.5, inner_quadrature()).value + tail_half_;
  }
  double log_tail_u(double u) const override {
    if (u >= std::log(2.0)) return std::log(outer_tail_u(u));
    return std::log(tail_c(std::exp(-u)));
  }

  bool has_density() const override { return true; }
  double density_c(double delta) const override {
    const double y = delta * (2.0 - delta);
    return 1.0 / (y * std::pow(1.0 - std::log(y), alpha_));
  }
  double density_weighted(double u) const override {
    const double delta = std::exp(-u);
    const double log_two_minus = std::log(2.0 - delta);
    const double big_l = 1.0 + u - log_two_minus;
    return 1.0 / ((2.0 - delta) * std::pow(big_l, alpha_));
  }

 private:
  double g_of_u(double u) const {
    const double delta = std::exp(-u);
    const double big_l = 1.0 + u - std::log(2.0 - delta);
    return std::pow(big_l, 1.0 - alpha_) / (alpha_ - 1.0);
  }
  double outer_tail(double delta) const { return outer_tail_u(-std::log(delta)); }
  double outer_tail_u(double u0) const {
    const double rho = -std::expm1(-u0);
    auto integrand = [&](double u) {
      const double s = -std::expm1(-u);
      return g_of_u(u) * std::exp(-u) / (2.0 * s * s);
    };
    const double rest = integrate_halfline(integrand, u0, 1.0, inner_quadrature()).value;
    return g_of_u(u0) / (2.0 * rho) - rest;
  }

  double alpha_;
  double tail_half_ = 0.0;
};

class TabulatedModel final : public WeightModel {
 public:
  TabulatedModel(std::vector<double> radii, std::vector<double> tails)
      : r_first_(radii.front()),
        r_last_(radii.back()),
        t_first_(tails.front()),
        t_last_(tails.back()),
        delta_last_(1.0 - radii.back()) {
    const std::size_t n = radii.size();
    const double d_prev = 1.0 - radii[n - 2];
    decay_exponent_ = std::log(tails[n - 2] / tails[n - 1]) / std::log(d_prev / delta_last_);
    interp_ = std::make_shared<Interp>(std::move(radii), std::move(tails));
  }

  double tail_c(double delta) const override {
    if (delta <= 0.0) return 0.0;
    const double r = 1.0 - delta;
    if (r < r_first_) return t_first_;
    if (r <= r_last_) return (*interp_)(r);
    return t_last_ * std::pow(delta / delta_last_, decay_exponent_);
  }
  bool extrapolates(double delta) const override {
    const double r = 1.0 - delta;
    return r < r_first_ || r > r_last_;
  }

 private:
  using Interp = boost::math::interpolators::pchip<std::vector<double>>;
  double r_first_, r_last_, t_first_, t_last_, delta_last_;
  double decay_exponent_ = 1.0;
  std::shared_ptr<Interp> interp_;
};

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

std::string format_param(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

RadialWeight::RadialWeight(std::string name, WeightFamily family, WeightParams params,
                           std::shared_ptr<const WeightModel> model)
    : name_(std::move(name)), family_(family), params_(std::move(params)), model_(std::move(model)) {}

double RadialWeight::tail(double r) const {
  if (!(r >= 0.0 && r < 1.0)) throw DomainError("tail: radius must lie in [0,1)");
  const double v = tail_c(1.0 - r);
  if (!(v > 0.0)) throw InvalidWeightError("tail of weight '" + name_ + "' is not positive");
  return v;
}

double RadialWeight::density(double r) const {
  if (!(r >= 0.0 && r < 1.0)) throw DomainError("density: radius must lie in [0,1)");
  return density_c(1.0 - r);
}

bool RadialWeight::has_moment_rule() const noexcept {
  return moment_rule_enabled_ && model_->moment_rule(1.0).has_value();
}

std::optional<double> RadialWeight::moment_rule(double x) const {
  if (!moment_rule_enabled_) return std::nullopt;
  auto v = model_->moment_rule(x);
  if (v) *v *= scale_;
  return v;
}

RadialWeight RadialWeight::scaled(double c, std::string name) const {
  if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("weight scale must be positive");
  RadialWeight out = *this;
  out.scale_ *= c;
  if (!name.empty()) out.name_ = std::move(name);
  return out;
}

RadialWeight RadialWeight::normalized() const {
  const double t0 = tail_c(1.0);
  if (!(t0 > 0.0)) throw InvalidWeightError("cannot normalize weight with zero mass");
  return scaled(1.0 / t0, name_ + "/normalized");
}

RadialWeight RadialWeight::without_moment_rule() const {
  RadialWeight out = *this;
  out.moment_rule_enabled_ = false;
  return out;
}

RadialWeight constant_weight() {
  return RadialWeight("constant", WeightFamily::constant, {}, std::make_shared<ConstantModel>());
}

RadialWeight standard_weight(double beta) {
  require(beta > 0.0 && std::isfinite(beta), "standard weight needs beta > 0");
  WeightParams p;
  p.beta = beta;
  return RadialWeight("standard:beta=" + format_param(beta), WeightFamily::standard, p,
                      std::make_shared<StandardModel>(beta));
}

RadialWeight exponential_weight(double alpha, double l, double beta) {
  require(alpha > 0.0 && l > 0.0 && beta > 0.0 && std::isfinite(alpha) && std::isfinite(l) &&
              std::isfinite(beta),
          "exponential weight needs alpha, l, beta > 0");
  WeightParams p;
  p.alpha = alpha;
  p.l = l;
  p.beta = beta;
  return RadialWeight("exp:alpha=" + format_param(alpha) + ",l=" + format_param(l) +
                          ",beta=" + format_param(beta),
                      WeightFamily::exponential, p, std::make_shared<ExponentialModel>(alpha, l, beta));
}

RadialWeight lograpid_weight(double alpha) {
  require(alpha > 1.0 && std::isfinite(alpha), "lograpid weight needs alpha > 1");
  WeightParams p;
  p.alpha = alpha;
  return RadialWeight("lograpid:alpha=" + format_param(alpha), WeightFamily::lograpid, p,
                      std::make_shared<LogRapidModel>(alpha));
}

namespace {

RadialWeight make_tabulated(std::vector<double> radii, std::vector<double> tails, std::string name,
                            std::string file) {
  if (radii.size() != tails.size()) throw ValidationError("tabulated weight: column lengths differ");
  if (radii.size() < 4) throw ValidationError("tabulated weight: need at least four samples");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] >= 0.0 && radii[i] < 1.0))
      throw ValidationError("tabulated weight: r outside [0,1) at row " + std::to_string(i));
    if (!(tails[i] > 0.0) || !std::isfinite(tails[i]))
      throw ValidationError("tabulated weight: tail not positive at row " + std::to_string(i));
    if (i > 0 && !(radii[i] > radii[i - 1]))
      throw ValidationError("tabulated weight: r not strictly increasing at row " + std::to_string(i));
    if (i > 0 && tails[i] > tails[i - 1])
      throw ValidationError("tabulated weight: tail increases at row " + std::to_string(i));
  }
  const std::size_t n = tails.size();
  if (!(tails[n - 1] < tails[n - 2]))
    throw ValidationError("tabulated weight: last two tail samples must decrease");
  WeightParams p;
  p.file = std::move(file);
  return RadialWeight(std::move(name), WeightFamily::tabulated, p,
                      std::make_shared<TabulatedModel>(std::move(radii), std::move(tails)));
}

}  // namespace

RadialWeight tabulated_weight(std::vector<double> radii, std::vector<double> tails, std::string name) {
  return make_tabulated(std::move(radii), std::move(tails), std::move(name), {});
}

RadialWeight tabulated_weight_from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open tabulated weight file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("tabulated weight: empty file");
  auto strip = [](std::string s) {
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
    return s;
  };
  if (strip(line) != "r,tail") throw ValidationError("tabulated weight: header must be 'r,tail'");
  std::vector<double> radii, tails;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    line = strip(line);
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw ValidationError("tabulated weight: missing comma on line " + std::to_string(row));
    try {
      radii.push_back(std::stod(line.substr(0, comma)));
      tails.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw ValidationError("tabulated weight: bad number on line " + std::to_string(row));
    }
  }
  return make_tabulated(std::move(radii), std::move(tails), "tabulated:file=" + path, path);
}

RadialWeight builtin_weight(WeightFamily family, const WeightParams& params) {
  switch (family) {
    case WeightFamily::constant: return constant_weight();
    case WeightFamily::standard: return standard_weight(params.beta);
    case WeightFamily::exponential: return exponential_weight(params.alpha, params.l, params.beta);
    case WeightFamily::lograpid: return lograpid_weight(params.alpha);
    case WeightFamily::tabulated: return tabulated_weight_from_csv(params.file);
  }
  throw ConfigError("unknown weight family");
}

double tail_from_density(const RadialWeight& w, double delta, const QuadratureOptions& opts) {
  if (!w.has_density()) throw DomainError("weight '" + w.name() + "' has no density");
  if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("tail_from_density: complement outside (0,1]");
  const double u0 = -std::log(delta);
  auto f = [&](double u) { return w.density_weighted(u); };
  return integrate_halfline(f, u0, 1.0 / 64.0, opts).value;
}

}  // namespace fracbloch
