#pragma once

// Radial weights on the unit disc.
//
// A weight is represented first of all by its tail
//     tail(r) = integral_r^1 density(s) ds,
// with the density and a closed-form moment rule as optional extras. Radii
// near the boundary are handled through the complement delta = 1 - r or the
// log-complement u = -log(1 - r), so that a radius 1e-12 away from the
// circle is still resolved to full relative precision.

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fracbloch/quadrature.hpp"

namespace fracbloch {

enum class WeightFamily { constant, standard, exponential, lograpid, tabulated };

std::string to_string(WeightFamily family);

struct WeightParams {
  double alpha = 0.0;
  double beta = 0.0;
  double l = 0.0;
  std::string file;  // tabulated weights only
};

/// Evaluation backend of a weight family. All coordinates are complements
/// delta in (0, 1] or log-complements u in [0, inf).
class WeightModel {
 public:
  virtual ~WeightModel() = default;

  virtual double tail_c(double delta) const = 0;
  virtual double log_tail_c(double delta) const { return std::log(tail_c(delta)); }
  /// log tail at r = 1 - e^{-u}; overridden where the tail stays representable
  /// after e^{-u} underflows.
  virtual double log_tail_u(double u) const { return log_tail_c(std::exp(-u)); }

  virtual bool has_density() const { return false; }
  /// density at r = 1 - delta
  virtual double density_c(double delta) const;
  /// density(1 - e^{-u}) * e^{-u}; finite for every u >= 0 even when
  /// e^{-u} underflows.
  virtual double density_weighted(double u) const;

  virtual std::optional<double> moment_rule(double /*x*/) const { return std::nullopt; }

  /// True when tail_c(delta) is produced by extrapolation rather than data.
  virtual bool extrapolates(double /*delta*/) const { return false; }
};

class RadialWeight {
 public:
  RadialWeight(std::string name, WeightFamily family, WeightParams params,
               std::shared_ptr<const WeightModel> model);

  const std::string& name() const noexcept { return name_; }
  WeightFamily family() const noexcept { return family_; }
  const WeightParams& params() const noexcept { return params_; }
  double scale() const noexcept { return scale_; }

  /// tail(r) for 0 <= r < 1. Throws DomainError outside that range and
  /// InvalidWeightError when the tail is not positive.
  double tail(double r) const;
  /// tail at r = 1 - delta, delta in (0, 1]; may underflow to zero.
  double tail_c(double delta) const { return scale_ * model_->tail_c(delta); }
  /// log tail at r = 1 - delta; finite where tail_c underflows for built-ins.
  double log_tail_c(double delta) const { return std::log(scale_) + model_->log_tail_c(delta); }
  /// tail and log tail at r = 1 - e^{-u}
  double tail_u(double u) const { return std::exp(log_tail_u(u)); }
  double log_tail_u(double u) const { return std::log(scale_) + model_->log_tail_u(u); }

  bool has_density() const noexcept { return model_->has_density(); }
  double density(double r) const;
  double density_c(double delta) const { return scale_ * model_->density_c(delta); }
  double density_weighted(double u) const { return scale_ * model_->density_weighted(u); }

  bool has_moment_rule() const noexcept;
  std::optional<double> moment_rule(double x) const;

  bool extrapolates_at(double delta) const { return model_->extrapolates(delta); }

  /// The same weight with tail (and density, moments) multiplied by c > 0.
  RadialWeight scaled(double c, std::string name = {}) const;
  /// Rescaled so that tail(0) = 1.
  RadialWeight normalized() const;
  /// Drops the closed-form moment rule so that moments come from quadrature.
  RadialWeight without_moment_rule() const;

 private:
  std::string name_;
  WeightFamily family_;
  WeightParams params_;
  std::shared_ptr<const WeightModel> model_;
  double scale_ = 1.0;
  bool moment_rule_enabled_ = true;
};

/// mu == 1
RadialWeight constant_weight();
/// beta (1 - r^2)^{beta - 1}, beta > 0
RadialWeight standard_weight(double beta);
/// exp(-alpha / (1 - r^l)^beta), all parameters > 0
RadialWeight exponential_weight(double alpha, double l, double beta);
/// 1 / ((1 - r^2) log(e / (1 - r^2))^alpha), alpha > 1
RadialWeight lograpid_weight(double alpha);
/// Monotone piecewise-cubic interpolation of tail samples. Needs at least four
/// samples with strictly increasing r in [0,1) and positive nonincreasing tails.
RadialWeight tabulated_weight(std::vector<double> radii, std::vector<double> tails,
                              std::string name = "tabulated");
/// Reads a two-column CSV with header `r,tail`.
RadialWeight tabulated_weight_from_csv(const std::string& path);

RadialWeight builtin_weight(WeightFamily family, const WeightParams& params);

/// integral_{1-delta}^1 density(s) ds by half-line quadrature in u.
/// Independent of any closed-form tail the family may provide.
double tail_from_density(const RadialWeight& w, double delta, const QuadratureOptions& opts = {});

}  // namespace fracbloch
