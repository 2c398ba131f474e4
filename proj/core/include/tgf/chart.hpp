#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tgf/ambient.hpp"
#include "tgf/jet.hpp"

namespace tgf {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  [[nodiscard]] double width() const { return hi - lo; }
  [[nodiscard]] double mid() const { return 0.5 * (lo + hi); }
};

/// Where an immersion takes values: a flat space, optionally restricted to the
/// quadric <x,x> = level (level = eps for Q_eps, 1 for the unit sphere S_mu).
struct Target {
  AmbientForm form;
  std::optional<double> level;

  [[nodiscard]] bool on_model() const { return level.has_value(); }
  static Target flat(int dim, int mu = 0) { return {{dim, mu}, std::nullopt}; }
  static Target quadric(int dim, int mu, double level) { return {{dim, mu}, level}; }
  /// The model Q_eps itself (flat for eps = 0).
  static Target of(const SpaceForm& sf);
};

/// Maps a parameter point and an order K to jets of order K in the chart
/// variables, seeded at that point. Used for immersions and for the
/// coefficient functions of vector fields alike.
using JetMap = std::function<JetVector(std::span<const double> p, int order)>;

/// Wraps a closed-form expression evaluated on seeded variables.
JetMap closed_form(std::function<JetVector(std::span<const Jet> x)> fn);

/// Coefficients (in the chart basis d/dx_i) of a tangent vector field.
using VectorField = JetMap;

/// Constant-coefficient field.
VectorField constant_field(std::vector<double> coeffs);

class ChartImmersion {
 public:
  ChartImmersion() = default;
  ChartImmersion(std::string name, std::vector<Interval> domain, Target target, JetMap eval);

  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] int dim() const { return static_cast<int>(domain_.size()); }
  [[nodiscard]] const std::vector<Interval>& domain() const { return domain_; }
  [[nodiscard]] const Target& target() const { return target_; }
  [[nodiscard]] const AmbientForm& form() const { return target_.form; }
  [[nodiscard]] int ambient_dim() const { return target_.form.dim; }
  [[nodiscard]] bool on_model() const { return target_.on_model(); }
  [[nodiscard]] std::vector<double> center() const;

  /// Closed rectangle membership with a relative slack of 1e-9 per side.
  [[nodiscard]] bool contains(std::span<const double> p) const;
  /// Jets of all ambient components; throws a domain error outside the chart.
  [[nodiscard]] JetVector eval(std::span<const double> p, int order) const;
  [[nodiscard]] Vec value(std::span<const double> p) const;

  [[nodiscard]] ChartImmersion restricted(std::vector<Interval> domain) const;
  [[nodiscard]] ChartImmersion renamed(std::string name) const;
  [[nodiscard]] const JetMap& evaluator() const { return eval_; }

 private:
  std::string name_;
  std::vector<Interval> domain_;
  Target target_;
  JetMap eval_;
};

/// Tensor grid over a rectangle, last coordinate fastest. Endpoints included;
/// `inset` shrinks every side by that fraction of its width first.
std::vector<std::vector<double>> sample_grid(const std::vector<Interval>& domain, std::span<const int> resolution,
                                             double inset = 0.0);

Vec to_vec(std::span<const double> v);

}  // namespace tgf
