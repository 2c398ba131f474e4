#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "tgf/chart.hpp"

namespace tgf::cli {

/// Schema or syntax problem; what() is "origin:line:column: message".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& origin, int line, int column, const std::string& msg);
  int line = 0;
  int column = 0;
};

struct TubeSpec {
  std::string model = "euclidean";  // euclidean | spherical | hyperbolic
  double fiber_center = 0.5;
  double fiber_radius = 0.3;
  double perturbation = 0.0;
};

struct RuledSpec {
  std::string model = "euclidean";  // euclidean | hyperbolic
  double twist = 1.0;
  double tilt = 0.6;
  Interval s{-1.0, 1.0};
  std::vector<Interval> t{{-0.5, 0.5}, {-0.5, 0.5}};
};

struct SurfacelikeSpec {
  std::string kind = "cylindrical";  // cylindrical | conical
  std::string surface = "sphere";    // sphere | cylinder | clifford_torus
  int n = 3;
  std::vector<double> d0{0.0, 1.0};
};

struct ConeSpec {
  std::string surface = "clifford_torus";  // clifford_torus | h3_tube
  std::string target = "euclidean";        // euclidean | spherical | hyperbolic
  int n = 3;
  std::vector<double> d0{1.0, 1.0};
  std::vector<Interval> fiber;
};

struct GammaSpec {
  std::vector<double> linear;  // gamma = <g, c>
  double exponential = 0.0;    // weight of the separated solution exp(0.8 s - b t / 0.8)
};

struct GaussSpec {
  std::string frame = "clifford";  // clifford | de_sitter | great_sphere | helicoid_support
  int epsilon = 0;
  GammaSpec gamma;
  double theta = 0.39269908169872414;
  double window = 0.6;
  std::vector<Interval> fiber;
};

struct Monomial {
  double coeff = 0.0;
  std::vector<int> powers;
};

/// Graph hypersurface x -> (x, h(x)) in R^{n+1}, h a polynomial, with
/// D^perp spanned by a constant coordinate field.
struct CustomSpec {
  int n = 3;
  std::vector<Interval> domain;
  std::vector<Monomial> graph;
  std::vector<double> normal_field;
  std::string expect = "none";  // none | i | ii | iii
};

using Construction = std::variant<TubeSpec, RuledSpec, SurfacelikeSpec, ConeSpec, GaussSpec, CustomSpec>;

struct GridSpec {
  std::vector<int> resolution;  // empty: family default
  double leaf_length = 1.0;
  double leaf_step = 0.01;
  int obj_resolution = 33;
};

struct OutputSpec {
  std::string format;  // obj | csv | json
  std::vector<int> project{0, 1, 2};
};

struct PipelineConfig {
  std::string name;
  Construction construction;
  GridSpec grid;
  std::map<std::string, double> tolerances;  // overrides only
  std::vector<OutputSpec> outputs;

  [[nodiscard]] std::string family() const;
  /// Override if present, else the family default; throws for unknown names.
  [[nodiscard]] double tolerance(const std::string& key) const;
};

/// Number of chart variables of the hypersurface a construction produces.
int chart_dim(const Construction& c);

/// Names accepted under `tolerances`.
std::vector<std::string> tolerance_names();

PipelineConfig load_config(const std::string& path);
PipelineConfig parse_config(const std::string& text, const std::string& origin = "<config>");

/// Normalized form with every default filled in; parses back to the same config.
nlohmann::ordered_json to_json(const PipelineConfig& cfg);

}  // namespace tgf::cli
