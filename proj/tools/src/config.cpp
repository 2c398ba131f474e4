#include "config.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace tgf::cli {

ConfigError::ConfigError(const std::string& origin, int line_, int column_, const std::string& msg)
    : std::runtime_error(origin + ":" + std::to_string(line_) + ":" + std::to_string(column_) + ": " + msg),
      line(line_),
      column(column_) {}

namespace {

const std::map<std::string, double>& base_tolerances() {
  static const std::map<std::string, double> t{
      {"normal", 1e-8},        {"unit", 1e-10},           {"tg", 1e-6},        {"class_fraction", 0.01},
      {"drift", 1e-4},         {"principal", 1e-7},       {"off_block", 1e-8}, {"on_model", 1e-9},
      {"gauss_identity", 1e-5}, {"pair", 1e-8},           {"flag_fraction", 0.01},
      {"class", 1e-6},         {"det", 1e-8},
  };
  return t;
}

// Reads one YAML mapping; every key must be consumed before finish().
class MapReader {
 public:
  MapReader(const YAML::Node& node, std::string where, const std::string& origin)
      : node_(node), where_(std::move(where)), origin_(origin) {
    if (!node_.IsMap()) fail(node_, where_ + " must be a mapping");
  }

  [[noreturn]] void fail(const YAML::Node& at, const std::string& msg) const {
    const YAML::Mark m = at.IsDefined() ? at.Mark() : node_.Mark();
    throw ConfigError(origin_, m.line + 1, m.column + 1, msg);
  }

  bool has(const std::string& key) const { return static_cast<bool>(node_[key]); }

  YAML::Node node(const std::string& key) {
    seen_.insert(key);
    return node_[key];
  }

  template <class T>
  T get(const std::string& key, const T& fallback) {
    seen_.insert(key);
    const YAML::Node n = node_[key];
    if (!n) return fallback;
    return convert<T>(n, key);
  }

  template <class T>
  T required(const std::string& key) {
    seen_.insert(key);
    const YAML::Node n = node_[key];
    if (!n) fail(node_, "missing key '" + key + "' in " + where_);
    return convert<T>(n, key);
  }

  template <class T>
  T convert(const YAML::Node& n, const std::string& key) const {
    try {
      return n.as<T>();
    } catch (const YAML::Exception&) {
      fail(n, "key '" + key + "' in " + where_ + " has the wrong type");
    }
  }

  Interval interval(const YAML::Node& n, const std::string& key) const {
    const auto v = convert<std::vector<double>>(n, key);
    if (v.size() != 2 || !(v[0] < v[1])) fail(n, "key '" + key + "' in " + where_ + " must be [lo, hi] with lo < hi");
    return {v[0], v[1]};
  }

  std::vector<Interval> intervals(const std::string& key, std::vector<Interval> fallback) {
    seen_.insert(key);
    const YAML::Node n = node_[key];
    if (!n) return fallback;
    if (!n.IsSequence()) fail(n, "key '" + key + "' in " + where_ + " must be a list of intervals");
    std::vector<Interval> out;
    for (const auto& item : n) out.push_back(interval(item, key));
    return out;
  }

  std::string choice(const std::string& key, const std::string& fallback, std::initializer_list<const char*> allowed) {
    const std::string v = get<std::string>(key, fallback);
    for (const char* a : allowed)
      if (v == a) return v;
    std::string list;
    for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
    fail(node_[key], "key '" + key + "' in " + where_ + " must be one of: " + list);
  }

  void finish() const {
    for (const auto& kv : node_) {
      const std::string key = kv.first.as<std::string>();
      if (!seen_.count(key)) fail(kv.first, "unknown key '" + key + "' in " + where_);
    }
  }

 private:
  YAML::Node node_;
  std::string where_;
  const std::string& origin_;
  std::set<std::string> seen_;
};

TubeSpec parse_tube(MapReader& r) {
  TubeSpec s;
  s.model = r.choice("model", s.model, {"euclidean", "spherical", "hyperbolic"});
  s.fiber_center = r.get("fiber_center", s.model == "euclidean" ? s.fiber_center : 0.0);
  s.fiber_radius = r.get("fiber_radius", s.model == "euclidean" ? s.fiber_radius : 0.6);
  s.perturbation = r.get("perturbation", s.perturbation);
  if (!(s.fiber_radius > 0.0)) r.fail(r.node("fiber_radius"), "fiber_radius must be positive");
  return s;
}

RuledSpec parse_ruled(MapReader& r) {
  RuledSpec s;
  s.model = r.choice("model", s.model, {"euclidean", "hyperbolic"});
  s.twist = r.get("twist", s.twist);
  s.tilt = r.get("tilt", s.tilt);
  if (r.has("s")) s.s = r.interval(r.node("s"), "s");
  s.t = r.intervals("t", s.t);
  if (s.tilt < 0.0 || s.tilt > 1.0) r.fail(r.node("tilt"), "tilt must lie in [0, 1]");
  if (s.t.size() != 2) r.fail(r.node("t"), "t needs two intervals");
  return s;
}

SurfacelikeSpec parse_surfacelike(MapReader& r) {
  SurfacelikeSpec s;
  s.kind = r.choice("kind", s.kind, {"cylindrical", "conical"});
  s.surface = r.choice("surface", s.kind == "conical" ? "clifford_torus" : s.surface, {"sphere", "cylinder", "clifford_torus"});
  s.n = r.get("n", s.n);
  s.d0 = r.get("d0", s.d0);
  if (s.n < 3) r.fail(r.node("n"), "n must be at least 3");
  if (s.d0.size() != 2) r.fail(r.node("d0"), "d0 needs two coefficients");
  return s;
}

ConeSpec parse_cone(MapReader& r) {
  ConeSpec s;
  s.surface = r.choice("surface", s.surface, {"clifford_torus", "h3_tube"});
  s.target = r.choice("target", s.surface == "h3_tube" ? "hyperbolic" : s.target, {"euclidean", "spherical", "hyperbolic"});
  s.n = r.get("n", s.n);
  s.d0 = r.get("d0", s.surface == "h3_tube" ? std::vector<double>{0.0, 1.0} : s.d0);
  s.fiber = r.intervals("fiber", s.fiber);
  if (s.n < 3) r.fail(r.node("n"), "n must be at least 3");
  if (s.d0.size() != 2) r.fail(r.node("d0"), "d0 needs two coefficients");
  return s;
}

GaussSpec parse_gauss(MapReader& r, const std::string& origin) {
  GaussSpec s;
  s.frame = r.choice("frame", s.frame, {"clifford", "de_sitter", "great_sphere", "helicoid_support"});
  s.epsilon = r.get("epsilon", s.frame == "de_sitter" ? -1 : 0);
  if (s.epsilon < -1 || s.epsilon > 1) r.fail(r.node("epsilon"), "epsilon must be -1, 0 or 1");
  s.theta = r.get("theta", s.theta);
  s.window = r.get("window", s.window);
  if (!(s.window > 0.0)) r.fail(r.node("window"), "window must be positive");
  s.fiber = r.intervals("fiber", s.fiber);
  if (r.has("gamma")) {
    MapReader g(r.node("gamma"), "gamma", origin);
    s.gamma.linear = g.get("linear", s.gamma.linear);
    s.gamma.exponential = g.get("exponential", s.gamma.exponential);
    g.finish();
  } else {
    r.node("gamma");
  }
  return s;
}

CustomSpec parse_custom(MapReader& r, const std::string& origin) {
  CustomSpec s;
  s.n = r.required<int>("n");
  if (s.n < 2) r.fail(r.node("n"), "n must be at least 2");
  s.domain = r.intervals("domain", std::vector<Interval>(static_cast<std::size_t>(s.n), Interval{-0.5, 0.5}));
  if (static_cast<int>(s.domain.size()) != s.n) r.fail(r.node("domain"), "domain needs n intervals");
  const YAML::Node g = r.node("graph");
  if (g) {
    if (!g.IsSequence()) r.fail(g, "graph must be a list of monomials");
    for (const auto& item : g) {
      MapReader m(item, "graph monomial", origin);
      Monomial mono;
      mono.coeff = m.required<double>("coeff");
      mono.powers = m.required<std::vector<int>>("powers");
      if (static_cast<int>(mono.powers.size()) != s.n || std::any_of(mono.powers.begin(), mono.powers.end(), [](int p) { return p < 0; })) {
        m.fail(item, "powers needs n non-negative entries");
      }
      m.finish();
      s.graph.push_back(std::move(mono));
    }
  }
  s.normal_field = r.required<std::vector<double>>("normal_field");
  if (static_cast<int>(s.normal_field.size()) != s.n) r.fail(r.node("normal_field"), "normal_field needs n coefficients");
  s.expect = r.choice("expect", s.expect, {"none", "i", "ii", "iii"});
  return s;
}

}  // namespace

int chart_dim(const Construction& c) {
  struct V {
    int operator()(const TubeSpec&) const { return 3; }
    int operator()(const RuledSpec&) const { return 3; }
    int operator()(const SurfacelikeSpec& s) const { return s.n; }
    int operator()(const ConeSpec& s) const { return s.n; }
    int operator()(const GaussSpec&) const { return 3; }
    int operator()(const CustomSpec& s) const { return s.n; }
  };
  return std::visit(V{}, c);
}

std::string PipelineConfig::family() const {
  static const char* names[] = {"partial_tube", "ruled", "surfacelike", "generalized_cone", "gauss_type_d", "custom_chart"};
  return names[construction.index()];
}

std::vector<std::string> tolerance_names() {
  std::vector<std::string> out;
  for (const auto& [k, _] : base_tolerances()) out.push_back(k);
  return out;
}

double PipelineConfig::tolerance(const std::string& key) const {
  const auto& base = base_tolerances();
  const auto it = base.find(key);
  if (it == base.end()) throw std::out_of_range("unknown tolerance '" + key + "'");
  if (const auto o = tolerances.find(key); o != tolerances.end()) return o->second;
  // Gauss charts carry jets through several solves; the flagship bound is 1e-4
  if (key == "tg" && std::holds_alternative<GaussSpec>(construction)) return 1e-4;
  return it->second;
}

PipelineConfig parse_config(const std::string& text, const std::string& origin) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(origin, e.mark.line + 1, e.mark.column + 1, "YAML syntax error: " + e.msg);
  }
  if (!root || root.IsNull()) throw ConfigError(origin, 1, 1, "empty config");
  MapReader top(root, "config", origin);
  PipelineConfig cfg;
  cfg.name = top.required<std::string>("name");
  if (!std::regex_match(cfg.name, std::regex("[A-Za-z0-9_-]+"))) top.fail(top.node("name"), "name may only use letters, digits, '_' and '-'");

  if (!top.has("construction")) top.fail(root, "missing key 'construction' in config");
  MapReader c(top.node("construction"), "construction", origin);
  const std::string fam = c.choice("family", "", {"partial_tube", "ruled", "surfacelike", "generalized_cone", "gauss_type_d", "custom_chart"});
  if (fam == "partial_tube") cfg.construction = parse_tube(c);
  else if (fam == "ruled") cfg.construction = parse_ruled(c);
  else if (fam == "surfacelike") cfg.construction = parse_surfacelike(c);
  else if (fam == "generalized_cone") cfg.construction = parse_cone(c);
  else if (fam == "gauss_type_d") cfg.construction = parse_gauss(c, origin);
  else cfg.construction = parse_custom(c, origin);
  c.finish();

  if (top.has("grid")) {
    MapReader g(top.node("grid"), "grid", origin);
    cfg.grid.resolution = g.get("resolution", cfg.grid.resolution);
    cfg.grid.leaf_length = g.get("leaf_length", cfg.grid.leaf_length);
    cfg.grid.leaf_step = g.get("leaf_step", cfg.grid.leaf_step);
    cfg.grid.obj_resolution = g.get("obj_resolution", cfg.grid.obj_resolution);
    const YAML::Node rn = g.node("resolution");
    for (int r : cfg.grid.resolution)
      if (r < 1) g.fail(rn, "resolutions must be positive");
    if (!cfg.grid.resolution.empty()) {
      const int dim = chart_dim(cfg.construction);
      if (static_cast<int>(cfg.grid.resolution.size()) != dim) {
        g.fail(rn, "resolution needs " + std::to_string(dim) + " entries, one per chart variable");
      }
      if (std::holds_alternative<TubeSpec>(cfg.construction) && cfg.grid.resolution[0] != cfg.grid.resolution[1]) {
        g.fail(rn, "tube fiber resolutions must agree");
      }
    }
    if (!(cfg.grid.leaf_length > 0.0) || !(cfg.grid.leaf_step > 0.0)) g.fail(g.node("leaf_step"), "leaf steps must be positive");
    if (cfg.grid.obj_resolution < 2) g.fail(g.node("obj_resolution"), "obj_resolution must be at least 2");
    g.finish();
  }

  if (top.has("tolerances")) {
    const YAML::Node t = top.node("tolerances");
    MapReader tr(t, "tolerances", origin);
    for (const auto& name : tolerance_names()) {
      if (!tr.has(name)) continue;
      const double v = tr.get<double>(name, 0.0);
      if (!(v > 0.0)) tr.fail(t[name], "tolerance '" + name + "' must be positive");
      cfg.tolerances[name] = v;
    }
    tr.finish();
  }

  if (top.has("outputs")) {
    const YAML::Node o = top.node("outputs");
    if (!o.IsSequence()) top.fail(o, "outputs must be a list");
    for (const auto& item : o) {
      MapReader orr(item, "output", origin);
      OutputSpec os;
      os.format = orr.choice("format", "", {"obj", "csv", "json"});
      os.project = orr.get("project", os.project);
      if (os.project.size() != 3) orr.fail(item, "project needs three ambient coordinates");
      orr.finish();
      cfg.outputs.push_back(std::move(os));
    }
  }
  top.finish();
  return cfg;
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, 0, "cannot read file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

namespace {

nlohmann::ordered_json interval_json(const Interval& i) { return nlohmann::ordered_json::array({i.lo, i.hi}); }

nlohmann::ordered_json intervals_json(const std::vector<Interval>& v) {
  auto a = nlohmann::ordered_json::array();
  for (const auto& i : v) a.push_back(interval_json(i));
  return a;
}

struct ConstructionJson {
  nlohmann::ordered_json& j;
  void operator()(const TubeSpec& s) const {
    j["model"] = s.model;
    j["fiber_center"] = s.fiber_center;
    j["fiber_radius"] = s.fiber_radius;
    j["perturbation"] = s.perturbation;
  }
  void operator()(const RuledSpec& s) const {
    j["model"] = s.model;
    j["twist"] = s.twist;
    j["tilt"] = s.tilt;
    j["s"] = interval_json(s.s);
    j["t"] = intervals_json(s.t);
  }
  void operator()(const SurfacelikeSpec& s) const {
    j["kind"] = s.kind;
    j["surface"] = s.surface;
    j["n"] = s.n;
    j["d0"] = s.d0;
  }
  void operator()(const ConeSpec& s) const {
    j["surface"] = s.surface;
    j["target"] = s.target;
    j["n"] = s.n;
    j["d0"] = s.d0;
    if (!s.fiber.empty()) j["fiber"] = intervals_json(s.fiber);
  }
  void operator()(const GaussSpec& s) const {
    j["frame"] = s.frame;
    j["epsilon"] = s.epsilon;
    j["theta"] = s.theta;
    j["window"] = s.window;
    if (!s.fiber.empty()) j["fiber"] = intervals_json(s.fiber);
    nlohmann::ordered_json g;
    g["linear"] = s.gamma.linear;
    g["exponential"] = s.gamma.exponential;
    j["gamma"] = g;
  }
  void operator()(const CustomSpec& s) const {
    j["n"] = s.n;
    j["domain"] = intervals_json(s.domain);
    auto g = nlohmann::ordered_json::array();
    for (const auto& m : s.graph) g.push_back({{"coeff", m.coeff}, {"powers", m.powers}});
    j["graph"] = g;
    j["normal_field"] = s.normal_field;
    j["expect"] = s.expect;
  }
};

}  // namespace

nlohmann::ordered_json to_json(const PipelineConfig& cfg) {
  nlohmann::ordered_json j;
  j["name"] = cfg.name;
  nlohmann::ordered_json c;
  c["family"] = cfg.family();
  std::visit(ConstructionJson{c}, cfg.construction);
  j["construction"] = c;
  nlohmann::ordered_json g;
  if (!cfg.grid.resolution.empty()) g["resolution"] = cfg.grid.resolution;
  g["leaf_length"] = cfg.grid.leaf_length;
  g["leaf_step"] = cfg.grid.leaf_step;
  g["obj_resolution"] = cfg.grid.obj_resolution;
  j["grid"] = g;
  nlohmann::ordered_json t = nlohmann::ordered_json::object();
  for (const auto& [k, v] : cfg.tolerances) t[k] = v;
  j["tolerances"] = t;
  auto o = nlohmann::ordered_json::array();
  for (const auto& os : cfg.outputs) o.push_back({{"format", os.format}, {"project", os.project}});
  j["outputs"] = o;
  return j;
}

}  // namespace tgf::cli
