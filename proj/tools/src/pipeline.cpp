#include "pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "tgf/charts.hpp"
#include "tgf/error.hpp"

namespace tgf::cli {

namespace {

constexpr double kPi = std::numbers::pi;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---- partial tubes

ChartImmersion fiber_sphere(double center, double r, std::optional<double> last) {
  const int dim = last ? 4 : 3;
  return {"fiber_sphere", {{-3.0, 3.0}, {-1.0, 1.0}}, Target::flat(dim), closed_form([center, r, last](std::span<const Jet> x) {
            const Jet cb = cos(x[1]);
            JetVector v{center + r * cos(x[0]) * cb, r * sin(x[0]) * cb, r * sin(x[1])};
            if (last) v.push_back(x[0] * 0.0 + *last);
            return v;
          })};
}

Example build_tube(const TubeSpec& s, const PipelineConfig& cfg) {
  TubeOptions opt;
  if (!cfg.grid.resolution.empty()) {
    opt.fiber_resolution = cfg.grid.resolution[0];
    opt.curve_resolution = cfg.grid.resolution[2];
  }
  PartialTube pt = [&] {
    if (s.model == "euclidean") {
      const ChartImmersion circle("circle", {{-3.0, 3.0}}, Target::flat(4), closed_form([](std::span<const Jet> x) {
                                    const Jet z = x[0] * 0.0;
                                    return JetVector{cos(x[0]), sin(x[0]), z, z};
                                  }));
      std::vector<Vec> frame{(Vec(4) << -std::cos(-3.0), -std::sin(-3.0), 0, 0).finished(), Vec::Unit(4, 2), Vec::Unit(4, 3)};
      const auto fc = parallel_frame(SpaceForm::euclidean(4), circle, std::move(frame), 1200);
      return build_partial_tube(fc, fiber_sphere(s.fiber_center, s.fiber_radius, std::nullopt), opt);
    }
    if (s.fiber_center != 0.0) throw Error(ErrorKind::Input, "model tubes need fiber_center = 0");
    const bool sph = s.model == "spherical";
    const double r = s.fiber_radius;
    if (sph && r >= 1.0) throw Error(ErrorKind::Input, "spherical tube needs fiber_radius < 1");
    const ChartImmersion curve =
        sph ? ChartImmersion("great_circle", {{0.0, 2 * kPi}}, Target::quadric(5, 0, 1.0), closed_form([](std::span<const Jet> x) {
                               const Jet z = x[0] * 0.0;
                               return JetVector{cos(x[0]), sin(x[0]), z, z, z};
                             }))
            : ChartImmersion("geodesic", {{-1.0, 1.0}}, Target::quadric(5, 1, -1.0), closed_form([](std::span<const Jet> x) {
                               const Jet z = x[0] * 0.0;
                               return JetVector{cosh(x[0]), sinh(x[0]), z, z, z};
                             }));
    const SpaceForm sf = sph ? SpaceForm::sphere(4) : SpaceForm::hyperbolic(4);
    const auto fc = parallel_frame(sf, curve, {Vec::Unit(5, 2), Vec::Unit(5, 3), Vec::Unit(5, 4)}, 600);
    const double last = sph ? std::sqrt(1 - r * r) : std::sqrt(1 + r * r);
    return build_partial_tube(fc, fiber_sphere(0.0, r, last), opt);
  }();
  if (s.perturbation != 0.0) pt = perturbed_tube(pt, s.perturbation);
  return make_partial_tube_example(pt, cfg.name);
}

// ---- ruled

Example build_ruled(const RuledSpec& s, const PipelineConfig& cfg) {
  RuledOptions opt;
  opt.t = s.t;
  opt.resolution = cfg.grid.resolution;
  const bool hyp = s.model == "hyperbolic";
  const int dim = hyp ? 5 : 4;
  const ChartImmersion base = hyp ? ChartImmersion("geodesic", {s.s}, Target::quadric(5, 1, -1.0), closed_form([](std::span<const Jet> x) {
                                                     const Jet z = x[0] * 0.0;
                                                     return JetVector{cosh(x[0]), sinh(x[0]), z, z, z};
                                                   }))
                                  : ChartImmersion("line", {s.s}, Target::flat(4), closed_form([](std::span<const Jet> x) {
                                                     const Jet z = x[0] * 0.0;
                                                     return JetVector{z, z, x[0] + 0.0, z};
                                                   }));
  const double w = s.twist, a = s.tilt, c = std::sqrt(1.0 - s.tilt * s.tilt);
  // rulings rotate in a plane orthogonal to the base with angular speed w
  const int off = hyp ? 2 : 0;
  return make_ruled(
      base,
      [=](const Jet& t) {
        const Jet z = t * 0.0;
        JetVector v1(static_cast<std::size_t>(dim), z), v2(static_cast<std::size_t>(dim), z);
        v1[off] = cos(w * t);
        v1[off + 1] = sin(w * t);
        v2[off] = -a * sin(w * t);
        v2[off + 1] = a * cos(w * t);
        v2[dim - 1] = z + c;
        return std::vector<JetVector>{v1, v2};
      },
      opt);
}

// ---- surfacelike and cones

ChartImmersion h3_tube() {
  const double ch = std::cosh(0.5), sh = std::sinh(0.5);
  return {"h3_tube", {{-1.0, 1.0}, {-1.0, 1.0}}, Target::quadric(4, 1, -1.0), closed_form([ch, sh](std::span<const Jet> x) {
            return JetVector{ch * cosh(x[1]), sh * cos(x[0]), sh * sin(x[0]), ch * sinh(x[1])};
          })};
}

ChartImmersion base_surface(const std::string& name, bool in_s3) {
  if (name == "sphere") return charts::sphere(in_s3 ? 0.8 : 1.0, in_s3, {-1.2, 1.2}, {-1.0, 1.0});
  if (name == "cylinder") return charts::cylinder();
  if (name == "clifford_torus") return charts::clifford_torus(4);
  return h3_tube();
}

Example build_surfacelike(const SurfacelikeSpec& s, const PipelineConfig& cfg) {
  SurfacelikeBuildOptions opt;
  opt.resolution = cfg.grid.resolution;
  const bool conical = s.kind == "conical";
  Example ex = make_surfacelike(base_surface(s.surface, conical), conical ? SurfacelikeKind::Conical : SurfacelikeKind::Cylindrical,
                                s.n, constant_field(s.d0), opt);
  return ex;
}

SpaceForm model(const std::string& name, int intrinsic_dim) {
  if (name == "spherical") return SpaceForm::sphere(intrinsic_dim);
  if (name == "hyperbolic") return SpaceForm::hyperbolic(intrinsic_dim);
  return SpaceForm::euclidean(intrinsic_dim);
}

Example build_cone(const ConeSpec& s, const PipelineConfig& cfg) {
  ConeOptions opt;
  opt.fiber = s.fiber;
  opt.resolution = cfg.grid.resolution;
  return make_generalized_cone(base_surface(s.surface, false), model(s.target, s.n + 1), constant_field(s.d0), opt);
}

// ---- Gauss parametrization of type-D data

ChartImmersion helicoid_surface() {
  return {"helicoid", {{-1.0, 1.0}, {-0.8, 0.8}}, Target::flat(3), closed_form([](std::span<const Jet> x) {
            return JetVector{x[1] * cos(x[0]), x[1] * sin(x[0]), x[0] + 0.0};
          })};
}

TypeDFrame gauss_frame(const GaussSpec& s) {
  const Interval w{-s.window, s.window};
  if (s.frame == "clifford") {
    return {charts::clifford_conjugate(s.theta, s.epsilon == 0 ? 4 : 5, w, w), constant_field({1.0, 0.0}),
            constant_field({0.0, std::sqrt(2.0)})};
  }
  if (s.frame == "de_sitter") {
    const double a = 0.5, b2 = 1.0 + a * a;
    const double st = std::sin(s.theta), ct = std::cos(s.theta);
    const double len = std::sqrt(a * a * st * st + b2 * ct * ct);
    return {charts::de_sitter_conjugate(a, s.theta, 5, w, w), constant_field({1.0, 0.0}), constant_field({0.0, 1.0 / len})};
  }
  return {charts::great_sphere(s.epsilon == 0 ? 4 : 5, w, w), constant_field({1.0, 0.0}), constant_field({0.0, 1.0})};
}

JetMap support_function(const GaussSpec& s, const ChartImmersion& g) {
  const std::vector<double> c = s.gamma.linear;
  if (!c.empty() && static_cast<int>(c.size()) != g.ambient_dim()) {
    throw Error(ErrorKind::Input, "gamma.linear needs " + std::to_string(g.ambient_dim()) + " coefficients");
  }
  if (s.gamma.exponential != 0.0 && s.frame != "clifford") {
    throw Error(ErrorKind::Input, "gamma.exponential solves the support equation on the clifford frame only");
  }
  const double b = std::sin(2 * s.theta) / 2, e = s.gamma.exponential;
  const JetMap ge = g.evaluator();
  return [ge, c, b, e](std::span<const double> p, int order) {
    const JetVector x = seed(p, order);
    Jet sum = x[0] * 0.0;
    if (!c.empty()) {
      const JetVector v = ge(p, order);
      for (std::size_t i = 0; i < c.size(); ++i) sum += c[i] * v[i];
    }
    if (e != 0.0) sum += e * exp(0.8 * x[0] - b / 0.8 * x[1]);
    return JetVector{sum};
  };
}

Built build_gauss(const GaussSpec& s, const PipelineConfig& cfg) {
  TypeDHypersurfaceOptions opt;
  opt.gauss.resolution = cfg.grid.resolution;
  opt.gauss.fiber = s.fiber;
  opt.gauss.det_tol = cfg.tolerance("det");
  if (s.frame == "de_sitter" && s.epsilon != -1) throw Error(ErrorKind::Structural, "the de_sitter frame needs epsilon = -1");
  if (s.frame != "de_sitter" && s.epsilon == -1) throw Error(ErrorKind::Structural, "epsilon = -1 needs the de_sitter frame");
  Built b;
  if (s.epsilon == 0) {
    TypeDPair tp;
    if (s.frame == "helicoid_support") {
      if (!s.gamma.linear.empty() || s.gamma.exponential != 0.0) {
        throw Error(ErrorKind::Input, "helicoid_support fixes gamma itself");
      }
      tp = support_pair(helicoid_surface());
    } else {
      tp.frame = gauss_frame(s);
      tp.gamma = support_function(s, tp.frame.g);
    }
    b.ex = make_type_d_hypersurface(tp, opt);
    b.pair = std::move(tp);
  } else {
    if (s.frame == "helicoid_support") throw Error(ErrorKind::Structural, "helicoid_support needs epsilon = 0");
    if (!s.gamma.linear.empty() || s.gamma.exponential != 0.0) {
      throw Error(ErrorKind::Input, "gamma is only used for epsilon = 0");
    }
    // the first normal of a Clifford frame in S^4 is constant, where A_w = 0
    if (s.epsilon == 1 && opt.gauss.fiber.empty()) opt.gauss.fiber = {{0.3, 2.8}};
    b.ex = make_type_d_hypersurface(gauss_frame(s), s.epsilon, opt);
  }
  return b;
}

// ---- custom graphs

Example build_custom(const CustomSpec& s, const PipelineConfig& cfg) {
  const int n = s.n;
  const std::vector<Monomial> graph = s.graph;
  const ChartImmersion f("graph", s.domain, Target::flat(n + 1), closed_form([n, graph](std::span<const Jet> x) {
                           JetVector v(x.begin(), x.end());
                           Jet h = x[0] * 0.0;
                           for (const auto& m : graph) {
                             Jet term = x[0] * 0.0 + m.coeff;
                             for (int i = 0; i < n; ++i)
                               for (int k = 0; k < m.powers[static_cast<std::size_t>(i)]; ++k) term = term * x[i];
                             h += term;
                           }
                           v.push_back(h);
                           return v;
                         }));
  std::vector<int> res = cfg.grid.resolution;
  if (res.empty()) res.assign(static_cast<std::size_t>(n), n > 3 ? 5 : 9);
  Example ex;
  ex.name = cfg.name;
  ex.family = "custom_chart";
  ex.data = make_hypersurface_data(f, std::span<const int>(res));
  ex.dist = unit_distribution(f, constant_field(s.normal_field));
  if (s.expect == "i") ex.expected = static_cast<unsigned>(TrichotomyClass::Ruled);
  if (s.expect == "ii") ex.expected = static_cast<unsigned>(TrichotomyClass::Invariant);
  if (s.expect == "iii") ex.expected = static_cast<unsigned>(TrichotomyClass::Nullity);
  return ex;
}

struct Builder {
  const PipelineConfig& cfg;
  Built operator()(const TubeSpec& s) const { return {build_tube(s, cfg), std::nullopt}; }
  Built operator()(const RuledSpec& s) const { return {build_ruled(s, cfg), std::nullopt}; }
  Built operator()(const SurfacelikeSpec& s) const { return {build_surfacelike(s, cfg), std::nullopt}; }
  Built operator()(const ConeSpec& s) const { return {build_cone(s, cfg), std::nullopt}; }
  Built operator()(const GaussSpec& s) const { return build_gauss(s, cfg); }
  Built operator()(const CustomSpec& s) const { return {build_custom(s, cfg), std::nullopt}; }
};

Check make_check(std::string name, double residual, double tol) {
  return {std::move(name), residual, tol, std::isfinite(residual) && residual <= tol};
}

double fraction_without(const FoliationReport& rep, unsigned bits) {
  if (rep.samples.empty()) return 1.0;
  int miss = 0;
  for (const auto& s : rep.samples)
    if ((s.classes & bits) != bits) ++miss;
  return static_cast<double>(miss) / static_cast<double>(rep.samples.size());
}

}  // namespace

Built build(const PipelineConfig& cfg) {
  Built b = std::visit(Builder{cfg}, cfg.construction);
  b.ex.name = cfg.name;
  return b;
}

std::vector<Check> run_checks(const Built& b, const PipelineConfig& cfg, double tol_scale) {
  const auto tol = [&](const std::string& k) { return cfg.tolerance(k) * tol_scale; };
  const Example& ex = b.ex;
  const HypersurfaceData& hd = ex.data;
  std::vector<Check> out;
  out.push_back(make_check("normal", hd.max_normal_residual(), tol("normal")));
  out.push_back(make_check("unit", unit_residual(hd, ex.dist), tol("unit")));

  const FoliationReport rep = trichotomy_classify(hd, ex.dist, {cfg.tolerance("class")});
  const bool foliation_claim = ex.expected != 0;
  if (foliation_claim) {
    out.push_back(make_check("tg", rep.max_tg_residual, tol("tg")));
    out.push_back(make_check("class", fraction_without(rep, ex.expected), tol("class_fraction")));
    LeafSurveyOptions lo;
    lo.step = cfg.grid.leaf_step;
    const LeafSurvey ls = leaf_survey(hd, ex.dist, cfg.grid.leaf_length, lo);
    // no full-length shot means the claim is untested; report the partial drift and fail
    Check drift = make_check("drift", ls.full_length > 0 ? ls.max_drift : ls.max_drift_any, tol("drift"));
    if (ls.full_length == 0) drift.pass = false;
    out.push_back(drift);
  }

  if (ex.tube) {
    out.push_back(make_check("principal", principal_direction_residual(*ex.tube), tol("principal")));
    out.push_back(make_check("off_block", off_block_metric_residual(*ex.tube), tol("off_block")));
  }
  if (hd.space_form.epsilon() != 0) {
    double r = 0.0;
    for (const auto& s : hd.samples) r = std::max(r, on_form_residual(hd.space_form, hd.f.value(s.point)));
    out.push_back(make_check("on_model", r, tol("on_model")));
  }

  if (ex.gauss) {
    const GaussChart& gc = *ex.gauss;
    const int n = hd.n();
    int wrong_nullity = 0;
    for (const auto& s : hd.samples)
      if (s.nullity != n - 2) ++wrong_nullity;
    out.push_back(make_check("nullity_index", static_cast<double>(wrong_nullity) / static_cast<double>(hd.samples.size()),
                             tol("class_fraction")));
    double g = 0.0;
    for (std::size_t i = 0; i < gc.samples.size(); ++i) {
      if (!gc.regular[i]) continue;
      const GaussResiduals r = gauss_residuals(gc, gc.samples[i]);
      g = std::max({g, r.isometry, r.shape, r.splitting, r.connection, r.nullity_parallel, r.gauss_map});
    }
    out.push_back(make_check("gauss_identity", g, tol("gauss_identity")));
  }
  if (b.pair) out.push_back(make_check("pair", check_pair(*b.pair).max_hessian, tol("pair")));

  if (const auto* sl = std::get_if<SurfacelikeSpec>(&cfg.construction)) {
    const auto flags = detect_surfacelike(hd);
    int miss = 0;
    for (const auto& f : flags)
      if (!(sl->kind == "conical" ? f.conical : f.cylindrical)) ++miss;
    out.push_back(make_check(sl->kind, static_cast<double>(miss) / static_cast<double>(std::max<std::size_t>(1, flags.size())),
                             tol("flag_fraction")));
  }
  return out;
}

nlohmann::ordered_json report_json(const PipelineConfig& cfg, const std::vector<Check>& checks) {
  nlohmann::ordered_json j;
  j["name"] = cfg.name;
  j["family"] = cfg.family();
  auto arr = nlohmann::ordered_json::array();
  bool all = true;
  for (const auto& c : checks) {
    arr.push_back({{"name", c.name}, {"residual", c.residual}, {"tolerance", c.tolerance}, {"pass", c.pass}});
    all = all && c.pass;
  }
  j["checks"] = arr;
  j["pass"] = all;
  return j;
}

nlohmann::ordered_json manifest_json(const PipelineConfig& cfg, const Built& b) {
  const HypersurfaceData& hd = b.ex.data;
  nlohmann::ordered_json j;
  j["name"] = cfg.name;
  j["family"] = cfg.family();
  j["config"] = to_json(cfg);
  nlohmann::ordered_json chart;
  chart["dim"] = hd.n();
  chart["ambient_dim"] = hd.f.ambient_dim();
  chart["epsilon"] = hd.space_form.epsilon();
  auto dom = nlohmann::ordered_json::array();
  for (const auto& iv : hd.f.domain()) dom.push_back({iv.lo, iv.hi});
  chart["domain"] = dom;
  j["chart"] = chart;
  j["samples"] = b.ex.gauss ? b.ex.gauss->samples.size() : hd.samples.size();
  j["regular_samples"] = hd.samples.size();
  nlohmann::ordered_json slice;
  slice["variables"] = {0, 1};
  auto fixed = nlohmann::ordered_json::array();
  for (int i = 2; i < hd.n(); ++i) fixed.push_back({{"variable", i}, {"value", hd.f.domain()[static_cast<std::size_t>(i)].mid()}});
  slice["fixed"] = fixed;
  slice["resolution"] = cfg.grid.obj_resolution;
  j["obj_slice"] = slice;
  return j;
}

void write_samples_csv(const Built& b, std::ostream& out) {
  const HypersurfaceData& hd = b.ex.data;
  const int n = hd.n(), m = hd.f.ambient_dim();
  for (int i = 0; i < n; ++i) out << "x" << i << ",";
  for (int i = 0; i < m; ++i) out << "p" << i << ",";
  for (int i = 0; i < m; ++i) out << "n" << i << ",";
  for (int i = 0; i < n; ++i) out << "k" << i << ",";
  out << "nullity\r\n";
  const auto row = [&](const std::vector<double>& p, const HypersurfaceSample* s) {
    for (double v : p) out << num(v) << ",";
    if (!s) {
      for (int i = 0; i < 2 * m + n; ++i) out << ",";
      out << "\r\n";
      return;
    }
    const Vec x = hd.f.value(p);
    for (int i = 0; i < m; ++i) out << num(x[i]) << ",";
    for (int i = 0; i < m; ++i) out << num(s->normal[i]) << ",";
    // A is self-adjoint for the induced metric, so its spectrum is real
    Eigen::EigenSolver<Mat> es(s->shape, false);
    std::vector<double> k;
    for (int i = 0; i < n; ++i) k.push_back(es.eigenvalues()[i].real());
    std::sort(k.begin(), k.end());
    for (double v : k) out << num(v) << ",";
    out << s->nullity << "\r\n";
  };
  if (b.ex.gauss) {
    const GaussChart& gc = *b.ex.gauss;
    std::size_t next = 0;
    for (std::size_t i = 0; i < gc.samples.size(); ++i) row(gc.samples[i], gc.regular[i] ? &hd.samples[next++] : nullptr);
  } else {
    for (const auto& s : hd.samples) row(s.point, &s);
  }
}

void write_classify_csv(const Built& b, const PipelineConfig& cfg, std::ostream& out) {
  const HypersurfaceData& hd = b.ex.data;
  const FoliationReport rep = trichotomy_classify(hd, b.ex.dist, {cfg.tolerance("class")});
  const auto flags = detect_surfacelike(hd);
  for (int i = 0; i < hd.n(); ++i) out << "x" << i << ",";
  out << "class,nu,tg_residual,cylindrical,conical\r\n";
  for (std::size_t i = 0; i < rep.samples.size(); ++i) {
    const auto& s = rep.samples[i];
    for (double v : s.point) out << num(v) << ",";
    out << class_label(s.classes) << "," << s.nullity << "," << num(s.tg_residual) << "," << (flags[i].cylindrical ? 1 : 0) << ","
        << (flags[i].conical ? 1 : 0) << "\r\n";
  }
}

void write_obj(const Built& b, const PipelineConfig& cfg, const std::vector<int>& project, std::ostream& out) {
  const ChartImmersion& f = b.ex.data.f;
  for (int c : project)
    if (c < 0 || c >= f.ambient_dim()) throw Error(ErrorKind::Input, "projection coordinate " + std::to_string(c) + " out of range");
  const int r = cfg.grid.obj_resolution;
  std::vector<double> p = f.center();
  const Interval u = f.domain()[0], v = f.domain()[1];
  out << "# " << cfg.name << ": chart variables 0 and 1, others at the domain midpoint\n";
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) {
      p[0] = u.lo + u.width() * i / (r - 1);
      p[1] = v.lo + v.width() * j / (r - 1);
      const Vec x = f.value(p);
      out << "v " << num(x[project[0]]) << " " << num(x[project[1]]) << " " << num(x[project[2]]) << "\n";
    }
  }
  for (int i = 0; i + 1 < r; ++i) {
    for (int j = 0; j + 1 < r; ++j) {
      const int a = i * r + j + 1;
      out << "f " << a << " " << a + r << " " << a + r + 1 << " " << a + 1 << "\n";
    }
  }
}

std::filesystem::path export_format(const Built& b, const PipelineConfig& cfg, const std::string& format,
                                    const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto path = dir / (cfg.name + "." + format);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  if (format == "obj") {
    std::vector<int> project{0, 1, 2};
    for (const auto& o : cfg.outputs)
      if (o.format == "obj") project = o.project;
    write_obj(b, cfg, project, out);
  } else if (format == "csv") {
    write_samples_csv(b, out);
  } else if (format == "json") {
    out << manifest_json(cfg, b).dump(2) << "\n";
  } else {
    throw std::invalid_argument("unsupported format '" + format + "'");
  }
  return path;
}

}  // namespace tgf::cli
