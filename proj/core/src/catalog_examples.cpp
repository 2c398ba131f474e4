#include <cmath>
#include <map>
#include <numbers>

#include "tgf/catalog.hpp"
#include "tgf/charts.hpp"
#include "tgf/differential.hpp"
#include "tgf/error.hpp"

namespace tgf {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPi8 = kPi / 8;

JetVector cross(const JetVector& a, const JetVector& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

JetVector unit_normal(const JetVector& f) {
  const auto d = partials(f);
  const JetVector c = cross(d[0], d[1]);
  const Jet len = sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
  return (1.0 / len) * c;
}

}  // namespace

TypeDPair support_pair(const ChartImmersion& f) {
  if (f.dim() != 2 || f.on_model() || f.ambient_dim() != 3 || f.form().mu != 0) {
    throw Error(ErrorKind::Structural, "support_pair needs a surface in R^3");
  }
  const AmbientForm e3{3, 0};
  JetMap gauss = [f](std::span<const double> p, int order) {
    JetVector n = unit_normal(f.eval(p, order + 1));
    n.push_back(n[0] * 0.0);
    return n;
  };
  ChartImmersion g("gauss_map(" + f.name() + ")", f.domain(), Target::quadric(4, 0, 1.0), gauss);
  JetMap gamma = [f, e3](std::span<const double> p, int order) {
    const JetVector x = f.eval(p, order + 1);
    return JetVector{inner(e3, truncated(x, order), unit_normal(x))};
  };
  VectorField y = [f, e3](std::span<const double> p, int order) {
    const JetVector x = f.eval(p, order + 2);
    const auto dh = partials(unit_normal(x));
    const auto df = partials(truncated(x, order + 1));
    const Jet ee = inner(e3, df[0], df[0]);
    const Jet ff = inner(e3, df[0], df[1]);
    const Jet gg = inner(e3, df[1], df[1]);
    // f-unit normal of d_v inside the tangent plane
    const Jet len = sqrt(ee - ff * ff / gg);
    const JetVector yt{1.0 / len, -(ff / gg) / len};
    JetVector rhs;
    for (int k = 0; k < 2; ++k) rhs.push_back(inner(e3, dh[k], df[0]) * yt[0] + inner(e3, dh[k], df[1]) * yt[1]);
    return solve(first_form(e3, dh), rhs);
  };
  return {TypeDFrame{std::move(g), constant_field({0.0, 1.0}), std::move(y)}, std::move(gamma)};
}

namespace catalog {

namespace {

ChartImmersion line_base(Interval s) {
  return {"line", {s}, Target::flat(4), closed_form([](std::span<const Jet> x) {
            const Jet z = x[0] * 0.0;
            return JetVector{z, z, x[0] + 0.0, z};
          })};
}

Example helicoid(bool coarse) {
  RuledOptions opt;
  opt.resolution = coarse ? std::vector<int>{5, 5, 5} : std::vector<int>{9, 9, 9};
  return make_ruled(
      line_base({-1.0, 1.0}),
      [](const Jet& s) {
        const Jet z = s * 0.0;
        return std::vector<JetVector>{{cos(s), sin(s), z, z}, {-0.6 * sin(s), 0.6 * cos(s), z, z + 0.8}};
      },
      opt);
}

Example ruled_plane(bool coarse) {
  RuledOptions opt;
  opt.resolution = coarse ? std::vector<int>{3, 3, 3} : std::vector<int>{5, 5, 5};
  const ChartImmersion base("axis", {{-1.0, 1.0}}, Target::flat(4), closed_form([](std::span<const Jet> x) {
                              const Jet z = x[0] * 0.0;
                              return JetVector{x[0] + 0.0, z, z, z};
                            }));
  return make_ruled(
      base,
      [](const Jet& s) {
        const Jet z = s * 0.0;
        return std::vector<JetVector>{{z, z + 1.0, z, z}, {z, z, z + 1.0, z}};
      },
      opt);
}

Example ruled_hyperbolic(bool coarse) {
  RuledOptions opt;
  opt.resolution = coarse ? std::vector<int>{5, 5, 5} : std::vector<int>{9, 9, 9};
  const ChartImmersion base("geodesic", {{-1.0, 1.0}}, Target::quadric(5, 1, -1.0), closed_form([](std::span<const Jet> x) {
                              const Jet z = x[0] * 0.0;
                              return JetVector{cosh(x[0]), sinh(x[0]), z, z, z};
                            }));
  return make_ruled(
      base,
      [](const Jet& s) {
        const Jet z = s * 0.0;
        return std::vector<JetVector>{{z, z, cos(s), sin(s), z}, {z, z, -0.6 * sin(s), 0.6 * cos(s), z + 0.8}};
      },
      opt);
}

TubeOptions tube_options(bool coarse) {
  TubeOptions opt;
  opt.fiber_resolution = coarse ? 5 : 9;
  opt.curve_resolution = coarse ? 5 : 17;
  return opt;
}

// 2-sphere of radius r around `center` on the first normal, plus `last` in
// an extra coordinate when the tube lives in a quadric
ChartImmersion fiber_sphere(double center, double r, std::optional<double> last) {
  const int dim = last ? 4 : 3;
  return {"fiber_sphere", {{-3.0, 3.0}, {-1.0, 1.0}}, Target::flat(dim), closed_form([center, r, last](std::span<const Jet> x) {
            const Jet cb = cos(x[1]);
            JetVector v{center + r * cos(x[0]) * cb, r * sin(x[0]) * cb, r * sin(x[1])};
            if (last) v.push_back(x[0] * 0.0 + *last);
            return v;
          })};
}

Example tube_torus(bool coarse) {
  const ChartImmersion circle("circle", {{-3.0, 3.0}}, Target::flat(4), closed_form([](std::span<const Jet> x) {
                                const Jet z = x[0] * 0.0;
                                return JetVector{cos(x[0]), sin(x[0]), z, z};
                              }));
  std::vector<Vec> frame{(Vec(4) << -std::cos(-3.0), -std::sin(-3.0), 0, 0).finished(), Vec::Unit(4, 2), Vec::Unit(4, 3)};
  const auto fc = parallel_frame(SpaceForm::euclidean(4), circle, std::move(frame), coarse ? 600 : 1200);
  return make_partial_tube_example(build_partial_tube(fc, fiber_sphere(0.5, 0.3, std::nullopt), tube_options(coarse)),
                                   "tube_torus_r4");
}

Example tube_model(int eps, bool coarse) {
  const double r = 0.6;
  const ChartImmersion curve =
      eps > 0 ? ChartImmersion("great_circle", {{0.0, 2 * kPi}}, Target::quadric(5, 0, 1.0), closed_form([](std::span<const Jet> x) {
                                 const Jet z = x[0] * 0.0;
                                 return JetVector{cos(x[0]), sin(x[0]), z, z, z};
                               }))
              : ChartImmersion("geodesic", {{-1.0, 1.0}}, Target::quadric(5, 1, -1.0), closed_form([](std::span<const Jet> x) {
                                 const Jet z = x[0] * 0.0;
                                 return JetVector{cosh(x[0]), sinh(x[0]), z, z, z};
                               }));
  const SpaceForm sf = eps > 0 ? SpaceForm::sphere(4) : SpaceForm::hyperbolic(4);
  const auto fc = parallel_frame(sf, curve, {Vec::Unit(5, 2), Vec::Unit(5, 3), Vec::Unit(5, 4)}, coarse ? 300 : 600);
  const double last = eps > 0 ? std::sqrt(1 - r * r) : std::sqrt(1 + r * r);
  return make_partial_tube_example(build_partial_tube(fc, fiber_sphere(0.0, r, last), tube_options(coarse)),
                                   eps > 0 ? "tube_spherical_s4" : "tube_hyperbolic_h4");
}

VectorField hopf() { return constant_field({1.0, 1.0}); }

Example cylindrical_sphere(bool coarse) {
  SurfacelikeBuildOptions opt;
  opt.resolution = coarse ? std::vector<int>{5, 5, 3} : std::vector<int>{9, 9, 5};
  return make_surfacelike(charts::sphere(1.0, false, {-1.2, 1.2}, {-1.0, 1.0}), SurfacelikeKind::Cylindrical, 3,
                          constant_field({0.0, 1.0}), opt);
}

Example conical_clifford(bool coarse) {
  SurfacelikeBuildOptions opt;
  opt.resolution = coarse ? std::vector<int>{5, 5, 3} : std::vector<int>{9, 9, 5};
  return make_surfacelike(charts::clifford_torus(4), SurfacelikeKind::Conical, 3, hopf(), opt);
}

ConeOptions cone_options(int k, bool coarse) {
  ConeOptions opt;
  opt.resolution = coarse ? std::vector<int>{5, 5} : std::vector<int>{9, 9};
  for (int i = 0; i < k; ++i) opt.resolution.push_back(coarse ? 3 : 5);
  return opt;
}

Example cone_euclidean(bool coarse) {
  return make_generalized_cone(charts::clifford_torus(4), SpaceForm::euclidean(4), hopf(), cone_options(1, coarse));
}

Example cone_spherical(bool coarse) {
  return make_generalized_cone(charts::clifford_torus(4), SpaceForm::sphere(4), hopf(), cone_options(1, coarse));
}

// equidistant tube of radius 0.5 around a geodesic of H^3; flat, with the
// v-lines geodesic
ChartImmersion h3_tube() {
  const double ch = std::cosh(0.5), sh = std::sinh(0.5);
  return {"h3_tube", {{-1.0, 1.0}, {-1.0, 1.0}}, Target::quadric(4, 1, -1.0), closed_form([ch, sh](std::span<const Jet> x) {
            return JetVector{ch * cosh(x[1]), sh * cos(x[0]), sh * sin(x[0]), ch * sinh(x[1])};
          })};
}

Example cone_hyperbolic(bool coarse) {
  return make_generalized_cone(h3_tube(), SpaceForm::hyperbolic(5), constant_field({0.0, 1.0}), cone_options(2, coarse));
}

TypeDFrame clifford_frame(int ambient_dim, Interval window = {-0.6, 0.6}) {
  return {charts::clifford_conjugate(kPi8, ambient_dim, window, window), constant_field({1.0, 0.0}),
          constant_field({0.0, std::sqrt(2.0)})};
}

TypeDFrame de_sitter_frame() {
  const double a = 0.5, b2 = 1.0 + a * a;
  const double len = std::sqrt(a * a * std::sin(kPi8) * std::sin(kPi8) + b2 * std::cos(kPi8) * std::cos(kPi8));
  return {charts::de_sitter_conjugate(a, kPi8, 5), constant_field({1.0, 0.0}), constant_field({0.0, 1.0 / len})};
}

TypeDHypersurfaceOptions gauss_options(bool coarse) {
  TypeDHypersurfaceOptions opt;
  if (coarse) opt.gauss.resolution = {7, 7, 3};
  return opt;
}

JetMap linear_height(const ChartImmersion& g, Vec c) {
  return [g, c = std::move(c)](std::span<const double> p, int order) {
    const JetVector v = g.evaluator()(p, order);
    Jet s = c[0] * v[0];
    for (int i = 1; i < c.size(); ++i) s += c[i] * v[i];
    return JetVector{s};
  };
}

Example typed_linear(bool coarse) {
  TypeDPair tp{clifford_frame(4), {}};
  tp.gamma = linear_height(tp.frame.g, (Vec(4) << 2.0, 0.0, -2.0, 0.0).finished());
  Example ex = make_type_d_hypersurface(tp, gauss_options(coarse));
  ex.name = "typed_euclidean_clifford_linear";
  return ex;
}

Example typed_generic(bool coarse) {
  TypeDPair tp{clifford_frame(4), {}};
  const JetMap lin = linear_height(tp.frame.g, (Vec(4) << 2.0, 0.0, -2.0, 0.0).finished());
  // b = sin(2 theta) / 2 on the Clifford net, a = 0
  const double b = std::sin(2 * kPi8) / 2;
  tp.gamma = [lin, b](std::span<const double> p, int order) {
    const JetVector x = seed(p, order);
    return JetVector{lin(p, order)[0] + 0.3 * exp(0.8 * x[0] - b / 0.8 * x[1])};
  };
  Example ex = make_type_d_hypersurface(tp, gauss_options(coarse));
  ex.name = "typed_euclidean_clifford";
  return ex;
}

Example typed_spherical(bool coarse) {
  // the first normal is the constant e5, where A_w = 0; keep the angle away from it
  TypeDHypersurfaceOptions opt = gauss_options(coarse);
  opt.gauss.fiber = {{0.3, 2.8}};
  Example ex = make_type_d_hypersurface(clifford_frame(5, {-1.2, 1.2}), 1, opt);
  ex.name = "typed_spherical_clifford";
  return ex;
}

Example typed_hyperbolic(bool coarse) {
  Example ex = make_type_d_hypersurface(de_sitter_frame(), -1, gauss_options(coarse));
  ex.name = "typed_hyperbolic_desitter";
  return ex;
}

ChartImmersion helicoid_surface() {
  return {"helicoid", {{-1.0, 1.0}, {-0.8, 0.8}}, Target::flat(3), closed_form([](std::span<const Jet> x) {
            return JetVector{x[1] * cos(x[0]), x[1] * sin(x[0]), x[0] + 0.0};
          })};
}

Example typed_degenerate(bool coarse) {
  Example ex = make_type_d_hypersurface(support_pair(helicoid_surface()), gauss_options(coarse));
  ex.name = "typed_degenerate_helicoid";
  return ex;
}

using Builder = Example (*)(bool);

const std::vector<std::pair<std::string, Builder>>& registry() {
  static const std::vector<std::pair<std::string, Builder>> r{
      {"ruled_helicoid_r4", helicoid},
      {"ruled_plane_r4", ruled_plane},
      {"ruled_h4", ruled_hyperbolic},
      {"tube_torus_r4", tube_torus},
      {"tube_spherical_s4", [](bool c) { return tube_model(1, c); }},
      {"tube_hyperbolic_h4", [](bool c) { return tube_model(-1, c); }},
      {"surfacelike_cylindrical_sphere", cylindrical_sphere},
      {"surfacelike_conical_clifford", conical_clifford},
      {"cone_euclidean_clifford", cone_euclidean},
      {"cone_spherical_clifford", cone_spherical},
      {"cone_hyperbolic_h5", cone_hyperbolic},
      {"typed_euclidean_clifford_linear", typed_linear},
      {"typed_euclidean_clifford", typed_generic},
      {"typed_spherical_clifford", typed_spherical},
      {"typed_hyperbolic_desitter", typed_hyperbolic},
      {"typed_degenerate_helicoid", typed_degenerate},
  };
  return r;
}

}  // namespace

std::vector<std::string> names() {
  std::vector<std::string> out;
  for (const auto& [name, _] : registry()) out.push_back(name);
  return out;
}

Example named(const std::string& name, bool coarse) {
  for (const auto& [n, build] : registry()) {
    if (n != name) continue;
    Example ex = build(coarse);
    ex.name = name;
    return ex;
  }
  throw Error(ErrorKind::Input, "unknown catalog example '" + name + "'");
}

}  // namespace catalog

}  // namespace tgf
