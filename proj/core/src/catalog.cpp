#include "tgf/catalog.hpp"

#include <cmath>
#include <numbers>

#include "tgf/charts.hpp"
#include "tgf/differential.hpp"
#include "tgf/error.hpp"

namespace tgf {

namespace {

constexpr unsigned kRuled = static_cast<unsigned>(TrichotomyClass::Ruled);
constexpr unsigned kInvariant = static_cast<unsigned>(TrichotomyClass::Invariant);
constexpr unsigned kNullity = static_cast<unsigned>(TrichotomyClass::Nullity);

// Constant coordinate field d_i on an n-dimensional chart.
VectorField coordinate_field(int i, int n) {
  std::vector<double> c(static_cast<std::size_t>(n), 0.0);
  c[static_cast<std::size_t>(i)] = 1.0;
  return constant_field(std::move(c));
}

// A field of the first two variables, extended by zero to n variables.
VectorField surface_field(VectorField d0, int n) {
  return [d0 = std::move(d0), n](std::span<const double> p, int order) {
    static const std::vector<int> map{0, 1};
    JetVector v = lifted(d0(p.first(2), order), n, map);
    const Jet zero = v.at(0) * 0.0;
    while (static_cast<int>(v.size()) < n) v.push_back(zero);
    return v;
  };
}

std::vector<int> default_resolution(const std::vector<int>& given, int n, int value) {
  if (!given.empty()) return given;
  return std::vector<int>(static_cast<std::size_t>(n), value);
}

void require_rank(const ChartImmersion& f, const std::vector<std::vector<double>>& samples, double tol) {
  for (const auto& p : samples) {
    const JetData jd = jet(f, p, 1);
    if (rank_ratio(jd.d1) <= tol) throw Error(ErrorKind::DegenerateChart, "rank loss on the sampled domain");
  }
}

// exp at x of v with |v|^2 = q in the model of curvature eps.
JetVector exp_jets(int eps, const JetVector& x, const JetVector& v, const Jet& q) {
  if (eps == 0) return x + v;
  const Jet c = eps > 0 ? cos_sqrt(q) : cosh_sqrt(q);
  const Jet s = eps > 0 ? sinc_sqrt(q) : sinhc_sqrt(q);
  return c * x + s * v;
}

JetVector padded(JetVector v, int dim) {
  const Jet zero = v.at(0) * 0.0;
  while (static_cast<int>(v.size()) < dim) v.push_back(zero);
  return v;
}

Example finish(std::string name, std::string family, const ChartImmersion& f, std::vector<std::vector<double>> samples,
               CodimOneDistribution dist, unsigned expected) {
  Example ex;
  ex.name = std::move(name);
  ex.family = std::move(family);
  ex.data = make_hypersurface_data(f, std::move(samples));
  ex.dist = std::move(dist);
  ex.expected = expected;
  return ex;
}

int model_curvature(const ChartImmersion& g) {
  const Target& t = g.target();
  if (!t.on_model() && t.form.dim == 3 && t.form.mu == 0) return 0;
  if (t.on_model() && t.form.dim == 4 && t.form.mu == 0 && *t.level == 1.0) return 1;
  if (t.on_model() && t.form.dim == 4 && t.form.mu == 1 && *t.level == -1.0) return -1;
  throw Error(ErrorKind::Structural, "g must map into R^3, S^3 or H^3");
}

}  // namespace

Example make_ruled(const ChartImmersion& base, CurveFields rulings, const RuledOptions& opt) {
  if (base.dim() != 1) throw Error(ErrorKind::Structural, "ruled base must be a curve");
  const Target& target = base.target();
  const int eps = target.on_model() ? static_cast<int>(*target.level) : 0;
  const int dim = target.form.dim;
  const int n = eps == 0 ? dim - 1 : dim - 2;
  const int k = n - 1;
  std::vector<Interval> dom = base.domain();
  std::vector<Interval> t = opt.t;
  if (t.empty()) t.assign(static_cast<std::size_t>(k), {-0.5, 0.5});
  if (static_cast<int>(t.size()) != k) throw Error(ErrorKind::Structural, "need one interval per ruling direction");
  dom.insert(dom.end(), t.begin(), t.end());

  JetMap eval = [base, rulings, eps, n, k](std::span<const double> p, int order) {
    const JetVector x = seed(p, order);
    static const std::vector<int> map{0};
    const JetVector c = lifted(base.eval(p.first(1), order), n, map);
    const std::vector<JetVector> v = rulings(x[0]);
    JetVector sum;
    Jet q = x[0] * 0.0;
    for (int i = 0; i < k; ++i) {
      axpy(sum, x[1 + i], v.at(i));
      q += x[1 + i] * x[1 + i];
    }
    return exp_jets(eps, c, sum, q);
  };
  const ChartImmersion f("ruled(" + base.name() + ")", dom, target, std::move(eval));

  // rulings must be orthonormal and tangent to the model (eps != 0)
  for (const auto& p : sample_grid(base.domain(), std::vector<int>{9})) {
    const Jet s = Jet::variable(p[0], 0, 1, 0);
    const auto v = rulings(s);
    if (static_cast<int>(v.size()) != k) throw Error(ErrorKind::Structural, "wrong number of ruling fields");
    if (eps == 0) continue;
    const Vec c = base.value(p);
    for (int i = 0; i < k; ++i) {
      const Vec vi = to_vec(values(v[i]));
      double r = std::abs(inner(target.form, vi, c));
      for (int j = 0; j < k; ++j) r = std::max(r, std::abs(inner(target.form, vi, to_vec(values(v[j]))) - (i == j ? 1.0 : 0.0)));
      if (r > 1e-9) throw Error(ErrorKind::Precondition, "ruling fields are not orthonormal tangent vectors");
    }
  }
  auto samples = sample_grid(dom, default_resolution(opt.resolution, n, 9));
  require_rank(f, samples, opt.rank_tol);
  std::vector<VectorField> span;
  for (int i = 0; i < k; ++i) span.push_back(coordinate_field(1 + i, n));
  return finish(f.name(), "ruled", f, std::move(samples), complement_distribution(f, std::move(span)), kRuled);
}

Example make_generalized_cone(const ChartImmersion& g, const SpaceForm& target, VectorField d0, const ConeOptions& opt) {
  if (g.dim() != 2) throw Error(ErrorKind::Structural, "g must be a surface");
  const int c = model_curvature(g);
  const int eps = target.epsilon();
  if (c < eps) throw Error(ErrorKind::UnsupportedModel, "no umbilical Q_c^3 with c < eps");
  const bool supported = (eps == 0 && (c == 0 || c == 1)) || (eps == c);
  if (!supported) throw Error(ErrorKind::UnsupportedModel, "umbilical inclusion not implemented for this (c, eps)");
  const int n = target.intrinsic_dim() - 1;
  if (n < 3) throw Error(ErrorKind::Structural, "generalized cones need n >= 3");
  const int k = n - 2;
  const int dim = target.ambient_dim();
  if (c == -1 && target.form().mu != 1) throw Error(ErrorKind::Structural, "H^3 needs a Lorentzian target");

  std::vector<Interval> dom = g.domain();
  std::vector<Interval> fiber = opt.fiber;
  if (fiber.empty()) fiber.assign(static_cast<std::size_t>(k), {-0.4, 0.4});
  if (static_cast<int>(fiber.size()) != k) throw Error(ErrorKind::Structural, "fiber domain has the wrong dimension");
  dom.insert(dom.end(), fiber.begin(), fiber.end());

  JetMap eval = [g, c, eps, n, k, dim](std::span<const double> p, int order) {
    const JetVector x = seed(p, order);
    static const std::vector<int> map{0, 1};
    const JetVector base = padded(lifted(g.eval(p.first(2), order), n, map), dim);
    const Jet zero = x[0] * 0.0;
    JetVector v(static_cast<std::size_t>(dim), zero);
    Jet q = zero;
    int first = 0;
    if (eps == 0 && c == 1) {
      // the radial direction is the first normal of S^3 in R^4
      for (int a = 0; a < dim; ++a) v[a] = x[2] * base[a];
      first = 1;
    }
    const int offset = (c == 0 ? 3 : 4) - first;
    for (int i = first; i < k; ++i) {
      v[offset + i] += x[2 + i];
      q += x[2 + i] * x[2 + i];
    }
    return exp_jets(eps, base, v, q);
  };
  const std::string name = "cone(" + g.name() + ")";
  const ChartImmersion f(name, dom, Target::of(target), std::move(eval));
  std::vector<int> res = opt.resolution;
  if (res.empty()) {
    res = {9, 9};
    for (int i = 0; i < k; ++i) res.push_back(5);
  }
  auto samples = sample_grid(dom, res);
  require_rank(f, samples, 1e-8);
  std::vector<VectorField> span{surface_field(std::move(d0), n)};
  for (int i = 0; i < k; ++i) span.push_back(coordinate_field(2 + i, n));
  return finish(name, "generalized_cone", f, std::move(samples), complement_distribution(f, std::move(span)), kNullity);
}

double geodesic_curvature(const ChartImmersion& g, const VectorField& d0, std::span<const int> resolution) {
  double worst = 0.0;
  for (const auto& p : sample_grid(g.domain(), resolution)) {
    const MetricData md = metric_data(g, p);
    const JetVector zj = d0(p, 1);
    const Mat& e = md.first_form;
    Vec z = to_vec(values(zj));
    const double len = std::sqrt(z.dot(e * z));
    Mat dz(2, 2);
    for (int k = 0; k < 2; ++k)
      for (int i = 0; i < 2; ++i) dz(k, i) = zj[k].d(i) / len;
    z /= len;
    Vec acc = dz * z;
    for (int k = 0; k < 2; ++k) acc[k] += z.dot(md.christoffel[k] * z);
    // the component along z only reflects the non-unit extension
    acc -= z.dot(e * acc) * z;
    worst = std::max(worst, std::sqrt(acc.dot(e * acc)));
  }
  return worst;
}

Example make_surfacelike(const ChartImmersion& g, SurfacelikeKind kind, int n, VectorField d0,
                         const SurfacelikeBuildOptions& opt) {
  if (g.dim() != 2) throw Error(ErrorKind::Structural, "g must be a surface");
  const int c = model_curvature(g);
  const bool cyl = kind == SurfacelikeKind::Cylindrical;
  if (cyl && c != 0) throw Error(ErrorKind::Structural, "cylindrical surfacelike needs g in R^3");
  if (!cyl && c != 1) throw Error(ErrorKind::Structural, "conical surfacelike needs g in S^3");
  if (n < 3) throw Error(ErrorKind::Structural, "surfacelike hypersurfaces need n >= 3");
  const double kappa = geodesic_curvature(g, d0, std::vector<int>{9, 9});
  if (kappa > opt.geodesic_tol) {
    throw Error(ErrorKind::Input, "d0 is not a geodesic foliation of g (geodesic curvature " + std::to_string(kappa) + ")");
  }
  std::vector<Interval> dom = g.domain();
  std::vector<Interval> extra = opt.extra;
  if (extra.empty()) {
    for (int i = 0; i < n - 2; ++i) extra.push_back(!cyl && i == 0 ? Interval{0.5, 1.5} : Interval{-0.5, 0.5});
  }
  if (static_cast<int>(extra.size()) != n - 2) throw Error(ErrorKind::Structural, "extra domain has the wrong dimension");
  dom.insert(dom.end(), extra.begin(), extra.end());
  JetMap eval = [g, cyl, n](std::span<const double> p, int order) {
    const JetVector x = seed(p, order);
    static const std::vector<int> map{0, 1};
    JetVector base = lifted(g.eval(p.first(2), order), n, map);
    JetVector out;
    if (cyl) {
      out = base;
      for (int i = 2; i < n; ++i) out.push_back(x[i] + 0.0);
    } else {
      for (const auto& b : base) out.push_back(x[2] * b);
      for (int i = 3; i < n; ++i) out.push_back(x[i] + 0.0);
    }
    return out;
  };
  const std::string name = std::string(cyl ? "cylindrical" : "conical") + "(" + g.name() + ")";
  const ChartImmersion f(name, dom, Target::flat(n + 1), std::move(eval));
  auto samples = sample_grid(dom, default_resolution(opt.resolution, n, 7));
  std::vector<VectorField> span{surface_field(std::move(d0), n)};
  for (int i = 2; i < n; ++i) span.push_back(coordinate_field(i, n));
  return finish(name, "surfacelike", f, std::move(samples), complement_distribution(f, std::move(span)), kNullity);
}

namespace {

Example type_d_example(const GaussPair& pair, VectorField y, const TypeDHypersurfaceOptions& opt) {
  GaussChart gc = gauss_chart(pair, opt.gauss);
  std::vector<std::vector<double>> regular;
  for (std::size_t i = 0; i < gc.samples.size(); ++i)
    if (gc.regular[i]) regular.push_back(gc.samples[i]);
  if (regular.empty()) throw Error(ErrorKind::Regularity, "empty regular set for " + pair.g.name());
  auto dist = unit_distribution(gc.psi, horizontal_lift_field(gc, std::move(y)));
  Example ex = finish(gc.psi.name(), "gauss_type_d", gc.psi, std::move(regular), std::move(dist), kNullity);
  ex.gauss = std::move(gc);
  return ex;
}

}  // namespace

Example make_type_d_hypersurface(const TypeDPair& tp, const TypeDHypersurfaceOptions& opt) {
  return type_d_example(make_gauss_pair(tp.frame.g, tp.gamma), tp.frame.y, opt);
}

Example make_type_d_hypersurface(const TypeDFrame& frame, int epsilon, const TypeDHypersurfaceOptions& opt) {
  if (epsilon == 0) throw Error(ErrorKind::Precondition, "the Euclidean case needs a support function");
  return type_d_example(make_nonflat_gauss_pair(frame.g, epsilon), frame.y, opt);
}

Example make_partial_tube_example(const PartialTube& pt, std::string name) {
  const int n = pt.tube.dim();
  std::vector<VectorField> span;
  for (int i = 0; i < n - 1; ++i) span.push_back(coordinate_field(i, n));
  Example ex = finish(std::move(name), "partial_tube", pt.tube, pt.samples, complement_distribution(pt.tube, std::move(span)),
                      kInvariant);
  ex.tube = pt;
  return ex;
}

}  // namespace tgf
