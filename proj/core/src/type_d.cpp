#include "tgf/type_d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <sstream>

#include "tgf/differential.hpp"
#include "tgf/error.hpp"

namespace tgf {

namespace {

std::string at_point(std::span<const double> p) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
  os << ")";
  return os.str();
}

void require_surface(const ChartImmersion& g) {
  if (g.dim() != 2) throw Error(ErrorKind::UnsupportedModel, "type-D checks need a surface chart");
}

void require_spherical(const ChartImmersion& g) {
  require_surface(g);
  if (!g.on_model() || *g.target().level != 1.0) {
    throw Error(ErrorKind::Precondition, g.name() + " must map into a unit sphere S^n or S_1^n");
  }
}

Vec field_value(const VectorField& f, std::span<const double> p) { return to_vec(values(f(p, 0))); }

// Jets of second derivatives d_i d_j f (order drops by two).
std::vector<std::vector<JetVector>> second_partials(const JetVector& f) {
  std::vector<std::vector<JetVector>> out(2, std::vector<JetVector>(2));
  for (int i = 0; i < 2; ++i) {
    const JetVector fi = partial(f, i);
    for (int j = 0; j < 2; ++j) out[i][j] = partial(fi, j);
  }
  return out;
}

Jet jet_norm(const AmbientForm& form, const JetVector& v) { return sqrt(inner(form, v, v)); }

// Coordinate shape operator E^{-1} B of a surface in S^3 as jets, for the
// normal field from the given pivots. Needs f at order K + 2; returns order K.
JetMatrix shape_jets(const AmbientForm& form, const JetVector& f, std::span<const int> pivots, int k) {
  const std::vector<JetVector> d{truncated(partial(f, 0), k + 1), truncated(partial(f, 1), k + 1)};
  const auto dd = second_partials(f);
  const auto n = orthonormal_complement(form, {truncated(d[0], k), truncated(d[1], k), truncated(f, k)}, pivots);
  const JetMatrix e = first_form(form, {truncated(d[0], k), truncated(d[1], k)});
  JetMatrix b(2, JetVector(2));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) b[i][j] = inner(form, dd[i][j], n[0]);
  const JetMatrix ei = inverse(e);
  JetMatrix a(2, JetVector(2));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) a[i][j] = ei[i][0] * b[0][j] + ei[i][1] * b[1][j];
  return a;
}

// Polar metric <A., A.> = B E^{-1} B from the same data.
JetMatrix polar_metric(const AmbientForm& form, const JetVector& f, std::span<const int> pivots, int k) {
  const std::vector<JetVector> d{truncated(partial(f, 0), k), truncated(partial(f, 1), k)};
  const JetMatrix e = first_form(form, d);
  const JetMatrix a = shape_jets(form, f, pivots, k);
  JetMatrix gh(2, JetVector(2));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Jet s = a[0][i] * (e[0][0] * a[0][j] + e[0][1] * a[1][j]);
      s += a[1][i] * (e[1][0] * a[0][j] + e[1][1] * a[1][j]);
      gh[i][j] = s;
    }
  return gh;
}

}  // namespace

// ---- check_type_d ----------------------------------------------------------

bool TypeDCheck::holds(double tol, double inner_floor) const {
  return max_parallel <= tol && max_alpha <= tol && max_unit <= tol && min_inner >= inner_floor;
}

TypeDCheck check_type_d(const ChartImmersion& g, const VectorField& x, const VectorField& y,
                        const TypeDCheckOptions& opt) {
  require_spherical(g);
  const AmbientForm& form = g.form();
  TypeDCheck out;
  out.min_inner = out.min_independence = std::numeric_limits<double>::infinity();
  for (const auto& p : sample_grid(g.domain(), opt.resolution, opt.inset)) {
    const MetricData md = metric_data(g, p);
    const JetData jd = jet(g, p, 2);
    const JetVector xj = x(p, 0);
    const JetVector yj = y(p, 1);
    const Vec xv = to_vec(values(xj));
    const Vec yv = to_vec(values(yj));
    const Mat& e = md.first_form;
    const double xn = std::sqrt(xv.dot(e * xv));
    const double yn = std::sqrt(yv.dot(e * yv));
    TypeDSample s;
    s.point = p;
    s.inner = std::abs(xv.dot(e * yv)) / xn;
    s.unit = std::abs(yn - 1.0);
    Mat xy(2, 2);
    xy << xv, yv;
    s.independence = std::abs(xy.determinant()) * std::sqrt(e.determinant()) / (xn * yn);
    // nabla_X Y in coordinates
    Vec nab(2);
    for (int k = 0; k < 2; ++k) {
      nab[k] = 0.0;
      for (int i = 0; i < 2; ++i) {
        nab[k] += xv[i] * yj[k].d(i);
        for (int j = 0; j < 2; ++j) nab[k] += md.christoffel[k](i, j) * xv[i] * yv[j];
      }
    }
    s.parallel = std::sqrt(std::abs(nab.dot(e * nab))) / xn;
    Vec al = Vec::Zero(form.dim);
    Vec amb = Vec::Zero(form.dim);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        al += xv[i] * yv[j] * md.second_form[i][j];
        amb += xv[i] * (yj[j].d(i) * jd.d1[j] + yv[j] * jd.d2[i][j]);
      }
    amb -= inner(form, amb, md.position) * md.position;  // level 1: tangential to the sphere
    s.alpha = al.norm() / xn;
    s.ambient = amb.norm() / xn;
    out.min_inner = std::min(out.min_inner, s.inner);
    out.max_parallel = std::max(out.max_parallel, s.parallel);
    out.max_alpha = std::max(out.max_alpha, s.alpha);
    out.max_ambient = std::max(out.max_ambient, s.ambient);
    out.max_unit = std::max(out.max_unit, s.unit);
    out.min_independence = std::min(out.min_independence, s.independence);
    out.samples.push_back(std::move(s));
  }
  return out;
}

TypeDCheck check_type_d(const TypeDFrame& f, const TypeDCheckOptions& opt) { return check_type_d(f.g, f.x, f.y, opt); }

// ---- conjugate nets ----------------------------------------------------------

NetCoefficients ConjugateNet::at(double u, double v) const {
  const std::vector<double> p{u, v};
  const JetVector f = g.eval(p, 2);
  const AmbientForm& form = g.form();
  const Vec pos = to_vec(values(f));
  Vec gu(form.dim), gv(form.dim), guu(form.dim), guv(form.dim);
  for (int c = 0; c < form.dim; ++c) {
    gu[c] = f[c].d(0);
    gv[c] = f[c].d(1);
    guu[c] = f[c].d(0, 0);
    guv[c] = f[c].d(0, 1);
  }
  const double vv = inner(form, gv, gv);
  if (std::abs(vv) < 1e-20) throw Error(ErrorKind::DegenerateChart, "g_v vanishes at " + at_point(p));
  NetCoefficients nc;
  nc.b = inner(form, gu, gv);
  nc.b_u = inner(form, guu, gv) + inner(form, gu, guv);
  const Vec r0 = guv + nc.b * pos;
  nc.a = -inner(form, r0, gv) / vv;
  nc.residual = (r0 + nc.a * gv).norm();
  return nc;
}

ConjugateNet measure_conjugate_net(const ChartImmersion& g, const NetOptions& opt) {
  require_spherical(g);
  ConjugateNet net;
  net.g = g;
  net.min_abs_b = std::numeric_limits<double>::infinity();
  for (const auto& p : sample_grid(g.domain(), opt.resolution)) {
    const NetCoefficients nc = net.at(p[0], p[1]);
    net.max_residual = std::max(net.max_residual, nc.residual);
    net.min_abs_b = std::min(net.min_abs_b, std::abs(nc.b));
  }
  return net;
}

ConjugateNet fit_conjugate_net(const ChartImmersion& g, const NetOptions& opt) {
  ConjugateNet net = measure_conjugate_net(g, opt);
  if (net.min_abs_b < opt.b_floor) {
    throw Error(ErrorKind::NotTypeD, "<g_u, g_v> vanishes on the grid (min |b| = " + std::to_string(net.min_abs_b) + ")");
  }
  if (net.max_residual > opt.tol) {
    throw Error(ErrorKind::NotTypeD,
                "g_uv + a g_v + b g = 0 fails (max residual " + std::to_string(net.max_residual) + ")");
  }
  return net;
}

// ---- construction from a flat-normal-bundle surface --------------------------

TypeDFrame construct_from_fnb(const ChartImmersion& h, const FnbOptions& opt) {
  require_surface(h);
  if (h.on_model() || h.form().mu != 0) throw Error(ErrorKind::UnsupportedModel, "h must map into Euclidean space");
  const AmbientForm form = h.form();
  for (const auto& p : sample_grid(h.domain(), opt.resolution)) {
    const MetricData md = metric_data(h, p);
    const JetData jd = jet(h, p, 2);
    const double nu = md.tangent[0].norm(), nv = md.tangent[1].norm();
    auto fail = [&](const std::string& what) {
      throw Error(ErrorKind::Regularity, what + " at " + at_point(p));
    };
    if (std::abs(md.first_form(0, 1)) / (nu * nv) > opt.tol) fail("coordinates are not orthogonal");
    if (md.second_form[0][1].norm() / (nu * nv) > opt.tol) fail("alpha(X, Y) != 0: the chart is not principal");
    if (std::abs(jd.d2[0][0].dot(md.tangent[1])) / (nu * nu * nv) < opt.floor) fail("nabla_X X = 0 (u-lines are geodesics)");
    if (std::abs(jd.d2[1][1].dot(md.tangent[0])) / (nv * nv * nu) < opt.floor) fail("nabla_Y Y = 0 (v-lines are geodesics)");
    if (md.second_form[0][0].norm() / (nu * nu) < opt.floor) fail("alpha(X, X) = 0 (u-lines are asymptotic)");
  }
  const ChartImmersion hc = h;
  TypeDFrame f;
  const int dim = form.dim;
  f.g = ChartImmersion("gauss_of_" + h.name(), h.domain(), Target::quadric(dim, 0, 1.0),
                       [hc, form](std::span<const double> p, int k) {
                         const JetVector hu = partial(hc.eval(p, k + 1), 0);
                         return inverse(jet_norm(form, hu)) * hu;
                       });
  f.x = [hc, form](std::span<const double> p, int k) {
    const JetVector hu = partial(hc.eval(p, k + 1), 0);
    const Jet inv = inverse(jet_norm(form, hu));
    return JetVector{inv, inv * 0.0};
  };
  f.y = [hc, form](std::span<const double> p, int k) {
    const JetVector hk = hc.eval(p, k + 2);
    const JetVector hu = truncated(partial(hk, 0), k);
    const JetVector hv = partial(hk, 1);
    const JetVector hvv = partial(hv, 1);
    const Jet c = jet_norm(form, truncated(hv, k)) * jet_norm(form, hu) / inner(form, hvv, hu);
    return JetVector{c * 0.0, c};
  };
  return f;
}

// ---- duality -------------------------------------------------------------------

TypeDFrame dual_surface(const TypeDFrame& tf, const DualOptions& opt) {
  require_spherical(tf.g);
  const auto samples = sample_grid(tf.g.domain(), opt.resolution);
  for (const auto& p : samples) {
    const double k = gauss_curvature(tf.g, p);
    if (std::abs(k - 1.0) < opt.curvature_gap) {
      throw Error(ErrorKind::CurvatureDegeneracy, "K = 1 at " + at_point(p) + "; the dual surface degenerates");
    }
  }
  const TypeDCheck chk = check_type_d(tf, {opt.resolution});
  if (!chk.holds(opt.tol, 0.0)) {
    throw Error(ErrorKind::Precondition, "input frame is not of type D (residual " +
                                             std::to_string(std::max({chk.max_parallel, chk.max_alpha, chk.max_unit})) + ")");
  }
  const TypeDFrame src = tf;
  const AmbientForm form = tf.g.form();
  TypeDFrame out;
  out.g = ChartImmersion("dual_of_" + tf.g.name(), tf.g.domain(), tf.g.target(),
                         [src](std::span<const double> p, int k) {
                           const JetVector f = src.g.eval(p, k + 1);
                           const JetVector y = src.y(p, k);
                           JetVector out;
                           for (int j = 0; j < 2; ++j) axpy(out, y[j], partial(f, j));
                           return out;
                         });
  out.x = src.y;
  out.y = [src, form](std::span<const double> p, int k) {
    const JetVector f = src.g.eval(p, k + 1);
    const JetMatrix e = first_form(form, {partial(f, 0), partial(f, 1)});
    const JetVector x = src.x(p, k);
    const JetVector y = src.y(p, k);
    Jet xy = x[0] * 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) xy += x[i] * e[i][j] * y[j];
    const Jet inv = inverse(xy);
    return JetVector{inv * x[0], inv * x[1]};
  };
  // k_* Y_k = -g
  double worst = 0.0;
  for (const auto& p : samples) {
    const JetVector kj = out.g.eval(p, 1);
    const Vec yk = field_value(out.y, p);
    Vec push = Vec::Zero(form.dim);
    for (int c = 0; c < form.dim; ++c) push[c] = yk[0] * kj[c].d(0) + yk[1] * kj[c].d(1);
    worst = std::max(worst, (push + tf.g.value(p)).norm());
  }
  if (worst > opt.tol) {
    throw Error(ErrorKind::Inconsistency, "k_* Y_k = -g fails (residual " + std::to_string(worst) + ")");
  }
  return out;
}

// ---- polar construction --------------------------------------------------------

namespace {

// Geodesic flow of the polar metric of g on its own chart.
class PolarFlow {
 public:
  PolarFlow(ChartImmersion g, std::vector<int> pivots, double step) : g_(std::move(g)), pivots_(std::move(pivots)), step_(step) {}

  // Christoffel symbols of the polar metric around x as 2-variable jets of order k.
  [[nodiscard]] std::vector<JetMatrix> christoffel_at(const Vec& x, int k) const {
    const std::vector<double> p{x[0], x[1]};
    return christoffel(polar_metric(g_.form(), g_.eval(p, k + 3), pivots_, k + 1));
  }

  [[nodiscard]] JetMatrix metric_at(const Vec& x, int k) const {
    const std::vector<double> p{x[0], x[1]};
    return polar_metric(g_.form(), g_.eval(p, k + 2), pivots_, k);
  }

  // z = (x0, x1, v0, v1) -> (v, -Gamma(x)(v, v)).
  [[nodiscard]] JetVector rhs(const JetVector& z) const {
    const int k = z[0].order();
    const Vec x = (Vec(2) << z[0].value(), z[1].value()).finished();
    const auto gam = christoffel_at(x, k);
    const std::vector<Jet> shift{z[0] - x[0], z[1] - x[1]};
    JetVector out{z[2], z[3], z[2] * 0.0, z[2] * 0.0};
    for (int l = 0; l < 2; ++l)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out[2 + l] -= gam[l][i][j].substituted(shift) * z[2 + i] * z[2 + j];
    return out;
  }

  // Flow for parameter t of the state z (all jets in the chart variables (s, t)).
  [[nodiscard]] JetVector flow(JetVector z, double t) const {
    const int n = std::max(1, static_cast<int>(std::ceil(std::abs(t) / step_)));
    const double h = t / n;
    for (int i = 0; i < n; ++i) {
      const JetVector k1 = rhs(z);
      const JetVector k2 = rhs(z + (0.5 * h) * k1);
      const JetVector k3 = rhs(z + (0.5 * h) * k2);
      const JetVector k4 = rhs(z + h * k3);
      z = z + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return z;
  }

  const ChartImmersion& g() const { return g_; }

 private:
  ChartImmersion g_;
  std::vector<int> pivots_;
  double step_;
};

struct PolarSetup {
  std::shared_ptr<const PolarFlow> flow;
  Vec center;
  Vec transversal;  // coordinate direction of the initial curve
  double theta = 0.0;
};

// Position and velocity jets of the (s, t) reparametrization at (s, t).
JetVector polar_state(const PolarSetup& ps, std::span<const double> st, int k) {
  const JetVector v = seed(st, k);
  const Vec c0 = ps.center + st[0] * ps.transversal;
  const JetMatrix gh = ps.flow->metric_at(c0, k);
  const std::vector<Jet> shift{(v[0] - st[0]) * ps.transversal[0], (v[0] - st[0]) * ps.transversal[1]};
  const Jet g11 = gh[0][0].substituted(shift);
  const Jet g12 = gh[0][1].substituted(shift);
  const Jet g22 = gh[1][1].substituted(shift);
  const Jet det = g11 * g22 - g12 * g12;
  const Jet r11 = sqrt(g11);
  const Jet q = sqrt(det * g11);
  const double ct = std::cos(ps.theta), sn = std::sin(ps.theta);
  JetVector z{c0[0] + shift[0], c0[1] + shift[1], ct * inverse(r11) - sn * g12 / q, sn * g11 / q};
  z = ps.flow->flow(z, st[1]);
  // Picard iteration in t around the landing point gives the exact t-jets
  const JetVector z0 = z;
  for (int it = 0; it <= k; ++it) {
    const JetVector f = ps.flow->rhs(z);
    JetVector next;
    for (std::size_t c = 0; c < z.size(); ++c) next.push_back(z0[c] + f[c].antiderivative(1));
    z = next;
  }
  return z;
}

ChartImmersion polar_chart(const PolarSetup& ps, const std::vector<Interval>& box) {
  const ChartImmersion& g = ps.flow->g();
  return ChartImmersion("polar_frame_of_" + g.name(), box, g.target(), [ps](std::span<const double> st, int k) {
    const JetVector z = polar_state(ps, st, k);
    const std::vector<double> x{z[0].value(), z[1].value()};
    const JetVector f = ps.flow->g().eval(x, k);
    const std::vector<Jet> shift{z[0] - x[0], z[1] - x[1]};
    JetVector out;
    for (const auto& c : f) out.push_back(c.substituted(shift));
    return out;
  });
}

// Y = A J d_t / |d_t| computed from the reparametrized chart itself.
VectorField polar_y(const ChartImmersion& chart) {
  const MetricData md = metric_data(chart, chart.center());
  std::vector<Vec> span = md.tangent;
  span.push_back(md.position);
  const std::vector<int> pivots = complement_pivots(chart.form(), span);
  return [chart, pivots](std::span<const double> p, int k) {
    const JetVector f = chart.eval(p, k + 2);
    const JetMatrix a = shape_jets(chart.form(), f, pivots, k);
    const JetMatrix gh = polar_metric(chart.form(), f, pivots, k);
    const Jet det = gh[0][0] * gh[1][1] - gh[0][1] * gh[0][1];
    const Jet q = sqrt(det * gh[1][1]);
    const Jet yt0 = -1.0 * gh[1][1] / q;
    const Jet yt1 = gh[0][1] / q;
    return JetVector{a[0][0] * yt0 + a[0][1] * yt1, a[1][0] * yt0 + a[1][1] * yt1};
  };
}

}  // namespace

TypeDFrame polar_construction(const ChartImmersion& g, const PolarOptions& opt) {
  require_spherical(g);
  if (g.form().dim != 4 || g.form().mu != 0) {
    throw Error(ErrorKind::UnsupportedModel, "polar construction needs a surface in S^3");
  }
  for (const auto& p : sample_grid(g.domain(), opt.resolution)) {
    if (std::abs(gauss_curvature(g, p) - 1.0) < 1e-6) {
      throw Error(ErrorKind::CurvatureDegeneracy, "K = 1 at " + at_point(p) + "; the polar map is singular");
    }
  }
  const MetricData md = metric_data(g, g.center());
  std::vector<Vec> span = md.tangent;
  span.push_back(md.position);
  auto flow = std::make_shared<const PolarFlow>(g, complement_pivots(g.form(), span), opt.step);

  const Vec center = to_vec(g.center());
  double half = std::numeric_limits<double>::infinity();
  for (const auto& iv : g.domain()) half = std::min(half, 0.5 * iv.width());

  double worst_inner = 0.0;
  for (int attempt = 0; attempt <= opt.retries; ++attempt) {
    PolarSetup ps;
    ps.flow = flow;
    ps.center = center;
    ps.theta = opt.angle + attempt * opt.retry_rotation;
    // initial velocity at the center decides the transversal and the t-range
    const JetVector z = polar_state({flow, center, Vec::Zero(2), ps.theta}, std::vector<double>{0.0, 0.0}, 0);
    Vec x0(2);
    x0 << z[2].value(), z[3].value();
    ps.transversal = Vec(2);
    ps.transversal << -x0[1] / x0.norm(), x0[0] / x0.norm();
    double extent = opt.extent;
    for (int shrink = 0; shrink < 6; ++shrink, extent *= 0.7) {
      const double s_half = extent * half;
      const double t_half = extent * half / x0.norm();
      const ChartImmersion chart = polar_chart(ps, {{-s_half, s_half}, {-t_half, t_half}});
      TypeDFrame tf{chart, constant_field({0.0, 1.0}), polar_y(chart)};
      TypeDCheck chk;
      try {
        chk = check_type_d(tf, {opt.resolution});
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::Domain) continue;  // geodesics left the chart
        throw;
      }
      if (chk.max_parallel > opt.tol || chk.max_alpha > opt.tol || chk.max_unit > opt.tol) {
        throw Error(ErrorKind::Inconsistency, "polar frame residual above tolerance");
      }
      if (chk.min_inner >= opt.inner_floor) return tf;
      worst_inner = chk.min_inner;
      break;
    }
  }
  throw Error(ErrorKind::FrameChoice, "X is a principal direction somewhere after " + std::to_string(opt.retries) +
                                          " rotations (min |<X,Y>| = " + std::to_string(worst_inner) + ")");
}

// ---- recovery of the generating surface --------------------------------------

RecoveredSurface recover_generating_surface(const ConjugateNet& net, const RecoveryOptions& opt) {
  const Interval u = net.g.domain()[0], v = net.g.domain()[1];
  auto cache = std::make_shared<std::map<std::pair<double, double>, NetCoefficients>>();
  auto coeff = [cache, &net](double uu, double vv) -> const NetCoefficients& {
    const auto key = std::make_pair(uu, vv);
    auto it = cache->find(key);
    if (it == cache->end()) it = cache->emplace(key, net.at(uu, vv)).first;
    return it->second;
  };
  for (const auto& p : sample_grid(net.g.domain(), std::vector<int>{9, 9})) {
    if (std::abs(coeff(p[0], p[1]).b) < 1e-12) throw Error(ErrorKind::CoefficientSingularity, "b vanishes on the net");
  }
  RecoveredSurface rs;
  rs.phi = solve_varphi([&](double a, double b) { return coeff(a, b).a; }, [&](double a, double b) { return coeff(a, b).b; },
                        [&](double a, double b) { return coeff(a, b).b_u; }, u, v, opt.nu, opt.nv, opt.kappa,
                        opt.nonzero_tol);
  if (rs.phi.i_max < 4 || rs.phi.j_max < 4) {
    throw Error(ErrorKind::RecoveryDomain, "phi or phi_v vanishes too close to the corner");
  }
  const Grid& full = rs.phi.phi.grid;
  rs.grid = Grid{rs.phi.u_range(), rs.phi.v_range(), rs.phi.i_max + 1, rs.phi.j_max + 1};
  const VarphiSolution& ph = rs.phi;
  auto node = [&full](double uu, double vv) {
    return std::make_pair(static_cast<int>(std::lround((uu - full.u.lo) / full.du())),
                          static_cast<int>(std::lround((vv - full.v.lo) / full.dv())));
  };
  FirstOrderSystem fs;
  fs.u = rs.grid.u;
  fs.v = rs.grid.v;
  fs.initial = Vec::Zero(net.g.ambient_dim());
  const ChartImmersion g = net.g;
  // integrate_system and integrability_residual only evaluate at grid nodes
  fs.rhs_u = [&ph, node, g](double uu, double vv) {
    const auto [i, j] = node(uu, vv);
    return Vec(ph.phi(i, j) * g.value(std::vector<double>{uu, vv}));
  };
  fs.rhs_v = [&ph, node, g, coeff](double uu, double vv) {
    const auto [i, j] = node(uu, vv);
    const JetVector f = g.eval(std::vector<double>{uu, vv}, 1);
    Vec gv(f.size());
    for (std::size_t c = 0; c < f.size(); ++c) gv[c] = f[c].d(1);
    return Vec(-ph.phi_v(i, j) / coeff(uu, vv).b * gv);
  };
  rs.system = integrate_system(fs, rs.grid.nu, rs.grid.nv, opt.integrability_threshold);

  const VectorGrid& h = rs.system.h;
  const double du = rs.grid.du(), dv = rs.grid.dv();
  rs.min_curvature_u = rs.min_curvature_v = rs.min_normal_curvature = std::numeric_limits<double>::infinity();
  for (int i = 1; i + 1 < rs.grid.nu; ++i)
    for (int j = 1; j + 1 < rs.grid.nv; ++j) {
      const Vec hu = (h(i + 1, j) - h(i - 1, j)) / (2 * du);
      const Vec hv = (h(i, j + 1) - h(i, j - 1)) / (2 * dv);
      const Vec huu = (h(i + 1, j) - 2 * h(i, j) + h(i - 1, j)) / (du * du);
      const Vec hvv = (h(i, j + 1) - 2 * h(i, j) + h(i, j - 1)) / (dv * dv);
      const Vec huv = (h(i + 1, j + 1) - h(i + 1, j - 1) - h(i - 1, j + 1) + h(i - 1, j - 1)) / (4 * du * dv);
      const double nu = hu.norm(), nv = hv.norm();
      rs.orthogonality = std::max(rs.orthogonality, std::abs(hu.dot(hv)) / (nu * nv));
      const double uu = rs.grid.u_at(i), vv = rs.grid.v_at(j);
      const double phi = ph.phi(i, j), phv = ph.phi_v(i, j);
      const double b = coeff(uu, vv).b;
      const Vec span_form = (phv / phi) * hu - (b * phi / phv) * hv;
      rs.span_residual = std::max(rs.span_residual, (huv - span_form).norm() / (nu + nv));
      const Vec gp = g.value(std::vector<double>{uu, vv});
      const Vec dir = hu / nu;
      rs.principal_match = std::max(rs.principal_match, std::min((dir - gp).norm(), (dir + gp).norm()));
      rs.min_curvature_u = std::min(rs.min_curvature_u, std::abs(huu.dot(hv)) / (nu * nu * nv));
      rs.min_curvature_v = std::min(rs.min_curvature_v, std::abs(hvv.dot(hu)) / (nv * nv * nu));
      const Vec tang = (huu.dot(hu) / (nu * nu)) * hu + (huu.dot(hv) / (nv * nv)) * hv;
      rs.min_normal_curvature = std::min(rs.min_normal_curvature, (huu - tang).norm() / (nu * nu));
    }
  if (rs.orthogonality > opt.tol) {
    throw Error(ErrorKind::Inconsistency, "<h_u, h_v> = 0 fails (" + std::to_string(rs.orthogonality) + ")");
  }
  return rs;
}

// ---- pairs --------------------------------------------------------------------

bool in_umbilical_s3(const ChartImmersion& g, std::vector<int> resolution, double tol) {
  std::vector<Vec> cols;
  for (const auto& p : sample_grid(g.domain(), resolution)) {
    const JetData jd = jet(g, p, 2);
    for (int i = 0; i < 2; ++i) {
      cols.push_back(jd.d1[i]);
      for (int j = i; j < 2; ++j) cols.push_back(jd.d2[i][j]);
    }
  }
  Mat m(g.ambient_dim(), static_cast<int>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) m.col(static_cast<int>(c)) = cols[c];
  const Vec sv = Eigen::JacobiSVD<Mat>(m).singularValues();
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) rank += sv[i] > tol * sv[0] ? 1 : 0;
  return rank <= 4;
}

PairCheck check_pair(const TypeDPair& tp, std::vector<int> resolution) {
  const ChartImmersion& g = tp.frame.g;
  require_spherical(g);
  ConjugateNet net;
  net.g = g;
  PairCheck pc;
  double max_alpha = 0.0, max_gamma = 0.0;
  for (const auto& p : sample_grid(g.domain(), resolution)) {
    const NetCoefficients nc = net.at(p[0], p[1]);
    const Jet gam = tp.gamma(p, 2).at(0);
    pc.max_pde = std::max(pc.max_pde, std::abs(gam.d(0, 1) + nc.a * gam.d(1) + nc.b * gam.value()));
    const MetricData md = metric_data(g, p);
    const Vec x = field_value(tp.frame.x, p);
    const Vec y = field_value(tp.frame.y, p);
    Mat hess(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        hess(i, j) = gam.d(i, j);
        for (int k = 0; k < 2; ++k) hess(i, j) -= md.christoffel[k](i, j) * gam.d(k);
      }
    const double xn = std::sqrt(x.dot(md.first_form * x));
    pc.max_hessian = std::max(pc.max_hessian, std::abs(gam.value() * x.dot(md.first_form * y) + x.dot(hess * y)) / xn);
    for (const auto& row : md.second_form)
      for (const auto& a : row) max_alpha = std::max(max_alpha, a.norm());
    max_gamma = std::max(max_gamma, std::abs(gam.value()));
  }
  pc.totally_geodesic = max_alpha < 1e-8;
  pc.gamma_zero = max_gamma < 1e-12;
  pc.umbilical_s3 = g.form().mu == 0 && in_umbilical_s3(g);
  return pc;
}

}  // namespace tgf
