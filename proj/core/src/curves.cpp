#include "tgf/curves.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tgf/differential.hpp"
#include "tgf/error.hpp"

namespace tgf {

namespace {

struct CurvePoint {
  Vec pos, d1, d2;
};

CurvePoint curve_point(const ChartImmersion& g, double s) {
  const std::vector<double> p{s};
  const JetVector j = g.eval(p, 2);
  CurvePoint c{Vec(j.size()), Vec(j.size()), Vec(j.size())};
  for (std::size_t a = 0; a < j.size(); ++a) {
    const auto ia = static_cast<Eigen::Index>(a);
    c.pos[ia] = j[a].value();
    c.d1[ia] = j[a].d(0);
    c.d2[ia] = j[a].d(0, 0);
  }
  return c;
}

}  // namespace

FramedCurve::FramedCurve(SpaceForm sf, ChartImmersion gamma, std::vector<Vec> initial_frame, int steps)
    : sf_(sf), gamma_(std::move(gamma)) {
  const AmbientForm form = sf_.form();
  if (gamma_.dim() != 1) throw Error(ErrorKind::Structural, "framed curve needs a 1-dimensional chart");
  if (!(gamma_.form() == form)) throw Error(ErrorKind::Structural, "curve target does not match the space form");
  if (steps < 2) throw Error(ErrorKind::Structural, "frame integration needs at least 2 steps");
  const Interval dom = domain();
  s0_ = dom.lo;
  for (int k = 0; k <= 100; ++k) {
    const double s = dom.lo + dom.width() * k / 100.0;
    const CurvePoint c = curve_point(gamma_, s);
    const double speed = inner(form, c.d1, c.d1);
    if (std::abs(speed - 1.0) > 1e-8) {
      throw Error(ErrorKind::Precondition, "curve is not unit speed at s = " + std::to_string(s));
    }
  }

  const int n = sf_.intrinsic_dim() - 1;
  const CurvePoint c0 = curve_point(gamma_, s0_);
  if (sf_.epsilon() != 0 && static_cast<int>(initial_frame.size()) == n + 1) {
    if ((initial_frame.back() - c0.pos).norm() > sf_.tol()) {
      throw Error(ErrorKind::Precondition, "last frame vector must be the curve position");
    }
    initial_frame.pop_back();
  }
  if (static_cast<int>(initial_frame.size()) != n) {
    throw Error(ErrorKind::Precondition, "initial frame needs " + std::to_string(n) + " normal vectors");
  }
  for (std::size_t i = 0; i < initial_frame.size(); ++i) {
    if (initial_frame[i].size() != form.dim) throw Error(ErrorKind::Structural, "frame vector has wrong length");
    if (std::abs(inner(form, initial_frame[i], c0.d1)) > 1e-8 ||
        (sf_.epsilon() != 0 && std::abs(inner(form, initial_frame[i], c0.pos)) > 1e-8)) {
      throw Error(ErrorKind::Precondition, "initial frame is not normal to the curve");
    }
    for (std::size_t j = 0; j < initial_frame.size(); ++j) {
      const double want = i == j ? 1.0 : 0.0;
      if (std::abs(inner(form, initial_frame[i], initial_frame[j]) - want) > 1e-8) {
        throw Error(ErrorKind::Precondition, "initial frame is not orthonormal");
      }
    }
  }
  signs_.assign(static_cast<std::size_t>(n), 1.0);
  if (sf_.epsilon() != 0) {
    signs_.push_back(sf_.epsilon());
    e_ = Vec::Zero(n + 1);
    e_[n] = 1.0;
  }

  const double h = dom.width() / steps;
  std::vector<Vec> xi = std::move(initial_frame);
  for (int k = 0; k <= steps; ++k) {
    const double s = dom.lo + h * k;
    nodes_.push_back(s);
    samples_.push_back(xi);
    accel_.push_back(curve_point(gamma_, s).d2);
    if (k == steps) break;
    xi = step(s, xi, h);
    reorthonormalize(dom.lo + h * (k + 1), xi);
    for (const auto& v : xi) {
      if (!v.allFinite()) throw Error(ErrorKind::Integration, "frame integration produced non-finite values");
    }
  }
}

std::vector<Vec> FramedCurve::rhs(double s, const std::vector<Vec>& xi) const {
  const CurvePoint c = curve_point(gamma_, std::clamp(s, domain().lo, domain().hi));
  std::vector<Vec> out;
  for (const auto& v : xi) out.push_back(-inner(sf_.form(), v, c.d2) * c.d1);
  return out;
}

std::vector<Vec> FramedCurve::step(double s, const std::vector<Vec>& xi, double h) const {
  auto add = [](const std::vector<Vec>& a, const std::vector<Vec>& b, double t) {
    std::vector<Vec> r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += t * b[i];
    return r;
  };
  const auto k1 = rhs(s, xi);
  const auto k2 = rhs(s + h / 2, add(xi, k1, h / 2));
  const auto k3 = rhs(s + h / 2, add(xi, k2, h / 2));
  const auto k4 = rhs(s + h, add(xi, k3, h));
  std::vector<Vec> out = xi;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += (h / 6) * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  return out;
}

void FramedCurve::reorthonormalize(double s, std::vector<Vec>& xi) const {
  const AmbientForm form = sf_.form();
  const CurvePoint c = curve_point(gamma_, s);
  for (std::size_t i = 0; i < xi.size(); ++i) {
    Vec v = xi[i] - inner(form, xi[i], c.d1) * c.d1;
    if (sf_.epsilon() != 0) v -= (inner(form, v, c.pos) / sf_.epsilon()) * c.pos;
    for (std::size_t j = 0; j < i; ++j) v -= inner(form, v, xi[j]) * xi[j];
    xi[i] = v / norm(form, v);
  }
}

std::vector<Vec> FramedCurve::frame(double s) const {
  const Interval dom = domain();
  const double h = dom.width() / (static_cast<double>(nodes_.size()) - 1);
  const auto k = static_cast<std::size_t>(
      std::clamp<long>(std::lround((s - dom.lo) / h), 0L, static_cast<long>(nodes_.size()) - 1));
  std::vector<Vec> xi = samples_[k];
  if (s != nodes_[k]) {
    xi = step(nodes_[k], xi, s - nodes_[k]);
    reorthonormalize(s, xi);
  }
  if (sf_.epsilon() != 0) xi.push_back(gamma_.value(std::vector<double>{s}));
  return xi;
}

std::vector<JetVector> FramedCurve::frame_jets(double s, int order) const {
  const std::vector<double> p{s};
  const JetVector g = gamma_.eval(p, order + 2);
  const JetVector g1 = truncated(partial(g, 0), order);
  const JetVector g2 = partial(partial(g, 0), 0);
  const std::vector<Vec> start = frame(s);
  const int n = static_cast<int>(samples_.front().size());
  const AmbientForm form = sf_.form();
  std::vector<JetVector> out;
  for (int i = 0; i < n; ++i) {
    JetVector x0;
    for (Eigen::Index a = 0; a < start[i].size(); ++a) x0.push_back(Jet::constant(start[i][a], 1, order));
    JetVector x = x0;
    for (int it = 0; it <= order; ++it) {
      const Jet c = -inner(form, x, g2);
      JetVector next = x0;
      for (std::size_t a = 0; a < x.size(); ++a) next[a] += (c * g1[a]).antiderivative(0);
      x = std::move(next);
    }
    out.push_back(std::move(x));
  }
  if (sf_.epsilon() != 0) out.push_back(truncated(g, order));
  return out;
}

Vec FramedCurve::phi(double s, const Vec& y) const {
  if (y.size() != frame_size()) throw Error(ErrorKind::Structural, "phi: coordinate vector has wrong length");
  const auto xi = frame(s);
  Vec out = Vec::Zero(sf_.ambient_dim());
  for (int i = 0; i < frame_size(); ++i) out += y[i] * xi[i];
  return out;
}

double FramedCurve::orthonormality_residual() const {
  const AmbientForm form = sf_.form();
  double r = 0.0;
  for (double s : nodes_) {
    const auto xi = frame(s);
    for (int i = 0; i < frame_size(); ++i)
      for (int j = 0; j < frame_size(); ++j) {
        const double want = i == j ? signs_[i] : 0.0;
        r = std::max(r, std::abs(inner(form, xi[i], xi[j]) - want));
      }
  }
  return r;
}

double FramedCurve::parallelism_residual() const {
  const AmbientForm form = sf_.form();
  const double d = 1e-4;
  double r = 0.0;
  for (double s : nodes_) {
    if (s - d < domain().lo || s + d > domain().hi) continue;
    const auto xp = frame(s + d), xm = frame(s - d);
    const CurvePoint c = curve_point(gamma_, s);
    for (std::size_t i = 0; i < samples_.front().size(); ++i) {
      Vec v = (xp[i] - xm[i]) / (2 * d);
      v -= inner(form, v, c.d1) * c.d1;
      if (sf_.epsilon() != 0) v -= (inner(form, v, c.pos) / sf_.epsilon()) * c.pos;
      r = std::max(r, v.norm());
    }
  }
  return r;
}

FramedCurve parallel_frame(const SpaceForm& sf, const ChartImmersion& gamma, std::vector<Vec> initial_frame,
                           int steps) {
  return {sf, gamma, std::move(initial_frame), steps};
}

double omega_margin(const FramedCurve& fc, const Vec& y) {
  if (y.size() != fc.frame_size()) throw Error(ErrorKind::Structural, "omega_margin: y has wrong length");
  const AmbientForm form = fc.space_form().form();
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < fc.nodes_.size(); ++k) {
    Vec w = Vec::Zero(form.dim);
    for (std::size_t i = 0; i < fc.samples_[k].size(); ++i) w += y[static_cast<Eigen::Index>(i)] * fc.samples_[k][i];
    if (fc.sf_.epsilon() != 0) w += y[y.size() - 1] * fc.gamma_.value(std::vector<double>{fc.nodes_[k]});
    m = std::min(m, std::abs(1.0 - inner(form, fc.accel_[k], w)));
  }
  return m;
}

PartialTube build_partial_tube(const FramedCurve& fc, const ChartImmersion& f0, const TubeOptions& opt) {
  const SpaceForm& sf = fc.space_form();
  const int n = sf.intrinsic_dim() - 1;
  if (f0.dim() != n - 1) throw Error(ErrorKind::Structural, "fiber must have dimension " + std::to_string(n - 1));
  if (f0.ambient_dim() != fc.frame_size()) {
    throw Error(ErrorKind::Structural, "fiber must take values in frame coordinates of length " +
                                           std::to_string(fc.frame_size()));
  }
  const std::vector<int> fres(static_cast<std::size_t>(f0.dim()), opt.fiber_resolution);
  const auto fiber_pts = sample_grid(f0.domain(), fres);
  for (const auto& x : fiber_pts) {
    Vec y = f0.value(x);
    if (sf.epsilon() != 0) {
      double q = 0.0;
      for (int i = 0; i < y.size(); ++i) q += fc.signs()[i] * y[i] * y[i];
      if (std::abs(q - sf.epsilon()) > sf.tol()) {
        throw Error(ErrorKind::Containment, "fiber value off the model in frame coordinates");
      }
      y -= fc.e();
    }
    const double m = omega_margin(fc, y);
    if (m <= opt.margin_tol) {
      throw Error(ErrorKind::Admissibility, "fiber point outside Omega(gamma; phi): margin " + std::to_string(m));
    }
  }

  std::vector<Interval> dom = f0.domain();
  dom.push_back(fc.domain());
  const int d = static_cast<int>(dom.size());
  const ChartImmersion fiber = f0;
  const FramedCurve curve = fc;
  JetMap eval = [fiber, curve, d](std::span<const double> p, int order) {
    const std::vector<double> x(p.begin(), p.end() - 1);
    const double s = p.back();
    std::vector<int> xmap(static_cast<std::size_t>(d - 1));
    for (int i = 0; i < d - 1; ++i) xmap[static_cast<std::size_t>(i)] = i;
    const std::vector<int> smap{d - 1};
    const JetVector y = lifted(fiber.eval(x, order), d, xmap);
    const auto xi = curve.frame_jets(s, order);
    JetVector f;
    if (curve.space_form().epsilon() == 0) {
      f = lifted(curve.gamma().eval(std::vector<double>{s}, order), d, smap);
    }
    for (std::size_t i = 0; i < xi.size(); ++i) axpy(f, y[i], lifted(xi[i], d, smap));
    return f;
  };
  ChartImmersion tube("partial_tube(" + f0.name() + ")", dom, Target::of(sf), std::move(eval));

  PartialTube pt{fc, f0, tube, {}, {}};
  std::vector<int> res = fres;
  res.push_back(opt.curve_resolution);
  pt.samples = sample_grid(dom, res);
  for (const auto& p : pt.samples) {
    const JetVector j = tube.eval(p, 1);
    std::vector<Vec> tan;
    for (int i = 0; i < d; ++i) {
      Vec t(tube.ambient_dim());
      for (int a = 0; a < t.size(); ++a) t[a] = j[a].d(i);
      tan.push_back(t);
    }
    if (rank_ratio(tan) <= opt.rank_tol) throw Error(ErrorKind::DegenerateChart, "degenerate tube: rank loss");
    pt.rho.push_back(norm(sf.form(), tan.back()));
  }
  return pt;
}

double principal_direction_residual(const ChartImmersion& f, int var,
                                    const std::vector<std::vector<double>>& samples) {
  double r = 0.0;
  for (const auto& p : samples) {
    const MetricData md = metric_data(f, p);
    if (md.normal_basis.size() != 1) throw Error(ErrorKind::Structural, "principal direction needs a hypersurface");
    const Mat a = shape_operator(md, f.form(), md.normal_basis[0]);
    const Mat& e = md.first_form;
    Vec v = Vec::Unit(f.dim(), var) / std::sqrt(e(var, var));
    const Vec av = a * v;
    const double kappa = v.dot(e * av);
    const Vec res = av - kappa * v;
    r = std::max(r, std::sqrt(std::max(0.0, res.dot(e * res))));
  }
  return r;
}

double principal_direction_residual(const PartialTube& pt) {
  return principal_direction_residual(pt.tube, pt.tube.dim() - 1, pt.samples);
}

double off_block_metric_residual(const PartialTube& pt) {
  const int s = pt.tube.dim() - 1;
  double r = 0.0;
  for (const auto& p : pt.samples) {
    const MetricData md = metric_data(pt.tube, p);
    for (int i = 0; i < s; ++i) r = std::max(r, std::abs(md.first_form(i, s)));
  }
  return r;
}

PartialTube perturbed_tube(const PartialTube& pt, double delta) {
  if (pt.tube.on_model()) throw Error(ErrorKind::UnsupportedModel, "perturbed tubes are built in flat space only");
  const int n = pt.tube.dim();
  const int last = pt.tube.ambient_dim() - 1;
  const ChartImmersion base = pt.tube;
  JetMap eval = [base, delta, n, last](std::span<const double> p, int order) {
    JetVector v = base.eval(p, order);
    const JetVector x = seed(p, order);
    v[last] += delta * sin(x[0]) * x[n - 1] * x[n - 1];
    return v;
  };
  PartialTube out = pt;
  out.tube = ChartImmersion(base.name() + "~", base.domain(), base.target(), std::move(eval));
  for (std::size_t k = 0; k < out.samples.size(); ++k) {
    const JetData jd = jet(out.tube, out.samples[k], 1);
    out.rho[k] = jd.d1[n - 1].norm();
  }
  return out;
}

}  // namespace tgf
