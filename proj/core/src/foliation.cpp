#include "tgf/foliation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tgf/differential.hpp"
#include "tgf/error.hpp"

namespace tgf {

namespace {

struct PointJets {
  JetVector position;            // order k + 2 truncated to k + 1
  std::vector<JetVector> d;      // order k + 1
  JetVector normal;              // order k + 1
  JetMatrix e;                   // order k + 1
  std::vector<JetMatrix> gamma;  // order k
  JetMatrix shape;               // order k
};

// Jets of the induced geometry with the shape operator known to order k.
PointJets point_jets(const HypersurfaceData& hd, std::span<const double> p, int k) {
  const AmbientForm& form = hd.f.form();
  const int n = hd.n();
  PointJets pj;
  const JetVector f = hd.f.eval(p, k + 2);
  pj.d = partials(f);
  std::vector<JetVector> span = pj.d;
  pj.position = truncated(f, k + 1);
  if (hd.f.on_model()) span.push_back(pj.position);
  const auto comp = orthonormal_complement(form, span, hd.pivots);
  if (comp.size() != 1) throw Error(ErrorKind::Structural, "chart is not a hypersurface");
  pj.normal = comp[0];
  pj.e = first_form(form, pj.d);
  pj.gamma = christoffel(pj.e);
  const JetVector nk = truncated(pj.normal, k);
  JetMatrix b(n, JetVector(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) b[i][j] = inner(form, partial(pj.d[i], j), nk);
  }
  JetMatrix ek(n, JetVector(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) ek[i][j] = pj.e[i][j].truncated(k);
  const JetMatrix einv = inverse(ek);
  pj.shape.assign(n, JetVector(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Jet s = einv[i][0] * b[0][j];
      for (int l = 1; l < n; ++l) s += einv[i][l] * b[l][j];
      pj.shape[i][j] = s;
    }
  return pj;
}

Mat values_of(const JetMatrix& m) {
  Mat out(m.size(), m.empty() ? 0 : m[0].size());
  for (Eigen::Index i = 0; i < out.rows(); ++i)
    for (Eigen::Index j = 0; j < out.cols(); ++j) out(i, j) = m[i][j].value();
  return out;
}

ShapePoint shape_values(const PointJets& pj) {
  ShapePoint sp;
  sp.normal = to_vec(values(pj.normal));
  sp.first_form = values_of(pj.e);
  for (const auto& g : pj.gamma) sp.christoffel.push_back(values_of(g));
  sp.shape = values_of(pj.shape);
  return sp;
}

// Upper Cholesky factor U with E = U^T U: coordinates -> orthonormal coordinates.
Mat chol_upper(const Mat& e) { return Eigen::LLT<Mat>(e).matrixU(); }

struct Spectrum {
  Mat kernel;      // coordinate columns, E-orthonormal
  Mat complement;  // coordinate columns, E-orthonormal
  double scale = 0.0;
  int nullity = 0;
};

Spectrum spectrum(const Mat& e, const Mat& a, double rel_tol, double floor) {
  const Mat u = chol_upper(e);
  const Mat uinv = u.inverse();
  const Mat ahat = u * a * uinv;
  const Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (ahat + ahat.transpose()));
  const Vec lam = es.eigenvalues();
  const int n = static_cast<int>(lam.size());
  Spectrum s;
  s.scale = lam.cwiseAbs().maxCoeff();
  const double thr = std::max(rel_tol * s.scale, floor);
  std::vector<int> ker, rest;
  for (int i = 0; i < n; ++i) (std::abs(lam[i]) <= thr ? ker : rest).push_back(i);
  s.nullity = static_cast<int>(ker.size());
  s.kernel = Mat(n, ker.size());
  s.complement = Mat(n, rest.size());
  for (std::size_t i = 0; i < ker.size(); ++i) s.kernel.col(i) = uinv * es.eigenvectors().col(ker[i]);
  for (std::size_t i = 0; i < rest.size(); ++i) s.complement.col(i) = uinv * es.eigenvectors().col(rest[i]);
  return s;
}

double e_inner(const Mat& e, const Vec& a, const Vec& b) { return a.dot(e * b); }

// E-orthonormal coordinate basis of the E-orthogonal complement of the columns of `span`.
Mat complement_basis(const Mat& e, const Mat& span) {
  const Mat u = chol_upper(e);
  const int n = static_cast<int>(e.rows());
  const Mat z = u * span;
  const Eigen::HouseholderQR<Mat> qr(z);
  const Mat q = qr.householderQ() * Mat::Identity(n, n);
  return u.inverse() * q.rightCols(n - span.cols());
}

Vec field_values(const VectorField& y, std::span<const double> p) { return to_vec(values(y(p, 0))); }

struct DistPoint {
  Vec y;   // unit
  Mat d;   // E-orthonormal basis of D
  Mat dy;  // dy(k, i) = d_i Y^k for the unit field
};

DistPoint dist_point(const CodimOneDistribution& dist, const Mat& e, std::span<const double> p, bool with_derivs) {
  DistPoint dp;
  const int n = static_cast<int>(e.rows());
  if (with_derivs) {
    const JetVector yj = dist.y(p, 1);
    dp.y = to_vec(values(yj));
    dp.dy = Mat(n, n);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i) dp.dy(k, i) = yj[k].d(i);
  } else {
    dp.y = field_values(dist.y, p);
  }
  const double len = std::sqrt(e_inner(e, dp.y, dp.y));
  if (!(len > 0.0)) throw Error(ErrorKind::Precondition, "distribution field vanishes");
  dp.y /= len;
  if (with_derivs) dp.dy /= len;  // the radial part drops out of every projection onto D
  dp.d = complement_basis(e, dp.y);
  return dp;
}

Vec covariant(const std::vector<Mat>& gamma, const Mat& dfield, const Vec& field, const Vec& dir) {
  const int n = static_cast<int>(field.size());
  Vec out = dfield * dir;
  for (int k = 0; k < n; ++k) out[k] += dir.dot(gamma[k] * field);
  return out;
}

double tg_residual(const ShapePoint& sp, const DistPoint& dp) {
  double r = 0.0;
  for (int i = 0; i < dp.d.cols(); ++i) {
    const Vec nab = covariant(sp.christoffel, dp.dy, dp.y, dp.d.col(i));
    for (int j = 0; j < dp.d.cols(); ++j) r = std::max(r, std::abs(e_inner(sp.first_form, nab, dp.d.col(j))));
  }
  return r;
}

struct ClassResult {
  unsigned classes = 0;
  int nullity_in_d = 0;
};

ClassResult classify_point(const HypersurfaceData& hd, const ShapePoint& sp, const DistPoint& dp, double scale,
                           double tol) {
  const double thr = std::max(tol * scale, hd.nullity_floor);
  const Mat& e = sp.first_form;
  double in_d = 0.0, out_d = 0.0;
  for (int i = 0; i < dp.d.cols(); ++i) {
    const Vec ax = sp.shape * dp.d.col(i);
    out_d = std::max(out_d, std::abs(e_inner(e, ax, dp.y)));
    for (int j = 0; j < dp.d.cols(); ++j) in_d = std::max(in_d, std::abs(e_inner(e, ax, dp.d.col(j))));
  }
  ClassResult cr;
  if (in_d <= thr) cr.classes |= static_cast<unsigned>(TrichotomyClass::Ruled);
  if (out_d <= thr) cr.classes |= static_cast<unsigned>(TrichotomyClass::Invariant);
  const Mat u = chol_upper(e);
  const Mat m = u * sp.shape * dp.d;
  const Vec sv = Eigen::JacobiSVD<Mat>(m).singularValues();
  for (int i = 0; i < sv.size(); ++i) cr.nullity_in_d += sv[i] <= thr ? 1 : 0;
  if (cr.nullity_in_d == hd.n() - 2) cr.classes |= static_cast<unsigned>(TrichotomyClass::Nullity);
  return cr;
}

void summarize(FoliationReport& rep) {
  for (const auto& s : rep.samples) {
    rep.max_tg_residual = std::max(rep.max_tg_residual, s.tg_residual);
    if (s.classes & static_cast<unsigned>(TrichotomyClass::Ruled)) ++rep.count_i;
    if (s.classes & static_cast<unsigned>(TrichotomyClass::Invariant)) ++rep.count_ii;
    if (s.classes & static_cast<unsigned>(TrichotomyClass::Nullity)) ++rep.count_iii;
    if (s.classes == 0) ++rep.count_none;
  }
}

FoliationReport report(const HypersurfaceData& hd, const CodimOneDistribution& dist, bool classify, double tol) {
  FoliationReport rep;
  for (const auto& hs : hd.samples) {
    const ShapePoint sp = shape_point(hd, hs.point);
    const DistPoint dp = dist_point(dist, sp.first_form, hs.point, true);
    FoliationSample fs;
    fs.point = hs.point;
    fs.nullity = hs.nullity;
    fs.tg_residual = tg_residual(sp, dp);
    if (classify) {
      const double scale = spectrum(sp.first_form, sp.shape, hd.nullity_tol, hd.nullity_floor).scale;
      const ClassResult cr = classify_point(hd, sp, dp, scale, tol);
      fs.classes = cr.classes;
      fs.nullity_in_d = cr.nullity_in_d;
    }
    rep.samples.push_back(std::move(fs));
  }
  summarize(rep);
  return rep;
}

// ---- geodesics ---------------------------------------------------------------

struct GeoState {
  Vec x;
  Vec v;
  double w = 0.0;  // leaf coordinate
};

struct GeoRate {
  Vec dx;
  Vec dv;
  double dw = 0.0;
};

GeoRate geo_rate(const HypersurfaceData& hd, const CodimOneDistribution* dist, const GeoState& s) {
  const std::vector<double> p(s.x.data(), s.x.data() + s.x.size());
  if (!hd.f.contains(p)) throw Error(ErrorKind::Domain, "geodesic left the chart");
  const MetricData md = metric_data(hd.f, p);
  GeoRate r;
  r.dx = s.v;
  r.dv = Vec(s.v.size());
  for (int k = 0; k < s.v.size(); ++k) r.dv[k] = -s.v.dot(md.christoffel[k] * s.v);
  if (dist) {
    Vec y = field_values(dist->y, p);
    y /= std::sqrt(e_inner(md.first_form, y, y));
    r.dw = e_inner(md.first_form, s.v, y);
  }
  return r;
}

GeoState advance(const GeoState& s, const GeoRate& r, double h) {
  return {s.x + h * r.dx, s.v + h * r.dv, s.w + h * r.dw};
}

GeoState rk4_step(const HypersurfaceData& hd, const CodimOneDistribution* dist, const GeoState& s, double h) {
  const GeoRate k1 = geo_rate(hd, dist, s);
  const GeoRate k2 = geo_rate(hd, dist, advance(s, k1, h / 2));
  const GeoRate k3 = geo_rate(hd, dist, advance(s, k2, h / 2));
  const GeoRate k4 = geo_rate(hd, dist, advance(s, k3, h));
  return {s.x + h / 6 * (k1.dx + 2 * k2.dx + 2 * k3.dx + k4.dx), s.v + h / 6 * (k1.dv + 2 * k2.dv + 2 * k3.dv + k4.dv),
          s.w + h / 6 * (k1.dw + 2 * k2.dw + 2 * k3.dw + k4.dw)};
}

// Geodesic through p with initial velocity v, followed for parameter time t.
GeoState geodesic(const HypersurfaceData& hd, const Vec& p, const Vec& v, double t, int steps) {
  GeoState s{p, v, 0.0};
  for (int i = 0; i < steps; ++i) s = rk4_step(hd, nullptr, s, t / steps);
  return s;
}

// ---- identity frames ------------------------------------------------------------

struct IdFrame {
  ShapePoint sp;
  Vec y;
  Vec x;      // unit, in D and orthogonal to Delta
  Mat delta;  // E-orthonormal kernel basis
  unsigned classes = 0;
  int nullity = 0;
  bool delta_in_d = false;
};

IdFrame id_frame(const HypersurfaceData& hd, const CodimOneDistribution& dist, const Vec& q, const Vec* align,
                 double class_tol) {
  const std::vector<double> p(q.data(), q.data() + q.size());
  IdFrame fr;
  fr.sp = shape_point(hd, p);
  const DistPoint dp = dist_point(dist, fr.sp.first_form, p, false);
  fr.y = dp.y;
  const Spectrum sp = spectrum(fr.sp.first_form, fr.sp.shape, hd.nullity_tol, hd.nullity_floor);
  fr.nullity = sp.nullity;
  fr.delta = sp.kernel;
  fr.classes = classify_point(hd, fr.sp, dp, sp.scale, class_tol).classes;
  double leak = 0.0;
  for (int i = 0; i < fr.delta.cols(); ++i) leak = std::max(leak, std::abs(e_inner(fr.sp.first_form, fr.delta.col(i), fr.y)));
  fr.delta_in_d = leak < 1e-6;
  if (fr.nullity != hd.n() - 2) return fr;
  Mat span(hd.n(), hd.n() - 1);
  span.col(0) = fr.y;
  span.rightCols(hd.n() - 2) = fr.delta;
  fr.x = complement_basis(fr.sp.first_form, span).col(0);
  if (align && fr.x.dot(*align) < 0.0) fr.x = -fr.x;
  return fr;
}

// Projection of the coordinate field d_a onto Delta.
Vec delta_projection(const IdFrame& fr, int a) {
  Vec out = Vec::Zero(fr.delta.rows());
  for (int k = 0; k < fr.delta.cols(); ++k) out += fr.sp.first_form.row(a).dot(fr.delta.col(k)) * fr.delta.col(k);
  return out;
}

struct IdContext {
  const HypersurfaceData& hd;
  const CodimOneDistribution& dist;
  const IdentityOptions& opt;
};

IdFrame frame_at(const IdContext& c, const Vec& q, const Vec& align) { return id_frame(c.hd, c.dist, q, &align, c.opt.class_tol); }

// nabla_X X at q with X aligned to `align`.
Vec nabla_xx(const IdContext& c, const Vec& q, const IdFrame& fr) {
  const int n = static_cast<int>(q.size());
  const double h = c.opt.inner_step;
  Mat dx(n, n);
  for (int i = 0; i < n; ++i) {
    const Vec e = Vec::Unit(n, i);
    dx.col(i) = (frame_at(c, q + h * e, fr.x).x - frame_at(c, q - h * e, fr.x).x) / (2 * h);
  }
  return covariant(fr.sp.christoffel, dx, fr.x, fr.x);
}

// nabla_T S for the field S = projection of d_b onto Delta.
Vec nabla_ts(const IdContext& c, const Vec& q, const IdFrame& fr, const Vec& t, int b) {
  const double h = c.opt.inner_step;
  const Vec sp = delta_projection(frame_at(c, q + h * t, fr.x), b);
  const Vec sm = delta_projection(frame_at(c, q - h * t, fr.x), b);
  Vec out = (sp - sm) / (2 * h);
  const Vec s = delta_projection(fr, b);
  for (int k = 0; k < q.size(); ++k) out[k] += t.dot(fr.sp.christoffel[k] * s);
  return out;
}

struct ScalarSet {
  double rho = 0.0;
  double mu = 0.0;
  std::vector<double> s_dot;  // <nabla_X X, S_b>
};

ScalarSet scalars(const IdContext& c, const Vec& q, const Vec& align, const std::vector<int>& idx) {
  const IdFrame fr = frame_at(c, q, align);
  ScalarSet s;
  const Mat& e = fr.sp.first_form;
  s.rho = e_inner(e, fr.sp.shape * fr.x, fr.x);
  s.mu = e_inner(e, fr.sp.shape * fr.y, fr.x);
  const Vec v = nabla_xx(c, q, fr);
  for (int b : idx) s.s_dot.push_back(e_inner(e, v, delta_projection(fr, b)));
  return s;
}

IdentitySample identity_sample(const IdContext& c, const std::vector<double>& point) {
  const HypersurfaceData& hd = c.hd;
  IdentitySample out;
  out.point = point;
  const Vec q = to_vec(point);
  const IdFrame fr = id_frame(hd, c.dist, q, nullptr, c.opt.class_tol);
  if (!(fr.classes & static_cast<unsigned>(TrichotomyClass::Nullity)) || fr.nullity != hd.n() - 2) {
    out.skipped = true;
    out.reason = "not in class (iii) with nu = n - 2";
    return out;
  }
  if (!fr.delta_in_d) {
    out.skipped = true;
    out.reason = "nullity not contained in D";
    return out;
  }
  const Mat& e = fr.sp.first_form;
  const Mat u = chol_upper(e);
  out.beta = e_inner(e, fr.sp.shape * fr.y, fr.y);
  out.mu = e_inner(e, fr.sp.shape * fr.y, fr.x);
  out.rho = e_inner(e, fr.sp.shape * fr.x, fr.x);
  {
    const Vec y = u * fr.y, x = u * fr.x;
    const Mat rec = out.beta * y * y.transpose() + out.mu * (y * x.transpose() + x * y.transpose()) +
                    out.rho * x * x.transpose();
    out.fit = (u * fr.sp.shape * u.inverse() - rec).cwiseAbs().maxCoeff();
  }

  // coordinate fields whose Delta projections are largest
  std::vector<int> idx(static_cast<std::size_t>(hd.n()));
  for (int i = 0; i < hd.n(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return delta_projection(fr, a).norm() > delta_projection(fr, b).norm(); });
  idx.resize(static_cast<std::size_t>(hd.n() - 2));

  const Vec v = nabla_xx(c, q, fr);
  const double h = c.opt.step;
  for (int a : idx) {
    const Vec t = delta_projection(fr, a);
    const ScalarSet plus = scalars(c, q + h * t, fr.x, idx);
    const ScalarSet minus = scalars(c, q - h * t, fr.x, idx);
    const double vt = e_inner(e, v, t);
    out.cod_rho = std::max(out.cod_rho, std::abs((plus.rho - minus.rho) / (2 * h) - out.rho * vt));
    out.cod_mu = std::max(out.cod_mu, std::abs((plus.mu - minus.mu) / (2 * h) - out.mu * vt));
    for (std::size_t bi = 0; bi < idx.size(); ++bi) {
      const Vec s = delta_projection(fr, idx[bi]);
      const double lhs = (plus.s_dot[bi] - minus.s_dot[bi]) / (2 * h);
      const double rhs = hd.space_form.epsilon() * e_inner(e, t, s) + e_inner(e, v, nabla_ts(c, q, fr, t, idx[bi])) +
                         vt * e_inner(e, v, s);
      out.gauss = std::max(out.gauss, std::abs(lhs - rhs));
    }
  }

  // lambda = <nabla_X X, T> along the nullity geodesic with unit tangent T
  Vec t0 = delta_projection(fr, idx[0]);
  t0 /= std::sqrt(e_inner(e, t0, t0));
  auto lambda_at = [&](double tau) {
    const GeoState g = geodesic(hd, q, t0, tau, 4);
    const IdFrame f2 = frame_at(c, g.x, fr.x);
    return e_inner(f2.sp.first_form, nabla_xx(c, g.x, f2), g.v);
  };
  const double lam = e_inner(e, v, t0);
  const double dlam = (lambda_at(h) - lambda_at(-h)) / (2 * h);
  out.lambda = std::abs(dlam - 1.0 - lam * lam);
  return out;
}

}  // namespace

double HypersurfaceData::max_normal_residual() const {
  double r = 0.0;
  for (const auto& s : samples) r = std::max(r, s.normal_residual);
  return r;
}

SpaceForm space_form_of(const ChartImmersion& f) {
  const Target& t = f.target();
  if (!t.on_model()) return SpaceForm(0, t.form.dim);
  const double level = *t.level;
  if (level == 1.0 && t.form.mu == 0) return SpaceForm(1, t.form.dim - 1);
  if (level == -1.0 && t.form.mu == 1) return SpaceForm(-1, t.form.dim - 1);
  throw Error(ErrorKind::UnsupportedModel, "chart target is not a unit space form");
}

HypersurfaceData make_hypersurface_data(const ChartImmersion& f, std::vector<std::vector<double>> samples,
                                        const HypersurfaceOptions& opt) {
  HypersurfaceData hd;
  hd.f = f;
  hd.space_form = space_form_of(f);
  if (hd.space_form.intrinsic_dim() != f.dim() + 1) {
    throw Error(ErrorKind::Structural, "chart of dimension " + std::to_string(f.dim()) + " is not a hypersurface of Q^" +
                                           std::to_string(hd.space_form.intrinsic_dim()));
  }
  hd.nullity_tol = opt.nullity_tol;
  hd.nullity_floor = opt.nullity_floor;
  const AmbientForm& form = f.form();
  {
    const MetricData md = metric_data(f, f.center(), opt.rank_tol);
    std::vector<Vec> span = md.tangent;
    if (f.on_model()) span.push_back(md.position);
    hd.pivots = complement_pivots(form, span);
  }
  for (auto& p : samples) {
    const PointJets pj = point_jets(hd, p, 0);
    const ShapePoint sp = shape_values(pj);
    HypersurfaceSample hs;
    hs.point = std::move(p);
    hs.normal = sp.normal;
    hs.shape = sp.shape;
    const Spectrum s = spectrum(sp.first_form, sp.shape, opt.nullity_tol, opt.nullity_floor);
    hs.kernel = s.kernel;
    hs.nullity = s.nullity;
    const Vec pos = to_vec(values(pj.position));
    double r = std::abs(inner(form, hs.normal, hs.normal) - 1.0);
    for (const auto& d : pj.d) {
      const Vec dv = to_vec(values(d));
      r = std::max(r, std::abs(inner(form, hs.normal, dv)) / dv.norm());
    }
    if (f.on_model()) r = std::max(r, std::abs(inner(form, hs.normal, pos)));
    hs.normal_residual = r;
    hd.samples.push_back(std::move(hs));
  }
  return hd;
}

HypersurfaceData make_hypersurface_data(const ChartImmersion& f, std::span<const int> resolution,
                                        const HypersurfaceOptions& opt) {
  return make_hypersurface_data(f, sample_grid(f.domain(), resolution), opt);
}

ShapePoint shape_point(const HypersurfaceData& hd, std::span<const double> p) {
  return shape_values(point_jets(hd, p, 0));
}

CodimOneDistribution unit_distribution(const ChartImmersion& f, VectorField y) {
  return {[f, y = std::move(y)](std::span<const double> p, int order) {
    const JetVector yj = y(p, order);
    const JetMatrix e = first_form(f.form(), partials(f.eval(p, order + 1)));
    Jet len2 = yj[0] * 0.0;
    for (std::size_t i = 0; i < yj.size(); ++i)
      for (std::size_t j = 0; j < yj.size(); ++j) len2 += e[i][j] * yj[i] * yj[j];
    const Jet inv = inverse(sqrt(len2));
    JetVector out;
    for (const auto& c : yj) out.push_back(c * inv);
    return out;
  }};
}

CodimOneDistribution complement_distribution(const ChartImmersion& f, std::vector<VectorField> span) {
  const int n = f.dim();
  if (static_cast<int>(span.size()) != n - 1) throw Error(ErrorKind::Structural, "D needs n - 1 spanning fields");
  int pick = 0;
  {
    const std::vector<double> c = f.center();
    const Mat e = metric_data(f, c).first_form;
    Mat v(n, n - 1);
    for (int k = 0; k < n - 1; ++k) v.col(k) = field_values(span[k], c);
    const Mat y = complement_basis(e, v);
    // the coordinate field with the largest component along the complement
    (e * y).col(0).cwiseAbs().maxCoeff(&pick);
  }
  VectorField y = [f, span = std::move(span), pick, n](std::span<const double> p, int order) {
    const JetMatrix e = first_form(f.form(), partials(f.eval(p, order + 1)));
    JetMatrix ek(n, JetVector(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) ek[i][j] = e[i][j].truncated(order);
    std::vector<JetVector> v;
    for (const auto& s : span) v.push_back(s(p, order));
    auto dot = [&](const JetVector& a, const JetVector& b) {
      Jet acc = a[0] * 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) acc += ek[i][j] * a[i] * b[j];
      return acc;
    };
    JetVector em;
    for (int i = 0; i < n; ++i) em.push_back(v[0][0] * 0.0 + (i == pick ? 1.0 : 0.0));
    JetMatrix gram(n - 1, JetVector(n - 1));
    JetVector rhs;
    for (int k = 0; k < n - 1; ++k) {
      for (int l = 0; l < n - 1; ++l) gram[k][l] = dot(v[k], v[l]);
      rhs.push_back(dot(v[k], em));
    }
    JetVector out = em;
    if (n > 1) {
      const JetVector c = solve(gram, rhs);
      for (int k = 0; k < n - 1; ++k)
        for (int i = 0; i < n; ++i) out[i] -= c[k] * v[k][i];
    }
    const Jet inv = inverse(sqrt(dot(out, out)));
    for (auto& c : out) c *= inv;
    return out;
  };
  return {std::move(y)};
}

double unit_residual(const HypersurfaceData& hd, const CodimOneDistribution& dist) {
  double r = 0.0;
  for (const auto& s : hd.samples) {
    const Mat e = metric_data(hd.f, s.point).first_form;
    const Vec y = field_values(dist.y, s.point);
    r = std::max(r, std::abs(std::sqrt(e_inner(e, y, y)) - 1.0));
  }
  return r;
}

std::string class_label(unsigned classes) {
  if (classes == 0) return "none";
  std::string out;
  const char* names[] = {"i", "ii", "iii"};
  for (int b = 0; b < 3; ++b)
    if (classes & (1u << b)) out += (out.empty() ? "" : "+") + std::string(names[b]);
  return out;
}

double FoliationReport::fraction(TrichotomyClass c) const {
  if (samples.empty()) return 0.0;
  int k = 0;
  for (const auto& s : samples) k += (s.classes & static_cast<unsigned>(c)) ? 1 : 0;
  return static_cast<double>(k) / static_cast<double>(samples.size());
}

FoliationReport totally_geodesic_residual(const HypersurfaceData& hd, const CodimOneDistribution& dist) {
  return report(hd, dist, false, 0.0);
}

FoliationReport trichotomy_classify(const HypersurfaceData& hd, const CodimOneDistribution& dist,
                                    const TrichotomyOptions& opt) {
  return report(hd, dist, true, opt.tol);
}

std::vector<NullityInfo> relative_nullity(const HypersurfaceData& hd) {
  std::vector<NullityInfo> out;
  for (const auto& s : hd.samples) out.push_back({s.nullity, s.kernel});
  return out;
}

LeafShot leaf_shoot(const HypersurfaceData& hd, const CodimOneDistribution& dist, std::span<const double> start,
                    const Vec& direction, double length, const LeafShotOptions& opt) {
  const MetricData md = metric_data(hd.f, start);
  const DistPoint dp = dist_point(dist, md.first_form, start, false);
  const double speed = std::sqrt(e_inner(md.first_form, direction, direction));
  if (!(speed > 0.0)) throw Error(ErrorKind::Precondition, "zero shooting direction");
  if (std::abs(e_inner(md.first_form, direction, dp.y)) > 1e-8 * speed) {
    throw Error(ErrorKind::Precondition, "shooting direction is not in D");
  }
  LeafShot shot;
  GeoState s{to_vec(start), direction / speed, 0.0};
  shot.path.emplace_back(start.begin(), start.end());
  const int steps = std::max(1, static_cast<int>(std::ceil(length / opt.step)));
  const double h = length / steps;
  for (int i = 0; i < steps; ++i) {
    try {
      s = rk4_step(hd, &dist, s, h);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Domain) throw;
      shot.truncated = true;
      break;
    }
    const std::vector<double> p(s.x.data(), s.x.data() + s.x.size());
    shot.path.push_back(p);
    shot.length += h;
    shot.max_drift = std::max(shot.max_drift, std::abs(s.w));
    const Mat e = metric_data(hd.f, p).first_form;
    Vec y = field_values(dist.y, p);
    y /= std::sqrt(e_inner(e, y, y));
    shot.max_transversal = std::max(shot.max_transversal, std::abs(e_inner(e, s.v, y)));
    shot.speed_drift = std::max(shot.speed_drift, std::abs(std::sqrt(e_inner(e, s.v, s.v)) - 1.0));
  }
  return shot;
}

LeafSurvey leaf_survey(const HypersurfaceData& hd, const CodimOneDistribution& dist, double length,
                       const LeafSurveyOptions& opt) {
  const int n = hd.n();
  LeafSurvey out;
  const std::vector<int> res(static_cast<std::size_t>(n), opt.starts_per_axis);
  for (const auto& p : sample_grid(hd.f.domain(), res, opt.inset)) {
    const Mat e = metric_data(hd.f, p).first_form;
    Vec y = field_values(dist.y, p);
    y /= std::sqrt(e_inner(e, y, y));
    for (int i = 0; i < n; ++i) {
      Vec d = Vec::Unit(n, i);
      d -= e_inner(e, d, y) * y;
      if (std::sqrt(e_inner(e, d, d)) < 1e-3) continue;
      for (double sign : {1.0, -1.0}) {
        const LeafShot shot = leaf_shoot(hd, dist, p, sign * d, length, {opt.step});
        ++out.shots;
        out.max_drift_any = std::max(out.max_drift_any, shot.max_drift);
        if (shot.truncated) continue;
        ++out.full_length;
        out.max_drift = std::max(out.max_drift, shot.max_drift);
      }
    }
  }
  return out;
}

IdentityReport gauss_codazzi_identities(const HypersurfaceData& hd, const CodimOneDistribution& dist,
                                        const IdentityOptions& opt) {
  IdentityReport rep;
  const IdContext c{hd, dist, opt};
  for (const auto& s : hd.samples) {
    IdentitySample is;
    if (hd.space_form.epsilon() != 1) {
      is.point = s.point;
      is.skipped = true;
      is.reason = "identities are checked for hypersurfaces of the unit sphere";
    } else {
      try {
        is = identity_sample(c, s.point);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::Domain) throw;
        is = IdentitySample{};
        is.point = s.point;
        is.skipped = true;
        is.reason = "difference stencil leaves the chart";
      }
    }
    if (is.skipped) {
      ++rep.skipped;
    } else {
      rep.max_fit = std::max(rep.max_fit, is.fit);
      rep.max_cod = std::max({rep.max_cod, is.cod_rho, is.cod_mu});
      rep.max_gauss = std::max(rep.max_gauss, is.gauss);
      rep.max_lambda = std::max(rep.max_lambda, is.lambda);
    }
    rep.samples.push_back(std::move(is));
  }
  return rep;
}

double riccati_tan_deviation(double t_end, int steps) {
  auto rate = [](double l) { return 1.0 + l * l; };
  const double h = t_end / steps;
  double lam = 0.0, dev = 0.0;
  for (int i = 1; i <= steps; ++i) {
    const double k1 = rate(lam);
    const double k2 = rate(lam + h / 2 * k1);
    const double k3 = rate(lam + h / 2 * k2);
    const double k4 = rate(lam + h * k3);
    lam += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    dev = std::max(dev, std::abs(lam - std::tan(i * h)));
  }
  return dev;
}

std::vector<SurfacelikeFlags> detect_surfacelike(const HypersurfaceData& hd, const SurfacelikeOptions& opt) {
  std::vector<SurfacelikeFlags> out;
  const int n = hd.n();
  for (const auto& hs : hd.samples) {
    SurfacelikeFlags fl;
    const PointJets pj = point_jets(hd, hs.point, 1);
    const ShapePoint sp = shape_values(pj);
    const Spectrum s = spectrum(sp.first_form, sp.shape, hd.nullity_tol, hd.nullity_floor);
    const int m = n - s.nullity;
    if (s.nullity == 0 || m == 0) {
      out.push_back(fl);
      continue;
    }
    const Mat& e = sp.first_form;
    const Mat& h = s.complement;
    const Mat ah = h.transpose() * e * sp.shape * h;
    const Mat ah_inv = ah.inverse();
    std::vector<Mat> cs;
    for (int k = 0; k < s.nullity; ++k) {
      const Vec t = s.kernel.col(k);
      Mat nab(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double v = 0.0;
          for (int l = 0; l < n; ++l) {
            v += t[l] * pj.shape[i][j].d(l);
            v += t.dot(sp.christoffel[i].col(l)) * sp.shape(l, j);
            v -= sp.shape(i, l) * t.dot(sp.christoffel[l].col(j));
          }
          nab(i, j) = v;
        }
      cs.push_back(ah_inv * (h.transpose() * e * nab * h));
    }
    Mat lin(m * m, s.nullity), traceless(m * m, s.nullity);
    for (int k = 0; k < s.nullity; ++k) {
      lin.col(k) = Eigen::Map<const Vec>(cs[k].data(), m * m);
      const Mat tl = cs[k] - (cs[k].trace() / m) * Mat::Identity(m, m);
      traceless.col(k) = Eigen::Map<const Vec>(tl.data(), m * m);
    }
    const double scale = std::max(s.scale, std::numeric_limits<double>::min());
    // a wide map always has a kernel
    auto smallest = [&](const Eigen::JacobiSVD<Mat>& svd) {
      return s.nullity > m * m ? 0.0 : svd.singularValues()[s.nullity - 1] / scale;
    };
    fl.cylinder_residual = smallest(Eigen::JacobiSVD<Mat>(lin));
    const Eigen::JacobiSVD<Mat> svd(traceless, Eigen::ComputeFullV);
    fl.cone_residual = smallest(svd);
    const Vec c = svd.matrixV().col(s.nullity - 1);
    const double size = (lin * c).norm() / scale;
    fl.cylindrical = fl.cylinder_residual <= opt.tol;
    fl.conical = fl.cone_residual <= opt.tol && size > 100.0 * opt.tol;
    out.push_back(fl);
  }
  return out;
}

}  // namespace tgf
