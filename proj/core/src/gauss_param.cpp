#include "tgf/gauss_param.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tgf/differential.hpp"
#include "tgf/error.hpp"

namespace tgf {

namespace {

// For eps != 0 the derivative of psi along the horizontal lift of X is
// -g_* A_w X, so d pi o j = -A_w^{-1}; for eps = 0 it is +P_w^{-1}.
double lift_sign(int epsilon) { return epsilon == 0 ? 1.0 : -1.0; }

const std::vector<int> kYMap{0, 1};

// Coefficients of w in the normal frame for the fiber angles t (eps = +-1):
// w = C(t1) b0 + S(t1) (cos t2 b1 + sin t2 (cos t3 b2 + ...)).
JetVector angle_coefficients(std::span<const Jet> t, int epsilon) {
  const std::size_t k = t.size();
  JetVector c;
  c.push_back(epsilon == 1 ? cos(t[0]) : cosh(t[0]));
  Jet tail = epsilon == 1 ? sin(t[0]) : sinh(t[0]);
  for (std::size_t i = 1; i < k; ++i) {
    c.push_back(tail * cos(t[i]));
    tail = tail * sin(t[i]);
  }
  c.push_back(tail);
  return c;
}

void reorder_timelike_first(std::vector<JetVector>& frame, std::vector<double>& signs) {
  std::vector<std::size_t> idx(frame.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_partition(idx.begin(), idx.end(), [&](std::size_t i) { return signs[i] < 0; });
  std::vector<JetVector> f;
  std::vector<double> s;
  for (auto i : idx) {
    f.push_back(frame[i]);
    s.push_back(signs[i]);
  }
  // keep the timelike field future pointing so w lands on the x_0 > 0 sheet
  if (!s.empty() && s[0] < 0 && f[0][0].value() < 0) f[0] = -1.0 * f[0];
  frame = std::move(f);
  signs = std::move(s);
}

void validate_pair(const GaussPair& p) {
  if (p.g.dim() != 2) throw Error(ErrorKind::UnsupportedModel, "Gauss parametrization needs a surface (d = 2)");
  if (!p.g.on_model() || std::abs(*p.g.target().level - 1.0) > 0.0) {
    throw Error(ErrorKind::Precondition, "g must take values in a unit sphere");
  }
}

struct SurfaceSide {
  MetricData md;
  Mat basis;                // columns: g-orthonormal basis of T_yL in coordinates
  std::vector<Vec> he;      // h_* e_a
  double gamma = 0.0;
  Vec dgamma;
  Mat hess;                 // coordinate Hessian of gamma (covariant)
};

SurfaceSide surface_side(const GaussPair& pair, std::span<const double> y) {
  SurfaceSide s;
  s.md = metric_data(pair.g, y);
  const Eigen::LLT<Mat> llt(s.md.first_form);
  s.basis = Mat(llt.matrixU()).inverse();
  for (int a = 0; a < 2; ++a) s.he.push_back(s.basis(0, a) * s.md.tangent[0] + s.basis(1, a) * s.md.tangent[1]);
  if (pair.epsilon == 0) {
    const JetVector gj = pair.gamma(y, 2);
    const Jet& g = gj.at(0);
    s.gamma = g.value();
    s.dgamma = Vec(2);
    s.dgamma << g.d(0), g.d(1);
    s.hess = Mat(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        s.hess(i, j) = g.d(i, j);
        for (int k = 0; k < 2; ++k) s.hess(i, j) -= s.md.christoffel[k](i, j) * s.dgamma[k];
      }
  }
  return s;
}

// <alpha_g(e_a, e_b), w> in the orthonormal basis.
Mat alpha_against(const GaussPair& pair, const SurfaceSide& s, const Vec& w) {
  Mat out(2, 2);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      double v = 0.0;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) v += s.basis(i, a) * s.basis(j, b) * inner(pair.g.form(), s.md.second_form[i][j], w);
      out(a, b) = v;
    }
  return out;
}

// P_w (eps = 0) or A_w (eps != 0) in the orthonormal basis.
Mat regularity_operator(const GaussPair& pair, const SurfaceSide& s, const Vec& w) {
  const Mat aw = alpha_against(pair, s, w);
  if (pair.epsilon != 0) return aw;
  const Mat hess_on = s.basis.transpose() * s.hess * s.basis;
  return s.gamma * Mat::Identity(2, 2) + hess_on - aw;
}

void require_normal(const GaussPair& pair, const SurfaceSide& s, const Vec& w) {
  const AmbientForm& form = pair.g.form();
  if (w.size() != form.dim) throw Error(ErrorKind::Structural, "normal vector has the wrong length");
  double off = std::abs(inner(form, w, s.md.position));
  for (const auto& t : s.md.tangent) off = std::max(off, std::abs(inner(form, w, t)) / t.norm());
  if (off > 1e-9 * std::max(1.0, w.norm())) throw Error(ErrorKind::Precondition, "w is not normal to g");
}

struct PsiPoint {
  int n = 0;
  JetVector jets;                 // psi at order 2
  std::vector<JetVector> dpsi;    // order 1
  JetMatrix e_jets;               // order 1
  Vec psi;
  std::vector<Vec> d;             // d psi values
  Mat e;
  std::vector<Mat> gamma;         // Christoffel values
  std::vector<std::vector<Vec>> alpha;
  Mat shape;                      // coordinate shape operator w.r.t. G = g(y)
  Vec w;
  Vec g;
  SurfaceSide side;
  Mat q;                          // regularity operator
  double det = 0.0;
};

// Fills the regularity data first; the connection and second fundamental form
// of psi are only computed when the sample is regular.
PsiPoint analyze(const GaussChart& gc, std::span<const double> q) {
  const GaussPair& pair = gc.pair;
  const AmbientForm& form = gc.psi.form();
  PsiPoint pp;
  pp.n = gc.psi.dim();
  const int n = pp.n;
  pp.jets = gc.psi.eval(q, 2);
  pp.dpsi = partials(pp.jets);
  pp.psi = to_vec(values(pp.jets));
  for (int i = 0; i < n; ++i) pp.d.push_back(to_vec(values(pp.dpsi[i])));
  const std::span<const double> y = q.first(2);
  pp.side = surface_side(pair, y);
  pp.g = pp.side.md.position;
  if (pair.epsilon == 0) {
    const auto frame = pair.normal_frame(y);
    pp.w = Vec::Zero(form.dim);
    for (std::size_t i = 0; i < frame.size(); ++i) pp.w += q[2 + i] * frame[i];
  } else {
    pp.w = pp.psi;
  }
  pp.q = regularity_operator(pair, pp.side, pp.w);
  pp.det = pp.q.determinant();
  if (std::abs(pp.det) <= gc.det_tol) return pp;

  pp.e_jets = first_form(form, pp.dpsi);
  const auto gam = christoffel(pp.e_jets);
  pp.e = Mat(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) pp.e(i, j) = pp.e_jets[i][j].value();
  pp.gamma.assign(n, Mat(n, n));
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) pp.gamma[l](i, j) = gam[l][i][j].value();
  pp.alpha.assign(n, std::vector<Vec>(n));
  Mat b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Vec a(form.dim);
      for (int c = 0; c < form.dim; ++c) a[c] = pp.dpsi[i][c].d(j);
      const Vec raw = a;
      for (int l = 0; l < n; ++l) a -= pp.gamma[l](i, j) * pp.d[l];
      if (gc.psi.on_model()) a -= (inner(form, raw, pp.psi) / *gc.psi.target().level) * pp.psi;
      pp.alpha[i][j] = a;
      b(i, j) = inner(form, a, pp.g);
    }
  pp.shape = pp.e.ldlt().solve(b);
  return pp;
}

// Coordinate lifts V_a of the orthonormal basis: E_psi V_a = [<psi_i, h_* e_a>].
Mat lifts(const PsiPoint& pp, const AmbientForm& form) {
  Mat v(pp.n, 2);
  for (int a = 0; a < 2; ++a) {
    Vec rhs(pp.n);
    for (int i = 0; i < pp.n; ++i) rhs[i] = inner(form, pp.d[i], pp.side.he[a]);
    v.col(a) = pp.e.ldlt().solve(rhs);
  }
  return v;
}

Vec push(const PsiPoint& pp, const Vec& coords) {
  Vec out = Vec::Zero(pp.psi.size());
  for (int i = 0; i < pp.n; ++i) out += coords[i] * pp.d[i];
  return out;
}

void require_regular(const GaussChart& gc, const PsiPoint& pp) {
  if (std::abs(pp.det) <= gc.det_tol) {
    throw Error(ErrorKind::Regularity, std::string(gc.pair.epsilon == 0 ? "P_w" : "A_w") +
                                           " is singular at the sample (det " + std::to_string(pp.det) + ")");
  }
}

double shape_residual(const GaussChart& gc, const PsiPoint& pp, const Mat& v) {
  const AmbientForm& form = gc.psi.form();
  const Mat qinv = pp.q.inverse();
  const Mat ref = gc.pair.epsilon == 0 ? Mat(-qinv) : qinv;
  double r = 0.0;
  for (int a = 0; a < 2; ++a) {
    const Vec img = push(pp, pp.shape * v.col(a));
    Vec rest = img;
    for (int b = 0; b < 2; ++b) {
      const double m = inner(form, img, pp.side.he[b]);
      r = std::max(r, std::abs(m - ref(b, a)));
      rest -= m * pp.side.he[b];
    }
    r = std::max(r, rest.norm());
  }
  return r;
}

// C for the fiber coordinate field d_s, in the basis j e_a.
Mat splitting_direct(const GaussChart& gc, const PsiPoint& pp, const Mat& v, int s) {
  const AmbientForm& form = gc.psi.form();
  Mat c(2, 2);
  for (int a = 0; a < 2; ++a) {
    Vec nab = Vec::Zero(pp.n);
    for (int l = 0; l < pp.n; ++l)
      for (int k = 0; k < pp.n; ++k) nab[l] += v(k, a) * pp.gamma[l](k, s);
    const Vec img = push(pp, nab);
    for (int b = 0; b < 2; ++b) c(b, a) = -inner(form, img, pp.side.he[b]);
  }
  return c;
}

Mat splitting_formula(const GaussChart& gc, const PsiPoint& pp, const Vec& xi) {
  return lift_sign(gc.pair.epsilon) * alpha_against(gc.pair, pp.side, xi) * pp.q.inverse();
}

struct LiftJets {
  std::vector<JetVector> w;  // W_a for the coordinate fields d_a of L, order 1
  std::vector<Vec> dg;       // g_a values
};

LiftJets lift_jets(const GaussChart& gc, const PsiPoint& pp, std::span<const double> q) {
  const AmbientForm& form = gc.psi.form();
  const JetVector g2 = lifted(gc.pair.g.eval(q.first(2), 2), pp.n, kYMap);
  LiftJets out;
  for (int a = 0; a < 2; ++a) {
    const JetVector ga = partial(g2, a);
    out.dg.push_back(to_vec(values(ga)));
    JetVector rhs;
    for (int i = 0; i < pp.n; ++i) rhs.push_back(inner(form, pp.dpsi[i], ga));
    out.w.push_back(solve(pp.e_jets, rhs));
  }
  return out;
}

double connection_residual(const GaussChart& gc, const PsiPoint& pp, const LiftJets& lj) {
  const AmbientForm& form = gc.psi.form();
  const SurfaceSide& s = pp.side;
  // d pi o j in chart coordinates of L
  const Mat m = s.basis * (lift_sign(gc.pair.epsilon) * pp.q.inverse()) * s.basis.inverse();
  double r = 0.0;
  for (int c = 0; c < 2; ++c)
    for (int a = 0; a < 2; ++a) {
      // nabla^V_{W_c} W_a in psi coordinates
      Vec nab = Vec::Zero(pp.n);
      for (int l = 0; l < pp.n; ++l)
        for (int k = 0; k < pp.n; ++k) {
          double t = lj.w[a][l].d(k);
          for (int mm = 0; mm < pp.n; ++mm) t += pp.gamma[l](k, mm) * lj.w[a][mm].value();
          nab[l] += lj.w[c][k].value() * t;
        }
      const Vec img = push(pp, nab);
      for (int b = 0; b < 2; ++b) {
        const double rhs = inner(form, img, lj.dg[b]);
        double lhs = 0.0;
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l) lhs += m(k, c) * s.md.christoffel[l](k, a) * s.md.first_form(l, b);
        r = std::max(r, std::abs(lhs - rhs));
      }
    }
  return r;
}

double nullity_parallel_residual(const PsiPoint& pp, const LiftJets& lj) {
  double r = 0.0;
  for (int s = 2; s < pp.n; ++s)
    for (int a = 0; a < 2; ++a) {
      Vec nab = Vec::Zero(pp.n);
      for (int l = 0; l < pp.n; ++l) {
        nab[l] = lj.w[a][l].d(s);
        for (int mm = 0; mm < pp.n; ++mm) nab[l] += pp.gamma[l](s, mm) * lj.w[a][mm].value();
      }
      r = std::max(r, push(pp, nab).norm());
    }
  return r;
}

}  // namespace

std::vector<JetVector> GaussPair::normal_frame(std::span<const double> y, int order) const {
  const JetVector gj = g.eval(y, order + 1);
  std::vector<JetVector> span = partials(gj);
  span.push_back(truncated(gj, order));
  std::vector<double> s;
  auto frame = orthonormal_complement(g.form(), span, pivots, &s);
  reorder_timelike_first(frame, s);
  return frame;
}

std::vector<Vec> GaussPair::normal_frame(std::span<const double> y) const {
  std::vector<Vec> out;
  for (const auto& f : normal_frame(y, 0)) out.push_back(to_vec(values(f)));
  return out;
}

GaussPair make_gauss_pair(ChartImmersion g, JetMap gamma) {
  GaussPair p;
  p.g = std::move(g);
  p.epsilon = 0;
  p.gamma = std::move(gamma);
  validate_pair(p);
  if (p.g.form().mu != 0) throw Error(ErrorKind::Precondition, "Euclidean Gauss pair needs g into S^n");
  if (p.n() < 3) throw Error(ErrorKind::Structural, "hypersurface dimension must be at least 3");
  const MetricData md = metric_data(p.g, p.g.center());
  std::vector<Vec> span = md.tangent;
  span.push_back(md.position);
  p.pivots = complement_pivots(p.g.form(), span);
  p.signs.assign(p.pivots.size(), 1.0);
  return p;
}

GaussPair make_nonflat_gauss_pair(ChartImmersion g, int epsilon) {
  if (epsilon != 1 && epsilon != -1) throw Error(ErrorKind::Structural, "nonflat Gauss pair needs eps = +-1");
  GaussPair p;
  p.g = std::move(g);
  p.epsilon = epsilon;
  validate_pair(p);
  if (p.g.form().mu != (1 - epsilon) / 2) throw Error(ErrorKind::Precondition, "g must map into S_mu with mu = (1-eps)/2");
  if (p.n() < 3) throw Error(ErrorKind::Structural, "hypersurface dimension must be at least 3");
  const MetricData md = metric_data(p.g, p.g.center());
  std::vector<Vec> span = md.tangent;
  span.push_back(md.position);
  p.pivots = complement_pivots(p.g.form(), span);
  std::vector<double> s;
  (void)orthonormal_complement(p.g.form(), span, p.pivots, &s);
  std::sort(s.begin(), s.end());
  p.signs = s;
  const long timelike = std::count(s.begin(), s.end(), -1.0);
  if (timelike != (epsilon == -1 ? 1 : 0)) {
    throw Error(ErrorKind::Precondition, "normal bundle of g has the wrong signature");
  }
  return p;
}

Mat p_w(const GaussPair& pair, std::span<const double> y, const Vec& w) {
  if (pair.epsilon != 0) throw Error(ErrorKind::UnsupportedModel, "P_w belongs to the Euclidean parametrization");
  const SurfaceSide s = surface_side(pair, y);
  require_normal(pair, s, w);
  return regularity_operator(pair, s, w);
}

Mat a_w(const GaussPair& pair, std::span<const double> y, const Vec& w) {
  const SurfaceSide s = surface_side(pair, y);
  require_normal(pair, s, w);
  return alpha_against(pair, s, w);
}

Vec psi_euclidean(const GaussPair& pair, std::span<const double> y, std::span<const double> t) {
  if (pair.epsilon != 0) throw Error(ErrorKind::UnsupportedModel, "psi_euclidean needs a Euclidean pair");
  if (static_cast<int>(t.size()) != pair.fiber_dim()) throw Error(ErrorKind::Structural, "wrong fiber dimension");
  const SurfaceSide s = surface_side(pair, y);
  const Vec grad = s.md.first_form.ldlt().solve(s.dgamma);
  Vec out = s.gamma * s.md.position + grad[0] * s.md.tangent[0] + grad[1] * s.md.tangent[1];
  const auto frame = pair.normal_frame(y);
  for (std::size_t i = 0; i < t.size(); ++i) out += t[i] * frame[i];
  return out;
}

Vec psi_spaceform(const GaussPair& pair, std::span<const double> y, std::span<const double> t) {
  if (pair.epsilon == 0) throw Error(ErrorKind::UnsupportedModel, "psi_spaceform needs eps = +-1");
  if (static_cast<int>(t.size()) != pair.fiber_dim()) throw Error(ErrorKind::Structural, "wrong fiber dimension");
  const auto frame = pair.normal_frame(y);
  const JetVector tj = seed(t, 0);
  const JetVector c = angle_coefficients(tj, pair.epsilon);
  Vec w = Vec::Zero(pair.g.ambient_dim());
  for (std::size_t i = 0; i < c.size(); ++i) w += c[i].value() * frame[i];
  if (std::abs(inner(pair.g.form(), w, w) - pair.epsilon) > 1e-9) {
    throw Error(ErrorKind::Containment, "fiber chart left Lambda_eps");
  }
  return w;
}

GaussChart gauss_chart(const GaussPair& pair, const GaussOptions& opt) {
  const int k = pair.fiber_dim();
  std::vector<Interval> fiber = opt.fiber;
  if (fiber.empty()) {
    for (int i = 0; i < k; ++i) {
      if (pair.epsilon == 0) {
        fiber.push_back({-0.5, 0.5});
      } else if (i == 0 && k > 1) {
        fiber.push_back({0.3, 1.2});
      } else {
        fiber.push_back({-0.6, 0.6});
      }
    }
  }
  if (static_cast<int>(fiber.size()) != k) throw Error(ErrorKind::Structural, "fiber domain has the wrong dimension");
  std::vector<Interval> dom = pair.g.domain();
  dom.insert(dom.end(), fiber.begin(), fiber.end());
  const int n = pair.n();

  const GaussPair p = pair;
  JetMap eval = [p, n](std::span<const double> q, int order) {
    const JetVector x = seed(q, order);
    const std::span<const double> y = q.first(2);
    const AmbientForm& form = p.g.form();
    const JetVector g1 = lifted(p.g.eval(y, order + 1), n, kYMap);
    const std::vector<JetVector> dg{partial(g1, 0), partial(g1, 1)};
    const JetVector g0 = truncated(g1, order);
    std::vector<JetVector> span = dg;
    span.push_back(g0);
    std::vector<double> s;
    auto frame = orthonormal_complement(form, span, p.pivots, &s);
    reorder_timelike_first(frame, s);
    JetVector psi;
    if (p.epsilon == 0) {
      const Jet gam1 = p.gamma(y, order + 1).at(0).lifted(n, kYMap);
      const JetVector dgam{gam1.partial(0), gam1.partial(1)};
      const JetVector grad = solve(first_form(form, dg), dgam);
      psi = gam1.truncated(order) * g0;
      for (int a = 0; a < 2; ++a) axpy(psi, grad[a], dg[a]);
      for (int i = 0; i < n - 2; ++i) axpy(psi, x[2 + i], frame[i]);
    } else {
      const JetVector c = angle_coefficients(std::span<const Jet>(x).subspan(2), p.epsilon);
      for (std::size_t i = 0; i < c.size(); ++i) axpy(psi, c[i], frame[i]);
    }
    return psi;
  };

  GaussChart gc;
  gc.pair = pair;
  gc.det_tol = opt.det_tol;
  if (pair.epsilon == 0) {
    gc.space_form = SpaceForm(0, n + 1);
    gc.psi = ChartImmersion("psi(" + pair.g.name() + ")", dom, Target::flat(n + 1), std::move(eval));
  } else {
    gc.space_form = SpaceForm(pair.epsilon, n + 1);
    gc.psi = ChartImmersion("psi(" + pair.g.name() + ")", dom, Target::of(gc.space_form), std::move(eval));
  }
  std::vector<int> res = opt.resolution;
  if (res.empty()) {
    res = {33, 33};
    for (int i = 0; i < k; ++i) res.push_back(k == 1 ? 9 : 3);
  }
  gc.samples = sample_grid(dom, res);
  for (const auto& q : gc.samples) {
    const std::span<const double> qs(q);
    const SurfaceSide s = surface_side(pair, qs.first(2));
    Vec w;
    if (pair.epsilon == 0) {
      const auto frame = pair.normal_frame(qs.first(2));
      w = Vec::Zero(pair.g.ambient_dim());
      for (int i = 0; i < k; ++i) w += q[2 + i] * frame[i];
    } else {
      w = psi_spaceform(pair, qs.first(2), qs.subspan(2));
    }
    gc.regular.push_back(std::abs(regularity_operator(pair, s, w).determinant()) > opt.det_tol ? 1 : 0);
  }
  return gc;
}

GaussResiduals gauss_residuals(const GaussChart& gc, std::span<const double> sample) {
  const AmbientForm& form = gc.psi.form();
  GaussResiduals r;
  const PsiPoint pp = analyze(gc, sample);
  r.det = pp.det;
  r.regular = std::abs(pp.det) > gc.det_tol;
  r.rank_ratio = rank_ratio(pp.d);
  if (!r.regular) return r;
  const Mat v = lifts(pp, form);
  for (int a = 0; a < 2; ++a) r.isometry = std::max(r.isometry, (push(pp, v.col(a)) - pp.side.he[a]).norm());
  r.shape = shape_residual(gc, pp, v);
  for (int s = 2; s < pp.n; ++s) {
    const Mat direct = splitting_direct(gc, pp, v, s);
    const Mat formula = splitting_formula(gc, pp, pp.d[s]);
    r.splitting = std::max(r.splitting, (direct - formula).cwiseAbs().maxCoeff());
  }
  const LiftJets lj = lift_jets(gc, pp, sample);
  r.connection = connection_residual(gc, pp, lj);
  r.nullity_parallel = nullity_parallel_residual(pp, lj);

  std::vector<Vec> span = pp.d;
  if (gc.psi.on_model()) span.push_back(pp.psi);
  const auto nrm = orthonormal_complement(form, span, complement_pivots(form, span));
  r.gauss_map = std::min((nrm[0] - pp.g).norm(), (nrm[0] + pp.g).norm());

  // relative nullity in a psi-orthonormal basis
  const Eigen::LLT<Mat> llt(pp.e);
  const Mat u = llt.matrixU();
  const Mat ahat = u * pp.shape * u.inverse();
  const Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (ahat + ahat.transpose()));
  const Vec lam = es.eigenvalues();
  const double scale = lam.cwiseAbs().maxCoeff();
  std::vector<int> order(static_cast<std::size_t>(pp.n));
  for (int i = 0; i < pp.n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) { return std::abs(lam[a]) < std::abs(lam[b]); });
  for (int i = 0; i < pp.n; ++i) r.nullity_index += std::abs(lam[i]) <= 1e-6 * scale ? 1 : 0;
  const int k = pp.n - 2;
  Mat ker(pp.n, k), fib(pp.n, k);
  for (int i = 0; i < k; ++i) {
    ker.col(i) = es.eigenvectors().col(order[i]);
    fib.col(i) = u.col(2 + i);
  }
  const Mat qf = Eigen::HouseholderQR<Mat>(fib).householderQ() * Mat::Identity(pp.n, k);
  const Mat perp = ker - qf * (qf.transpose() * ker);
  r.nullity_angle = Eigen::JacobiSVD<Mat>(perp).singularValues()[0];
  return r;
}

double shape_identity_residual(const GaussChart& gc, std::span<const double> sample) {
  const PsiPoint pp = analyze(gc, sample);
  require_regular(gc, pp);
  return shape_residual(gc, pp, lifts(pp, gc.psi.form()));
}

SplittingPair splitting_tensor(const GaussChart& gc, std::span<const double> sample, const Vec& xi) {
  const PsiPoint pp = analyze(gc, sample);
  require_regular(gc, pp);
  // express xi through the fiber coordinate fields (the nullity directions)
  const int k = pp.n - 2;
  Mat fib(xi.size(), k);
  for (int i = 0; i < k; ++i) fib.col(i) = pp.d[2 + i];
  const Vec c = fib.colPivHouseholderQr().solve(xi);
  if ((fib * c - xi).norm() > 1e-8 * std::max(1.0, xi.norm())) {
    throw Error(ErrorKind::Precondition, "xi is not in the relative nullity space");
  }
  const Mat v = lifts(pp, gc.psi.form());
  SplittingPair out{Mat::Zero(2, 2), splitting_formula(gc, pp, xi)};
  for (int i = 0; i < k; ++i) out.direct += c[i] * splitting_direct(gc, pp, v, 2 + i);
  return out;
}

double splitting_tensor_residual(const GaussChart& gc, std::span<const double> sample, const Vec& xi) {
  const SplittingPair sp = splitting_tensor(gc, sample, xi);
  return (sp.direct - sp.formula).cwiseAbs().maxCoeff();
}

double connection_relation_residual(const GaussChart& gc, std::span<const double> sample) {
  const PsiPoint pp = analyze(gc, sample);
  require_regular(gc, pp);
  return connection_residual(gc, pp, lift_jets(gc, pp, sample));
}

Vec horizontal_lift(const GaussChart& gc, std::span<const double> sample, const Vec& x) {
  const PsiPoint pp = analyze(gc, sample);
  require_regular(gc, pp);
  const Vec hx = x[0] * pp.side.md.tangent[0] + x[1] * pp.side.md.tangent[1];
  Vec rhs(pp.n);
  for (int i = 0; i < pp.n; ++i) rhs[i] = inner(gc.psi.form(), pp.d[i], hx);
  return pp.e.ldlt().solve(rhs);
}

VectorField horizontal_lift_field(const GaussChart& gc, VectorField x) {
  return [psi = gc.psi, g = gc.pair.g, x = std::move(x)](std::span<const double> q, int order) {
    const int n = psi.dim();
    const AmbientForm& form = psi.form();
    const std::vector<JetVector> dpsi = partials(psi.eval(q, order + 1));
    const JetVector g1 = lifted(g.eval(q.first(2), order + 1), n, kYMap);
    const JetVector xc = lifted(x(q.first(2), order), n, kYMap);
    JetVector hx;
    for (int a = 0; a < 2; ++a) axpy(hx, xc.at(a), partial(g1, a));
    JetVector rhs;
    for (int i = 0; i < n; ++i) rhs.push_back(inner(form, dpsi[i], hx));
    return solve(first_form(form, dpsi), rhs);
  };
}

}  // namespace tgf
