#include "tgf/differential.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tgf/error.hpp"

namespace tgf {

namespace {

std::vector<int> idx_counts(int nvars, std::initializer_list<int> vars) {
  std::vector<int> m(static_cast<std::size_t>(nvars), 0);
  for (int v : vars) ++m[static_cast<std::size_t>(v)];
  return m;
}

Vec column(const JetVector& f, const std::vector<int>& multi) {
  Vec out(static_cast<Eigen::Index>(f.size()));
  for (std::size_t a = 0; a < f.size(); ++a) out[static_cast<Eigen::Index>(a)] = f[a].derivative(multi);
  return out;
}

Mat span_matrix(const std::vector<Vec>& span) {
  Mat m(span.empty() ? 0 : span.front().size(), static_cast<Eigen::Index>(span.size()));
  for (std::size_t i = 0; i < span.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = span[i];
  return m;
}

}  // namespace

double JetData::symmetry_residual() const {
  double r = 0.0;
  const int d = static_cast<int>(d1.size());
  for (int i = 0; i < d && order >= 2; ++i)
    for (int j = 0; j < d; ++j) {
      r = std::max(r, (d2[i][j] - d2[j][i]).cwiseAbs().maxCoeff());
      for (int k = 0; k < d && order >= 3; ++k) {
        r = std::max(r, (d3[i][j][k] - d3[j][i][k]).cwiseAbs().maxCoeff());
        r = std::max(r, (d3[i][j][k] - d3[i][k][j]).cwiseAbs().maxCoeff());
        r = std::max(r, (d3[i][j][k] - d3[k][j][i]).cwiseAbs().maxCoeff());
      }
    }
  return r;
}

JetData jet(const ChartImmersion& im, std::span<const double> p, int order) {
  if (order < 0 || order > 3) throw Error(ErrorKind::Structural, "jet: order must be in 0..3");
  const JetVector f = im.eval(p, order);
  const int d = im.dim();
  JetData out;
  out.point.assign(p.begin(), p.end());
  out.order = order;
  out.value = to_vec(values(f));
  if (order >= 1) {
    for (int i = 0; i < d; ++i) out.d1.push_back(column(f, idx_counts(d, {i})));
  }
  if (order >= 2) {
    out.d2.assign(d, std::vector<Vec>(d));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) out.d2[i][j] = column(f, idx_counts(d, {i, j}));
  }
  if (order >= 3) {
    out.d3.assign(d, std::vector<std::vector<Vec>>(d, std::vector<Vec>(d)));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) out.d3[i][j][k] = column(f, idx_counts(d, {i, j, k}));
  }
  return out;
}

double rank_ratio(const std::vector<Vec>& tangent) {
  if (tangent.empty()) return 0.0;
  const Eigen::JacobiSVD<Mat> svd(span_matrix(tangent));
  const auto& s = svd.singularValues();
  if (s[0] == 0.0) return 0.0;
  return s[s.size() - 1] / s[0];
}

Vec project_off(const AmbientForm& form, const Vec& v, const std::vector<Vec>& span) {
  if (span.empty()) return v;
  const Mat s = span_matrix(span);
  const Mat j = form.gram();
  const Mat g = s.transpose() * j * s;
  const Vec coeff = g.fullPivLu().solve(s.transpose() * (j * v));
  return v - s * coeff;
}

std::vector<int> complement_pivots(const AmbientForm& form, const std::vector<Vec>& span) {
  std::vector<Vec> current = span;
  std::vector<int> pivots;
  const int rank = static_cast<int>(span.size());
  for (int stage = 0; stage < form.dim - rank; ++stage) {
    int best = -1;
    double best_q = 0.0;
    for (int k = 0; k < form.dim; ++k) {
      if (std::find(pivots.begin(), pivots.end(), k) != pivots.end()) continue;
      const Vec c = project_off(form, Vec::Unit(form.dim, k), current);
      const double q = std::abs(inner(form, c, c));
      if (q > best_q * (1.0 + 1e-12)) {
        best_q = q;
        best = k;
      }
    }
    if (best < 0 || best_q < 1e-14) throw Error(ErrorKind::DegenerateChart, "cannot complete frame: degenerate span");
    pivots.push_back(best);
    current.push_back(project_off(form, Vec::Unit(form.dim, best), current));
  }
  return pivots;
}

std::vector<Vec> orthonormal_complement(const AmbientForm& form, const std::vector<Vec>& span,
                                        std::span<const int> pivots, std::vector<double>* signs) {
  std::vector<Vec> current = span;
  std::vector<Vec> out;
  if (signs) signs->clear();
  for (int k : pivots) {
    Vec c = project_off(form, Vec::Unit(form.dim, k), current);
    const double q = inner(form, c, c);
    if (std::abs(q) < 1e-14) throw Error(ErrorKind::DegenerateChart, "normal frame candidate became null");
    c /= std::sqrt(std::abs(q));
    if (signs) signs->push_back(q > 0 ? 1.0 : -1.0);
    current.push_back(c);
    out.push_back(std::move(c));
  }
  return out;
}

Jet inner(const AmbientForm& form, const JetVector& a, const JetVector& b) {
  if (static_cast<int>(a.size()) != form.dim || static_cast<int>(b.size()) != form.dim) {
    throw Error(ErrorKind::Structural, "jet inner product: dimension mismatch");
  }
  Jet s = a[0] * b[0];
  if (form.mu == 1) s = -s;
  for (int i = 1; i < form.dim; ++i) s += a[i] * b[i];
  return s;
}

std::vector<JetVector> partials(const JetVector& f) {
  std::vector<JetVector> out;
  const int d = f.front().nvars();
  for (int i = 0; i < d; ++i) out.push_back(partial(f, i));
  return out;
}

JetMatrix first_form(const AmbientForm& form, const std::vector<JetVector>& tangent) {
  const std::size_t d = tangent.size();
  JetMatrix e(d, JetVector(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) {
      e[i][j] = inner(form, tangent[i], tangent[j]);
      e[j][i] = e[i][j];
    }
  return e;
}

JetVector solve(const JetMatrix& a, const JetVector& b) {
  const std::size_t n = b.size();
  JetMatrix m = a;
  JetVector x = b;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(m[r][col].value()) > std::abs(m[piv][col].value())) piv = r;
    }
    if (m[piv][col].value() == 0.0) throw Error(ErrorKind::DegenerateChart, "singular jet system");
    std::swap(m[piv], m[col]);
    std::swap(x[piv], x[col]);
    const Jet inv = inverse(m[col][col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const Jet factor = m[r][col] * inv;
      for (std::size_t c = col; c < n; ++c) m[r][c] -= factor * m[col][c];
      x[r] -= factor * x[col];
    }
  }
  for (std::size_t r = n; r-- > 0;) {
    Jet acc = x[r];
    for (std::size_t c = r + 1; c < n; ++c) acc -= m[r][c] * x[c];
    x[r] = acc / m[r][r];
  }
  return x;
}

JetMatrix inverse(const JetMatrix& a) {
  const std::size_t n = a.size();
  const int nv = a[0][0].nvars();
  const int ord = a[0][0].order();
  JetMatrix out(n, JetVector(n));
  for (std::size_t c = 0; c < n; ++c) {
    JetVector e(n, Jet::constant(0.0, nv, ord));
    e[c] = Jet::constant(1.0, nv, ord);
    const JetVector col = solve(a, e);
    for (std::size_t r = 0; r < n; ++r) out[r][c] = col[r];
  }
  return out;
}

std::vector<JetMatrix> christoffel(const JetMatrix& e) {
  const std::size_t d = e.size();
  const int ord = e[0][0].order();
  if (ord < 1) throw Error(ErrorKind::Structural, "christoffel: first form jets need order >= 1");
  const JetMatrix einv = inverse(e);
  // de[k][i][j] = d_k E_ij
  std::vector<JetMatrix> de(d, JetMatrix(d, JetVector(d)));
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) de[k][i][j] = e[i][j].partial(static_cast<int>(k));
  std::vector<JetMatrix> gamma(d, JetMatrix(d, JetVector(d)));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) {
      JetVector lower(d);
      for (std::size_t k = 0; k < d; ++k) lower[k] = 0.5 * (de[i][j][k] + de[j][i][k] - de[k][i][j]);
      for (std::size_t l = 0; l < d; ++l) {
        Jet acc = einv[l][0].truncated(ord - 1) * lower[0];
        for (std::size_t k = 1; k < d; ++k) acc += einv[l][k].truncated(ord - 1) * lower[k];
        gamma[l][i][j] = acc;
        gamma[l][j][i] = acc;
      }
    }
  return gamma;
}

std::vector<JetVector> orthonormal_complement(const AmbientForm& form, const std::vector<JetVector>& span,
                                              std::span<const int> pivots, std::vector<double>* signs) {
  const int nv = span.front().front().nvars();
  const int ord = span.front().front().order();
  std::vector<JetVector> current = span;
  std::vector<JetVector> out;
  if (signs) signs->clear();
  const JetMatrix g = first_form(form, span);
  for (int k : pivots) {
    JetVector c(static_cast<std::size_t>(form.dim), Jet::constant(0.0, nv, ord));
    c[static_cast<std::size_t>(k)] = Jet::constant(1.0, nv, ord);
    // remove the span part with its (possibly non-orthogonal) Gram matrix
    JetVector rhs;
    for (const auto& s : span) rhs.push_back(inner(form, s, c));
    const JetVector coeff = solve(g, rhs);
    for (std::size_t a = 0; a < span.size(); ++a) c = c - coeff[a] * span[a];
    // then the previously built orthonormal normals
    for (std::size_t b = span.size(); b < current.size(); ++b) {
      const double sb = inner(form, current[b], current[b]).value() > 0 ? 1.0 : -1.0;
      c = c - (sb * inner(form, c, current[b])) * current[b];
    }
    const Jet q = inner(form, c, c);
    if (std::abs(q.value()) < 1e-14) throw Error(ErrorKind::DegenerateChart, "normal frame candidate became null");
    const double sign = q.value() > 0 ? 1.0 : -1.0;
    c = inverse(sqrt(sign * q)) * c;
    if (signs) signs->push_back(sign);
    current.push_back(c);
    out.push_back(std::move(c));
  }
  return out;
}

MetricData metric_data(const ChartImmersion& im, std::span<const double> p, double rank_tol) {
  const JetVector f = im.eval(p, 2);
  const AmbientForm& form = im.form();
  const int d = im.dim();
  MetricData md;
  md.position = to_vec(values(f));
  const std::vector<JetVector> df = partials(f);
  for (int i = 0; i < d; ++i) md.tangent.push_back(to_vec(values(df[i])));
  if (rank_ratio(md.tangent) <= rank_tol) {
    throw Error(ErrorKind::DegenerateChart, "chart '" + im.name() + "': differential is rank deficient");
  }
  const JetMatrix e = first_form(form, df);
  md.first_form = Mat(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) md.first_form(i, j) = e[i][j].value();
  const auto gamma = christoffel(e);
  md.christoffel.assign(d, Mat(d, d));
  for (int l = 0; l < d; ++l)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) md.christoffel[l](i, j) = gamma[l][i][j].value();

  const double level = im.on_model() ? *im.target().level : 0.0;
  md.second_form.assign(d, std::vector<Vec>(d));
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      Vec a = column(f, idx_counts(d, {i, j}));
      const Vec fij = a;
      for (int l = 0; l < d; ++l) a -= md.christoffel[l](i, j) * md.tangent[l];
      if (im.on_model()) a -= (inner(form, fij, md.position) / level) * md.position;
      md.second_form[i][j] = a;
      md.second_form[j][i] = a;
    }

  std::vector<Vec> span = md.tangent;
  if (im.on_model()) span.push_back(md.position);
  md.normal_basis = orthonormal_complement(form, span, complement_pivots(form, span), &md.normal_signs);
  return md;
}

Mat shape_operator(const MetricData& md, const AmbientForm& form, const Vec& w) {
  const int d = static_cast<int>(md.tangent.size());
  Mat b(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) b(i, j) = inner(form, md.second_form[i][j], w);
  return md.first_form.ldlt().solve(b);
}

Mat shape_operator(const ChartImmersion& im, std::span<const double> p, const Vec& w, double tol) {
  const MetricData md = metric_data(im, p);
  const AmbientForm& form = im.form();
  const double scale = std::max(1.0, w.norm());
  double off = 0.0;
  for (const auto& t : md.tangent) off = std::max(off, std::abs(inner(form, t, w)) / std::max(1.0, t.norm()));
  if (im.on_model()) off = std::max(off, std::abs(inner(form, md.position, w)));
  if (off > tol * scale) {
    throw Error(ErrorKind::Precondition, "shape_operator: w is not normal (residual " + std::to_string(off) + ")");
  }
  return shape_operator(md, form, w);
}

double gauss_curvature(const ChartImmersion& im, std::span<const double> p) {
  if (im.dim() != 2) throw Error(ErrorKind::UnsupportedModel, "gauss_curvature needs a 2-dimensional chart");
  const JetVector f = im.eval(p, 3);
  const JetMatrix e = first_form(im.form(), partials(f));
  const auto g = christoffel(e);  // order 1
  // R(d1,d2)d2 = sum_l R^l d_l with
  // R^l = d1 G^l_22 - d2 G^l_12 + G^l_1m G^m_22 - G^l_2m G^m_12
  double r1212 = 0.0;
  for (int l = 0; l < 2; ++l) {
    double rl = g[l][1][1].d(0) - g[l][0][1].d(1);
    for (int m = 0; m < 2; ++m) {
      rl += g[l][0][m].value() * g[m][1][1].value() - g[l][1][m].value() * g[m][0][1].value();
    }
    r1212 += e[0][l].value() * rl;
  }
  const double det = e[0][0].value() * e[1][1].value() - e[0][1].value() * e[0][1].value();
  return r1212 / det;
}

}  // namespace tgf
