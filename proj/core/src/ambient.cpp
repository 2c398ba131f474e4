#include "tgf/ambient.hpp"

#include <cmath>
#include <string>

#include "tgf/error.hpp"

namespace tgf {

Mat AmbientForm::gram() const {
  Mat g = Mat::Identity(dim, dim);
  if (mu == 1 && dim > 0) g(0, 0) = -1.0;
  return g;
}

SpaceForm::SpaceForm(int epsilon, int intrinsic_dim, double tol)
    : eps_(epsilon), mu_(epsilon == -1 ? 1 : 0), n1_(intrinsic_dim), tol_(tol) {
  if (epsilon < -1 || epsilon > 1) throw Error(ErrorKind::Structural, "epsilon must be -1, 0 or 1");
  if (intrinsic_dim < 1) throw Error(ErrorKind::Structural, "intrinsic dimension must be positive");
  if (!(tol > 0.0)) throw Error(ErrorKind::Structural, "tolerance must be positive");
}

double inner(const AmbientForm& form, const Vec& u, const Vec& v) {
  if (u.size() != form.dim || v.size() != form.dim) {
    throw Error(ErrorKind::Structural, "vector length " + std::to_string(u.size()) + "/" +
                                           std::to_string(v.size()) + " does not match ambient dimension " +
                                           std::to_string(form.dim));
  }
  double s = u.dot(v);
  if (form.mu == 1) s -= 2.0 * u[0] * v[0];
  return s;
}

double inner(const SpaceForm& sf, const Vec& u, const Vec& v) { return inner(sf.form(), u, v); }

double norm(const AmbientForm& form, const Vec& v) { return std::sqrt(std::abs(inner(form, v, v))); }

double on_form_residual(const SpaceForm& sf, const Vec& p) {
  if (sf.epsilon() == 0) throw Error(ErrorKind::UnsupportedModel, "on_form_residual needs a curved model");
  return std::abs(inner(sf, p, p) - sf.epsilon());
}

Vec exp_map(const SpaceForm& sf, const Vec& p, const Vec& v) {
  const AmbientForm form = sf.form();
  if (p.size() != form.dim || v.size() != form.dim) throw Error(ErrorKind::Structural, "exp_map: dimension mismatch");
  if (sf.epsilon() == 0) return p + v;
  const double scale = std::max(1.0, v.norm());
  if (on_form_residual(sf, p) > sf.tol()) throw Error(ErrorKind::Precondition, "exp_map: base point off the model");
  if (std::abs(inner(form, p, v)) > sf.tol() * scale) throw Error(ErrorKind::Precondition, "exp_map: v not tangent");
  const double q = inner(form, v, v);
  if (sf.epsilon() == -1 && q < -sf.tol() * scale * scale) {
    throw Error(ErrorKind::Precondition, "exp_map: v not spacelike");
  }
  const double t = std::sqrt(std::max(q, 0.0));
  if (t == 0.0) return p + v;
  if (sf.epsilon() == 1) return std::cos(t) * p + (std::sin(t) / t) * v;
  return std::cosh(t) * p + (std::sinh(t) / t) * v;
}

}  // namespace tgf
