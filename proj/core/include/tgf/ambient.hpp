#pragma once

#include <Eigen/Dense>

namespace tgf {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Flat space R^dim_mu: mu = 1 makes the first coordinate timelike.
struct AmbientForm {
  int dim = 0;
  int mu = 0;

  [[nodiscard]] double sign(int i) const { return (mu == 1 && i == 0) ? -1.0 : 1.0; }
  /// Diagonal Gram matrix of the form.
  [[nodiscard]] Mat gram() const;
  friend bool operator==(const AmbientForm&, const AmbientForm&) = default;
};

/// The model Q_eps^{n+1}: R^{n+1} for eps = 0, otherwise the quadric
/// <x,x> = eps inside R_mu^{n+2} (the hyperboloid sheet x_0 > 0 for eps = -1).
class SpaceForm {
 public:
  SpaceForm(int epsilon, int intrinsic_dim, double tol = 1e-9);

  static SpaceForm euclidean(int intrinsic_dim) { return {0, intrinsic_dim}; }
  static SpaceForm sphere(int intrinsic_dim) { return {1, intrinsic_dim}; }
  static SpaceForm hyperbolic(int intrinsic_dim) { return {-1, intrinsic_dim}; }

  [[nodiscard]] int epsilon() const noexcept { return eps_; }
  [[nodiscard]] int mu() const noexcept { return mu_; }
  [[nodiscard]] int intrinsic_dim() const noexcept { return n1_; }
  [[nodiscard]] int ambient_dim() const noexcept { return eps_ == 0 ? n1_ : n1_ + 1; }
  [[nodiscard]] double tol() const noexcept { return tol_; }
  [[nodiscard]] AmbientForm form() const { return {ambient_dim(), mu_}; }

  friend bool operator==(const SpaceForm&, const SpaceForm&) = default;

 private:
  int eps_;
  int mu_;
  int n1_;
  double tol_;
};

double inner(const AmbientForm& form, const Vec& u, const Vec& v);
double inner(const SpaceForm& sf, const Vec& u, const Vec& v);
/// sqrt|<v,v>|.
double norm(const AmbientForm& form, const Vec& v);

/// |<p,p> - eps|, defined for eps != 0 only.
double on_form_residual(const SpaceForm& sf, const Vec& p);

/// Geodesic exponential map of Q_eps at p.
Vec exp_map(const SpaceForm& sf, const Vec& p, const Vec& v);

}  // namespace tgf
