#pragma once

#include <span>
#include <vector>

#include "tgf/chart.hpp"

namespace tgf {

/// Surface data seeding the Gauss parametrization.
///
/// eps = 0: g maps into the unit sphere S^n of R^{n+1} and gamma is the
/// support function. eps = +-1: g maps into S_mu^{n+1} of R_mu^{n+2}
/// (mu = (1 - eps) / 2) and gamma is unused.
struct GaussPair {
  ChartImmersion g;
  int epsilon = 0;
  JetMap gamma;
  /// Ambient basis vectors completing {g_u, g_v, g} to a frame; fixed at the
  /// chart center so the normal frame is smooth.
  std::vector<int> pivots;
  /// Signature of the normal frame (the timelike field comes first for eps = -1).
  std::vector<double> signs;

  [[nodiscard]] int n() const { return epsilon == 0 ? g.ambient_dim() - 1 : g.ambient_dim() - 2; }
  [[nodiscard]] int fiber_dim() const { return n() - 2; }
  /// Normal frame of g (orthogonal to g_* and to g); jets of order K need
  /// g at order K + 1.
  [[nodiscard]] std::vector<JetVector> normal_frame(std::span<const double> y, int order) const;
  [[nodiscard]] std::vector<Vec> normal_frame(std::span<const double> y) const;
};

GaussPair make_gauss_pair(ChartImmersion g, JetMap gamma);
GaussPair make_nonflat_gauss_pair(ChartImmersion g, int epsilon);

/// P_w = gamma I + Hess gamma - A_w in a g-orthonormal basis of T_yL.
Mat p_w(const GaussPair& pair, std::span<const double> y, const Vec& w);
/// A_w of g in a g-orthonormal basis of T_yL.
Mat a_w(const GaussPair& pair, std::span<const double> y, const Vec& w);

Vec psi_euclidean(const GaussPair& pair, std::span<const double> y, std::span<const double> t);
/// Point of Lambda_eps given by the angle chart around the base normal field.
Vec psi_spaceform(const GaussPair& pair, std::span<const double> y, std::span<const double> t);

struct GaussOptions {
  std::vector<Interval> fiber;  // empty: defaults
  std::vector<int> resolution;  // per chart variable; empty: 33 x 33 x 9 (fiber total)
  double det_tol = 1e-8;
  double rank_tol = 1e-8;
};

struct GaussChart {
  GaussPair pair;
  SpaceForm space_form{0, 1};
  ChartImmersion psi;  // variables (y1, y2, t_1, ..., t_{n-2})
  std::vector<std::vector<double>> samples;
  std::vector<char> regular;
  double det_tol = 1e-8;
};

GaussChart gauss_chart(const GaussPair& pair, const GaussOptions& opt = {});

/// Residuals of the Gauss-parametrization identities at one chart point.
struct GaussResiduals {
  bool regular = false;
  double det = 0.0;             // det P_w (eps = 0) or det A_w
  double rank_ratio = 0.0;      // smallest / largest singular value of d psi
  double isometry = 0.0;        // |d psi(j e_a) - h_* e_a|
  double shape = 0.0;           // A j vs -j P_w^{-1} or j A_w^{-1}
  double splitting = 0.0;       // max over fiber fields
  double connection = 0.0;
  double nullity_parallel = 0.0;  // nabla_xi jX
  double gauss_map = 0.0;       // unit normal vs +-g
  double nullity_angle = 0.0;   // sine of the angle between ker A and the fiber
  int nullity_index = 0;
};

GaussResiduals gauss_residuals(const GaussChart& gc, std::span<const double> sample);

/// Individual identities; each throws a regularity error at singular samples.
double shape_identity_residual(const GaussChart& gc, std::span<const double> sample);
double splitting_tensor_residual(const GaussChart& gc, std::span<const double> sample, const Vec& xi);
double connection_relation_residual(const GaussChart& gc, std::span<const double> sample);

/// Matrix of C_xi restricted to the horizontal space, in the basis j e_a, and
/// the closed-form right-hand side, for an ambient xi in the nullity space.
struct SplittingPair {
  Mat direct;
  Mat formula;
};
SplittingPair splitting_tensor(const GaussChart& gc, std::span<const double> sample, const Vec& xi);

/// Lift of a tangent vector of L (chart coordinates) to the psi chart: the
/// coordinate vector V with d psi(V) = h_* X.
Vec horizontal_lift(const GaussChart& gc, std::span<const double> sample, const Vec& x);
/// The same lift for a vector field X on L, as a field on the psi chart
/// (coefficients in the psi coordinate basis, with derivatives).
VectorField horizontal_lift_field(const GaussChart& gc, VectorField x);

}  // namespace tgf
