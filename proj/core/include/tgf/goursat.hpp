#pragma once

#include <functional>
#include <vector>

#include "tgf/ambient.hpp"
#include "tgf/chart.hpp"

namespace tgf {

/// Uniform nu x nv grid on a rectangle; index i runs along u, j along v.
struct Grid {
  Interval u, v;
  int nu = 2, nv = 2;
  [[nodiscard]] double du() const { return u.width() / (nu - 1); }
  [[nodiscard]] double dv() const { return v.width() / (nv - 1); }
  [[nodiscard]] double u_at(int i) const { return u.lo + du() * i; }
  [[nodiscard]] double v_at(int j) const { return v.lo + dv() * j; }
  [[nodiscard]] std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * nv + j; }
};

struct ScalarGrid {
  Grid grid;
  std::vector<double> values;
  [[nodiscard]] double operator()(int i, int j) const { return values[grid.index(i, j)]; }
  double& operator()(int i, int j) { return values[grid.index(i, j)]; }
  /// d/dv by second-order differences (one-sided at the ends).
  [[nodiscard]] ScalarGrid d_v() const;
  [[nodiscard]] ScalarGrid d_u() const;
  /// Bilinear interpolation.
  [[nodiscard]] double sample(double u, double v) const;
};

struct VectorGrid {
  Grid grid;
  std::vector<Vec> values;
  [[nodiscard]] const Vec& operator()(int i, int j) const { return values[grid.index(i, j)]; }
  Vec& operator()(int i, int j) { return values[grid.index(i, j)]; }
};

using ScalarFn = std::function<double(double u, double v)>;

/// u_uv + a u_v + b u = 0 with data on the characteristics v = v0 and u = u0.
struct GoursatProblem {
  Interval u, v;
  ScalarFn a, b;
  std::function<double(double)> data_u;  // on v = v.lo, as a function of u
  std::function<double(double)> data_v;  // on u = u.lo, as a function of v
};

/// Second-order characteristic marching: each cell is closed with the exact
/// identity U(1,1) - U(1,0) - U(0,1) + U(0,0) = -(cell integral of a u_v + b u),
/// the integral taken by midpoint coefficients and trapezoidal values.
ScalarGrid solve_goursat(const GoursatProblem& gp, int nu, int nv);

struct VarphiSolution {
  ScalarGrid phi;
  ScalarGrid phi_v;
  /// Corner-anchored sub-rectangle [u.lo, u_at(i_max)] x [v.lo, v_at(j_max)]
  /// where |phi| and |phi_v| stay above the threshold.
  int i_max = 0;
  int j_max = 0;
  [[nodiscard]] Interval u_range() const { return {phi.grid.u.lo, phi.grid.u_at(i_max)}; }
  [[nodiscard]] Interval v_range() const { return {phi.grid.v.lo, phi.grid.v_at(j_max)}; }
};

/// phi_uv - (a + b_u / b) phi_v + b phi = 0 with data phi = 1 on v = v0 and
/// phi = exp(kappa (v - v0)) on u = u0.
VarphiSolution solve_varphi(const ScalarFn& a, const ScalarFn& b, const ScalarFn& b_u, Interval u, Interval v,
                            int nu, int nv, double kappa = 1.0, double nonzero_tol = 1e-6);

/// h_u = rhs_u, h_v = rhs_v, h(u0, v0) = initial.
struct FirstOrderSystem {
  Interval u, v;
  std::function<Vec(double u, double v)> rhs_u, rhs_v;
  Vec initial;
};

/// max over interior nodes of |d_v rhs_u - d_u rhs_v| by central differences
/// with the grid spacing.
double integrability_residual(const FirstOrderSystem& fs, int nu, int nv);

struct IntegratedSystem {
  VectorGrid h;        // u-edge first, then v-lines
  VectorGrid h_alt;    // v-edge first, then u-lines
  double path_deviation = 0.0;
  double integrability = 0.0;
};

IntegratedSystem integrate_system(const FirstOrderSystem& fs, int nu, int nv, double threshold);

}  // namespace tgf
