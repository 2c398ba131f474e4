#include "tgf/goursat.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tgf/error.hpp"

namespace tgf {

namespace {

Grid make_grid(Interval u, Interval v, int nu, int nv) {
  if (nu < 3 || nv < 3) throw Error(ErrorKind::Structural, "grids need at least 3 nodes per side");
  if (!(u.hi > u.lo) || !(v.hi > v.lo)) throw Error(ErrorKind::Structural, "empty rectangle");
  return {u, v, nu, nv};
}

}  // namespace

ScalarGrid ScalarGrid::d_v() const {
  ScalarGrid out{grid, std::vector<double>(values.size())};
  const double h = grid.dv();
  const int n = grid.nv;
  for (int i = 0; i < grid.nu; ++i) {
    const auto& f = *this;
    out(i, 0) = (-3 * f(i, 0) + 4 * f(i, 1) - f(i, 2)) / (2 * h);
    out(i, n - 1) = (3 * f(i, n - 1) - 4 * f(i, n - 2) + f(i, n - 3)) / (2 * h);
    for (int j = 1; j < n - 1; ++j) out(i, j) = (f(i, j + 1) - f(i, j - 1)) / (2 * h);
  }
  return out;
}

ScalarGrid ScalarGrid::d_u() const {
  ScalarGrid out{grid, std::vector<double>(values.size())};
  const double h = grid.du();
  const int n = grid.nu;
  const auto& f = *this;
  for (int j = 0; j < grid.nv; ++j) {
    out(0, j) = (-3 * f(0, j) + 4 * f(1, j) - f(2, j)) / (2 * h);
    out(n - 1, j) = (3 * f(n - 1, j) - 4 * f(n - 2, j) + f(n - 3, j)) / (2 * h);
    for (int i = 1; i < n - 1; ++i) out(i, j) = (f(i + 1, j) - f(i - 1, j)) / (2 * h);
  }
  return out;
}

double ScalarGrid::sample(double u, double v) const {
  const double x = std::clamp((u - grid.u.lo) / grid.du(), 0.0, grid.nu - 1.0);
  const double y = std::clamp((v - grid.v.lo) / grid.dv(), 0.0, grid.nv - 1.0);
  const int i = std::min(static_cast<int>(x), grid.nu - 2);
  const int j = std::min(static_cast<int>(y), grid.nv - 2);
  const double s = x - i, t = y - j;
  const auto& f = *this;
  return (1 - s) * (1 - t) * f(i, j) + s * (1 - t) * f(i + 1, j) + (1 - s) * t * f(i, j + 1) + s * t * f(i + 1, j + 1);
}

ScalarGrid solve_goursat(const GoursatProblem& gp, int nu, int nv) {
  const Grid g = make_grid(gp.u, gp.v, nu, nv);
  const double c0 = gp.data_u(gp.u.lo), c1 = gp.data_v(gp.v.lo);
  if (std::abs(c0 - c1) > 1e-12 * std::max(1.0, std::abs(c0))) {
    throw Error(ErrorKind::Precondition, "Goursat data disagree at the corner");
  }
  ScalarGrid out{g, std::vector<double>(static_cast<std::size_t>(nu) * nv)};
  for (int i = 0; i < nu; ++i) out(i, 0) = gp.data_u(g.u_at(i));
  for (int j = 0; j < nv; ++j) out(0, j) = gp.data_v(g.v_at(j));
  out(0, 0) = c0;
  const double du = g.du(), dv = g.dv();
  for (int i = 0; i + 1 < nu; ++i) {
    for (int j = 0; j + 1 < nv; ++j) {
      const double uc = g.u_at(i) + du / 2, vc = g.v_at(j) + dv / 2;
      const double ac = gp.a(uc, vc) * du / 2;
      const double bc = gp.b(uc, vc) * du * dv / 4;
      const double l = out(i, j), r = out(i + 1, j), t = out(i, j + 1);
      const double denom = 1.0 + ac + bc;
      if (std::abs(denom) < 1e-14) throw Error(ErrorKind::CoefficientSingularity, "singular cell update");
      out(i + 1, j + 1) = (r + t - l - ac * (t - l - r) - bc * (l + r + t)) / denom;
    }
  }
  return out;
}

VarphiSolution solve_varphi(const ScalarFn& a, const ScalarFn& b, const ScalarFn& b_u, Interval u, Interval v,
                            int nu, int nv, double kappa, double nonzero_tol) {
  const Grid g = make_grid(u, v, nu, nv);
  // b must not vanish anywhere the coefficient is evaluated (nodes and cell centers).
  for (int i = 0; i < 2 * nu - 1; ++i)
    for (int j = 0; j < 2 * nv - 1; ++j) {
      const double uu = g.u.lo + g.du() * i / 2, vv = g.v.lo + g.dv() * j / 2;
      if (std::abs(b(uu, vv)) < 1e-12) {
        throw Error(ErrorKind::CoefficientSingularity,
                    "b vanishes at (" + std::to_string(uu) + ", " + std::to_string(vv) + ")");
      }
    }
  GoursatProblem gp;
  gp.u = u;
  gp.v = v;
  gp.a = [a, b, b_u](double x, double y) { return -(a(x, y) + b_u(x, y) / b(x, y)); };
  gp.b = b;
  gp.data_u = [](double) { return 1.0; };
  const double v0 = v.lo;
  gp.data_v = [kappa, v0](double y) { return std::exp(kappa * (y - v0)); };
  VarphiSolution out;
  out.phi = solve_goursat(gp, nu, nv);
  out.phi_v = out.phi.d_v();
  // Both functions must keep their corner sign and stay above the threshold;
  // find the largest corner-anchored rectangle of such nodes.
  const double s_phi = out.phi(0, 0) > 0 ? 1.0 : -1.0;
  const double s_dphi = out.phi_v(0, 0) > 0 ? 1.0 : -1.0;
  auto ok = [&](int i, int j) {
    return s_phi * out.phi(i, j) > nonzero_tol && s_dphi * out.phi_v(i, j) > nonzero_tol;
  };
  int best_area = -1;
  int jcap = nv - 1;
  for (int i = 0; i < nu && ok(i, 0); ++i) {
    int j = 0;
    while (j + 1 <= jcap && ok(i, j + 1)) ++j;
    jcap = j;
    if (i * jcap > best_area) {
      best_area = i * jcap;
      out.i_max = i;
      out.j_max = jcap;
    }
  }
  return out;
}

double integrability_residual(const FirstOrderSystem& fs, int nu, int nv) {
  const Grid g = make_grid(fs.u, fs.v, nu, nv);
  const double du = g.du(), dv = g.dv();
  double r = 0.0;
  for (int i = 1; i + 1 < nu; ++i)
    for (int j = 1; j + 1 < nv; ++j) {
      const double u = g.u_at(i), v = g.v_at(j);
      const Vec dpu_dv = (fs.rhs_u(u, v + dv) - fs.rhs_u(u, v - dv)) / (2 * dv);
      const Vec dpv_du = (fs.rhs_v(u + du, v) - fs.rhs_v(u - du, v)) / (2 * du);
      r = std::max(r, (dpu_dv - dpv_du).norm());
    }
  return r;
}

IntegratedSystem integrate_system(const FirstOrderSystem& fs, int nu, int nv, double threshold) {
  IntegratedSystem out;
  out.integrability = integrability_residual(fs, nu, nv);
  if (out.integrability > threshold) {
    throw Error(ErrorKind::NonIntegrable,
                "integrability residual " + std::to_string(out.integrability) + " exceeds " + std::to_string(threshold));
  }
  const Grid g = make_grid(fs.u, fs.v, nu, nv);
  const auto n = static_cast<std::size_t>(nu) * nv;
  out.h = {g, std::vector<Vec>(n)};
  out.h_alt = {g, std::vector<Vec>(n)};
  const double du = g.du(), dv = g.dv();
  out.h(0, 0) = fs.initial;
  for (int i = 1; i < nu; ++i) {
    out.h(i, 0) = out.h(i - 1, 0) + 0.5 * du * (fs.rhs_u(g.u_at(i - 1), g.v.lo) + fs.rhs_u(g.u_at(i), g.v.lo));
  }
  for (int i = 0; i < nu; ++i)
    for (int j = 1; j < nv; ++j) {
      out.h(i, j) = out.h(i, j - 1) + 0.5 * dv * (fs.rhs_v(g.u_at(i), g.v_at(j - 1)) + fs.rhs_v(g.u_at(i), g.v_at(j)));
    }
  out.h_alt(0, 0) = fs.initial;
  for (int j = 1; j < nv; ++j) {
    out.h_alt(0, j) = out.h_alt(0, j - 1) + 0.5 * dv * (fs.rhs_v(g.u.lo, g.v_at(j - 1)) + fs.rhs_v(g.u.lo, g.v_at(j)));
  }
  for (int j = 0; j < nv; ++j)
    for (int i = 1; i < nu; ++i) {
      out.h_alt(i, j) =
          out.h_alt(i - 1, j) + 0.5 * du * (fs.rhs_u(g.u_at(i - 1), g.v_at(j)) + fs.rhs_u(g.u_at(i), g.v_at(j)));
    }
  for (std::size_t k = 0; k < n; ++k) {
    out.path_deviation = std::max(out.path_deviation, (out.h.values[k] - out.h_alt.values[k]).norm());
  }
  return out;
}

}  // namespace tgf
