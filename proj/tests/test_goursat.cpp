#include <gtest/gtest.h>

#include <cmath>

#include "tgf/error.hpp"
#include "tgf/goursat.hpp"

using tgf::GoursatProblem;
using tgf::Vec;

namespace {

Vec v2(double a, double b) {
  Vec x(2);
  x << a, b;
  return x;
}

double max_error(const tgf::ScalarGrid& s, auto&& exact) {
  double e = 0.0;
  for (int i = 0; i < s.grid.nu; ++i)
    for (int j = 0; j < s.grid.nv; ++j) e = std::max(e, std::abs(s(i, j) - exact(s.grid.u_at(i), s.grid.v_at(j))));
  return e;
}

GoursatProblem exp_uv() {
  GoursatProblem gp;
  gp.u = {0, 1};
  gp.v = {0, 1};
  gp.a = [](double, double) { return 0.0; };
  gp.b = [](double u, double v) { return -(1 + u * v); };
  gp.data_u = [](double) { return 1.0; };
  gp.data_v = [](double) { return 1.0; };
  return gp;
}

GoursatProblem cos_sum() {
  GoursatProblem gp;
  gp.u = {0, 0.5};
  gp.v = {0, 0.5};
  gp.a = [](double, double) { return 1.0; };
  gp.b = [](double u, double v) { return 1.0 + std::tan(u + v); };
  gp.data_u = [](double u) { return std::cos(u); };
  gp.data_v = [](double v) { return std::cos(v); };
  return gp;
}

double slope(const GoursatProblem& gp, auto&& exact) {
  std::vector<double> errs;
  for (int n : {11, 21, 41, 81}) errs.push_back(max_error(tgf::solve_goursat(gp, n, n), exact));
  // average log2 ratio over three halvings
  return std::log2(errs[0] / errs[3]) / 3.0;
}

}  // namespace

TEST(Goursat, WaveEquationIsExact) {
  GoursatProblem gp;
  gp.u = {0, 2};
  gp.v = {-1, 1};
  gp.a = gp.b = [](double, double) { return 0.0; };
  gp.data_u = [](double u) { return std::sin(3 * u) + 1.0; };
  gp.data_v = [](double v) { return std::exp(v + 1) + std::sin(0.0); };
  const auto s = tgf::solve_goursat(gp, 31, 17);
  EXPECT_LT(max_error(s, [](double u, double v) { return std::sin(3 * u) + 1.0 + std::exp(v + 1) - 1.0; }), 1e-12);
}

TEST(Goursat, ManufacturedExpConverges) {
  const double p = slope(exp_uv(), [](double u, double v) { return std::exp(u * v); });
  EXPECT_GE(p, 1.8);
  EXPECT_LE(p, 2.2);
}

TEST(Goursat, ManufacturedCosWithFirstOrderTermConverges) {
  const double p = slope(cos_sum(), [](double u, double v) { return std::cos(u + v); });
  EXPECT_GE(p, 1.8);
  EXPECT_LE(p, 2.2);
}

TEST(Goursat, Linearity) {
  GoursatProblem p1 = cos_sum(), p2 = cos_sum(), p12 = cos_sum();
  p2.data_u = [](double u) { return u * u + 2.0; };
  p2.data_v = [](double v) { return 2.0 - v; };
  const double al = 0.7, be = -1.9;
  p12.data_u = [&](double u) { return al * p1.data_u(u) + be * p2.data_u(u); };
  p12.data_v = [&](double v) { return al * p1.data_v(v) + be * p2.data_v(v); };
  const auto s1 = tgf::solve_goursat(p1, 25, 25), s2 = tgf::solve_goursat(p2, 25, 25),
             s12 = tgf::solve_goursat(p12, 25, 25);
  for (std::size_t k = 0; k < s1.values.size(); ++k) {
    EXPECT_NEAR(s12.values[k], al * s1.values[k] + be * s2.values[k], 1e-10);
  }
}

TEST(Goursat, IncompatibleCornerRejected) {
  GoursatProblem gp = exp_uv();
  gp.data_v = [](double) { return 2.0; };
  try {
    (void)tgf::solve_goursat(gp, 5, 5);
    FAIL();
  } catch (const tgf::Error& e) {
    EXPECT_EQ(e.kind(), tgf::ErrorKind::Precondition);
  }
}

TEST(Varphi, SingularCoefficientRejected) {
  const auto a = [](double, double) { return 0.0; };
  const auto b = [](double u, double) { return u - 0.5; };
  const auto bu = [](double, double) { return 1.0; };
  try {
    (void)tgf::solve_varphi(a, b, bu, {0, 1}, {0, 1}, 11, 11);
    FAIL();
  } catch (const tgf::Error& e) {
    EXPECT_EQ(e.kind(), tgf::ErrorKind::CoefficientSingularity);
  }
}

TEST(Varphi, ConstantCoefficientsAndSubRectangle) {
  // a = 0, b = -1 constant: phi_uv + b phi = 0 has phi = exp(u/kappa + kappa v)
  // when the data match; data phi(u,0) = 1 gives a different solution, so only
  // check structural properties and the reported sub-rectangle here.
  const auto a = [](double, double) { return 0.0; };
  const auto b = [](double, double) { return -1.0; };
  const auto bu = [](double, double) { return 0.0; };
  const auto sol = tgf::solve_varphi(a, b, bu, {0, 0.5}, {0, 0.5}, 21, 21, 1.0);
  EXPECT_EQ(sol.i_max, 20);
  EXPECT_EQ(sol.j_max, 20);
  for (int i = 0; i <= sol.i_max; ++i)
    for (int j = 0; j <= sol.j_max; ++j) {
      EXPECT_GT(std::abs(sol.phi(i, j)), 1e-6);
      EXPECT_GT(std::abs(sol.phi_v(i, j)), 1e-6);
    }
  // a solution crossing zero shrinks the rectangle
  const auto bneg = [](double, double) { return 20.0; };
  const auto s2 = tgf::solve_varphi(a, bneg, bu, {0, 1}, {0, 1}, 41, 41, 0.1);
  EXPECT_LT(s2.i_max * s2.j_max, 40 * 40);
}

TEST(Integrability, Examples) {
  tgf::FirstOrderSystem fs{{0, 1}, {0, 1}, [](double, double v) { return v2(v, 0); },
                           [](double u, double) { return v2(u, 0); }, v2(0, 0)};
  EXPECT_NEAR(tgf::integrability_residual(fs, 11, 11), 0.0, 1e-12);
  const auto h = tgf::integrate_system(fs, 11, 11, 1e-8);
  for (int i = 0; i < 11; ++i)
    for (int j = 0; j < 11; ++j) {
      EXPECT_NEAR((h.h(i, j) - v2(h.h.grid.u_at(i) * h.h.grid.v_at(j), 0)).norm(), 0.0, 1e-12);
    }
  fs.rhs_v = [](double u, double) { return v2(-u, 0); };
  EXPECT_NEAR(tgf::integrability_residual(fs, 11, 11), 2.0, 1e-12);
  try {
    (void)tgf::integrate_system(fs, 11, 11, 1e-3);
    FAIL();
  } catch (const tgf::Error& e) {
    EXPECT_EQ(e.kind(), tgf::ErrorKind::NonIntegrable);
  }
}

TEST(Integrability, PathIndependenceOnManufacturedSystem) {
  // h = (u^2 v^2 + 3uv, u^2 - v^2 + u v^2): trapezoid is exact on both paths
  tgf::FirstOrderSystem poly{{0, 1}, {0, 1},
                             [](double u, double v) { return v2(2 * u * v * v + 3 * v, 2 * u + v * v); },
                             [](double u, double v) { return v2(2 * u * u * v + 3 * u, -2 * v + 2 * u * v); },
                             v2(0, 0)};
  const auto hp = tgf::integrate_system(poly, 33, 33, 1e-8);
  EXPECT_LT(hp.path_deviation, 1e-8);
  // h = (sin(u) e^v, u^2 v^3): both orders converge to each other at O(h^2)
  tgf::FirstOrderSystem fs{{0, 1}, {0, 1},
                           [](double u, double v) { return v2(std::cos(u) * std::exp(v), 2 * u * v * v * v); },
                           [](double u, double v) { return v2(std::sin(u) * std::exp(v), 3 * u * u * v * v); },
                           v2(0, 0)};
  const auto h = tgf::integrate_system(fs, 101, 101, 1e-3);
  EXPECT_LT(h.path_deviation, 1e-4);
  const auto h2 = tgf::integrate_system(fs, 201, 201, 1e-3);
  EXPECT_NEAR(h.path_deviation / h2.path_deviation, 4.0, 0.2);
}

TEST(Integrability, DeviationScalesWithCurl) {
  auto make = [](double c) {
    return tgf::FirstOrderSystem{{0, 1}, {0, 1}, [](double, double v) { return v2(v, 0); },
                                 [c](double u, double) { return v2(u * (1 - c), 0); }, v2(0, 0)};
  };
  const auto d1 = tgf::integrate_system(make(0.1), 21, 21, 10.0).path_deviation;
  const auto d2 = tgf::integrate_system(make(0.2), 21, 21, 10.0).path_deviation;
  EXPECT_NEAR(d2 / d1, 2.0, 0.2);
}
