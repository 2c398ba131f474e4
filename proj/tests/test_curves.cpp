#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "tgf/charts.hpp"
#include "tgf/curves.hpp"
#include "tgf/differential.hpp"
#include "tgf/error.hpp"

using tgf::ChartImmersion;
using tgf::Interval;
using tgf::Jet;
using tgf::JetVector;
using tgf::SpaceForm;
using tgf::Vec;

namespace {

Vec v3(double a, double b, double c) {
  Vec x(3);
  x << a, b, c;
  return x;
}

ChartImmersion plane_circle(Interval s = {0.0, 2 * std::numbers::pi}) {
  return {"circle", {s}, tgf::Target::flat(3),
          tgf::closed_form([](std::span<const Jet> x) { return JetVector{cos(x[0]), sin(x[0]), x[0] * 0.0}; })};
}

ChartImmersion line(Interval s = {-1.0, 1.0}) {
  return {"line", {s}, tgf::Target::flat(3), tgf::closed_form([](std::span<const Jet> x) {
            return JetVector{0.6 * x[0], 0.8 * x[0], x[0] * 0.0 + 1.0};
          })};
}

ChartImmersion fiber_circle(double center, double r, Interval x = {-3.0, 3.0}) {
  return {"fiber_circle", {x}, tgf::Target::flat(2), tgf::closed_form([center, r](std::span<const Jet> t) {
            return JetVector{center + r * cos(t[0]), r * sin(t[0])};
          })};
}

tgf::ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const tgf::Error& e) {
    return e.kind();
  }
  return tgf::ErrorKind::Input;
}

}  // namespace

TEST(ParallelFrame, PlaneCircle) {
  const auto fc = tgf::parallel_frame(SpaceForm::euclidean(3), plane_circle(), {v3(-1, 0, 0), v3(0, 0, 1)}, 1000);
  for (double s : {0.3, 1.7, 4.0, 6.2}) {
    const auto xi = fc.frame(s);
    EXPECT_LT((xi[0] - v3(-std::cos(s), -std::sin(s), 0)).norm(), 1e-10);
    EXPECT_LT((xi[1] - v3(0, 0, 1)).norm(), 1e-12);
  }
  EXPECT_LT(fc.orthonormality_residual(), 1e-8);
  EXPECT_LT(fc.parallelism_residual(), 1e-6);
}

TEST(ParallelFrame, StraightLineKeepsConstantFrame) {
  const Vec a = v3(0.8, -0.6, 0), b = v3(0, 0, 1);
  const auto fc = tgf::parallel_frame(SpaceForm::euclidean(3), line(), {a, b}, 100);
  for (double s : {-0.9, 0.0, 0.77}) {
    const auto xi = fc.frame(s);
    EXPECT_LT((xi[0] - a).norm(), 1e-14);
    EXPECT_LT((xi[1] - b).norm(), 1e-14);
  }
}

TEST(ParallelFrame, HelixMatchesRotatedFrenetFrame) {
  const double c = 0.7, w = std::sqrt(1 + c * c);
  const double tau = c / (1 + c * c);
  const ChartImmersion helix("helix", {{0.0, 2 * std::numbers::pi}}, tgf::Target::flat(3),
                             tgf::closed_form([c, w](std::span<const Jet> x) {
                               const Jet t = x[0] / w;
                               return JetVector{cos(t), sin(t), c * t};
                             }));
  auto frenet = [&](double s) {
    const double t = s / w;
    const Vec tt = v3(-std::sin(t), std::cos(t), c) / w;
    const Vec nn = v3(-std::cos(t), -std::sin(t), 0);
    return std::pair<Vec, Vec>{nn, Vec(tt.head<3>().cross(nn.head<3>()))};
  };
  const auto [n0, b0] = frenet(0.0);
  const auto fc = tgf::parallel_frame(SpaceForm::euclidean(3), helix, {n0, b0}, 2000);
  for (double s : {0.5, 2.0, 5.5, 2 * std::numbers::pi}) {
    const auto [n, b] = frenet(s);
    const double th = tau * s;  // closed-form torsion integral
    const Vec xi1 = std::cos(th) * n - std::sin(th) * b;
    const Vec xi2 = std::sin(th) * n + std::cos(th) * b;
    const auto xi = fc.frame(s);
    EXPECT_LT((xi[0] - xi1).norm(), 1e-9);
    EXPECT_LT((xi[1] - xi2).norm(), 1e-9);
  }
  EXPECT_LT(fc.orthonormality_residual(), 1e-7);
}

TEST(ParallelFrame, FrameJetsSatisfyOde) {
  const double c = 0.4, w = std::sqrt(1 + c * c);
  const ChartImmersion helix("helix", {{0.0, 3.0}}, tgf::Target::flat(3),
                             tgf::closed_form([c, w](std::span<const Jet> x) {
                               const Jet t = x[0] / w;
                               return JetVector{cos(t), sin(t), c * t};
                             }));
  const Vec nn = v3(-1, 0, 0);
  const Vec tt = v3(0, 1, c) / w;
  const Vec bb = tt.head<3>().cross(nn.head<3>());
  const auto fc = tgf::parallel_frame(SpaceForm::euclidean(3), helix, {nn, bb}, 600);
  const double s = 1.3, h = 1e-3;
  const auto jets = fc.frame_jets(s, 3);
  for (int i = 0; i < 2; ++i) {
    const Vec fp = fc.frame(s + h)[i], fm = fc.frame(s - h)[i], f0 = fc.frame(s)[i];
    for (int a = 0; a < 3; ++a) {
      EXPECT_NEAR(jets[i][a].value(), f0[a], 1e-15);
      EXPECT_NEAR(jets[i][a].d(0), (fp[a] - fm[a]) / (2 * h), 1e-6);
      EXPECT_NEAR(jets[i][a].d(0, 0), (fp[a] - 2 * f0[a] + fm[a]) / (h * h), 1e-5);
    }
  }
}

TEST(ParallelFrame, SphericalAndHyperbolicCurves) {
  const ChartImmersion great("great_circle", {{0.0, 2 * std::numbers::pi}}, tgf::Target::quadric(4, 0, 1.0),
                             tgf::closed_form([](std::span<const Jet> x) {
                               return JetVector{cos(x[0]), sin(x[0]), x[0] * 0.0, x[0] * 0.0};
                             }));
  const auto fs = tgf::parallel_frame(SpaceForm::sphere(3), great, {Vec::Unit(4, 2), Vec::Unit(4, 3)}, 500);
  EXPECT_EQ(fs.frame_size(), 3);
  EXPECT_EQ(fs.e(), Vec::Unit(3, 2));
  const auto xs = fs.frame(1.0);
  EXPECT_LT((xs[2] - great.value(std::vector<double>{1.0})).norm(), 1e-15);
  EXPECT_LT(fs.orthonormality_residual(), 1e-10);

  const ChartImmersion geo("geodesic", {{-1.0, 1.0}}, tgf::Target::quadric(4, 1, -1.0),
                           tgf::closed_form([](std::span<const Jet> x) {
                             return JetVector{cosh(x[0]), sinh(x[0]), x[0] * 0.0, x[0] * 0.0};
                           }));
  const auto fh = tgf::parallel_frame(SpaceForm::hyperbolic(3), geo, {Vec::Unit(4, 2), Vec::Unit(4, 3)}, 500);
  EXPECT_EQ(fh.signs().back(), -1.0);
  EXPECT_LT(fh.orthonormality_residual(), 1e-10);
}

TEST(ParallelFrame, RejectsBadInput) {
  const ChartImmersion slow("slow", {{0.0, 1.0}}, tgf::Target::flat(3), tgf::closed_form([](std::span<const Jet> x) {
                              return JetVector{2.0 * x[0], x[0] * 0.0, x[0] * 0.0};
                            }));
  EXPECT_EQ(kind_of([&] {
              (void)tgf::parallel_frame(SpaceForm::euclidean(3), slow, {v3(0, 1, 0), v3(0, 0, 1)});
            }),
            tgf::ErrorKind::Precondition);
  EXPECT_EQ(kind_of([&] {
              (void)tgf::parallel_frame(SpaceForm::euclidean(3), plane_circle(), {v3(1, 1, 0), v3(0, 0, 1)});
            }),
            tgf::ErrorKind::Precondition);
}

TEST(ParallelFrame, GramDriftOverFullLoop) {
  const double c = 1.3, w = std::sqrt(1 + c * c);
  const ChartImmersion helix("helix", {{0.0, 2 * std::numbers::pi}}, tgf::Target::flat(3),
                             tgf::closed_form([c, w](std::span<const Jet> x) {
                               const Jet t = x[0] / w;
                               return JetVector{cos(t), sin(t), c * t};
                             }));
  const Vec nn = v3(-1, 0, 0);
  const Vec tt = v3(0, 1, c) / w;
  const auto fc = tgf::parallel_frame(SpaceForm::euclidean(3), helix, {nn, Vec(tt.head<3>().cross(nn.head<3>()))});
  EXPECT_LT(fc.orthonormality_residual(), 1e-7);
}

TEST(OmegaMargin, Examples) {
  const auto fc = tgf::parallel_frame(SpaceForm::euclidean(3), plane_circle(), {v3(-1, 0, 0), v3(0, 0, 1)}, 400);
  for (double y1 : {-0.5, 0.2, 0.9}) {
    Vec y(2);
    y << y1, 0.37;
    EXPECT_NEAR(tgf::omega_margin(fc, y), std::abs(1 - y1), 1e-9);
  }
  Vec bad(2);
  bad << 1.0, 0.0;
  EXPECT_NEAR(tgf::omega_margin(fc, bad), 0.0, 1e-9);
  const auto fl = tgf::parallel_frame(SpaceForm::euclidean(3), line(), {v3(0.8, -0.6, 0), v3(0, 0, 1)}, 50);
  EXPECT_DOUBLE_EQ(tgf::omega_margin(fl, bad), 1.0);
}

TEST(PartialTube, TorusOfRevolution) {
  const auto fc = tgf::parallel_frame(SpaceForm::euclidean(3), plane_circle({-3.0, 3.0}),
                                      {v3(-std::cos(-3.0), -std::sin(-3.0), 0), v3(0, 0, 1)}, 1200);
  const auto pt = tgf::build_partial_tube(fc, fiber_circle(0.5, 0.3));
  EXPECT_LT(tgf::principal_direction_residual(pt), 1e-7);
  double off = 0.0;
  for (const auto& p : pt.samples) {
    const auto j = tgf::jet(pt.tube, p, 1);
    off = std::max(off, std::abs(j.d1[0].dot(j.d1[1])));
  }
  EXPECT_LT(off, 1e-8);
  // analytic torus oracle: radius of the s-circle is 1 - (0.5 + 0.3 cos x)
  for (std::size_t k = 0; k < pt.samples.size(); ++k) {
    EXPECT_NEAR(pt.rho[k], std::abs(0.5 - 0.3 * std::cos(pt.samples[k][0])), 1e-9);
  }
}

TEST(PartialTube, CylinderOverLine) {
  const auto fl = tgf::parallel_frame(SpaceForm::euclidean(3), line(), {v3(0.8, -0.6, 0), v3(0, 0, 1)}, 50);
  const auto pt = tgf::build_partial_tube(fl, fiber_circle(0.0, 0.4));
  for (double r : pt.rho) EXPECT_NEAR(r, 1.0, 1e-14);
  EXPECT_LT(tgf::principal_direction_residual(pt), 1e-12);
}

TEST(PartialTube, SphericalAndHyperbolicStayOnModel) {
  const double r = 0.6;
  const ChartImmersion great("great_circle", {{0.0, 2 * std::numbers::pi}}, tgf::Target::quadric(4, 0, 1.0),
                             tgf::closed_form([](std::span<const Jet> x) {
                               return JetVector{cos(x[0]), sin(x[0]), x[0] * 0.0, x[0] * 0.0};
                             }));
  const auto fs = tgf::parallel_frame(SpaceForm::sphere(3), great, {Vec::Unit(4, 2), Vec::Unit(4, 3)}, 500);
  const ChartImmersion f0s("fiber", {{-3.0, 3.0}}, tgf::Target::flat(3), tgf::closed_form([r](std::span<const Jet> x) {
                             return JetVector{r * cos(x[0]), r * sin(x[0]), x[0] * 0.0 + std::sqrt(1 - r * r)};
                           }));
  const auto ts = tgf::build_partial_tube(fs, f0s);
  for (const auto& p : ts.samples) EXPECT_LT(tgf::on_form_residual(SpaceForm::sphere(3), ts.tube.value(p)), 1e-9);
  EXPECT_LT(tgf::principal_direction_residual(ts), 1e-7);

  const ChartImmersion geo("geodesic", {{-1.0, 1.0}}, tgf::Target::quadric(4, 1, -1.0),
                           tgf::closed_form([](std::span<const Jet> x) {
                             return JetVector{cosh(x[0]), sinh(x[0]), x[0] * 0.0, x[0] * 0.0};
                           }));
  const auto fh = tgf::parallel_frame(SpaceForm::hyperbolic(3), geo, {Vec::Unit(4, 2), Vec::Unit(4, 3)}, 500);
  const ChartImmersion f0h("fiber", {{-3.0, 3.0}}, tgf::Target::flat(3), tgf::closed_form([r](std::span<const Jet> x) {
                             return JetVector{r * cos(x[0]), r * sin(x[0]), x[0] * 0.0 + std::sqrt(1 + r * r)};
                           }));
  const auto th = tgf::build_partial_tube(fh, f0h);
  for (const auto& p : th.samples) EXPECT_LT(tgf::on_form_residual(SpaceForm::hyperbolic(3), th.tube.value(p)), 1e-9);
  EXPECT_LT(tgf::principal_direction_residual(th), 1e-7);
}

TEST(PartialTube, AdmissibilityAndContainmentErrors) {
  const auto fc = tgf::parallel_frame(SpaceForm::euclidean(3), plane_circle(), {v3(-1, 0, 0), v3(0, 0, 1)}, 400);
  const ChartImmersion through("through", {{-0.5, 0.5}}, tgf::Target::flat(2),
                               tgf::closed_form([](std::span<const Jet> x) { return JetVector{x[0] * 0.0 + 1.0, x[0]}; }));
  EXPECT_EQ(kind_of([&] { (void)tgf::build_partial_tube(fc, through); }), tgf::ErrorKind::Admissibility);

  const ChartImmersion great("great_circle", {{0.0, 1.0}}, tgf::Target::quadric(4, 0, 1.0),
                             tgf::closed_form([](std::span<const Jet> x) {
                               return JetVector{cos(x[0]), sin(x[0]), x[0] * 0.0, x[0] * 0.0};
                             }));
  const auto fs = tgf::parallel_frame(SpaceForm::sphere(3), great, {Vec::Unit(4, 2), Vec::Unit(4, 3)}, 100);
  const ChartImmersion off("off", {{-1.0, 1.0}}, tgf::Target::flat(3), tgf::closed_form([](std::span<const Jet> x) {
                             return JetVector{cos(x[0]), sin(x[0]), x[0] * 0.0 + 0.5};
                           }));
  EXPECT_EQ(kind_of([&] { (void)tgf::build_partial_tube(fs, off); }), tgf::ErrorKind::Containment);
}

TEST(PrincipalDirection, GraphNegativeControl) {
  const auto g = tgf::charts::graph_control();
  const std::vector<int> res{5, 5};
  EXPECT_GT(tgf::principal_direction_residual(g, 1, tgf::sample_grid(g.domain(), res)), 1e-2);
}

TEST(PartialTube, OffBlockMetricAndPerturbation) {
  const auto fc = tgf::parallel_frame(SpaceForm::euclidean(3), plane_circle({-3.0, 3.0}),
                                      {v3(-std::cos(-3.0), -std::sin(-3.0), 0), v3(0, 0, 1)}, 1200);
  const auto pt = tgf::build_partial_tube(fc, fiber_circle(0.5, 0.3));
  EXPECT_LT(tgf::off_block_metric_residual(pt), 1e-8);
  const auto bent = tgf::perturbed_tube(pt, 0.05);
  EXPECT_GT(tgf::principal_direction_residual(bent), 1e-3);
  EXPECT_GT(tgf::off_block_metric_residual(bent), 1e-3);
  // rho follows the perturbed chart
  for (std::size_t k = 0; k < bent.samples.size(); ++k) {
    EXPECT_NEAR(bent.rho[k], tgf::jet(bent.tube, bent.samples[k], 1).d1[1].norm(), 1e-15);
  }
}

TEST(PartialTube, PerturbationNeedsFlatSpace) {
  const ChartImmersion great("great_circle", {{0.0, 1.0}}, tgf::Target::quadric(4, 0, 1.0),
                             tgf::closed_form([](std::span<const Jet> x) {
                               return JetVector{cos(x[0]), sin(x[0]), x[0] * 0.0, x[0] * 0.0};
                             }));
  const auto fs = tgf::parallel_frame(SpaceForm::sphere(3), great, {Vec::Unit(4, 2), Vec::Unit(4, 3)}, 100);
  const ChartImmersion f0("fiber", {{-3.0, 3.0}}, tgf::Target::flat(3), tgf::closed_form([](std::span<const Jet> x) {
                            return JetVector{0.6 * cos(x[0]), 0.6 * sin(x[0]), x[0] * 0.0 + 0.8};
                          }));
  const auto ts = tgf::build_partial_tube(fs, f0);
  EXPECT_EQ(kind_of([&] { (void)tgf::perturbed_tube(ts, 0.1); }), tgf::ErrorKind::UnsupportedModel);
}
