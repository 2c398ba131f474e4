#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "tgf/ambient.hpp"
#include "tgf/error.hpp"

using tgf::SpaceForm;
using tgf::Vec;

namespace {
Vec v(std::initializer_list<double> xs) {
  Vec out(static_cast<Eigen::Index>(xs.size()));
  int i = 0;
  for (double x : xs) out[i++] = x;
  return out;
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

TEST(SpaceForm, Dimensions) {
  const SpaceForm e = SpaceForm::euclidean(3);
  EXPECT_EQ(e.ambient_dim(), 3);
  EXPECT_EQ(e.mu(), 0);
  const SpaceForm s = SpaceForm::sphere(3);
  EXPECT_EQ(s.ambient_dim(), 4);
  EXPECT_EQ(s.mu(), 0);
  const SpaceForm h = SpaceForm::hyperbolic(3);
  EXPECT_EQ(h.ambient_dim(), 4);
  EXPECT_EQ(h.mu(), 1);
  EXPECT_EQ(h.epsilon(), 1 - 2 * h.mu());
  EXPECT_EQ(s.epsilon(), 1 - 2 * s.mu());
  EXPECT_EQ((h.form().gram().diagonal().array() < 0).count(), 1);
  EXPECT_THROW(SpaceForm(2, 3), tgf::Error);
}

TEST(Inner, Examples) {
  EXPECT_DOUBLE_EQ(tgf::inner(tgf::AmbientForm{2, 0}, v({1, 0}), v({0, 1})), 0.0);
  EXPECT_DOUBLE_EQ(tgf::inner(tgf::AmbientForm{3, 1}, v({1, 0, 0}), v({1, 0, 0})), -1.0);
  EXPECT_DOUBLE_EQ(tgf::inner(tgf::AmbientForm{3, 1}, v({1, 1, 0}), v({1, 1, 0})), 0.0);
  EXPECT_EQ(kind_of([] { (void)tgf::inner(tgf::AmbientForm{3, 0}, v({1, 0}), v({1, 0, 0})); }),
            tgf::ErrorKind::Structural);
}

TEST(Inner, SymmetricBilinear) {
  std::mt19937 rng(11);
  std::normal_distribution<double> N;
  for (int mu : {0, 1}) {
    const tgf::AmbientForm form{5, mu};
    for (int t = 0; t < 50; ++t) {
      Vec a(5), b(5), c(5);
      for (int i = 0; i < 5; ++i) {
        a[i] = N(rng);
        b[i] = N(rng);
        c[i] = N(rng);
      }
      const double s = N(rng);
      EXPECT_NEAR(inner(form, a, b), inner(form, b, a), 1e-14);
      EXPECT_NEAR(inner(form, a + s * c, b), inner(form, a, b) + s * inner(form, c, b), 1e-12);
    }
  }
}

TEST(OnFormResidual, Examples) {
  EXPECT_DOUBLE_EQ(tgf::on_form_residual(SpaceForm::sphere(2), v({0, 0, 1})), 0.0);
  EXPECT_DOUBLE_EQ(tgf::on_form_residual(SpaceForm::hyperbolic(2), v({1, 0, 0})), 0.0);
  EXPECT_DOUBLE_EQ(tgf::on_form_residual(SpaceForm::sphere(2), v({0, 0, 2})), 3.0);
  EXPECT_EQ(kind_of([] { (void)tgf::on_form_residual(SpaceForm::euclidean(2), v({0, 0})); }),
            tgf::ErrorKind::UnsupportedModel);
}

TEST(ExpMap, Examples) {
  const Vec a = tgf::exp_map(SpaceForm::sphere(3), v({1, 0, 0, 0}), v({0, std::numbers::pi / 2, 0, 0}));
  EXPECT_NEAR((a - v({0, 1, 0, 0})).norm(), 0.0, 1e-15);
  const Vec b = tgf::exp_map(SpaceForm::euclidean(2), v({1, 2}), v({3, 4}));
  EXPECT_NEAR((b - v({4, 6})).norm(), 0.0, 0.0);
  const double t = 0.8;
  const Vec c = tgf::exp_map(SpaceForm::hyperbolic(2), v({1, 0, 0}), v({0, t, 0}));
  EXPECT_NEAR((c - v({std::cosh(t), std::sinh(t), 0})).norm(), 0.0, 1e-15);
}

TEST(ExpMap, Preconditions) {
  const SpaceForm s = SpaceForm::sphere(2);
  EXPECT_EQ(kind_of([&] { (void)tgf::exp_map(s, v({0, 0, 2}), v({1, 0, 0})); }), tgf::ErrorKind::Precondition);
  EXPECT_EQ(kind_of([&] { (void)tgf::exp_map(s, v({0, 0, 1}), v({0, 0, 1})); }), tgf::ErrorKind::Precondition);
  const SpaceForm h = SpaceForm::hyperbolic(2);
  // tangent at (1,0,0) means first coordinate zero, always spacelike; a timelike
  // vector cannot be tangent, so the tangency check rejects it.
  EXPECT_EQ(kind_of([&] { (void)tgf::exp_map(h, v({1, 0, 0}), v({1, 0, 0})); }), tgf::ErrorKind::Precondition);
}

TEST(ExpMap, StaysOnModelAndIsGeodesic) {
  std::mt19937 rng(3);
  std::normal_distribution<double> N;
  for (int eps : {1, -1}) {
    const SpaceForm sf(eps, 4);
    const auto form = sf.form();
    for (int trial = 0; trial < 20; ++trial) {
      // random point on the model and random unit tangent vector
      Vec p(5);
      for (int i = 0; i < 5; ++i) p[i] = N(rng);
      if (eps == 1) {
        p /= p.norm();
      } else {
        p[0] = std::sqrt(1.0 + p.tail(4).squaredNorm());
      }
      Vec w(5);
      for (int i = 0; i < 5; ++i) w[i] = N(rng);
      w -= (inner(form, w, p) / eps) * p;
      w /= tgf::norm(form, w);
      const Vec q = tgf::exp_map(sf, p, 1.3 * w);
      EXPECT_LT(tgf::on_form_residual(sf, q), 1e-12);
      // chord length in the ambient form approximates arc length for small steps
      const double dt = 1e-4;
      const Vec q1 = tgf::exp_map(sf, p, (0.5 + dt) * w);
      const Vec q0 = tgf::exp_map(sf, p, 0.5 * w);
      EXPECT_NEAR(tgf::norm(form, q1 - q0), dt, 1e-8);
    }
  }
}
