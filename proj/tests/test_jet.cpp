#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "tgf/jet.hpp"

using tgf::Jet;
using tgf::JetVector;
using tgf::seed;

namespace {

// f(x,y) = sin(x) * exp(x*y) + y^3 / (1 + x^2); hand-derived partials.
struct Poly {
  double x, y;
  double f() const { return std::sin(x) * std::exp(x * y) + y * y * y / (1 + x * x); }
  double fx() const {
    return std::cos(x) * std::exp(x * y) + std::sin(x) * y * std::exp(x * y) -
           2 * x * y * y * y / ((1 + x * x) * (1 + x * x));
  }
  double fy() const { return std::sin(x) * x * std::exp(x * y) + 3 * y * y / (1 + x * x); }
  double fxy() const {
    const double e = std::exp(x * y);
    return std::cos(x) * x * e + std::sin(x) * e + std::sin(x) * x * y * e -
           6 * x * y * y / ((1 + x * x) * (1 + x * x));
  }
  double fyy() const { return std::sin(x) * x * x * std::exp(x * y) + 6 * y / (1 + x * x); }
};

double central(auto&& fn, double x, double h) { return (fn(x + h) - fn(x - h)) / (2 * h); }

}  // namespace

TEST(Jet, VariableAndConstant) {
  const Jet x = Jet::variable(1.5, 0, 2, 3);
  EXPECT_DOUBLE_EQ(x.value(), 1.5);
  EXPECT_DOUBLE_EQ(x.d(0), 1.0);
  EXPECT_DOUBLE_EQ(x.d(1), 0.0);
  EXPECT_DOUBLE_EQ(x.d(0, 0), 0.0);
  const Jet c = Jet::constant(2.0, 2, 3);
  EXPECT_DOUBLE_EQ((c * x).d(0), 2.0);
}

TEST(Jet, ClosedFormPartials) {
  const Poly ref{0.7, -0.4};
  const auto v = tgf::seed(std::vector<double>{ref.x, ref.y}, 3);
  const Jet f = sin(v[0]) * exp(v[0] * v[1]) + v[1] * v[1] * v[1] / (1.0 + v[0] * v[0]);
  EXPECT_NEAR(f.value(), ref.f(), 1e-14);
  EXPECT_NEAR(f.d(0), ref.fx(), 1e-13);
  EXPECT_NEAR(f.d(1), ref.fy(), 1e-13);
  EXPECT_NEAR(f.d(0, 1), ref.fxy(), 1e-13);
  EXPECT_NEAR(f.d(1, 1), ref.fyy(), 1e-13);
}

TEST(Jet, ThirdDerivativesMatchFiniteDifferencesOfSecond) {
  auto second = [](double x, double y) {
    const auto v = tgf::seed(std::vector<double>{x, y}, 2);
    const Jet f = cos(v[0] * v[1]) * log(2.0 + v[0]) + atan(v[1] - v[0]) * sqrt(3.0 + v[1]);
    return f.d(0, 1);
  };
  const double x = 0.3, y = 0.8, h = 1e-4;
  const auto v = tgf::seed(std::vector<double>{x, y}, 3);
  const Jet f = cos(v[0] * v[1]) * log(2.0 + v[0]) + atan(v[1] - v[0]) * sqrt(3.0 + v[1]);
  EXPECT_NEAR(f.d(0, 1, 0), central([&](double s) { return second(s, y); }, x, h), 1e-7);
  EXPECT_NEAR(f.d(0, 1, 1), central([&](double s) { return second(x, s); }, y, h), 1e-7);
}

TEST(Jet, MixedPartialSymmetry) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(-0.8, 0.8);
  for (int trial = 0; trial < 20; ++trial) {
    const auto v = tgf::seed(std::vector<double>{U(rng), U(rng), U(rng)}, 3);
    const Jet f = sinh(v[0] * v[2]) / (2.0 + cos(v[1])) + tan(v[0] + v[1] * v[2]);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        EXPECT_NEAR(f.d(i, j), f.d(j, i), 1e-12);
        for (int k = 0; k < 3; ++k) {
          EXPECT_NEAR(f.d(i, j, k), f.d(k, i, j), 1e-10);
          EXPECT_NEAR(f.d(i, j, k), f.d(j, k, i), 1e-10);
        }
      }
  }
}

TEST(Jet, PartialLowersOrderAndDifferentiates) {
  const auto v = tgf::seed(std::vector<double>{0.2, 0.9}, 3);
  const Jet f = exp(v[0]) * sin(v[1]);
  const Jet fx = f.partial(0);
  EXPECT_EQ(fx.order(), 2);
  EXPECT_NEAR(fx.value(), f.d(0), 1e-15);
  EXPECT_NEAR(fx.d(1), f.d(0, 1), 1e-15);
  EXPECT_NEAR(fx.d(1, 1), f.d(0, 1, 1), 1e-14);
}

TEST(Jet, LiftedAndDirectional) {
  const auto v = tgf::seed(std::vector<double>{0.4}, 3);
  const Jet f = sin(v[0]);
  const std::vector<int> map{1};
  const Jet g = f.lifted(2, map);
  EXPECT_EQ(g.nvars(), 2);
  EXPECT_DOUBLE_EQ(g.d(0), 0.0);
  EXPECT_NEAR(g.d(1, 1, 1), -std::cos(0.4), 1e-15);

  const auto w = tgf::seed(std::vector<double>{0.4, -0.2}, 2);
  const Jet h = w[0] * w[0] * w[1];
  const std::vector<double> dir{2.0, 3.0};
  const Jet dh = h.directional(dir);
  EXPECT_NEAR(dh.value(), 2 * (2 * 0.4 * -0.2) + 3 * (0.4 * 0.4), 1e-15);
}

TEST(Jet, SqrtSeriesFunctions) {
  for (double q : {-2.0, -0.3, 0.0, 1e-9, 0.5, 2.0, 9.0}) {
    const Jet x = Jet::variable(q, 0, 1, 3);
    const Jet s = tgf::sinc_sqrt(x);
    const Jet c = tgf::cos_sqrt(x);
    auto sinc = [](double t) {
      if (t > 0) return std::sin(std::sqrt(t)) / std::sqrt(t);
      if (t < 0) return std::sinh(std::sqrt(-t)) / std::sqrt(-t);
      return 1.0;
    };
    auto cosq = [](double t) { return t >= 0 ? std::cos(std::sqrt(t)) : std::cosh(std::sqrt(-t)); };
    EXPECT_NEAR(s.value(), sinc(q), 1e-13);
    EXPECT_NEAR(c.value(), cosq(q), 1e-13);
    if (std::abs(q) > 1e-3) {
      EXPECT_NEAR(s.d(0), central(sinc, q, 1e-5), 1e-8);
      EXPECT_NEAR(c.d(0), central(cosq, q, 1e-5), 1e-8);
    }
    // sinhc(q) = sinc(-q)
    EXPECT_NEAR(tgf::sinhc_sqrt(x).value(), sinc(-q), 1e-12 * std::max(1.0, sinc(-q)));
    EXPECT_NEAR(tgf::cosh_sqrt(x).value(), cosq(-q), 1e-12 * std::max(1.0, cosq(-q)));
  }
}

TEST(Jet, DivisionAndInverseConsistent) {
  const auto v = tgf::seed(std::vector<double>{1.3, 0.2}, 3);
  const Jet a = v[0] * v[0] + v[1];
  const Jet r = (a / a) - 1.0;
  for (double c : r.coefficients()) EXPECT_NEAR(c, 0.0, 1e-14);
  const Jet q = 1.0 / a - inverse(a);
  for (double c : q.coefficients()) EXPECT_NEAR(c, 0.0, 1e-14);
}

TEST(Jet, IncompatibleLayoutsThrow) {
  const Jet a = Jet::variable(0.0, 0, 1, 2);
  const Jet b = Jet::variable(0.0, 0, 2, 2);
  EXPECT_ANY_THROW((void)(a + b));
}

TEST(Jet, SubstitutionComposesMaps) {
  // f(x, y) = exp(x) sin(y) around (0.3, 0.5), composed with x = 0.3 + s t,
  // y = 0.5 + s - t^2 around (s, t) = (0, 0)
  const std::vector<double> base{0.3, 0.5};
  const JetVector xy = seed(base, 4);
  const Jet f = exp(xy[0]) * sin(xy[1]);
  const JetVector st = seed(std::vector<double>{0.0, 0.0}, 4);
  const Jet composed = f.substituted({st[0] * st[1], st[0] - st[1] * st[1]});
  const Jet direct = exp(0.3 + st[0] * st[1]) * sin(0.5 + st[0] - st[1] * st[1]);
  for (std::size_t i = 0; i < direct.coefficients().size(); ++i)
    EXPECT_NEAR(composed.coefficients()[i], direct.coefficients()[i], 1e-13);
}
