#include "tgf/charts.hpp"

#include <cmath>

#include "tgf/error.hpp"

namespace tgf::charts {

namespace {
JetVector pad(JetVector v, int dim) {
  const Jet zero = v.front() * 0.0;
  while (static_cast<int>(v.size()) < dim) v.push_back(zero);
  return v;
}
}  // namespace

ChartImmersion unit_circle(Interval s) {
  return {"unit_circle", {s}, Target::flat(2),
          closed_form([](std::span<const Jet> x) { return JetVector{cos(x[0]), sin(x[0])}; })};
}

ChartImmersion plane(Interval u, Interval v) {
  return {"plane", {u, v}, Target::flat(3),
          closed_form([](std::span<const Jet> x) { return JetVector{x[0], x[1], x[0] * 0.0}; })};
}

ChartImmersion sphere(double r, bool in_s3, Interval lon, Interval lat) {
  if (!(r > 0.0) || (in_s3 && r > 1.0)) throw Error(ErrorKind::Precondition, "sphere: bad radius");
  if (!in_s3) {
    return {"sphere", {lon, lat}, Target::flat(3), closed_form([r](std::span<const Jet> x) {
              const Jet cl = cos(x[1]);
              return JetVector{r * cos(x[0]) * cl, r * sin(x[0]) * cl, r * sin(x[1])};
            })};
  }
  const double h = std::sqrt(1.0 - r * r);
  return {"small_sphere", {lon, lat}, Target::quadric(4, 0, 1.0), closed_form([r, h](std::span<const Jet> x) {
            const Jet cl = cos(x[1]);
            return JetVector{r * cos(x[0]) * cl, r * sin(x[0]) * cl, r * sin(x[1]), x[0] * 0.0 + h};
          })};
}

ChartImmersion ellipsoid(double a, double b, double c, Interval lon, Interval lat) {
  return {"ellipsoid", {lon, lat}, Target::flat(3), closed_form([a, b, c](std::span<const Jet> x) {
            const Jet cl = cos(x[1]);
            return JetVector{a * cos(x[0]) * cl, b * sin(x[0]) * cl, c * sin(x[1])};
          })};
}

ChartImmersion cylinder(Interval u, Interval v) {
  return {"cylinder", {u, v}, Target::flat(3),
          closed_form([](std::span<const Jet> x) { return JetVector{cos(x[0]), sin(x[0]), x[1]}; })};
}

ChartImmersion de_sitter_torus(Interval u, Interval v) {
  return {"de_sitter_torus", {u, v}, Target::quadric(5, 1, 1.0), closed_form([](std::span<const Jet> x) {
            return JetVector{x[0] * 0.0 + 1.0, cos(x[0]), sin(x[0]), cos(x[1]), sin(x[1])};
          })};
}

ChartImmersion clifford_torus(int ambient_dim, Interval u, Interval v) {
  if (ambient_dim < 4) throw Error(ErrorKind::Structural, "clifford_torus needs ambient dimension >= 4");
  return {"clifford_torus", {u, v}, Target::quadric(ambient_dim, 0, 1.0),
          closed_form([ambient_dim](std::span<const Jet> x) {
            const double s = 1.0 / std::sqrt(2.0);
            return pad({s * cos(x[0]), s * sin(x[0]), s * cos(x[1]), s * sin(x[1])}, ambient_dim);
          })};
}

ChartImmersion ellipsoid_confocal(double a, double b, double c, Interval u, Interval v, int ambient_dim) {
  if (!(a > b && b > c && c > 0.0)) throw Error(ErrorKind::Precondition, "ellipsoid_confocal needs a > b > c > 0");
  if (!(u.lo > b && u.hi < a && v.lo > c && v.hi < b)) {
    throw Error(ErrorKind::Precondition, "confocal coordinates need b < u < a and c < v < b");
  }
  if (ambient_dim < 3) throw Error(ErrorKind::Structural, "ellipsoid_confocal needs ambient dimension >= 3");
  return {"ellipsoid_confocal", {u, v}, Target::flat(ambient_dim),
          closed_form([a, b, c, ambient_dim](std::span<const Jet> x) {
            const Jet& p = x[0];
            const Jet& q = x[1];
            const Jet xx = a * (a - p) * (a - q) / ((a - b) * (a - c));
            const Jet yy = b * (p - b) * (b - q) / ((a - b) * (b - c));
            const Jet zz = c * (p - c) * (q - c) / ((a - c) * (b - c));
            return pad({sqrt(xx), sqrt(yy), sqrt(zz)}, ambient_dim);
          })};
}

ChartImmersion clifford_conjugate(double theta, int ambient_dim, Interval s, Interval t) {
  if (ambient_dim < 4) throw Error(ErrorKind::Structural, "clifford_conjugate needs ambient dimension >= 4");
  const double c = std::cos(theta), sn = std::sin(theta);
  return {"clifford_conjugate", {s, t}, Target::quadric(ambient_dim, 0, 1.0),
          closed_form([c, sn, ambient_dim](std::span<const Jet> x) {
            const double r = 1.0 / std::sqrt(2.0);
            const Jet u = c * x[0] + sn * x[1];
            const Jet v = sn * x[0] + c * x[1];
            return pad({r * cos(u), r * sin(u), r * cos(v), r * sin(v)}, ambient_dim);
          })};
}

ChartImmersion de_sitter_conjugate(double a, double theta, int ambient_dim, Interval s, Interval t) {
  if (ambient_dim < 4) throw Error(ErrorKind::Structural, "de_sitter_conjugate needs ambient dimension >= 4");
  const double b = std::sqrt(1.0 + a * a);
  const double c = std::cos(theta), sn = std::sin(theta);
  return {"de_sitter_conjugate", {s, t}, Target::quadric(ambient_dim, 1, 1.0),
          closed_form([a, b, c, sn, ambient_dim](std::span<const Jet> x) {
            const Jet p = c * x[0] + sn * x[1];
            const Jet q = sn * x[0] - c * x[1];
            return pad({a * cosh(p), a * sinh(p), b * cos(q), b * sin(q)}, ambient_dim);
          })};
}

ChartImmersion great_sphere(int ambient_dim, Interval lon, Interval lat) {
  if (ambient_dim < 4) throw Error(ErrorKind::Structural, "great_sphere needs ambient dimension >= 4");
  return {"great_sphere", {lon, lat}, Target::quadric(ambient_dim, 0, 1.0),
          closed_form([ambient_dim](std::span<const Jet> x) {
            const Jet cl = cos(x[1]);
            return pad({cos(x[0]) * cl, sin(x[0]) * cl, sin(x[1])}, ambient_dim);
          })};
}

ChartImmersion torus(double big_r, double small_r, Interval u, Interval v) {
  return {"torus", {u, v}, Target::flat(3), closed_form([big_r, small_r](std::span<const Jet> x) {
            const Jet w = big_r + small_r * cos(x[1]);
            return JetVector{w * cos(x[0]), w * sin(x[0]), small_r * sin(x[1])};
          })};
}

ChartImmersion graph_control(Interval x, Interval y) {
  return {"graph_control", {x, y}, Target::flat(3),
          closed_form([](std::span<const Jet> p) { return JetVector{p[0], p[1], p[0] * p[0] + p[0] * p[1]}; })};
}

}  // namespace tgf::charts
