#pragma once

#include "tgf/chart.hpp"

namespace tgf::charts {

/// s -> (cos s, sin s) in R^2.
ChartImmersion unit_circle(Interval s = {-3.0, 3.0});
/// (u, v) -> (u, v, 0).
ChartImmersion plane(Interval u = {-1.0, 1.0}, Interval v = {-1.0, 1.0});
/// Longitude/latitude chart of the radius-r sphere in R^3, or, for
/// in_s3 = true, of the small sphere (r * x, sqrt(1 - r^2)) in S^3 (r <= 1).
ChartImmersion sphere(double r = 1.0, bool in_s3 = false, Interval lon = {-1.2, 1.2}, Interval lat = {-1.2, 1.2});
/// Latitude chart of the ellipsoid with semi-axes a, b, c.
ChartImmersion ellipsoid(double a, double b, double c, Interval lon = {-1.2, 1.2}, Interval lat = {-1.2, 1.2});
/// Ellipsoid x^2/a + y^2/b + z^2/c = 1 (a > b > c > 0) in confocal
/// coordinates b < u < a, c < v < b, first octant. These are curvature-line
/// coordinates. Padded with zeros up to ambient_dim.
ChartImmersion ellipsoid_confocal(double a, double b, double c, Interval u, Interval v, int ambient_dim = 3);
/// (u, v) -> (cos u, sin u, v).
ChartImmersion cylinder(Interval u = {-1.5, 1.5}, Interval v = {-1.0, 1.0});
/// (cos u, sin u, cos v, sin v) / sqrt 2 in S^3, padded with zeros up to
/// ambient_dim (>= 4) so it can be viewed inside a larger sphere.
ChartImmersion clifford_torus(int ambient_dim = 4, Interval u = {-1.0, 1.0}, Interval v = {-1.0, 1.0});
/// Spacelike torus (1, cos u, sin u, cos v, sin v) in de Sitter space S_1^4 of L^5.
ChartImmersion de_sitter_torus(Interval u = {-1.0, 1.0}, Interval v = {-1.0, 1.0});
/// Clifford torus in the linear coordinates (u, v) = s (cos th, sin th) +
/// t (sin th, cos th), in which g_st = -(sin 2th / 2) g.
ChartImmersion clifford_conjugate(double theta, int ambient_dim = 4, Interval s = {-0.6, 0.6},
                                  Interval t = {-0.6, 0.6});
/// Spacelike torus (a cosh x, a sinh x, b cos y, b sin y), b^2 = 1 + a^2, in
/// de Sitter space S_1^3 of L^4 (padded up to ambient_dim), in the coordinates
/// (x, y) = s (cos th, sin th) + t (sin th, -cos th) where g_st = (sin 2th / 2) g.
ChartImmersion de_sitter_conjugate(double a, double theta, int ambient_dim = 5, Interval s = {-0.6, 0.6},
                                   Interval t = {-0.6, 0.6});
/// Totally geodesic S^2 = S^3 cap {x_4 = 0}, padded up to ambient_dim.
ChartImmersion great_sphere(int ambient_dim = 4, Interval lon = {-1.2, 1.2}, Interval lat = {-1.2, 1.2});
/// Torus of revolution with radii R > r in R^3.
ChartImmersion torus(double big_r, double small_r, Interval u = {-3.0, 3.0}, Interval v = {-3.0, 3.0});
/// Graph (x, y, x^2 + x y).
ChartImmersion graph_control(Interval x = {-0.5, 0.5}, Interval y = {-0.5, 0.5});

}  // namespace tgf::charts
