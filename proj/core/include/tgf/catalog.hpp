#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tgf/curves.hpp"
#include "tgf/foliation.hpp"
#include "tgf/gauss_param.hpp"
#include "tgf/type_d.hpp"

namespace tgf {

/// A hypersurface with its distinguished codimension-one distribution.
struct Example {
  std::string name;
  std::string family;  // ruled, partial_tube, surfacelike, generalized_cone, gauss_type_d, custom_chart
  HypersurfaceData data;
  CodimOneDistribution dist;
  unsigned expected = 0;  // TrichotomyClass bits every interior sample should carry
  std::optional<GaussChart> gauss;
  std::optional<PartialTube> tube;
};

/// Ambient vector fields along a curve, as jets in the curve parameter.
using CurveFields = std::function<std::vector<JetVector>(const Jet& s)>;

struct RuledOptions {
  std::vector<Interval> t;        // one per ruling direction; default [-0.5, 0.5]
  std::vector<int> resolution;    // default 9 per variable
  double rank_tol = 1e-8;
};

/// f(s, t) = exp_{c(s)}(sum t_i V_i(s)); affine for eps = 0, great/geodesic
/// subspaces otherwise (V_i orthonormal and tangent to the model at c(s)).
Example make_ruled(const ChartImmersion& base, CurveFields rulings, const RuledOptions& opt = {});

struct ConeOptions {
  std::vector<Interval> fiber;  // default [-0.4, 0.4] per fiber variable
  std::vector<int> resolution;  // default 9 x 9 x 5...
};

/// Union of normal geodesics of Q_c^3 inside Q_eps^{n+1} along g. The model of
/// g fixes c: flat R^3 (c = 0), unit S^3 (c = 1) or H^3 (c = -1), sitting in
/// the first coordinates. D is spanned by the fiber directions and d0.
Example make_generalized_cone(const ChartImmersion& g, const SpaceForm& target, VectorField d0,
                              const ConeOptions& opt = {});

enum class SurfacelikeKind { Cylindrical, Conical };

struct SurfacelikeBuildOptions {
  std::vector<Interval> extra;  // default: [-0.5, 0.5] (cylindrical), [0.5, 1.5] then [-0.5, 0.5] (conical)
  std::vector<int> resolution;
  double geodesic_tol = 1e-8;
};

/// g x id (g in R^3) or the cone t g(x) times id (g in S^3 of R^4), with
/// D = d0 plus the flat factor. Rejects d0 whose integral curves are not
/// geodesics of g.
Example make_surfacelike(const ChartImmersion& g, SurfacelikeKind kind, int n, VectorField d0,
                         const SurfacelikeBuildOptions& opt = {});

/// max over samples of the geodesic curvature of the integral curves of d0 on g.
double geodesic_curvature(const ChartImmersion& g, const VectorField& d0, std::span<const int> resolution);

struct TypeDHypersurfaceOptions {
  GaussOptions gauss;
};

/// Gauss parametrization of a pair of type D (eps = 0, uses gamma) or of a
/// type-D surface (eps = +-1); D is the orthogonal complement of jY.
Example make_type_d_hypersurface(const TypeDPair& tp, const TypeDHypersurfaceOptions& opt = {});
Example make_type_d_hypersurface(const TypeDFrame& frame, int epsilon, const TypeDHypersurfaceOptions& opt = {});

/// Degenerate pair from a surface f in R^3 with nonzero Gauss curvature whose
/// d_v curves are geodesics of f: g is its Gauss map in the great S^2 of S^3,
/// gamma = <f, g>, X = d_v and Y = P Y~ with Y~ the f-unit normal of d_v and
/// P = dg^{-1} df. The Gauss parametrization is then f x R.
TypeDPair support_pair(const ChartImmersion& f);

/// D is the fiber distribution (the first n - 1 variables).
Example make_partial_tube_example(const PartialTube& pt, std::string name);

namespace catalog {

/// Names of the fixed examples.
std::vector<std::string> names();
/// Builds a fixed example; `coarse` uses small grids for quick runs.
Example named(const std::string& name, bool coarse = false);

}  // namespace catalog

}  // namespace tgf
