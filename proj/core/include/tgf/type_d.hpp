#pragma once

#include <string>
#include <vector>

#include "tgf/chart.hpp"
#include "tgf/goursat.hpp"

namespace tgf {

/// A spherical surface g with the frame (X, Y) of a type-D structure. X, Y
/// are coefficient fields in the chart basis of g.
struct TypeDFrame {
  ChartImmersion g;
  VectorField x;
  VectorField y;
};

struct TypeDSample {
  std::vector<double> point;
  double inner = 0.0;         // |<X,Y>| / |X|
  double parallel = 0.0;      // |nabla_X Y| / |X|
  double alpha = 0.0;         // |alpha(X,Y)| / |X|
  double ambient = 0.0;       // |sphere derivative of g_*Y along X| / |X|
  double unit = 0.0;          // | |Y| - 1 |
  double independence = 0.0;  // |sin| of the angle between X and Y
};

struct TypeDCheck {
  std::vector<TypeDSample> samples;
  double min_inner = 0.0;
  double max_parallel = 0.0;
  double max_alpha = 0.0;
  double max_ambient = 0.0;
  double max_unit = 0.0;
  double min_independence = 0.0;

  /// Conditions (ii) and (iii), Y unit, and (i) with <X,Y> / |X| >= inner_floor.
  [[nodiscard]] bool holds(double tol, double inner_floor = 1e-3) const;
};

struct TypeDCheckOptions {
  std::vector<int> resolution{17, 17};
  double inset = 0.0;
};

TypeDCheck check_type_d(const ChartImmersion& g, const VectorField& x, const VectorField& y,
                        const TypeDCheckOptions& opt = {});
TypeDCheck check_type_d(const TypeDFrame& f, const TypeDCheckOptions& opt = {});

/// Coefficients of g_uv + a g_v + b g = 0 in coordinates aligned with the frame.
struct NetCoefficients {
  double a = 0.0;
  double b = 0.0;
  double b_u = 0.0;
  double residual = 0.0;  // |g_uv + a g_v + b g| after the fit
};

struct ConjugateNet {
  ChartImmersion g;
  double max_residual = 0.0;
  double min_abs_b = 0.0;
  [[nodiscard]] NetCoefficients at(double u, double v) const;
};

struct NetOptions {
  std::vector<int> resolution{17, 17};
  double tol = 1e-6;
  double b_floor = 1e-6;
};

/// Fits a per sample by least squares with b = <g_u, g_v>. Throws NotTypeD if
/// the fitted equation fails or b vanishes somewhere on the grid.
ConjugateNet fit_conjugate_net(const ChartImmersion& g, const NetOptions& opt = {});
/// Evaluates the fit without raising, for reporting negative controls.
ConjugateNet measure_conjugate_net(const ChartImmersion& g, const NetOptions& opt = {});

struct FnbOptions {
  std::vector<int> resolution{17, 17};
  double tol = 1e-6;
  double floor = 1e-4;  // lower bound for the non-vanishing conditions
};

/// g = h_*X for a principal chart (u, v) of h with flat normal bundle:
/// X = d_u / |d_u|, Y = d_v / (|d_v| <nabla_Y Y, X>).
TypeDFrame construct_from_fnb(const ChartImmersion& h, const FnbOptions& opt = {});

struct DualOptions {
  std::vector<int> resolution{9, 9};
  double tol = 1e-6;
  double curvature_gap = 1e-6;
};

/// k = g_*Y with X_k = Y, Y_k = X / <X, Y>.
TypeDFrame dual_surface(const TypeDFrame& f, const DualOptions& opt = {});

struct PolarOptions {
  double angle = 0.39269908169872414;  // pi / 8
  double retry_rotation = 0.6283185307179586;  // pi / 5
  int retries = 3;
  double extent = 0.35;     // half-size of the (s, t) box relative to the chart
  double step = 0.02;       // RK4 step of the geodesic flow
  double inner_floor = 0.05;
  double tol = 1e-6;
  std::vector<int> resolution{9, 9};
};

/// Type-D frame on a surface of S^3 with K != 1, built from the polar metric
/// <A., A.>: the chart is reparametrized by polar geodesics (t-lines) shot from
/// a transversal, X = d_t, Y = A J d_t. The returned chart is g composed with
/// that reparametrization.
TypeDFrame polar_construction(const ChartImmersion& g, const PolarOptions& opt = {});

struct RecoveryOptions {
  int nu = 401;
  int nv = 401;
  double kappa = 1.0;
  double nonzero_tol = 1e-6;
  double tol = 1e-5;
  double integrability_threshold = 1e-3;
};

/// Sampled generating surface h with flat normal bundle. Derivatives below
/// are central differences of the integrated samples.
struct RecoveredSurface {
  VarphiSolution phi;
  IntegratedSystem system;
  Grid grid;                       // the restricted sub-rectangle
  double orthogonality = 0.0;      // max |<h_u, h_v>| / (|h_u| |h_v|)
  double span_residual = 0.0;      // h_uv against its span formula, relative
  double principal_match = 0.0;    // max min|h_u / |h_u| -+ g|
  double min_curvature_u = 0.0;    // |<h_uu, h_v>| / (|h_u|^2 |h_v|)
  double min_curvature_v = 0.0;
  double min_normal_curvature = 0.0;  // |h_uu normal to h_u, h_v| / |h_u|^2
};

RecoveredSurface recover_generating_surface(const ConjugateNet& net, const RecoveryOptions& opt = {});

struct TypeDPair {
  TypeDFrame frame;
  JetMap gamma;
};

struct PairCheck {
  double max_pde = 0.0;      // |gamma_uv + a gamma_v + b gamma|
  double max_hessian = 0.0;  // |<(gamma I + Hess gamma) Y, X>|, with |X| = 1
  bool totally_geodesic = false;
  bool umbilical_s3 = false;
  bool gamma_zero = false;
  [[nodiscard]] bool degenerate() const { return totally_geodesic || (umbilical_s3 && gamma_zero); }
};

/// Assumes the chart coordinates are aligned with the frame (X ∥ d_u, Y ∥ d_v)
/// for the PDE form; the Hessian form is coordinate free.
PairCheck check_pair(const TypeDPair& p, std::vector<int> resolution = {9, 9});

/// Whether g lies in an affine 4-space, i.e. in an umbilical S^3(c): the first
/// and second derivatives (tangent planes and first normal spaces) over the
/// sampled chart span at most 4 dimensions.
bool in_umbilical_s3(const ChartImmersion& g, std::vector<int> resolution = {5, 5}, double tol = 1e-7);

}  // namespace tgf
