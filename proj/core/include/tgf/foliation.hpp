#pragma once

#include <span>
#include <string>
#include <vector>

#include "tgf/chart.hpp"

namespace tgf {

struct HypersurfaceSample {
  std::vector<double> point;
  Vec normal;
  Mat shape;        // A in the coordinate basis
  Mat kernel;       // columns: coordinate basis of ker A (orthonormal in the induced metric)
  int nullity = 0;  // nu = dim ker A
  double normal_residual = 0.0;
};

/// An n-dimensional chart into Q_eps^{n+1} with its unit normal and shape
/// operator sampled on a grid. The normal is smooth across the chart (pivots
/// fixed at the center).
struct HypersurfaceData {
  ChartImmersion f;
  SpaceForm space_form{0, 1};
  std::vector<int> pivots;
  std::vector<HypersurfaceSample> samples;
  double nullity_tol = 1e-6;  // relative to the largest principal curvature
  double nullity_floor = 1e-9;

  [[nodiscard]] int n() const { return f.dim(); }
  [[nodiscard]] double max_normal_residual() const;
};

struct HypersurfaceOptions {
  double nullity_tol = 1e-6;
  double nullity_floor = 1e-9;
  double rank_tol = 1e-8;
};

/// The space form a chart maps into (flat: eps = 0; unit quadric: +-1).
SpaceForm space_form_of(const ChartImmersion& f);

HypersurfaceData make_hypersurface_data(const ChartImmersion& f, std::vector<std::vector<double>> samples,
                                        const HypersurfaceOptions& opt = {});
HypersurfaceData make_hypersurface_data(const ChartImmersion& f, std::span<const int> resolution,
                                        const HypersurfaceOptions& opt = {});

/// Unit normal and coordinate shape operator at an arbitrary chart point.
struct ShapePoint {
  Vec normal;
  Mat first_form;
  std::vector<Mat> christoffel;
  Mat shape;
};
ShapePoint shape_point(const HypersurfaceData& hd, std::span<const double> p);

/// D = Y^perp inside TM for a field Y spanning D^perp.
struct CodimOneDistribution {
  VectorField y;
};

/// Rescales a nowhere-vanishing field to unit length in the induced metric.
CodimOneDistribution unit_distribution(const ChartImmersion& f, VectorField y);
/// D spanned by n - 1 given fields; Y is the unit field orthogonal to them,
/// obtained from one coordinate field (fixed at the chart center) by
/// projecting the span out.
CodimOneDistribution complement_distribution(const ChartImmersion& f, std::vector<VectorField> span);
/// max | |Y| - 1 | over the samples.
double unit_residual(const HypersurfaceData& hd, const CodimOneDistribution& dist);

enum class TrichotomyClass : unsigned { None = 0, Ruled = 1, Invariant = 2, Nullity = 4 };

/// "i", "ii", "iii", combinations such as "i+iii", or "none".
std::string class_label(unsigned classes);

struct FoliationSample {
  std::vector<double> point;
  double tg_residual = 0.0;
  unsigned classes = 0;  // TrichotomyClass bits; several may hold at once
  int nullity = 0;
  int nullity_in_d = 0;
  bool cylindrical = false;
  bool conical = false;
};

struct FoliationReport {
  std::vector<FoliationSample> samples;
  double max_tg_residual = 0.0;
  int count_i = 0;
  int count_ii = 0;
  int count_iii = 0;
  int count_none = 0;

  /// Fraction of samples carrying the given class bit.
  [[nodiscard]] double fraction(TrichotomyClass c) const;
};

struct TrichotomyOptions {
  double tol = 1e-6;  // relative to |A|
};

/// max over an orthonormal basis X_i of D of |<nabla_{X_i} X_j, Y>|.
FoliationReport totally_geodesic_residual(const HypersurfaceData& hd, const CodimOneDistribution& dist);
/// Also fills the totally geodesic residual and nullity.
FoliationReport trichotomy_classify(const HypersurfaceData& hd, const CodimOneDistribution& dist,
                                    const TrichotomyOptions& opt = {});

struct NullityInfo {
  int index = 0;
  Mat basis;
};
std::vector<NullityInfo> relative_nullity(const HypersurfaceData& hd);

struct LeafShot {
  double length = 0.0;          // parameter length actually integrated
  bool truncated = false;       // left the chart first
  double max_drift = 0.0;       // max |integral of <c', Y>| (leaf coordinate)
  double max_transversal = 0.0; // max |<c', Y>|
  double speed_drift = 0.0;     // max | |c'| - 1 |
  std::vector<std::vector<double>> path;
};

struct LeafShotOptions {
  double step = 0.01;
};

/// Unit-speed geodesic of M from `start` with initial direction in D; the leaf
/// coordinate is the Y-flow parameter, measured to first order as the
/// integral of <c', Y> (exact for leaves that are level sets of a distance).
LeafShot leaf_shoot(const HypersurfaceData& hd, const CodimOneDistribution& dist, std::span<const double> start,
                    const Vec& direction, double length, const LeafShotOptions& opt = {});

struct LeafSurvey {
  int shots = 0;
  int full_length = 0;       // shots that stayed in the chart for the whole length
  double max_drift = 0.0;    // over full-length shots
  double max_drift_any = 0.0;
};

struct LeafSurveyOptions {
  int starts_per_axis = 3;
  double inset = 0.1;
  double step = 0.01;
};

/// Shoots from a grid of starts along +-(coordinate field projected onto D).
LeafSurvey leaf_survey(const HypersurfaceData& hd, const CodimOneDistribution& dist, double length,
                       const LeafSurveyOptions& opt = {});

struct IdentitySample {
  std::vector<double> point;
  bool skipped = false;
  std::string reason;
  double beta = 0.0;
  double mu = 0.0;
  double rho = 0.0;
  double fit = 0.0;      // |A - (beta, mu, rho) reconstruction|
  double cod_rho = 0.0;  // |T(rho) - rho <nabla_X X, T>|
  double cod_mu = 0.0;
  double gauss = 0.0;    // two-sided Gauss identity for (X, T, S, X)
  double lambda = 0.0;   // |T(lambda) - 1 - lambda^2| with T unit and geodesic
};

struct IdentityReport {
  std::vector<IdentitySample> samples;
  int skipped = 0;
  double max_fit = 0.0;
  double max_cod = 0.0;
  double max_gauss = 0.0;
  double max_lambda = 0.0;
};

struct IdentityOptions {
  double step = 1e-3;        // outer difference step along T
  double inner_step = 1e-4;  // for derivatives of the frame fields
  double class_tol = 1e-6;
};

/// Codazzi, Gauss and Riccati identities on class-(iii) samples of a
/// hypersurface in the unit sphere with Delta inside D. Other samples (and those whose
/// difference stencil leaves the chart) are
/// skipped with a reason.
IdentityReport gauss_codazzi_identities(const HypersurfaceData& hd, const CodimOneDistribution& dist,
                                        const IdentityOptions& opt = {});

/// max |lambda(t) - tan t| on [0, t_end] for lambda' = 1 + lambda^2,
/// lambda(0) = 0, integrated with classical RK4.
double riccati_tan_deviation(double t_end = 1.4, int steps = 20000);

struct SurfacelikeFlags {
  bool cylindrical = false;  // a nullity direction along which df is constant
  bool conical = false;      // nullity lines through a common point
  double cylinder_residual = 0.0;
  double cone_residual = 0.0;
};

struct SurfacelikeOptions {
  double tol = 1e-6;
};

/// From the splitting tensor C_T = A_h^{-1} (nabla_T A)_h on Delta^perp:
/// cylindrical iff C_T = 0 and conical iff C_T = s I with s != 0 for some
/// T in Delta.
std::vector<SurfacelikeFlags> detect_surfacelike(const HypersurfaceData& hd, const SurfacelikeOptions& opt = {});

}  // namespace tgf
