#pragma once

#include <vector>

#include "tgf/chart.hpp"

namespace tgf {

/// Unit-speed curve in Q_eps with a parallel orthonormal frame of its normal
/// bundle. For eps != 0 the position gamma itself is appended as the last
/// frame field, so the frame has n + 1 members and frame coordinates carry
/// the signature `signs` (the last one equals eps).
class FramedCurve {
 public:
  FramedCurve(SpaceForm sf, ChartImmersion gamma, std::vector<Vec> initial_frame, int steps = 2000);

  [[nodiscard]] const SpaceForm& space_form() const { return sf_; }
  [[nodiscard]] const ChartImmersion& gamma() const { return gamma_; }
  [[nodiscard]] Interval domain() const { return gamma_.domain()[0]; }
  /// Number of frame fields (n for eps = 0, n + 1 otherwise).
  [[nodiscard]] int frame_size() const { return static_cast<int>(signs_.size()); }
  [[nodiscard]] const std::vector<double>& signs() const { return signs_; }
  /// Coordinates of gamma(s0) in the frame; empty for eps = 0.
  [[nodiscard]] const Vec& e() const { return e_; }
  [[nodiscard]] double s0() const { return s0_; }
  [[nodiscard]] const std::vector<double>& nodes() const { return nodes_; }

  [[nodiscard]] std::vector<Vec> frame(double s) const;
  /// Jets in s (one variable) of every frame field, exact to the given order
  /// for the frame ODE started from the integrated value at s.
  [[nodiscard]] std::vector<JetVector> frame_jets(double s, int order) const;
  /// phi_s(y) = sum_i y_i xi_i(s).
  [[nodiscard]] Vec phi(double s, const Vec& y) const;

  /// Largest deviation of the frame Gram matrix from diag(signs) on the nodes.
  [[nodiscard]] double orthonormality_residual() const;
  /// Largest normal component of xi_i'(s) on the nodes (finite differences).
  [[nodiscard]] double parallelism_residual() const;

 private:
  [[nodiscard]] std::vector<Vec> rhs(double s, const std::vector<Vec>& xi) const;
  [[nodiscard]] std::vector<Vec> step(double s, const std::vector<Vec>& xi, double h) const;
  void reorthonormalize(double s, std::vector<Vec>& xi) const;

  SpaceForm sf_;
  ChartImmersion gamma_;
  double s0_ = 0.0;
  Vec e_;
  std::vector<double> signs_;
  std::vector<double> nodes_;
  std::vector<std::vector<Vec>> samples_;  // integrated normal fields (gamma excluded)
  std::vector<Vec> accel_;                 // gamma'' at the nodes

  friend double omega_margin(const FramedCurve& fc, const Vec& y);
};

/// Integrates the parallel frame from `initial_frame` given at the lower end
/// of the curve's domain.
FramedCurve parallel_frame(const SpaceForm& sf, const ChartImmersion& gamma, std::vector<Vec> initial_frame,
                           int steps = 2000);

/// min over the nodes of |1 - <gamma''(s), phi_s(y)>|.
double omega_margin(const FramedCurve& fc, const Vec& y);

struct PartialTube {
  FramedCurve curve;
  ChartImmersion fiber;
  ChartImmersion tube;  // variables (x_1, ..., x_{n-1}, s)
  std::vector<std::vector<double>> samples;
  std::vector<double> rho;  // |d_s f| at the samples
};

struct TubeOptions {
  int fiber_resolution = 9;
  int curve_resolution = 17;
  double margin_tol = 1e-6;
  double rank_tol = 1e-8;
};

PartialTube build_partial_tube(const FramedCurve& fc, const ChartImmersion& f0, const TubeOptions& opt = {});

/// max over samples of |A v - kappa v| for the unit coordinate direction
/// v = d_var / |d_var| of a hypersurface chart, kappa the Rayleigh quotient.
double principal_direction_residual(const ChartImmersion& f, int var, const std::vector<std::vector<double>>& samples);
double principal_direction_residual(const PartialTube& pt);
/// max |<d_i f, d_s f>| over the samples and fiber variables i.
double off_block_metric_residual(const PartialTube& pt);

/// Negative control: adds delta sin(x_1) s^2 to the last ambient coordinate
/// of a flat tube, which bends the s-curves off the principal directions.
PartialTube perturbed_tube(const PartialTube& pt, double delta);

}  // namespace tgf
