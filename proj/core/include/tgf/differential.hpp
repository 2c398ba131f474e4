#pragma once

#include <span>
#include <vector>

#include "tgf/chart.hpp"

namespace tgf {

/// Value and partial derivatives of an immersion at one parameter point.
struct JetData {
  std::vector<double> point;
  int order = 0;
  Vec value;
  std::vector<Vec> d1;                            // d1[i] = f_i
  std::vector<std::vector<Vec>> d2;               // d2[i][j] = f_ij
  std::vector<std::vector<std::vector<Vec>>> d3;  // d3[i][j][k] = f_ijk

  /// Largest deviation between permuted mixed partials.
  [[nodiscard]] double symmetry_residual() const;
};

JetData jet(const ChartImmersion& im, std::span<const double> p, int order);

struct MetricData {
  Vec position;
  std::vector<Vec> tangent;                // f_i
  Mat first_form;                          // E_ij = <f_i, f_j>
  std::vector<Mat> christoffel;            // christoffel[l](i, j) = Gamma^l_ij
  std::vector<std::vector<Vec>> second_form;  // alpha(d_i, d_j), a normal vector
  std::vector<Vec> normal_basis;           // orthonormal in the ambient form
  std::vector<double> normal_signs;        // <n, n> = +-1
};

/// Pointwise first and second fundamental forms. Throws a degenerate-chart
/// error when the differential loses rank (relative tolerance rank_tol).
MetricData metric_data(const ChartImmersion& im, std::span<const double> p, double rank_tol = 1e-8);

/// <A_w d_i, d_j> = <alpha(d_i, d_j), w>; returns the matrix of A_w in the
/// coordinate basis, i.e. E^{-1} [<alpha_ij, w>].
Mat shape_operator(const MetricData& md, const AmbientForm& form, const Vec& w);
Mat shape_operator(const ChartImmersion& im, std::span<const double> p, const Vec& w, double tol = 1e-9);

/// Intrinsic curvature of a 2-dimensional chart from its first form alone.
double gauss_curvature(const ChartImmersion& im, std::span<const double> p);

/// Smallest over largest singular value of the differential.
double rank_ratio(const std::vector<Vec>& tangent);

// ---- jet-valued linear algebra -------------------------------------------

using JetMatrix = std::vector<JetVector>;

Jet inner(const AmbientForm& form, const JetVector& a, const JetVector& b);
/// Chart partials d_i f as jets of one order less.
std::vector<JetVector> partials(const JetVector& f);
/// E_ij as jets.
JetMatrix first_form(const AmbientForm& form, const std::vector<JetVector>& tangent);
/// Gaussian elimination with partial pivoting on the values.
JetVector solve(const JetMatrix& a, const JetVector& b);
JetMatrix inverse(const JetMatrix& a);
/// Gamma^l_ij from the jets of E via the Koszul formula; order drops by one.
std::vector<JetMatrix> christoffel(const JetMatrix& e);

/// Greedy pivot order of ambient basis vectors for completing `span` to an
/// orthonormal frame; computed once (at a chart center) and reused so that
/// the resulting normal fields are smooth.
std::vector<int> complement_pivots(const AmbientForm& form, const std::vector<Vec>& span);

/// Orthonormal basis (in the ambient form) of the complement of `span`,
/// obtained from the standard basis vectors listed in `pivots`. `signs`
/// receives <n_a, n_a>.
std::vector<Vec> orthonormal_complement(const AmbientForm& form, const std::vector<Vec>& span,
                                        std::span<const int> pivots, std::vector<double>* signs = nullptr);
std::vector<JetVector> orthonormal_complement(const AmbientForm& form, const std::vector<JetVector>& span,
                                              std::span<const int> pivots, std::vector<double>* signs = nullptr);

Vec project_off(const AmbientForm& form, const Vec& v, const std::vector<Vec>& span);

}  // namespace tgf
