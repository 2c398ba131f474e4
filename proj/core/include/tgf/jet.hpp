#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace tgf {

/// Truncated multivariate Taylor polynomial.
///
/// A Jet of `order` K in `nvars` variables stores the Taylor coefficients of a
/// smooth function about a base point, for every monomial of total degree <= K.
/// Arithmetic propagates all coefficients exactly (forward mode), so any
/// closed-form expression evaluated on seeded variables yields its partial
/// derivatives up to order K without truncation error.
///
/// Coefficients are stored in the Taylor normalization: f(p + d) ~ sum c_a d^a,
/// so the partial derivative for multi-index a is a! * c_a.
class Jet {
 public:
  struct Layout;

  Jet() = default;

  static Jet constant(double value, int nvars, int order);
  static Jet variable(double value, int index, int nvars, int order);

  [[nodiscard]] int nvars() const noexcept;
  [[nodiscard]] int order() const noexcept;
  [[nodiscard]] bool valid() const noexcept { return layout_ != nullptr; }

  [[nodiscard]] double value() const { return coeffs_[0]; }

  /// Partial derivative for the multi-index given as variable counts.
  [[nodiscard]] double derivative(std::span<const int> multi_index) const;
  /// First partial d/dx_i.
  [[nodiscard]] double d(int i) const;
  /// Second partial d^2/dx_i dx_j.
  [[nodiscard]] double d(int i, int j) const;
  /// Third partial.
  [[nodiscard]] double d(int i, int j, int k) const;

  /// Jet of the partial derivative with respect to `var`; order drops by one.
  [[nodiscard]] Jet partial(int var) const;
  /// Antiderivative in x_var vanishing on x_var = base; same order, so the
  /// result is exact up to order - 1 in the integrated direction.
  [[nodiscard]] Jet antiderivative(int var) const;
  /// Drops all coefficients above `new_order`.
  [[nodiscard]] Jet truncated(int new_order) const;
  /// Re-expresses the jet in a larger variable set; variable i maps to
  /// `var_map[i]` of the new set.
  [[nodiscard]] Jet lifted(int new_nvars, std::span<const int> var_map) const;
  /// Directional derivative sum_i dir_i d/dx_i as a jet of order - 1.
  [[nodiscard]] Jet directional(std::span<const double> dir) const;

  /// Composition f(base + shifts): substitutes jets with zero constant term
  /// for the displacements of this jet's variables. The result lives in the
  /// variables (and order) of the shifts.
  [[nodiscard]] Jet substituted(const std::vector<Jet>& shifts) const;

  /// Applies a univariate function given its derivatives f(x0), f'(x0), ...
  /// at x0 = value(). `derivs` needs order()+1 entries.
  [[nodiscard]] Jet compose(std::span<const double> derivs) const;

  [[nodiscard]] std::span<const double> coefficients() const { return coeffs_; }

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const Jet& o);
  Jet& operator/=(const Jet& o);
  Jet& operator+=(double c);
  Jet& operator-=(double c);
  Jet& operator*=(double c);
  Jet& operator/=(double c);

  friend Jet operator-(Jet a);
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator+(Jet a, double c) { return a += c; }
  friend Jet operator+(double c, Jet a) { return a += c; }
  friend Jet operator-(Jet a, double c) { return a -= c; }
  friend Jet operator-(double c, const Jet& a) { return (-a) += c; }
  friend Jet operator*(Jet a, double c) { return a *= c; }
  friend Jet operator*(double c, Jet a) { return a *= c; }
  friend Jet operator/(Jet a, double c) { return a /= c; }
  friend Jet operator/(double c, const Jet& a);

 private:
  Jet(const Layout* layout, std::vector<double> coeffs)
      : layout_(layout), coeffs_(std::move(coeffs)) {}
  void require_compatible(const Jet& o) const;

  const Layout* layout_ = nullptr;
  std::vector<double> coeffs_;
};

Jet sin(const Jet& x);
Jet cos(const Jet& x);
Jet tan(const Jet& x);
Jet exp(const Jet& x);
Jet log(const Jet& x);
Jet sqrt(const Jet& x);
Jet sinh(const Jet& x);
Jet cosh(const Jet& x);
Jet atan(const Jet& x);
Jet square(const Jet& x);
Jet inverse(const Jet& x);
/// sin(sqrt(q))/sqrt(q), entire in q.
Jet sinc_sqrt(const Jet& q);
/// cos(sqrt(q)), entire in q.
Jet cos_sqrt(const Jet& q);
/// sinh(sqrt(q))/sqrt(q), entire in q.
Jet sinhc_sqrt(const Jet& q);
/// cosh(sqrt(q)), entire in q.
Jet cosh_sqrt(const Jet& q);

using JetVector = std::vector<Jet>;

/// Seeds `point.size()` independent variables of the given order.
JetVector seed(std::span<const double> point, int order);

JetVector partial(const JetVector& v, int var);
JetVector truncated(const JetVector& v, int order);
JetVector lifted(const JetVector& v, int new_nvars, std::span<const int> var_map);
std::vector<double> values(const JetVector& v);

JetVector operator+(const JetVector& a, const JetVector& b);
JetVector operator-(const JetVector& a, const JetVector& b);
JetVector operator*(const Jet& s, const JetVector& v);
JetVector operator*(double s, const JetVector& v);
/// Accumulates s * v into acc (allocating acc if empty).
void axpy(JetVector& acc, const Jet& s, const JetVector& v);

}  // namespace tgf
