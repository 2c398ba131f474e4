#include "tgf/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace tgf {

struct Jet::Layout {
  int nvars = 0;
  int order = 0;
  std::vector<std::vector<int>> exps;  // monomial exponents, graded order
  std::vector<int> degree;
  std::unordered_map<std::uint64_t, int> index;
  std::vector<std::array<int, 3>> products;  // (i, j, k): mono_i * mono_j = mono_k

  static std::uint64_t key(std::span<const int> e) {
    std::uint64_t k = 0;
    for (int x : e) k = k * 32 + static_cast<std::uint64_t>(x);
    return k;
  }
  [[nodiscard]] int find(std::span<const int> e) const {
    auto it = index.find(key(e));
    return it == index.end() ? -1 : it->second;
  }
  [[nodiscard]] std::size_t size() const { return exps.size(); }
};

namespace {

void enumerate(int nvars, int remaining, int var, std::vector<int>& cur,
               std::vector<std::vector<int>>& out) {
  if (var == nvars) {
    if (remaining == 0) out.push_back(cur);
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    cur[var] = e;
    enumerate(nvars, remaining - e, var + 1, cur, out);
  }
  cur[var] = 0;
}

const Jet::Layout* layout_for(int nvars, int order) {
  if (nvars < 1 || nvars > 12 || order < 0 || order > 8)
    throw std::invalid_argument("jet layout out of range");
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<Jet::Layout>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{nvars, order}];
  if (slot) return slot.get();

  auto layout = std::make_unique<Jet::Layout>();
  layout->nvars = nvars;
  layout->order = order;
  std::vector<int> cur(nvars, 0);
  for (int deg = 0; deg <= order; ++deg) enumerate(nvars, deg, 0, cur, layout->exps);
  for (std::size_t i = 0; i < layout->exps.size(); ++i) {
    const auto& e = layout->exps[i];
    layout->degree.push_back(std::accumulate(e.begin(), e.end(), 0));
    layout->index.emplace(Jet::Layout::key(e), static_cast<int>(i));
  }
  std::vector<int> sum(nvars);
  for (std::size_t i = 0; i < layout->exps.size(); ++i) {
    for (std::size_t j = 0; j < layout->exps.size(); ++j) {
      if (layout->degree[i] + layout->degree[j] > order) continue;
      for (int v = 0; v < nvars; ++v) sum[v] = layout->exps[i][v] + layout->exps[j][v];
      layout->products.push_back(
          {static_cast<int>(i), static_cast<int>(j), layout->find(sum)});
    }
  }
  slot = std::move(layout);
  return slot.get();
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

Jet Jet::constant(double value, int nvars, int order) {
  const Layout* l = layout_for(nvars, order);
  std::vector<double> c(l->size(), 0.0);
  c[0] = value;
  return {l, std::move(c)};
}

Jet Jet::variable(double value, int index, int nvars, int order) {
  Jet j = constant(value, nvars, order);
  if (index < 0 || index >= nvars) throw std::out_of_range("jet variable index");
  if (order >= 1) {
    std::vector<int> e(nvars, 0);
    e[index] = 1;
    j.coeffs_[j.layout_->find(e)] = 1.0;
  }
  return j;
}

int Jet::nvars() const noexcept { return layout_ ? layout_->nvars : 0; }
int Jet::order() const noexcept { return layout_ ? layout_->order : -1; }

double Jet::derivative(std::span<const int> multi_index) const {
  if (static_cast<int>(multi_index.size()) != nvars())
    throw std::invalid_argument("multi-index size mismatch");
  int deg = 0;
  double scale = 1.0;
  for (int e : multi_index) {
    deg += e;
    scale *= factorial(e);
  }
  if (deg > order()) throw std::out_of_range("derivative above jet order");
  return scale * coeffs_[layout_->find(multi_index)];
}

double Jet::d(int i) const {
  std::vector<int> e(nvars(), 0);
  ++e.at(i);
  return derivative(e);
}
double Jet::d(int i, int j) const {
  std::vector<int> e(nvars(), 0);
  ++e.at(i);
  ++e.at(j);
  return derivative(e);
}
double Jet::d(int i, int j, int k) const {
  std::vector<int> e(nvars(), 0);
  ++e.at(i);
  ++e.at(j);
  ++e.at(k);
  return derivative(e);
}

Jet Jet::partial(int var) const {
  if (order() < 1) throw std::logic_error("partial of an order-0 jet");
  const Layout* out = layout_for(nvars(), order() - 1);
  std::vector<double> c(out->size(), 0.0);
  std::vector<int> e;
  for (std::size_t i = 0; i < out->size(); ++i) {
    e = out->exps[i];
    ++e[var];
    c[i] = e[var] * coeffs_[layout_->find(e)];
  }
  return {out, std::move(c)};
}

Jet Jet::antiderivative(int var) const {
  // integral from the base point along x_var; the top-degree part is dropped.
  std::vector<double> c(coeffs_.size(), 0.0);
  std::vector<int> e;
  for (std::size_t i = 0; i < layout_->size(); ++i) {
    if (layout_->degree[i] == order()) continue;
    e = layout_->exps[i];
    ++e[var];
    c[layout_->find(e)] = coeffs_[i] / e[var];
  }
  return {layout_, std::move(c)};
}

Jet Jet::truncated(int new_order) const {
  if (new_order > order()) throw std::logic_error("cannot raise jet order");
  if (new_order == order()) return *this;
  const Layout* out = layout_for(nvars(), new_order);
  return {out, std::vector<double>(coeffs_.begin(), coeffs_.begin() + out->size())};
}

Jet Jet::substituted(const std::vector<Jet>& shifts) const {
  if (static_cast<int>(shifts.size()) != nvars()) throw std::invalid_argument("substituted: one shift per variable");
  const Jet& any = shifts.front();
  const int out_order = any.order();
  for (const auto& sh : shifts) {
    any.require_compatible(sh);
    if (sh.value() != 0.0) throw std::invalid_argument("substituted: shifts must vanish at the base point");
  }
  const int top = std::min(order(), out_order);
  std::vector<std::vector<Jet>> pw(shifts.size());
  for (std::size_t v = 0; v < shifts.size(); ++v) {
    pw[v].push_back(Jet::constant(1.0, any.nvars(), out_order));
    for (int e = 1; e <= top; ++e) pw[v].push_back(pw[v].back() * shifts[v]);
  }
  Jet out = Jet::constant(0.0, any.nvars(), out_order);
  for (std::size_t m = 0; m < layout_->size(); ++m) {
    if (layout_->degree[m] > top || coeffs_[m] == 0.0) continue;
    Jet term = Jet::constant(coeffs_[m], any.nvars(), out_order);
    for (std::size_t v = 0; v < shifts.size(); ++v)
      if (layout_->exps[m][v] > 0) term *= pw[v][layout_->exps[m][v]];
    out += term;
  }
  return out;
}

Jet Jet::lifted(int new_nvars, std::span<const int> var_map) const {
  if (static_cast<int>(var_map.size()) != nvars())
    throw std::invalid_argument("lift map size mismatch");
  const Layout* out = layout_for(new_nvars, order());
  std::vector<double> c(out->size(), 0.0);
  std::vector<int> e(new_nvars);
  for (std::size_t i = 0; i < layout_->size(); ++i) {
    std::fill(e.begin(), e.end(), 0);
    for (int v = 0; v < nvars(); ++v) e[var_map[v]] += layout_->exps[i][v];
    c[out->find(e)] += coeffs_[i];
  }
  return {out, std::move(c)};
}

Jet Jet::directional(std::span<const double> dir) const {
  Jet r = Jet::constant(0.0, nvars(), order() - 1);
  for (int i = 0; i < nvars(); ++i)
    if (dir[i] != 0.0) r += partial(i) * dir[i];
  return r;
}

Jet Jet::compose(std::span<const double> derivs) const {
  const int k = order();
  if (static_cast<int>(derivs.size()) < k + 1)
    throw std::invalid_argument("compose needs order+1 derivatives");
  Jet delta = *this;
  delta.coeffs_[0] = 0.0;
  Jet r = Jet::constant(derivs[k] / factorial(k), nvars(), k);
  for (int m = k - 1; m >= 0; --m) {
    r = r * delta;
    r.coeffs_[0] += derivs[m] / factorial(m);
  }
  return r;
}

void Jet::require_compatible(const Jet& o) const {
  if (layout_ != o.layout_) throw std::invalid_argument("jet layout mismatch");
}

Jet& Jet::operator+=(const Jet& o) {
  require_compatible(o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}
Jet& Jet::operator-=(const Jet& o) {
  require_compatible(o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}
Jet& Jet::operator*=(const Jet& o) { return *this = *this * o; }
Jet& Jet::operator/=(const Jet& o) { return *this = *this / o; }
Jet& Jet::operator+=(double c) {
  coeffs_[0] += c;
  return *this;
}
Jet& Jet::operator-=(double c) {
  coeffs_[0] -= c;
  return *this;
}
Jet& Jet::operator*=(double c) {
  for (double& x : coeffs_) x *= c;
  return *this;
}
Jet& Jet::operator/=(double c) {
  for (double& x : coeffs_) x /= c;
  return *this;
}

Jet operator-(Jet a) {
  for (double& x : a.coeffs_) x = -x;
  return a;
}

Jet operator*(const Jet& a, const Jet& b) {
  a.require_compatible(b);
  std::vector<double> c(a.coeffs_.size(), 0.0);
  for (const auto& [i, j, k] : a.layout_->products) c[k] += a.coeffs_[i] * b.coeffs_[j];
  return {a.layout_, std::move(c)};
}

Jet operator/(const Jet& a, const Jet& b) { return a * inverse(b); }
Jet operator/(double c, const Jet& a) { return inverse(a) * c; }

namespace {

std::vector<double> cyclic(int n, std::array<double, 4> pattern) {
  std::vector<double> d(n + 1);
  for (int i = 0; i <= n; ++i) d[i] = pattern[i % 4];
  return d;
}

// Derivatives of a power series sum a_k q^k at q0.
template <typename Coef>
std::vector<double> series_derivs(double q0, int n, Coef coef) {
  std::vector<double> d(n + 1, 0.0);
  for (int m = 0; m <= n; ++m) {
    double sum = 0.0;
    for (int k = m; k < m + 80; ++k) {
      double falling = 1.0;
      for (int r = 0; r < m; ++r) falling *= (k - r);
      const double term = coef(k) * falling * std::pow(q0, k - m);
      sum += term;
      if (k > m + 5 && std::abs(term) < 1e-18 * (1.0 + std::abs(sum))) break;
    }
    d[m] = sum;
  }
  return d;
}

}  // namespace

Jet sin(const Jet& x) {
  const double s = std::sin(x.value()), c = std::cos(x.value());
  return x.compose(cyclic(x.order(), {s, c, -s, -c}));
}
Jet cos(const Jet& x) {
  const double s = std::sin(x.value()), c = std::cos(x.value());
  return x.compose(cyclic(x.order(), {c, -s, -c, s}));
}
Jet sinh(const Jet& x) {
  const double s = std::sinh(x.value()), c = std::cosh(x.value());
  return x.compose(cyclic(x.order(), {s, c, s, c}));
}
Jet cosh(const Jet& x) {
  const double s = std::sinh(x.value()), c = std::cosh(x.value());
  return x.compose(cyclic(x.order(), {c, s, c, s}));
}
Jet exp(const Jet& x) {
  const double e = std::exp(x.value());
  return x.compose(std::vector<double>(x.order() + 1, e));
}
Jet log(const Jet& x) {
  const double v = x.value();
  if (v <= 0.0) throw std::domain_error("log of non-positive jet");
  std::vector<double> d(x.order() + 1);
  d[0] = std::log(v);
  double p = 1.0 / v;
  for (int k = 1; k <= x.order(); ++k) {
    d[k] = p;
    p *= -static_cast<double>(k) / v;
  }
  return x.compose(d);
}
Jet inverse(const Jet& x) {
  const double v = x.value();
  if (v == 0.0) throw std::domain_error("division by a jet with zero value");
  std::vector<double> d(x.order() + 1);
  double p = 1.0 / v;
  for (int k = 0; k <= x.order(); ++k) {
    d[k] = p;
    p *= -static_cast<double>(k + 1) / v;
  }
  return x.compose(d);
}
Jet sqrt(const Jet& x) {
  const double v = x.value();
  if (v <= 0.0) throw std::domain_error("sqrt of non-positive jet");
  std::vector<double> d(x.order() + 1);
  double coef = 1.0, expo = 0.5;
  for (int k = 0; k <= x.order(); ++k) {
    d[k] = coef * std::pow(v, expo);
    coef *= expo;
    expo -= 1.0;
  }
  return x.compose(d);
}
Jet square(const Jet& x) { return x * x; }
Jet tan(const Jet& x) { return sin(x) / cos(x); }
Jet atan(const Jet& x) {
  // atan^(k)(v) = (1/(1+t^2))^(k-1)(v), read off a univariate jet.
  const double v = x.value();
  std::vector<double> d(x.order() + 1);
  d[0] = std::atan(v);
  if (x.order() >= 1) {
    const Jet t = Jet::variable(v, 0, 1, x.order() - 1);
    const Jet g = inverse(1.0 + t * t);
    for (int k = 1; k <= x.order(); ++k) {
      const std::vector<int> e{k - 1};
      d[k] = g.derivative(e);
    }
  }
  return x.compose(d);
}

Jet sinc_sqrt(const Jet& q) {
  return q.compose(series_derivs(q.value(), q.order(), [](int k) {
    return (k % 2 ? -1.0 : 1.0) / factorial(2 * k + 1);
  }));
}
Jet cos_sqrt(const Jet& q) {
  return q.compose(series_derivs(q.value(), q.order(), [](int k) {
    return (k % 2 ? -1.0 : 1.0) / factorial(2 * k);
  }));
}
Jet sinhc_sqrt(const Jet& q) {
  return q.compose(
      series_derivs(q.value(), q.order(), [](int k) { return 1.0 / factorial(2 * k + 1); }));
}
Jet cosh_sqrt(const Jet& q) {
  return q.compose(
      series_derivs(q.value(), q.order(), [](int k) { return 1.0 / factorial(2 * k); }));
}

JetVector seed(std::span<const double> point, int order) {
  JetVector out;
  const int n = static_cast<int>(point.size());
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(Jet::variable(point[i], i, n, order));
  return out;
}

JetVector partial(const JetVector& v, int var) {
  JetVector out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(x.partial(var));
  return out;
}
JetVector truncated(const JetVector& v, int order) {
  JetVector out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(x.truncated(order));
  return out;
}
JetVector lifted(const JetVector& v, int new_nvars, std::span<const int> var_map) {
  JetVector out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(x.lifted(new_nvars, var_map));
  return out;
}
std::vector<double> values(const JetVector& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(x.value());
  return out;
}

JetVector operator+(const JetVector& a, const JetVector& b) {
  JetVector out = a;
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += b.at(i);
  return out;
}
JetVector operator-(const JetVector& a, const JetVector& b) {
  JetVector out = a;
  for (std::size_t i = 0; i < a.size(); ++i) out[i] -= b.at(i);
  return out;
}
JetVector operator*(const Jet& s, const JetVector& v) {
  JetVector out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(s * x);
  return out;
}
JetVector operator*(double s, const JetVector& v) {
  JetVector out = v;
  for (auto& x : out) x *= s;
  return out;
}
void axpy(JetVector& acc, const Jet& s, const JetVector& v) {
  if (acc.empty()) {
    acc = s * v;
    return;
  }
  for (std::size_t i = 0; i < v.size(); ++i) acc[i] += s * v[i];
}

}  // namespace tgf
