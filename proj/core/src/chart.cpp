#include "tgf/chart.hpp"

#include <sstream>

#include "tgf/error.hpp"

namespace tgf {

Target Target::of(const SpaceForm& sf) {
  if (sf.epsilon() == 0) return flat(sf.ambient_dim());
  return quadric(sf.ambient_dim(), sf.mu(), sf.epsilon());
}

JetMap closed_form(std::function<JetVector(std::span<const Jet> x)> fn) {
  return [fn = std::move(fn)](std::span<const double> p, int order) {
    const JetVector x = seed(p, order);
    return fn(x);
  };
}

VectorField constant_field(std::vector<double> coeffs) {
  return [coeffs = std::move(coeffs)](std::span<const double> p, int order) {
    JetVector out;
    out.reserve(coeffs.size());
    for (double c : coeffs) out.push_back(Jet::constant(c, static_cast<int>(p.size()), order));
    return out;
  };
}

ChartImmersion::ChartImmersion(std::string name, std::vector<Interval> domain, Target target, JetMap eval)
    : name_(std::move(name)), domain_(std::move(domain)), target_(target), eval_(std::move(eval)) {
  if (domain_.empty()) throw Error(ErrorKind::Structural, "chart '" + name_ + "' has an empty domain");
  for (const auto& iv : domain_) {
    if (!(iv.hi > iv.lo)) throw Error(ErrorKind::Structural, "chart '" + name_ + "' has a degenerate interval");
  }
  if (target_.form.dim < 1) throw Error(ErrorKind::Structural, "chart '" + name_ + "' has no target");
}

std::vector<double> ChartImmersion::center() const {
  std::vector<double> c;
  for (const auto& iv : domain_) c.push_back(iv.mid());
  return c;
}

bool ChartImmersion::contains(std::span<const double> p) const {
  if (static_cast<int>(p.size()) != dim()) return false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double slack = 1e-9 * domain_[i].width();
    if (!(p[i] >= domain_[i].lo - slack && p[i] <= domain_[i].hi + slack)) return false;
  }
  return true;
}

JetVector ChartImmersion::eval(std::span<const double> p, int order) const {
  if (static_cast<int>(p.size()) != dim()) {
    throw Error(ErrorKind::Structural, "chart '" + name_ + "': parameter point has wrong dimension");
  }
  if (!contains(p)) {
    std::ostringstream os;
    os << "chart '" << name_ << "': point (";
    for (std::size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
    os << ") outside the domain";
    throw Error(ErrorKind::Domain, os.str());
  }
  JetVector out = eval_(p, order);
  if (static_cast<int>(out.size()) != ambient_dim()) {
    throw Error(ErrorKind::Structural, "chart '" + name_ + "' returned the wrong number of components");
  }
  return out;
}

Vec ChartImmersion::value(std::span<const double> p) const {
  const JetVector j = eval(p, 0);
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].value();
  return v;
}

ChartImmersion ChartImmersion::restricted(std::vector<Interval> domain) const {
  return {name_, std::move(domain), target_, eval_};
}

ChartImmersion ChartImmersion::renamed(std::string name) const { return {std::move(name), domain_, target_, eval_}; }

std::vector<std::vector<double>> sample_grid(const std::vector<Interval>& domain, std::span<const int> resolution,
                                             double inset) {
  if (resolution.size() != domain.size()) throw Error(ErrorKind::Structural, "grid resolution/domain mismatch");
  std::vector<std::vector<double>> axes;
  for (std::size_t i = 0; i < domain.size(); ++i) {
    const int n = resolution[i];
    if (n < 1) throw Error(ErrorKind::Structural, "grid resolution must be positive");
    const double lo = domain[i].lo + inset * domain[i].width();
    const double hi = domain[i].hi - inset * domain[i].width();
    std::vector<double> ax;
    if (n == 1) {
      ax.push_back(0.5 * (lo + hi));
    } else {
      for (int k = 0; k < n; ++k) ax.push_back(lo + (hi - lo) * k / (n - 1));
    }
    axes.push_back(std::move(ax));
  }
  std::vector<std::vector<double>> pts{{}};
  for (const auto& ax : axes) {
    std::vector<std::vector<double>> next;
    next.reserve(pts.size() * ax.size());
    for (const auto& p : pts) {
      for (double x : ax) {
        auto q = p;
        q.push_back(x);
        next.push_back(std::move(q));
      }
    }
    pts = std::move(next);
  }
  return pts;
}

Vec to_vec(std::span<const double> v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
  return out;
}

}  // namespace tgf
