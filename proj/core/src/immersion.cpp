#include "mincurv/immersion.hpp"

#include <cmath>

#include "mincurv/error.hpp"

namespace mincurv {

Immersion::Immersion(int n, std::vector<Expr> components, ImmersionKind kind, std::string name)
    : n_(n), components_(std::move(components)), kind_(kind), name_(std::move(name)) {
  if (n_ < 1 || n_ > kMaxJetDim) throw ShapeError("immersion dimension must be 1..3");
  if (static_cast<int>(components_.size()) <= n_)
    throw ShapeError("immersion needs at least n + 1 components, got " + std::to_string(components_.size()));
  for (std::size_t a = 0; a < components_.size(); ++a) {
    if (components_[a].empty()) throw ShapeError("empty component expression");
    if (components_[a].max_variable() >= n_)
      throw ShapeError("component " + std::to_string(a + 1) + " references variable " +
                       std::to_string(components_[a].max_variable() + 1) + " beyond dimension " + std::to_string(n_));
  }
}

std::span<const Expr> Immersion::graph_functions() const {
  if (!is_graph()) throw HypothesisError("immersion '" + name_ + "' is not a graph");
  return std::span<const Expr>(components_).subspan(static_cast<std::size_t>(n_));
}

std::vector<double> Immersion::evaluate(std::span<const double> point) const {
  if (static_cast<int>(point.size()) != n_) throw ShapeError("point dimension does not match immersion");
  std::vector<double> out;
  out.reserve(components_.size());
  for (const auto& c : components_) out.push_back(c.evaluate(point));
  return out;
}

Immersion build_graph_immersion(std::vector<Expr> f_components, int n, std::string name) {
  if (f_components.empty()) throw ShapeError("graph needs at least one height function");
  std::vector<Expr> components;
  components.reserve(static_cast<std::size_t>(n) + f_components.size());
  for (int i = 0; i < n; ++i) components.push_back(Expr::variable(i));
  for (std::size_t a = 0; a < f_components.size(); ++a) {
    if (f_components[a].max_variable() >= n)
      throw ShapeError("height function " + std::to_string(a + 1) + " references variable " +
                       std::to_string(f_components[a].max_variable() + 1) + " but n = " + std::to_string(n));
    components.push_back(std::move(f_components[a]));
  }
  return Immersion(n, std::move(components), ImmersionKind::Graph, std::move(name));
}

Immersion build_parametric_immersion(std::vector<Expr> components, int n, std::string name) {
  return Immersion(n, std::move(components), ImmersionKind::Parametric, std::move(name));
}

std::vector<Jet> evaluate_immersion(const Immersion& imm, std::span<const double> point, int order) {
  if (static_cast<int>(point.size()) != imm.dim())
    throw ShapeError("point has " + std::to_string(point.size()) + " coordinates, immersion dimension is " +
                     std::to_string(imm.dim()));
  std::vector<Jet> vars;
  vars.reserve(point.size());
  for (int i = 0; i < imm.dim(); ++i)
    vars.push_back(Jet::variable(i, point[static_cast<std::size_t>(i)], imm.dim(), order));
  std::vector<Jet> out;
  out.reserve(imm.components().size());
  for (const auto& c : imm.components()) out.push_back(c.evaluate(vars));
  return out;
}

void GridSpec::validate() const {
  if (axes.empty() || axes.size() > static_cast<std::size_t>(kMaxJetDim))
    throw ConfigError("grid: expected 1..3 axes");
  for (std::size_t k = 0; k < axes.size(); ++k) {
    if (axes[k].count < 2)
      throw ConfigError("grid.counts[" + std::to_string(k) + "]: sample count must be >= 2");
    if (!(axes[k].hi > axes[k].lo) || !std::isfinite(axes[k].lo) || !std::isfinite(axes[k].hi))
      throw ConfigError("grid.ranges[" + std::to_string(k) + "]: range must satisfy lo < hi");
  }
}

std::vector<std::vector<double>> GridSpec::points() const {
  validate();
  std::vector<std::vector<double>> out;
  std::vector<int> idx(axes.size(), 0);
  while (true) {
    std::vector<double> p(axes.size());
    for (std::size_t k = 0; k < axes.size(); ++k) {
      const auto& a = axes[k];
      p[k] = a.lo + (a.hi - a.lo) * idx[k] / (a.count - 1);
    }
    if (!mask || mask(p)) out.push_back(std::move(p));
    // last axis fastest
    std::size_t k = axes.size();
    while (k > 0) {
      --k;
      if (++idx[k] < axes[k].count) break;
      idx[k] = 0;
      if (k == 0) return out;
    }
  }
}

std::vector<double> GridSpec::center() const {
  std::vector<double> c;
  for (const auto& a : axes) c.push_back(0.5 * (a.lo + a.hi));
  return c;
}

GridSpec square_grid(int n, double lo, double hi, int count) {
  GridSpec g;
  for (int i = 0; i < n; ++i) g.axes.push_back({lo, hi, count});
  return g;
}

}  // namespace mincurv
