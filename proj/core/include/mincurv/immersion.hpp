#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mincurv/expression.hpp"
#include "mincurv/jet.hpp"

namespace mincurv {

enum class ImmersionKind { Graph, Parametric };

/// Parametrized map F : U in R^n -> R^(n+m), one expression per ambient coordinate.
/// For graph immersions the first n components are the coordinate functions.
class Immersion {
 public:
  Immersion(int n, std::vector<Expr> components, ImmersionKind kind, std::string name = {});

  int dim() const noexcept { return n_; }
  int codim() const noexcept { return static_cast<int>(components_.size()) - n_; }
  int ambient_dim() const noexcept { return static_cast<int>(components_.size()); }
  ImmersionKind kind() const noexcept { return kind_; }
  bool is_graph() const noexcept { return kind_ == ImmersionKind::Graph; }
  const std::string& name() const noexcept { return name_; }
  const std::vector<Expr>& components() const noexcept { return components_; }

  /// Height functions f^1..f^m of a graph immersion.
  std::span<const Expr> graph_functions() const;

  std::vector<double> evaluate(std::span<const double> point) const;

 private:
  int n_;
  std::vector<Expr> components_;
  ImmersionKind kind_;
  std::string name_;
};

/// Graph x -> (x, f(x)) of the given height functions.
Immersion build_graph_immersion(std::vector<Expr> f_components, int n, std::string name = {});

/// Parametric immersion from n + m component expressions.
Immersion build_parametric_immersion(std::vector<Expr> components, int n, std::string name = {});

/// The n + m ambient components of F expanded as jets at `point`.
std::vector<Jet> evaluate_immersion(const Immersion& imm, std::span<const double> point, int order);

/// Tensor-product sample grid over a box, optionally restricted by a predicate.
struct GridSpec {
  struct Axis {
    double lo = 0.0;
    double hi = 1.0;
    int count = 2;
  };
  std::vector<Axis> axes;
  std::function<bool(std::span<const double>)> mask;

  /// Throws ConfigError when counts < 2 or a range is degenerate.
  void validate() const;
  /// Sample points in row-major order (first axis outermost), after masking.
  std::vector<std::vector<double>> points() const;
  std::vector<double> center() const;
};

/// Square grid [lo, hi]^n with `count` samples per axis.
GridSpec square_grid(int n, double lo, double hi, int count);

}  // namespace mincurv
