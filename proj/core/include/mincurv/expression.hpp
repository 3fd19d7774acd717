#pragma once

// Expression language for immersion components.
//
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := base ('^' integer)?
//   base   := number | ident | ident '(' expr ')' | '(' expr ')' | '-' base
//
// Variables: x, y, z or u1, u2, u3 (also u, v, w). Functions: sin cos sinh cosh exp log sqrt atan.

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mincurv/jet.hpp"

namespace mincurv {

enum class NodeKind { Constant, Variable, Call, Negate, Add, Subtract, Multiply, Divide, Power };

struct ExprNode;
using NodePtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  NodeKind kind = NodeKind::Constant;
  double value = 0.0;                      // Constant
  int variable = 0;                        // Variable
  Elementary function = Elementary::Sin;   // Call
  int exponent = 0;                        // Power
  NodePtr lhs;                             // operand of Call/Negate/Power, left operand of binaries
  NodePtr rhs;
};

/// Immutable expression tree. Copies share nodes.
class Expr {
 public:
  Expr() = default;
  explicit Expr(NodePtr root) : root_(std::move(root)) {}

  static Expr constant(double value);
  static Expr variable(int index);
  static Expr call(Elementary fn, const Expr& arg);
  static Expr power(const Expr& base, int exponent);

  const ExprNode& root() const { return *root_; }
  bool empty() const noexcept { return !root_; }

  /// Largest variable index referenced, or -1 for a constant expression.
  int max_variable() const;

  double evaluate(std::span<const double> point) const;
  Jet evaluate(std::span<const Jet> variables) const;

  /// Canonical text with minimal parentheses; parses back to an identical tree.
  std::string to_string() const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);

  /// Structural equality.
  friend bool operator==(const Expr& a, const Expr& b);

 private:
  NodePtr root_;
};

/// Parses `text`, accepting variables with index < dim. Throws ParseError.
Expr parse_expression(std::string_view text, int dim);

/// Canonical variable name for index 0..2 ("x", "y", "z").
std::string_view variable_name(int index);

}  // namespace mincurv
