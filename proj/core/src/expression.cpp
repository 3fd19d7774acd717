#include "mincurv/expression.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <utility>

#include "mincurv/error.hpp"

namespace mincurv {

namespace {

NodePtr make_node(ExprNode node) { return std::make_shared<const ExprNode>(std::move(node)); }

NodePtr binary(NodeKind kind, NodePtr lhs, NodePtr rhs) {
  ExprNode n;
  n.kind = kind;
  n.lhs = std::move(lhs);
  n.rhs = std::move(rhs);
  return make_node(std::move(n));
}

struct FunctionName {
  std::string_view name;
  Elementary fn;
};

constexpr std::array<FunctionName, 8> kFunctions{{
    {"sin", Elementary::Sin},
    {"cos", Elementary::Cos},
    {"sinh", Elementary::Sinh},
    {"cosh", Elementary::Cosh},
    {"exp", Elementary::Exp},
    {"log", Elementary::Log},
    {"sqrt", Elementary::Sqrt},
    {"atan", Elementary::Atan},
}};

struct VariableName {
  std::string_view name;
  int index;
};

constexpr std::array<VariableName, 9> kVariables{{
    {"x", 0}, {"y", 1}, {"z", 2}, {"u1", 0}, {"u2", 1}, {"u3", 2}, {"u", 0}, {"v", 1}, {"w", 2},
}};

class Parser {
 public:
  Parser(std::string_view text, int dim) : text_(text), dim_(dim) {}

  Expr parse() {
    NodePtr root = expr();
    skip_space();
    if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return Expr(root);
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { throw ParseError("syntax error: " + message, pos_ + 1); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) fail(std::string("expected '") + c + "' before end of input");
      fail(std::string("expected '") + c + "'");
    }
  }

  NodePtr expr() {
    NodePtr lhs = term();
    while (true) {
      if (accept('+'))
        lhs = binary(NodeKind::Add, lhs, term());
      else if (accept('-'))
        lhs = binary(NodeKind::Subtract, lhs, term());
      else
        return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = factor();
    while (true) {
      if (accept('*'))
        lhs = binary(NodeKind::Multiply, lhs, factor());
      else if (accept('/'))
        lhs = binary(NodeKind::Divide, lhs, factor());
      else
        return lhs;
    }
  }

  NodePtr factor() {
    NodePtr b = base();
    if (!accept('^')) return b;
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer exponent");
    int exponent = 0;
    const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, exponent);
    if (ec != std::errc() || exponent > 1000) {
      pos_ = start;
      fail("exponent out of range");
    }
    ExprNode n;
    n.kind = NodeKind::Power;
    n.exponent = exponent;
    n.lhs = std::move(b);
    return make_node(std::move(n));
  }

  NodePtr base() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '-') {
      ++pos_;
      ExprNode n;
      n.kind = NodeKind::Negate;
      n.lhs = base();
      return make_node(std::move(n));
    }
    if (c == '(') {
      ++pos_;
      NodePtr inner = expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
        pos_ = look;
        digits();
      }
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc() || ptr != text_.data() + pos_) {
      pos_ = start;
      fail("malformed number");
    }
    ExprNode n;
    n.kind = NodeKind::Constant;
    n.value = value;
    return make_node(std::move(n));
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);

    for (const auto& f : kFunctions) {
      if (f.name != name) continue;
      if (!accept('(')) throw ParseError("arity error: function '" + std::string(name) + "' expects one argument", pos_ + 1);
      NodePtr arg = expr();
      skip_space();
      if (pos_ < text_.size() && text_[pos_] == ',')
        throw ParseError("arity error: function '" + std::string(name) + "' expects one argument", pos_ + 1);
      expect(')');
      ExprNode n;
      n.kind = NodeKind::Call;
      n.function = f.fn;
      n.lhs = std::move(arg);
      return make_node(std::move(n));
    }
    for (const auto& v : kVariables) {
      if (v.name != name) continue;
      if (v.index >= dim_)
        throw ParseError("unknown identifier '" + std::string(name) + "' (variable index " + std::to_string(v.index + 1) +
                             " exceeds dimension " + std::to_string(dim_) + ")",
                         start + 1);
      const std::size_t after = pos_;
      skip_space();
      if (pos_ < text_.size() && text_[pos_] == '(')
        throw ParseError("arity error: variable '" + std::string(name) + "' is not a function", pos_ + 1);
      pos_ = after;
      ExprNode n;
      n.kind = NodeKind::Variable;
      n.variable = v.index;
      return make_node(std::move(n));
    }
    throw ParseError("unknown identifier '" + std::string(name) + "'", start + 1);
  }

  std::string_view text_;
  int dim_;
  std::size_t pos_ = 0;
};

template <class T, class MakeConstant>
T evaluate_node(const ExprNode& n, std::span<const T> vars, const MakeConstant& make_constant) {
  switch (n.kind) {
    case NodeKind::Constant:
      return make_constant(n.value);
    case NodeKind::Variable:
      if (static_cast<std::size_t>(n.variable) >= vars.size())
        throw ShapeError("expression references variable " + std::to_string(n.variable + 1) + " but only " +
                         std::to_string(vars.size()) + " supplied");
      return vars[static_cast<std::size_t>(n.variable)];
    case NodeKind::Call:
      return elementary(n.function, evaluate_node(*n.lhs, vars, make_constant));
    case NodeKind::Negate:
      return -evaluate_node(*n.lhs, vars, make_constant);
    case NodeKind::Add:
      return evaluate_node(*n.lhs, vars, make_constant) + evaluate_node(*n.rhs, vars, make_constant);
    case NodeKind::Subtract:
      return evaluate_node(*n.lhs, vars, make_constant) - evaluate_node(*n.rhs, vars, make_constant);
    case NodeKind::Multiply:
      return evaluate_node(*n.lhs, vars, make_constant) * evaluate_node(*n.rhs, vars, make_constant);
    case NodeKind::Divide: {
      T numerator = evaluate_node(*n.lhs, vars, make_constant);
      T denominator = evaluate_node(*n.rhs, vars, make_constant);
      if constexpr (std::is_same_v<T, double>) {
        if (denominator == 0.0) throw SingularInputError("division by zero");
        return numerator / denominator;
      } else {
        return numerator * recip(denominator);
      }
    }
    case NodeKind::Power:
      return ipow(evaluate_node(*n.lhs, vars, make_constant), n.exponent);
  }
  throw Error("corrupt expression node");
}

int precedence(NodeKind kind) {
  switch (kind) {
    case NodeKind::Add:
    case NodeKind::Subtract: return 1;
    case NodeKind::Multiply:
    case NodeKind::Divide: return 2;
    case NodeKind::Power: return 3;
    default: return 4;
  }
}

std::string format_number(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

void print(const ExprNode& n, int min_prec, std::string& out) {
  const bool parens = precedence(n.kind) < min_prec;
  if (parens) out += '(';
  switch (n.kind) {
    case NodeKind::Constant:
      if (n.value < 0 || std::signbit(n.value)) {
        out += "(-" + format_number(-n.value) + ")";
      } else {
        out += format_number(n.value);
      }
      break;
    case NodeKind::Variable:
      out += variable_name(n.variable);
      break;
    case NodeKind::Call:
      out += to_string(n.function);
      out += '(';
      print(*n.lhs, 0, out);
      out += ')';
      break;
    case NodeKind::Negate:
      out += '-';
      print(*n.lhs, 4, out);
      break;
    case NodeKind::Add:
    case NodeKind::Subtract:
      print(*n.lhs, 1, out);
      out += n.kind == NodeKind::Add ? " + " : " - ";
      print(*n.rhs, 2, out);
      break;
    case NodeKind::Multiply:
    case NodeKind::Divide:
      print(*n.lhs, 2, out);
      out += n.kind == NodeKind::Multiply ? "*" : "/";
      print(*n.rhs, 3, out);
      break;
    case NodeKind::Power:
      print(*n.lhs, 4, out);
      out += '^';
      out += std::to_string(n.exponent);
      break;
  }
  if (parens) out += ')';
}

bool equal_nodes(const ExprNode& a, const ExprNode& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case NodeKind::Constant: return a.value == b.value;
    case NodeKind::Variable: return a.variable == b.variable;
    case NodeKind::Call: return a.function == b.function && equal_nodes(*a.lhs, *b.lhs);
    case NodeKind::Negate: return equal_nodes(*a.lhs, *b.lhs);
    case NodeKind::Power: return a.exponent == b.exponent && equal_nodes(*a.lhs, *b.lhs);
    default: return equal_nodes(*a.lhs, *b.lhs) && equal_nodes(*a.rhs, *b.rhs);
  }
}

int max_variable_of(const ExprNode& n) {
  int m = n.kind == NodeKind::Variable ? n.variable : -1;
  if (n.lhs) m = std::max(m, max_variable_of(*n.lhs));
  if (n.rhs) m = std::max(m, max_variable_of(*n.rhs));
  return m;
}

}  // namespace

std::string_view variable_name(int index) {
  static constexpr std::array<std::string_view, 3> names{"x", "y", "z"};
  if (index < 0 || index >= 3) throw ShapeError("variable index out of range");
  return names[static_cast<std::size_t>(index)];
}

Expr Expr::constant(double value) {
  ExprNode n;
  n.kind = NodeKind::Constant;
  n.value = value;
  return Expr(make_node(std::move(n)));
}

Expr Expr::variable(int index) {
  if (index < 0 || index >= kMaxJetDim) throw ShapeError("variable index out of range");
  ExprNode n;
  n.kind = NodeKind::Variable;
  n.variable = index;
  return Expr(make_node(std::move(n)));
}

Expr Expr::call(Elementary fn, const Expr& arg) {
  if (fn == Elementary::PowConst || fn == Elementary::Recip)
    throw ShapeError("function not expressible in the expression language");
  ExprNode n;
  n.kind = NodeKind::Call;
  n.function = fn;
  n.lhs = arg.root_;
  return Expr(make_node(std::move(n)));
}

Expr Expr::power(const Expr& base, int exponent) {
  if (exponent < 0) throw ShapeError("negative exponent");
  ExprNode n;
  n.kind = NodeKind::Power;
  n.exponent = exponent;
  n.lhs = base.root_;
  return Expr(make_node(std::move(n)));
}

Expr operator+(const Expr& a, const Expr& b) { return Expr(binary(NodeKind::Add, a.root_, b.root_)); }
Expr operator-(const Expr& a, const Expr& b) { return Expr(binary(NodeKind::Subtract, a.root_, b.root_)); }
Expr operator*(const Expr& a, const Expr& b) { return Expr(binary(NodeKind::Multiply, a.root_, b.root_)); }
Expr operator/(const Expr& a, const Expr& b) { return Expr(binary(NodeKind::Divide, a.root_, b.root_)); }
Expr operator-(const Expr& a) {
  ExprNode n;
  n.kind = NodeKind::Negate;
  n.lhs = a.root_;
  return Expr(make_node(std::move(n)));
}

bool operator==(const Expr& a, const Expr& b) {
  if (!a.root_ || !b.root_) return !a.root_ && !b.root_;
  return equal_nodes(*a.root_, *b.root_);
}

int Expr::max_variable() const { return root_ ? max_variable_of(*root_) : -1; }

double Expr::evaluate(std::span<const double> point) const {
  return evaluate_node<double>(*root_, point, [](double v) { return v; });
}

Jet Expr::evaluate(std::span<const Jet> variables) const {
  if (variables.empty()) throw ShapeError("jet evaluation needs at least one variable");
  const int dim = variables.front().dim();
  const int order = variables.front().order();
  return evaluate_node<Jet>(*root_, variables, [dim, order](double v) { return Jet::constant(v, dim, order); });
}

std::string Expr::to_string() const {
  std::string out;
  if (root_) print(*root_, 0, out);
  return out;
}

Expr parse_expression(std::string_view text, int dim) {
  if (dim < 1 || dim > kMaxJetDim) throw ShapeError("expression dimension must be 1..3");
  return Parser(text, dim).parse();
}

}  // namespace mincurv
