#pragma once

// Truncated multivariate Taylor arithmetic.
//
// A Jet holds the Taylor coefficients c_a = (d^a f)(p) / a! of a scalar field around a point p,
// for every multi-index a of total degree <= order, in up to three variables. Storage is a
// dense fixed-size array laid out in graded order (degree 0, then degree 1, ...), so truncating
// to a lower order keeps a prefix of the coefficients.

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string_view>

namespace mincurv {

inline constexpr int kMaxJetDim = 3;
inline constexpr int kMaxJetOrder = 4;
inline constexpr int kMaxJetCoeffs = 35;  // C(3 + 4, 4)

/// Exponent vector of a monomial. Unspecified trailing exponents are zero.
class MultiIndex {
 public:
  MultiIndex() = default;
  MultiIndex(std::initializer_list<int> exponents);
  explicit MultiIndex(std::span<const int> exponents);

  static MultiIndex unit(int index, int dim);

  int size() const noexcept { return size_; }
  int operator[](int i) const noexcept { return exponents_[static_cast<std::size_t>(i)]; }
  int degree() const noexcept;
  /// a! = a_1! a_2! a_3!
  double factorial() const noexcept;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::array<std::uint8_t, kMaxJetDim> exponents_{};
  std::uint8_t size_ = 0;
};

/// Number of multi-indices of degree <= order in `dim` variables.
int jet_size(int dim, int order);

/// Multi-index stored at dense position `position` for the given dimension.
const MultiIndex& jet_multi_index(int dim, int position);

/// Dense position of `alpha`, or -1 when its degree exceeds kMaxJetOrder.
int jet_position(int dim, const MultiIndex& alpha);

enum class Elementary { Sin, Cos, Sinh, Cosh, Exp, Log, Sqrt, PowConst, Recip, Atan };

std::string_view to_string(Elementary fn) noexcept;

class Jet {
 public:
  Jet() = default;
  Jet(int dim, int order);

  static Jet constant(double value, int dim, int order);
  /// Coordinate function u^index expanded at u^index = value.
  static Jet variable(int index, double value, int dim, int order);

  int dim() const noexcept { return dim_; }
  int order() const noexcept { return order_; }
  int size() const noexcept { return jet_size(dim_, order_); }

  double value() const noexcept { return coeffs_[0]; }
  std::span<const double> coefficients() const noexcept {
    return {coeffs_.data(), static_cast<std::size_t>(size())};
  }
  double coefficient(const MultiIndex& alpha) const;
  void set_coefficient(const MultiIndex& alpha, double c);
  double coefficient_at(int position) const noexcept { return coeffs_[static_cast<std::size_t>(position)]; }

  /// Partial derivative d^alpha f at the expansion point (alpha! * c_alpha).
  double derivative(const MultiIndex& alpha) const;
  /// Gradient component d_i f at the expansion point.
  double gradient(int i) const;
  /// Second partial d_i d_j f at the expansion point.
  double hessian(int i, int j) const;

  Jet truncated(int order) const;
  /// Jet of d f / d u^var, one order lower.
  Jet partial(int var) const;

  bool same_shape(const Jet& other) const noexcept { return dim_ == other.dim_ && order_ == other.order_; }

  Jet operator-() const;
  Jet& operator+=(const Jet& rhs);
  Jet& operator-=(const Jet& rhs);
  Jet& operator*=(const Jet& rhs);
  Jet& operator/=(const Jet& rhs);
  Jet& operator+=(double rhs) noexcept;
  Jet& operator-=(double rhs) noexcept;
  Jet& operator*=(double rhs) noexcept;
  Jet& operator/=(double rhs);

  friend bool operator==(const Jet& a, const Jet& b) noexcept;
  friend Jet operator*(const Jet& a, const Jet& b);

 private:
  void require_same_shape(const Jet& other, const char* op) const;

  std::array<double, kMaxJetCoeffs> coeffs_{};
  std::int8_t dim_ = 1;
  std::int8_t order_ = 0;
};

Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);
Jet operator+(Jet a, double b);
Jet operator+(double a, Jet b);
Jet operator-(Jet a, double b);
Jet operator-(double a, const Jet& b);
Jet operator*(Jet a, double b);
Jet operator*(double a, Jet b);
Jet operator/(Jet a, double b);
Jet operator/(double a, const Jet& b);

/// Truncated composition fn(a). `exponent` is only used by PowConst.
Jet elementary(Elementary fn, const Jet& a, double exponent = 0.0);
/// Plain-double counterpart with the same domain checks.
double elementary(Elementary fn, double x, double exponent = 0.0);

Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet sinh(const Jet& a);
Jet cosh(const Jet& a);
Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sqrt(const Jet& a);
Jet atan(const Jet& a);
Jet recip(const Jet& a);
Jet pow(const Jet& a, double exponent);
/// Integer power by repeated squaring; negative exponents go through recip.
Jet ipow(const Jet& a, int exponent);
double ipow(double a, int exponent);

}  // namespace mincurv
