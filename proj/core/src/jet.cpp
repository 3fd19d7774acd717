#include "mincurv/jet.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "mincurv/error.hpp"

namespace mincurv {

namespace {

struct ProductTerm {
  std::uint8_t lhs;
  std::uint8_t rhs;
  std::uint8_t out;
};

struct Layout {
  std::array<std::vector<MultiIndex>, kMaxJetDim + 1> indices;
  // position[dim][a0][a1][a2]
  std::array<std::array<std::array<std::array<std::int8_t, 5>, 5>, 5>, kMaxJetDim + 1> position{};
  std::array<std::array<std::vector<ProductTerm>, kMaxJetOrder + 1>, kMaxJetDim + 1> products;
  std::array<std::array<int, kMaxJetOrder + 1>, kMaxJetDim + 1> sizes{};

  Layout() {
    for (int dim = 1; dim <= kMaxJetDim; ++dim) {
      for (auto& a : position[static_cast<std::size_t>(dim)])
        for (auto& b : a) b.fill(-1);
      auto& list = indices[static_cast<std::size_t>(dim)];
      for (int deg = 0; deg <= kMaxJetOrder; ++deg) {
        // first exponent descending, then second, ...
        for (int a0 = deg; a0 >= 0; --a0) {
          if (dim == 1) {
            if (a0 == deg) list.push_back(MultiIndex{a0});
            continue;
          }
          for (int a1 = deg - a0; a1 >= 0; --a1) {
            if (dim == 2) {
              if (a0 + a1 == deg) list.push_back(MultiIndex{a0, a1});
              continue;
            }
            list.push_back(MultiIndex{a0, a1, deg - a0 - a1});
          }
        }
        sizes[static_cast<std::size_t>(dim)][static_cast<std::size_t>(deg)] = static_cast<int>(list.size());
      }
      for (std::size_t p = 0; p < list.size(); ++p) {
        const auto& m = list[p];
        position[static_cast<std::size_t>(dim)][static_cast<std::size_t>(m[0])]
                [static_cast<std::size_t>(dim > 1 ? m[1] : 0)]
                [static_cast<std::size_t>(dim > 2 ? m[2] : 0)] = static_cast<std::int8_t>(p);
      }
      for (int order = 0; order <= kMaxJetOrder; ++order) {
        auto& terms = products[static_cast<std::size_t>(dim)][static_cast<std::size_t>(order)];
        const int n = sizes[static_cast<std::size_t>(dim)][static_cast<std::size_t>(order)];
        for (int i = 0; i < n; ++i) {
          for (int j = 0; j < n; ++j) {
            const auto& a = list[static_cast<std::size_t>(i)];
            const auto& b = list[static_cast<std::size_t>(j)];
            if (a.degree() + b.degree() > order) continue;
            std::array<int, kMaxJetDim> sum{};
            for (int k = 0; k < dim; ++k) sum[static_cast<std::size_t>(k)] = a[k] + b[k];
            const int out = position[static_cast<std::size_t>(dim)][static_cast<std::size_t>(sum[0])]
                                    [static_cast<std::size_t>(sum[1])][static_cast<std::size_t>(sum[2])];
            terms.push_back({static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(j),
                             static_cast<std::uint8_t>(out)});
          }
        }
      }
    }
  }
};

const Layout& layout() {
  static const Layout instance;
  return instance;
}

void check_shape(int dim, int order) {
  if (dim < 1 || dim > kMaxJetDim)
    throw ShapeError("jet dimension " + std::to_string(dim) + " outside 1.." + std::to_string(kMaxJetDim));
  if (order < 0 || order > kMaxJetOrder)
    throw ShapeError("jet order " + std::to_string(order) + " outside 0.." + std::to_string(kMaxJetOrder));
}

// Univariate Taylor coefficients s_0..s_order of fn around x0.
std::array<double, kMaxJetOrder + 1> series(Elementary fn, double x0, int order, double p) {
  std::array<double, kMaxJetOrder + 1> s{};
  auto singular = [&](const char* what) {
    throw SingularInputError(std::string(what) + " at " + std::to_string(x0));
  };
  switch (fn) {
    case Elementary::Exp: {
      double term = std::exp(x0);
      for (int n = 0; n <= order; ++n) {
        s[static_cast<std::size_t>(n)] = term;
        term /= (n + 1);
      }
      break;
    }
    case Elementary::Log: {
      if (!(x0 > 0.0)) singular("log of non-positive value");
      s[0] = std::log(x0);
      double inv = 1.0;
      for (int n = 1; n <= order; ++n) {
        inv /= x0;
        s[static_cast<std::size_t>(n)] = ((n % 2 == 1) ? 1.0 : -1.0) * inv / n;
      }
      break;
    }
    case Elementary::Sin:
    case Elementary::Cos: {
      const double sv = std::sin(x0);
      const double cv = std::cos(x0);
      // derivative cycle of sin: sin, cos, -sin, -cos
      const std::array<double, 4> cycle =
          fn == Elementary::Sin ? std::array<double, 4>{sv, cv, -sv, -cv} : std::array<double, 4>{cv, -sv, -cv, sv};
      double fact = 1.0;
      for (int n = 0; n <= order; ++n) {
        if (n > 0) fact *= n;
        s[static_cast<std::size_t>(n)] = cycle[static_cast<std::size_t>(n % 4)] / fact;
      }
      break;
    }
    case Elementary::Sinh:
    case Elementary::Cosh: {
      const double sh = std::sinh(x0);
      const double ch = std::cosh(x0);
      double fact = 1.0;
      for (int n = 0; n <= order; ++n) {
        if (n > 0) fact *= n;
        const bool even = n % 2 == 0;
        const double d = (fn == Elementary::Sinh) == even ? sh : ch;
        s[static_cast<std::size_t>(n)] = d / fact;
      }
      break;
    }
    case Elementary::Recip: {
      if (x0 == 0.0) singular("reciprocal of zero");
      double inv = 1.0 / x0;
      double term = inv;
      for (int n = 0; n <= order; ++n) {
        s[static_cast<std::size_t>(n)] = term;
        term *= -inv;
      }
      break;
    }
    case Elementary::Sqrt:
      p = 0.5;
      if (x0 < 0.0 || (x0 == 0.0 && order > 0)) singular("sqrt of non-positive value");
      [[fallthrough]];
    case Elementary::PowConst: {
      const bool integral = std::nearbyint(p) == p;
      if (!integral && (x0 < 0.0 || (x0 == 0.0 && order > 0)))
        singular("non-integer power of non-positive value");
      if (integral && x0 == 0.0 && p < 0.0) singular("negative power of zero");
      // s_n = binom(p, n) x0^(p - n)
      double binom = 1.0;
      for (int n = 0; n <= order; ++n) {
        if (n > 0) binom *= (p - (n - 1)) / n;
        if (binom == 0.0) {
          s[static_cast<std::size_t>(n)] = 0.0;
          continue;
        }
        s[static_cast<std::size_t>(n)] =
            binom * (integral ? ipow(x0, static_cast<int>(p) - n) : std::pow(x0, p - n));
      }
      break;
    }
    case Elementary::Atan: {
      // r = 1/(1+x^2) around x0: (1+x0^2) r_n + 2 x0 r_{n-1} + r_{n-2} = [n == 0]
      std::array<double, kMaxJetOrder + 1> r{};
      const double q = 1.0 + x0 * x0;
      for (int n = 0; n < order; ++n) {
        double rhs = n == 0 ? 1.0 : 0.0;
        if (n >= 1) rhs -= 2.0 * x0 * r[static_cast<std::size_t>(n - 1)];
        if (n >= 2) rhs -= r[static_cast<std::size_t>(n - 2)];
        r[static_cast<std::size_t>(n)] = rhs / q;
      }
      s[0] = std::atan(x0);
      for (int n = 1; n <= order; ++n) s[static_cast<std::size_t>(n)] = r[static_cast<std::size_t>(n - 1)] / n;
      break;
    }
  }
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------------------------
// MultiIndex

MultiIndex::MultiIndex(std::initializer_list<int> exponents)
    : MultiIndex(std::span<const int>(exponents.begin(), exponents.size())) {}

MultiIndex::MultiIndex(std::span<const int> exponents) {
  if (exponents.size() > static_cast<std::size_t>(kMaxJetDim))
    throw ShapeError("multi-index longer than " + std::to_string(kMaxJetDim));
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (exponents[i] < 0 || exponents[i] > 255) throw ShapeError("multi-index exponent out of range");
    exponents_[i] = static_cast<std::uint8_t>(exponents[i]);
  }
  size_ = static_cast<std::uint8_t>(exponents.size());
}

MultiIndex MultiIndex::unit(int index, int dim) {
  std::array<int, kMaxJetDim> e{};
  e[static_cast<std::size_t>(index)] = 1;
  return MultiIndex(std::span<const int>(e.data(), static_cast<std::size_t>(dim)));
}

int MultiIndex::degree() const noexcept {
  return exponents_[0] + exponents_[1] + exponents_[2];
}

double MultiIndex::factorial() const noexcept {
  double f = 1.0;
  for (auto e : exponents_)
    for (int k = 2; k <= e; ++k) f *= k;
  return f;
}

int jet_size(int dim, int order) {
  return layout().sizes[static_cast<std::size_t>(dim)][static_cast<std::size_t>(order)];
}

const MultiIndex& jet_multi_index(int dim, int position) {
  return layout().indices[static_cast<std::size_t>(dim)][static_cast<std::size_t>(position)];
}

int jet_position(int dim, const MultiIndex& alpha) {
  if (alpha.degree() > kMaxJetOrder) return -1;
  for (int k = dim; k < alpha.size(); ++k)
    if (alpha[k] != 0) return -1;
  return layout().position[static_cast<std::size_t>(dim)][static_cast<std::size_t>(alpha[0])]
                          [static_cast<std::size_t>(alpha[1])][static_cast<std::size_t>(alpha[2])];
}

std::string_view to_string(Elementary fn) noexcept {
  switch (fn) {
    case Elementary::Sin: return "sin";
    case Elementary::Cos: return "cos";
    case Elementary::Sinh: return "sinh";
    case Elementary::Cosh: return "cosh";
    case Elementary::Exp: return "exp";
    case Elementary::Log: return "log";
    case Elementary::Sqrt: return "sqrt";
    case Elementary::PowConst: return "pow";
    case Elementary::Recip: return "recip";
    case Elementary::Atan: return "atan";
  }
  return "?";
}

// ---------------------------------------------------------------------------------------------
// Jet

Jet::Jet(int dim, int order) {
  check_shape(dim, order);
  dim_ = static_cast<std::int8_t>(dim);
  order_ = static_cast<std::int8_t>(order);
}

Jet Jet::constant(double value, int dim, int order) {
  Jet j(dim, order);
  j.coeffs_[0] = value;
  return j;
}

Jet Jet::variable(int index, double value, int dim, int order) {
  check_shape(dim, order);
  if (index < 0 || index >= dim)
    throw ShapeError("variable index " + std::to_string(index) + " out of range for dimension " +
                     std::to_string(dim));
  Jet j(dim, order);
  j.coeffs_[0] = value;
  if (order >= 1) j.coeffs_[static_cast<std::size_t>(jet_position(dim, MultiIndex::unit(index, dim)))] = 1.0;
  return j;
}

double Jet::coefficient(const MultiIndex& alpha) const {
  const int pos = jet_position(dim_, alpha);
  if (pos < 0 || alpha.degree() > order_)
    throw ShapeError("multi-index degree " + std::to_string(alpha.degree()) + " exceeds jet order " +
                     std::to_string(order_));
  return coeffs_[static_cast<std::size_t>(pos)];
}

void Jet::set_coefficient(const MultiIndex& alpha, double c) {
  const int pos = jet_position(dim_, alpha);
  if (pos < 0 || alpha.degree() > order_)
    throw ShapeError("multi-index degree " + std::to_string(alpha.degree()) + " exceeds jet order " +
                     std::to_string(order_));
  coeffs_[static_cast<std::size_t>(pos)] = c;
}

double Jet::derivative(const MultiIndex& alpha) const {
  return alpha.factorial() * coefficient(alpha);
}

double Jet::gradient(int i) const {
  return coefficient(MultiIndex::unit(i, dim_));
}

double Jet::hessian(int i, int j) const {
  std::array<int, kMaxJetDim> e{};
  e[static_cast<std::size_t>(i)] += 1;
  e[static_cast<std::size_t>(j)] += 1;
  return derivative(MultiIndex(std::span<const int>(e.data(), static_cast<std::size_t>(dim_))));
}

Jet Jet::truncated(int order) const {
  if (order > order_) throw ShapeError("cannot truncate a jet to a higher order");
  Jet out(dim_, order);
  const int n = jet_size(dim_, order);
  for (int p = 0; p < n; ++p) out.coeffs_[static_cast<std::size_t>(p)] = coeffs_[static_cast<std::size_t>(p)];
  return out;
}

Jet Jet::partial(int var) const {
  if (var < 0 || var >= dim_) throw ShapeError("partial derivative variable out of range");
  if (order_ == 0) throw ShapeError("cannot differentiate an order-0 jet");
  Jet out(dim_, order_ - 1);
  const int n = out.size();
  for (int p = 0; p < n; ++p) {
    const MultiIndex& a = jet_multi_index(dim_, p);
    std::array<int, kMaxJetDim> e{a[0], a[1], a[2]};
    e[static_cast<std::size_t>(var)] += 1;
    const int src = jet_position(dim_, MultiIndex(std::span<const int>(e.data(), static_cast<std::size_t>(dim_))));
    out.coeffs_[static_cast<std::size_t>(p)] = (a[var] + 1) * coeffs_[static_cast<std::size_t>(src)];
  }
  return out;
}

void Jet::require_same_shape(const Jet& other, const char* op) const {
  if (!same_shape(other))
    throw ShapeError(std::string("jet ") + op + ": shape mismatch (dim " + std::to_string(dim_) + " order " +
                     std::to_string(order_) + " vs dim " + std::to_string(other.dim_) + " order " +
                     std::to_string(other.order_) + ")");
}

Jet Jet::operator-() const {
  Jet out = *this;
  for (auto& c : out.coeffs_) c = -c;
  return out;
}

Jet& Jet::operator+=(const Jet& rhs) {
  require_same_shape(rhs, "sum");
  for (int p = 0, n = size(); p < n; ++p) coeffs_[static_cast<std::size_t>(p)] += rhs.coeffs_[static_cast<std::size_t>(p)];
  return *this;
}

Jet& Jet::operator-=(const Jet& rhs) {
  require_same_shape(rhs, "difference");
  for (int p = 0, n = size(); p < n; ++p) coeffs_[static_cast<std::size_t>(p)] -= rhs.coeffs_[static_cast<std::size_t>(p)];
  return *this;
}

Jet& Jet::operator*=(const Jet& rhs) {
  *this = *this * rhs;
  return *this;
}

Jet& Jet::operator/=(const Jet& rhs) {
  *this = *this * recip(rhs);
  return *this;
}

Jet& Jet::operator+=(double rhs) noexcept {
  coeffs_[0] += rhs;
  return *this;
}

Jet& Jet::operator-=(double rhs) noexcept {
  coeffs_[0] -= rhs;
  return *this;
}

Jet& Jet::operator*=(double rhs) noexcept {
  for (auto& c : coeffs_) c *= rhs;
  return *this;
}

Jet& Jet::operator/=(double rhs) {
  if (rhs == 0.0) throw SingularInputError("division of a jet by zero");
  for (auto& c : coeffs_) c /= rhs;
  return *this;
}

bool operator==(const Jet& a, const Jet& b) noexcept {
  if (!a.same_shape(b)) return false;
  const auto ca = a.coefficients();
  const auto cb = b.coefficients();
  for (std::size_t p = 0; p < ca.size(); ++p)
    if (ca[p] != cb[p]) return false;
  return true;
}

Jet operator*(const Jet& a, const Jet& b) {
  if (!a.same_shape(b))
    throw ShapeError("jet product: shape mismatch (dim " + std::to_string(a.dim()) + " order " +
                     std::to_string(a.order()) + " vs dim " + std::to_string(b.dim()) + " order " +
                     std::to_string(b.order()) + ")");
  Jet out(a.dim(), a.order());
  std::array<double, kMaxJetCoeffs> acc{};
  const auto ca = a.coefficients();
  const auto cb = b.coefficients();
  for (const ProductTerm& t : layout().products[static_cast<std::size_t>(a.dim())][static_cast<std::size_t>(a.order())])
    acc[t.out] += ca[t.lhs] * cb[t.rhs];
  const int n = out.size();
  for (int p = 0; p < n; ++p) out.coeffs_[static_cast<std::size_t>(p)] = acc[static_cast<std::size_t>(p)];
  return out;
}

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }
Jet operator/(const Jet& a, const Jet& b) { return a * recip(b); }
Jet operator+(Jet a, double b) { return a += b; }
Jet operator+(double a, Jet b) { return b += a; }
Jet operator-(Jet a, double b) { return a -= b; }
Jet operator-(double a, const Jet& b) { return (-b) += a; }
Jet operator*(Jet a, double b) { return a *= b; }
Jet operator*(double a, Jet b) { return b *= a; }
Jet operator/(Jet a, double b) { return a /= b; }
Jet operator/(double a, const Jet& b) { return recip(b) *= a; }

Jet elementary(Elementary fn, const Jet& a, double exponent) {
  const int order = a.order();
  const auto s = series(fn, a.value(), order, exponent);
  // Horner in the nilpotent part h = a - a(p).
  Jet h = a;
  h -= a.value();
  Jet result = Jet::constant(s[static_cast<std::size_t>(order)], a.dim(), order);
  for (int n = order - 1; n >= 0; --n) {
    result = result * h;
    result += s[static_cast<std::size_t>(n)];
  }
  return result;
}

double elementary(Elementary fn, double x, double exponent) {
  return series(fn, x, 0, exponent)[0];
}

Jet sin(const Jet& a) { return elementary(Elementary::Sin, a); }
Jet cos(const Jet& a) { return elementary(Elementary::Cos, a); }
Jet sinh(const Jet& a) { return elementary(Elementary::Sinh, a); }
Jet cosh(const Jet& a) { return elementary(Elementary::Cosh, a); }
Jet exp(const Jet& a) { return elementary(Elementary::Exp, a); }
Jet log(const Jet& a) { return elementary(Elementary::Log, a); }
Jet sqrt(const Jet& a) { return elementary(Elementary::Sqrt, a); }
Jet atan(const Jet& a) { return elementary(Elementary::Atan, a); }
Jet recip(const Jet& a) { return elementary(Elementary::Recip, a); }
Jet pow(const Jet& a, double exponent) { return elementary(Elementary::PowConst, a, exponent); }

Jet ipow(const Jet& a, int exponent) {
  if (exponent < 0) return recip(ipow(a, -exponent));
  Jet result = Jet::constant(1.0, a.dim(), a.order());
  Jet base = a;
  while (exponent > 0) {
    if (exponent & 1) result = result * base;
    exponent >>= 1;
    if (exponent > 0) base = base * base;
  }
  return result;
}

double ipow(double a, int exponent) {
  if (exponent < 0) {
    if (a == 0.0) throw SingularInputError("negative power of zero");
    return 1.0 / ipow(a, -exponent);
  }
  double result = 1.0;
  double base = a;
  while (exponent > 0) {
    if (exponent & 1) result *= base;
    exponent >>= 1;
    if (exponent > 0) base *= base;
  }
  return result;
}

}  // namespace mincurv
