#include "mincurv/catalogue.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <complex>
#include <map>

#include "mincurv/error.hpp"

namespace mincurv {

namespace {

using nlohmann::json;

std::string number_text(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

int int_param(const json& params, const char* key, int fallback, int lo, int hi) {
  if (!params.contains(key)) return fallback;
  const json& v = params.at(key);
  if (!v.is_number_integer()) throw ConfigError(std::string("surface.params.") + key + ": expected an integer");
  const int value = v.get<int>();
  if (value < lo || value > hi)
    throw ConfigError(std::string("surface.params.") + key + ": must be in [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
  return value;
}

void reject_unknown(const json& params, std::initializer_list<const char*> known) {
  if (params.is_null()) return;
  if (!params.is_object()) throw ConfigError("surface.params: expected an object");
  for (const auto& [key, value] : params.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw ConfigError("surface.params." + key + ": unknown parameter");
  }
}

// Sum of c * x^p * y^q terms as expression text.
std::string polynomial_text(const std::map<std::pair<int, int>, double>& terms) {
  std::string out;
  // highest total degree first, then by x power
  std::vector<std::pair<std::pair<int, int>, double>> ordered(terms.begin(), terms.end());
  std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    const int da = a.first.first + a.first.second;
    const int db = b.first.first + b.first.second;
    if (da != db) return da > db;
    return a.first.first > b.first.first;
  });
  for (const auto& [powers, coeff] : ordered) {
    if (coeff == 0.0) continue;
    const auto [p, q] = powers;
    const double mag = std::abs(coeff);
    if (out.empty()) {
      if (coeff < 0) out += "-";
    } else {
      out += coeff < 0 ? " - " : " + ";
    }
    std::string monomial;
    auto append_var = [&](const char* name, int power) {
      if (power == 0) return;
      if (!monomial.empty()) monomial += "*";
      monomial += name;
      if (power > 1) monomial += "^" + std::to_string(power);
    };
    append_var("x", p);
    append_var("y", q);
    if (monomial.empty()) {
      out += number_text(mag);
    } else if (mag == 1.0) {
      out += monomial;
    } else {
      out += number_text(mag) + "*" + monomial;
    }
  }
  return out.empty() ? "0" : out;
}

std::vector<Expr> parse_all(std::initializer_list<const char*> texts, int dim) {
  std::vector<Expr> out;
  for (const char* t : texts) out.push_back(parse_expression(t, dim));
  return out;
}

void pad(std::vector<Expr>& components, int count) {
  for (int k = 0; k < count; ++k) components.push_back(Expr::constant(0.0));
}

Immersion affine(const json& params) {
  reject_unknown(params, {"n", "m", "matrix", "offset"});
  const int n = int_param(params, "n", 2, 1, 3);
  const int m = int_param(params, "m", 2, 1, 16);
  std::vector<Expr> f;
  for (int a = 0; a < m; ++a) {
    auto coeff = [&](int i) -> double {
      if (!params.contains("matrix")) return 0.0;
      const json& mat = params.at("matrix");
      if (!mat.is_array() || static_cast<int>(mat.size()) != m)
        throw ConfigError("surface.params.matrix: expected " + std::to_string(m) + " rows");
      const json& row = mat.at(static_cast<std::size_t>(a));
      if (!row.is_array() || static_cast<int>(row.size()) != n)
        throw ConfigError("surface.params.matrix[" + std::to_string(a) + "]: expected " + std::to_string(n) + " entries");
      if (!row.at(static_cast<std::size_t>(i)).is_number())
        throw ConfigError("surface.params.matrix[" + std::to_string(a) + "]: expected numbers");
      return row.at(static_cast<std::size_t>(i)).get<double>();
    };
    double offset = 0.0;
    if (params.contains("offset")) {
      const json& off = params.at("offset");
      if (!off.is_array() || static_cast<int>(off.size()) != m || !off.at(static_cast<std::size_t>(a)).is_number())
        throw ConfigError("surface.params.offset: expected " + std::to_string(m) + " numbers");
      offset = off.at(static_cast<std::size_t>(a)).get<double>();
    }
    Expr e = Expr::constant(offset);
    bool started = offset != 0.0;
    for (int i = 0; i < n; ++i) {
      const double c = coeff(i);
      if (c == 0.0) continue;
      Expr term = c == 1.0 ? Expr::variable(i) : Expr::constant(c) * Expr::variable(i);
      e = started ? e + term : term;
      started = true;
    }
    f.push_back(started ? e : Expr::constant(0.0));
  }
  return build_graph_immersion(std::move(f), n, "affine");
}

Immersion holo_curve(const json& params) {
  reject_unknown(params, {"coeffs", "conjugate"});
  if (!params.contains("coeffs") || !params.at("coeffs").is_array() || params.at("coeffs").empty())
    throw ConfigError("surface.params.coeffs: expected a non-empty array of polynomial coefficients");
  const bool conjugate = params.value("conjugate", false);
  const json& coeffs = params.at("coeffs");
  if (coeffs.size() > 12) throw ConfigError("surface.params.coeffs: degree above 11 not supported");
  std::map<std::pair<int, int>, double> re_terms;
  std::map<std::pair<int, int>, double> im_terms;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    const json& c = coeffs[k];
    std::complex<double> ck;
    if (c.is_number()) {
      ck = c.get<double>();
    } else if (c.is_array() && c.size() == 2 && c[0].is_number() && c[1].is_number()) {
      ck = {c[0].get<double>(), c[1].get<double>()};
    } else {
      throw ConfigError("surface.params.coeffs[" + std::to_string(k) + "]: expected a number or [re, im]");
    }
    if (ck == 0.0) continue;
    // z^k = sum_j C(k, j) x^(k-j) (i y)^j
    double binom = 1.0;
    for (std::size_t j = 0; j <= k; ++j) {
      if (j > 0) binom = binom * static_cast<double>(k - j + 1) / static_cast<double>(j);
      static constexpr std::array<std::complex<double>, 4> ipow{{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};
      std::complex<double> term = ck * binom * ipow[j % 4];
      if (conjugate && j % 2 == 1) term = ck * binom * -ipow[j % 4];
      const std::pair<int, int> powers{static_cast<int>(k - j), static_cast<int>(j)};
      re_terms[powers] += term.real();
      im_terms[powers] += term.imag();
    }
  }
  std::vector<Expr> f{parse_expression(polynomial_text(re_terms), 2), parse_expression(polynomial_text(im_terms), 2)};
  return build_graph_immersion(std::move(f), 2, conjugate ? "anti-holo-curve" : "holo-curve");
}

Immersion padded_surface(const json& params, const char* name, std::initializer_list<const char*> texts) {
  reject_unknown(params, {"m"});
  const int m = int_param(params, "m", 2, 1, 16);
  std::vector<Expr> comps = parse_all(texts, 2);
  pad(comps, m - 1);
  return build_parametric_immersion(std::move(comps), 2, name);
}

Immersion cylinder_over(const json& params) {
  reject_unknown(params, {"base", "base_params"});
  if (!params.contains("base") || !params.at("base").is_string())
    throw ConfigError("surface.params.base: expected the name of a two-dimensional catalogue surface");
  const std::string base_name = params.at("base").get<std::string>();
  if (base_name == "cylinder-over") throw ConfigError("surface.params.base: cylinder-over cannot be nested");
  const Immersion base = catalogue_lookup(base_name, params.value("base_params", json::object()));
  if (base.dim() != 2) throw ConfigError("surface.params.base: base surface must be two-dimensional");
  std::vector<Expr> comps;
  if (base.is_graph()) {
    // keep graph form: (x, y, z, f(x, y))
    comps = {Expr::variable(0), Expr::variable(1), Expr::variable(2)};
    for (const auto& f : base.graph_functions()) comps.push_back(f);
    return Immersion(3, std::move(comps), ImmersionKind::Graph, "cylinder-over-" + base_name);
  }
  comps = base.components();
  comps.push_back(Expr::variable(2));
  return Immersion(3, std::move(comps), ImmersionKind::Parametric, "cylinder-over-" + base_name);
}

}  // namespace

const std::vector<CatalogueEntry>& catalogue_entries() {
  static const std::vector<CatalogueEntry> entries{
      {"affine", "graph of an affine map R^n -> R^m", "n (2), m (2), matrix (m x n), offset (m)"},
      {"holo-curve", "graph of a complex polynomial f(z) in R^4", "coeffs [c0, c1, ...] (real or [re, im]), conjugate"},
      {"catenoid", "(cosh u cos v, cosh u sin v, u), zero-padded", "m (2)"},
      {"helicoid", "(sinh u sin v, -sinh u cos v, v), zero-padded", "m (2)"},
      {"enneper", "Enneper's surface, zero-padded", "m (2)"},
      {"cylinder-over", "two-dimensional base surface times a line (n = 3)", "base, base_params"},
  };
  return entries;
}

Immersion catalogue_lookup(std::string_view name, const json& raw_params) {
  const json params = raw_params.is_null() ? json::object() : raw_params;
  if (name == "affine") return affine(params);
  if (name == "holo-curve") return holo_curve(params);
  if (name == "catenoid")
    return padded_surface(params, "catenoid", {"cosh(u)*cos(v)", "cosh(u)*sin(v)", "u"});
  if (name == "helicoid")
    return padded_surface(params, "helicoid", {"sinh(u)*sin(v)", "-sinh(u)*cos(v)", "v"});
  if (name == "enneper")
    return padded_surface(params, "enneper", {"u - u^3/3 + u*v^2", "-v + v^3/3 - u^2*v", "u^2 - v^2"});
  if (name == "cylinder-over") return cylinder_over(params);
  throw ConfigError("surface.name: unknown catalogue surface '" + std::string(name) + "'");
}

}  // namespace mincurv
