#include <cmath>

#include "mincurv/error.hpp"
#include "mincurv/geometry.hpp"
#include "surface_jets.hpp"

namespace mincurv {

std::string_view to_string(Field f) noexcept {
  switch (f) {
    case Field::W: return "w";
    case Field::LogW: return "logw";
    case Field::V: return "v";
    case Field::NormB2: return "normB2";
    case Field::NormB: return "normB";
  }
  return "?";
}

std::optional<Field> field_from_string(std::string_view name) noexcept {
  for (Field f : {Field::W, Field::LogW, Field::V, Field::NormB2, Field::NormB})
    if (to_string(f) == name) return f;
  return std::nullopt;
}

FieldJets field_jets(const Immersion& imm, std::span<const double> point, int order,
                     const Eigen::MatrixXd* reference_frame) {
  if (order < 0 || order > 2) throw ShapeError("scalar field jets support order 0..2");
  const detail::SurfaceJets s = detail::surface_jets(imm, point, order);
  const int n = s.n;
  const auto un = static_cast<std::size_t>(n);
  FieldJets out;
  out.volume_element = std::sqrt(s.det_g.value());

  // |B|^2 = g^{ik} g^{jl} <B_ij, B_kl>
  std::vector<Jet> S(un * un * un * un);
  auto at = [n](int i, int j, int k, int l) { return static_cast<std::size_t>(((i * n + j) * n + k) * n + l); };
  for (int p = 0; p < n * n; ++p)
    for (int q = p; q < n * n; ++q) {
      const Jet d = detail::dot(s.B[static_cast<std::size_t>(p)], s.B[static_cast<std::size_t>(q)]);
      S[at(p / n, p % n, q / n, q % n)] = d;
      S[at(q / n, q % n, p / n, p % n)] = d;
    }
  Jet normB2(n, order);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          normB2 += s.g_inv[static_cast<std::size_t>(i * n + k)] * s.g_inv[static_cast<std::size_t>(j * n + l)] * S[at(i, j, k, l)];
  out.normB2 = normB2;

  if (reference_frame) {
    validate_reference_frame(*reference_frame, n, s.ambient);
    std::vector<Jet> W(un * un, Jet(n, order));
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Jet acc(n, order);
        for (int A = 0; A < s.ambient; ++A) {
          const double a = (*reference_frame)(k, A);
          if (a != 0.0) acc += s.F_i(j)[static_cast<std::size_t>(A)].truncated(order) * a;
        }
        W[static_cast<std::size_t>(j * n + k)] = acc;
      }
    out.w = detail::determinant(W, n) / sqrt(s.det_g);
  }
  return out;
}

Jet scalar_field_jet(const Immersion& imm, std::span<const double> point, Field field, int order,
                     const Eigen::MatrixXd* reference_frame) {
  const bool needs_frame = field == Field::W || field == Field::LogW || field == Field::V;
  if (needs_frame && !reference_frame)
    throw HypothesisError(std::string("field '") + std::string(to_string(field)) + "' needs a reference frame");
  const FieldJets fj = field_jets(imm, point, order, needs_frame ? reference_frame : nullptr);
  switch (field) {
    case Field::W: return fj.w;
    case Field::LogW:
      if (!(fj.w.value() > 0.0)) throw SingularInputError("log w needs w > 0");
      return log(fj.w);
    case Field::V:
      if (fj.w.value() == 0.0) throw SingularInputError("v = 1/w needs w != 0");
      return recip(fj.w);
    case Field::NormB2: return fj.normB2;
    case Field::NormB:
      if (!(fj.normB2.value() > 0.0)) throw SingularInputError("|B| is not differentiable where B = 0");
      return sqrt(fj.normB2);
  }
  throw ShapeError("unknown field");
}

double laplace_beltrami(const PointGeometry& pg, const Jet& phi) {
  if (phi.dim() != pg.n || phi.order() < 2) throw ShapeError("Laplace-Beltrami needs a jet of order >= 2 in n variables");
  double out = 0.0;
  for (int i = 0; i < pg.n; ++i)
    for (int j = 0; j < pg.n; ++j) {
      double t = phi.hessian(i, j);
      for (int k = 0; k < pg.n; ++k) t -= pg.gamma(k, i, j) * phi.gradient(k);
      out += pg.g_inv(i, j) * t;
    }
  return out;
}

double laplace_beltrami(const Immersion& imm, std::span<const double> point, Field field,
                        const Eigen::MatrixXd* reference_frame) {
  const PointGeometry pg = point_geometry_at(imm, point);
  return laplace_beltrami(pg, scalar_field_jet(imm, point, field, 2, reference_frame));
}

double gradient_norm2(const PointGeometry& pg, const Jet& phi) {
  if (phi.dim() != pg.n || phi.order() < 1) throw ShapeError("gradient needs a jet of order >= 1 in n variables");
  double out = 0.0;
  for (int i = 0; i < pg.n; ++i)
    for (int j = 0; j < pg.n; ++j) out += pg.g_inv(i, j) * phi.gradient(i) * phi.gradient(j);
  return out;
}

}  // namespace mincurv
