#pragma once

// Jet-level first and second fundamental forms shared by geometry and field evaluation.

#include <span>
#include <vector>

#include "mincurv/immersion.hpp"
#include "mincurv/jet.hpp"

namespace mincurv::detail {

using JetVector = std::vector<Jet>;

struct SurfaceJets {
  int n = 0;
  int ambient = 0;
  int order = 0;                 // order of g, g_inv, gamma, B
  std::vector<JetVector> Fi;     // [i][A], order + 1
  std::vector<Jet> g_full;       // [i*n+j], order + 1
  std::vector<Jet> g;            // [i*n+j]
  std::vector<Jet> g_inv;        // [i*n+j]
  Jet det_g;
  std::vector<JetVector> Fij;    // [i*n+j][A]
  std::vector<Jet> gamma;        // Gamma^k_ij at [(k*n+i)*n+j]
  std::vector<JetVector> B;      // [i*n+j][A]

  const JetVector& F_i(int i) const { return Fi[static_cast<std::size_t>(i)]; }
  const JetVector& B_ij(int i, int j) const { return B[static_cast<std::size_t>(i * n + j)]; }
};

/// Expands F at order `order + 2` and derives the metric data and B as jets of order `order`.
/// Throws ImmersionRankError when dF is rank deficient at the point.
SurfaceJets surface_jets(const Immersion& imm, std::span<const double> point, int order);

Jet dot(const JetVector& a, const JetVector& b);
/// Determinant of a row-major n x n jet matrix, n <= 3.
Jet determinant(std::span<const Jet> m, int n);
/// Inverse of a row-major n x n jet matrix given its determinant.
std::vector<Jet> inverse(std::span<const Jet> m, int n, const Jet& det);

/// Throws ImmersionRankError unless the row-major metric values are positive definite.
void require_full_rank(std::span<const double> g, int n, std::span<const double> point);

}  // namespace mincurv::detail
