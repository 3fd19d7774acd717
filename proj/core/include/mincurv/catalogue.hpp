#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mincurv/immersion.hpp"

namespace mincurv {

struct CatalogueEntry {
  std::string name;
  std::string description;
  std::string params;  // human-readable parameter summary
};

const std::vector<CatalogueEntry>& catalogue_entries();

/// Builds a named surface. Throws ConfigError on unknown names or bad params.
///
///   affine         {n, m, matrix (m x n), offset (m)}      graph of an affine map
///   holo-curve     {coeffs: [c0, c1, ...], conjugate}      graph of a complex polynomial in R^4
///   catenoid       {m}                                     (cosh u cos v, cosh u sin v, u) padded to codim m
///   helicoid       {m}                                     (sinh u sin v, -sinh u cos v, v) padded
///   enneper        {m}                                     Enneper's surface padded
///   cylinder-over  {base, base_params}                     base surface times a line
///
/// Complex coefficients are written [re, im].
Immersion catalogue_lookup(std::string_view name, const nlohmann::json& params = nlohmann::json::object());

}  // namespace mincurv
