#include "mincurv/growth.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "mincurv/check_result.hpp"
#include "mincurv/error.hpp"
#include "mincurv/geometry.hpp"

namespace mincurv {

namespace {

constexpr int kCoarseCells = 32;
constexpr int kMinInsideCells = 8;
// Midpoint masking has O(h) boundary error of either sign; flags allow this much slack.
constexpr double kQuadratureSlack = 0.01;

struct Box {
  std::vector<double> lo;
  std::vector<double> hi;
};

double unit_ball_volume(int n) {
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d += (a[k] - b[k]) * (a[k] - b[k]);
  return d;
}

double volume_element(const Immersion& imm, std::span<const double> x) {
  const std::vector<Jet> F = evaluate_immersion(imm, x, 1);
  const int n = imm.dim();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
  for (const Jet& c : F)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) += c.gradient(i) * c.gradient(j);
  return std::sqrt(g.determinant());
}

// Cell centers of a box with `cells` per axis, enumerated by linear index (last axis fastest).
std::vector<double> cell_center(const Box& box, int cells, long long index, std::vector<int>* multi = nullptr) {
  const std::size_t n = box.lo.size();
  std::vector<double> x(n);
  std::vector<int> idx(n);
  for (std::size_t k = n; k-- > 0;) {
    idx[k] = static_cast<int>(index % cells);
    index /= cells;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double h = (box.hi[k] - box.lo[k]) / cells;
    x[k] = box.lo[k] + (idx[k] + 0.5) * h;
  }
  if (multi) *multi = idx;
  return x;
}

long long cell_count(int cells, std::size_t n) {
  long long total = 1;
  for (std::size_t k = 0; k < n; ++k) total *= cells;
  return total;
}

// Shrinks the search box around the set {inside(x)} by repeated coarse sampling. The cell
// holding `origin` is always kept so an Omega_R much smaller than the box is still found.
Box locate(const Box& start, const std::vector<double>& origin, const std::function<bool(const std::vector<double>&)>& inside) {
  Box box = start;
  const std::size_t n = box.lo.size();
  for (int iter = 0; iter < 16; ++iter) {
    std::vector<int> lo_idx(n, kCoarseCells);
    std::vector<int> hi_idx(n, -1);
    auto mark = [&](const std::vector<int>& idx) {
      for (std::size_t k = 0; k < n; ++k) {
        lo_idx[k] = std::min(lo_idx[k], idx[k]);
        hi_idx[k] = std::max(hi_idx[k], idx[k]);
      }
    };
    std::vector<int> oidx(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double h = (box.hi[k] - box.lo[k]) / kCoarseCells;
      oidx[k] = std::clamp(static_cast<int>(std::floor((origin[k] - box.lo[k]) / h)), 0, kCoarseCells - 1);
    }
    mark(oidx);
    const long long total = cell_count(kCoarseCells, n);
    std::vector<int> idx;
    for (long long c = 0; c < total; ++c) {
      const std::vector<double> x = cell_center(box, kCoarseCells, c, &idx);
      if (inside(x)) mark(idx);
    }
    Box next = box;
    bool shrunk = false;
    for (std::size_t k = 0; k < n; ++k) {
      const double h = (box.hi[k] - box.lo[k]) / kCoarseCells;
      next.lo[k] = box.lo[k] + std::max(0, lo_idx[k] - 1) * h;
      next.hi[k] = box.lo[k] + std::min(kCoarseCells, hi_idx[k] + 2) * h;
      if (next.hi[k] - next.lo[k] < 0.9 * (box.hi[k] - box.lo[k])) shrunk = true;
    }
    box = next;
    if (!shrunk) break;
  }
  return box;
}

struct Partial {
  double volume = 0.0;
  double max_v = 0.0;
  int inside = 0;
};

struct BallVolume {
  double volume = 0.0;
  double max_v = 0.0;
  int inside = 0;
};

BallVolume graph_ball_volume(const Immersion& imm, double R, int cells, int jobs) {
  const int n = imm.dim();
  const auto un = static_cast<std::size_t>(n);
  const std::vector<double> origin(un, 0.0);
  const std::vector<double> F0 = imm.evaluate(origin);
  auto inside = [&](const std::vector<double>& x) { return squared_distance(imm.evaluate(x), F0) <= R * R; };
  const Box box = locate(Box{std::vector<double>(un, -R), std::vector<double>(un, R)}, origin, inside);

  double cell_volume = 1.0;
  for (std::size_t k = 0; k < un; ++k) cell_volume *= (box.hi[k] - box.lo[k]) / cells;
  const long long per_slice = cell_count(cells, un - 1);
  const std::function<Partial(std::size_t)> slice = [&](std::size_t s) {
    Partial p;
    for (long long c = 0; c < per_slice; ++c) {
      const std::vector<double> x = cell_center(box, cells, static_cast<long long>(s) * per_slice + c);
      if (!inside(x)) continue;
      const double v = volume_element(imm, x);
      p.volume += v * cell_volume;
      p.max_v = std::max(p.max_v, v);
      ++p.inside;
    }
    return p;
  };
  const std::vector<Partial> parts = parallel_map<Partial>(static_cast<std::size_t>(cells), jobs, slice);
  BallVolume out;
  out.max_v = volume_element(imm, origin);
  for (const Partial& p : parts) {
    out.volume += p.volume;
    out.max_v = std::max(out.max_v, p.max_v);
    out.inside += p.inside;
  }
  if (out.inside < kMinInsideCells)
    throw HypothesisError("quadrature too coarse: only " + std::to_string(out.inside) + " cells inside Omega_R for R = " +
                          std::to_string(R));
  return out;
}

std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() < 2) return std::nullopt;
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += std::log(x[k]);
    my += std::log(y[k]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxy += (std::log(x[k]) - mx) * (std::log(y[k]) - my);
    sxx += (std::log(x[k]) - mx) * (std::log(x[k]) - mx);
  }
  return sxy / sxx;
}

}  // namespace

GrowthTable growth_table(const Immersion& graph, std::span<const double> radii, const GrowthOptions& options) {
  if (!graph.is_graph()) throw HypothesisError("growth table needs a graph immersion");
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (!(radii[k] > 0.0) || !std::isfinite(radii[k])) throw ConfigError("radii[" + std::to_string(k) + "]: must be positive");
    if (k > 0 && !(radii[k] > radii[k - 1])) throw ConfigError("radii: must be strictly increasing");
  }
  const int n = graph.dim();
  const int cells = options.cells > 0 ? options.cells : (n == 2 ? 256 : 48);
  if (cells < 4) throw ConfigError("cells: must be >= 4");

  GrowthTable table;
  std::vector<double> Rs;
  std::vector<double> Vs;
  std::vector<double> Ms;
  for (const double R : radii) {
    const BallVolume full = graph_ball_volume(graph, R, cells, options.jobs);
    const BallVolume half = graph_ball_volume(graph, 0.5 * R, cells, options.jobs);
    GrowthRow row;
    row.R = R;
    row.volume = full.volume;
    row.volume_half = half.volume;
    row.ratio = full.volume / half.volume;
    row.max_v = full.max_v;
    row.delta_f = full.max_v;
    row.max_v_over_R23 = full.max_v / std::pow(R, 2.0 / 3.0);
    row.disk_bound = full.max_v * unit_ball_volume(n) * std::pow(R, n);
    row.cells_inside = full.inside;
    if (!table.rows.empty() && row.volume < table.rows.back().volume * (1.0 - kQuadratureSlack)) table.monotone = false;
    if (row.volume > row.disk_bound * (1.0 + kQuadratureSlack)) table.volume_bound = false;
    table.rows.push_back(row);
    Rs.push_back(R);
    Vs.push_back(row.volume);
    Ms.push_back(row.max_v);
  }
  table.exponent = loglog_slope(Rs, Vs);
  table.max_v_exponent = loglog_slope(Rs, Ms);
  if (table.rows.size() >= 2) {
    table.max_v_o_R23 = true;
    table.max_v_increasing_vs_R23 = true;
    for (std::size_t k = 1; k < table.rows.size(); ++k) {
      const double prev = table.rows[k - 1].max_v_over_R23;
      const double cur = table.rows[k].max_v_over_R23;
      if (!(cur < prev)) table.max_v_o_R23 = false;
      if (!(cur > prev)) table.max_v_increasing_vs_R23 = false;
    }
  }
  table.delta_f_sublinear = table.max_v_exponent && *table.max_v_exponent < 1.0;
  return table;
}

ProbeParams ProbeParams::resolved(int n) const {
  ProbeParams p = *this;
  if (!(p.t >= 3.0) || !std::isfinite(p.t)) throw ConfigError("probe.t: must satisfy t >= 3");
  if (!p.q) p.q = 1.5 * p.t;
  if (!p.s) p.s = 0.5 * (p.t - 1.0);
  const double qmin = 1.5 * (p.t - 1.0);
  if (!(*p.q > qmin) || !std::isfinite(*p.q))
    throw ConfigError("probe.q: must satisfy q > (3t - 3)/2 = " + std::to_string(qmin));
  if (!(*p.s >= 1.0) || !std::isfinite(*p.s)) throw ConfigError("probe.s: must satisfy s >= 1");
  if (!(p.R > 0.0) || !std::isfinite(p.R)) throw ConfigError("probe.R: must be positive");
  if (!(p.R0 >= 0.0 && p.R0 < p.R)) throw ConfigError("probe.R0: must satisfy 0 <= R0 < R");
  if (p.cells == 0) p.cells = n == 2 ? 128 : 24;
  if (p.cells < 4) throw ConfigError("probe.cells: must be >= 4");
  return p;
}

ProbeRecord estimate_probe(const Immersion& imm, const Eigen::MatrixXd& reference_frame,
                           std::span<const double> base_point, const GridSpec& domain, const ProbeParams& params,
                           int jobs) {
  const int n = imm.dim();
  ProbeRecord rec;
  rec.params = params.resolved(n);
  rec.base_point.assign(base_point.begin(), base_point.end());
  domain.validate();
  if (static_cast<int>(domain.axes.size()) != n) throw ConfigError("grid.ranges: expected " + std::to_string(n) + " axes");
  const double t = rec.params.t;
  const double q = *rec.params.q;
  const double R = rec.params.R;
  const double R0 = rec.params.R0;
  const int cells = rec.params.cells;

  const PointGeometry pg = point_geometry_at(imm, base_point);
  if (pg.mean_curvature.norm() > 1e-7 * std::max(1.0, std::sqrt(pg.normB2))) {
    rec.not_applicable = "not minimal at the base point";
    return rec;
  }
  if (n >= 2 && gauss_rank_at(pg).rank > 2) {
    rec.not_applicable = "G-rank > 2 at the base point";
    return rec;
  }
  const FieldJets base = field_jets(imm, base_point, 0, &reference_frame);
  if (!(base.w.value() > 0.0)) {
    rec.not_applicable = "w <= 0 at the base point";
    return rec;
  }
  const double v0 = 1.0 / base.w.value();
  rec.es4_lhs = base.normB2.value() * v0 * v0 * v0;

  Box box;
  for (const auto& a : domain.axes) {
    box.lo.push_back(a.lo);
    box.hi.push_back(a.hi);
  }
  double cell_volume = 1.0;
  for (int k = 0; k < n; ++k) cell_volume *= (box.hi[static_cast<std::size_t>(k)] - box.lo[static_cast<std::size_t>(k)]) / cells;
  const std::vector<double> F0 = imm.evaluate(base_point);

  struct Sums {
    double volume = 0.0;
    double volume_half = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double max_v = 0.0;
    int inside = 0;
    int inside_half = 0;
    bool truncated = false;
    bool nonpositive_w = false;
  };
  const long long per_slice = cell_count(cells, static_cast<std::size_t>(n - 1));
  const std::function<Sums(std::size_t)> slice = [&](std::size_t s) {
    Sums acc;
    std::vector<int> idx;
    for (long long c = 0; c < per_slice; ++c) {
      const std::vector<double> x = cell_center(box, cells, static_cast<long long>(s) * per_slice + c, &idx);
      const double d2 = squared_distance(imm.evaluate(x), F0);
      if (d2 > R * R) continue;
      const FieldJets fj = field_jets(imm, x, 0, &reference_frame);
      const double w = fj.w.value();
      if (!(w > 0.0)) {
        acc.nonpositive_w = true;
        continue;
      }
      const double v = 1.0 / w;
      const double dvol = fj.volume_element * cell_volume;
      acc.volume += dvol;
      acc.rhs += std::pow(v, 2.0 * q) * dvol;
      acc.max_v = std::max(acc.max_v, v);
      ++acc.inside;
      for (int i : idx)
        if (i == 0 || i == cells - 1) acc.truncated = true;
      if (d2 <= R0 * R0) acc.lhs += std::pow(fj.normB2.value(), t) * std::pow(v, 2.0 * q) * dvol;
      if (d2 <= 0.25 * R * R) {
        acc.volume_half += dvol;
        ++acc.inside_half;
      }
    }
    return acc;
  };
  const std::vector<Sums> parts = parallel_map<Sums>(static_cast<std::size_t>(cells), jobs, slice);
  Sums total;
  total.max_v = v0;
  for (const Sums& p : parts) {
    total.volume += p.volume;
    total.volume_half += p.volume_half;
    total.lhs += p.lhs;
    total.rhs += p.rhs;
    total.max_v = std::max(total.max_v, p.max_v);
    total.inside += p.inside;
    total.inside_half += p.inside_half;
    total.truncated = total.truncated || p.truncated;
    total.nonpositive_w = total.nonpositive_w || p.nonpositive_w;
  }
  if (total.nonpositive_w) {
    rec.not_applicable = "w <= 0 inside D_R";
    return rec;
  }
  if (total.inside < kMinInsideCells || total.inside_half < 1)
    throw HypothesisError("probe quadrature too coarse: " + std::to_string(total.inside) + " cells inside D_R");

  rec.applicable = true;
  rec.ball_truncated = total.truncated;
  rec.cells_inside = total.inside;
  rec.volume = total.volume;
  rec.volume_half = total.volume_half;
  rec.max_v = total.max_v;
  rec.es2_lhs = std::pow(total.lhs, 1.0 / t);
  rec.es2_rhs = std::pow(total.rhs, 1.0 / t);
  rec.C3 = rec.es2_rhs > 0.0 ? rec.es2_lhs * (R - R0) * (R - R0) / rec.es2_rhs : 0.0;
  rec.C4 = rec.es4_lhs * R * R * std::pow(rec.max_v, -3.0) * std::pow(rec.volume / rec.volume_half, -1.0 / t);
  return rec;
}

namespace {

Jet real_power(const Jet& a, double exponent) {
  const double r = std::round(exponent);
  if (r == exponent && std::abs(r) <= 64) return ipow(a, static_cast<int>(r));
  return pow(a, exponent);
}

}  // namespace

SubharmonicValue subharmonic_at(const Immersion& imm, std::span<const double> point,
                                const Eigen::MatrixXd& reference_frame, double s, double q) {
  const PointGeometry pg = point_geometry_at(imm, point);
  const FieldJets fj = field_jets(imm, point, 2, &reference_frame);
  if (!(fj.w.value() > 0.0)) throw SingularInputError("subharmonic test needs w > 0");
  const Jet v = recip(fj.w);
  const Jet phi = real_power(fj.normB2, s) * real_power(v, q);
  SubharmonicValue out;
  out.laplacian = laplace_beltrami(pg, phi);
  out.bound = (q - 3.0 * s) * std::pow(fj.normB2.value(), s + 1.0) * std::pow(v.value(), q);
  out.residual = out.bound - out.laplacian;
  return out;
}

}  // namespace mincurv
