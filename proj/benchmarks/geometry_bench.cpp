#include <benchmark/benchmark.h>

#include "mincurv/catalogue.hpp"
#include "mincurv/geometry.hpp"
#include "mincurv/jet.hpp"

namespace {

using namespace mincurv;

void BM_JetProduct(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const Jet x = exp(Jet::variable(0, 0.3, dim, 4));
  const Jet y = sin(Jet::variable(dim - 1, 0.7, dim, 4));
  for (auto _ : state) benchmark::DoNotOptimize(x * y);
}
BENCHMARK(BM_JetProduct)->Arg(1)->Arg(2)->Arg(3);

void BM_PointGeometry(benchmark::State& state) {
  const Immersion imm = state.range(0) == 2 ? catalogue_lookup("catenoid")
                                            : catalogue_lookup("cylinder-over", {{"base", "helicoid"}});
  const std::vector<double> p(static_cast<std::size_t>(imm.dim()), 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(point_geometry_at(imm, p));
}
BENCHMARK(BM_PointGeometry)->Arg(2)->Arg(3);

void BM_FieldJets(benchmark::State& state) {
  const Immersion imm = catalogue_lookup("holo-curve", {{"coeffs", {0, 0, 1}}});
  const std::vector<double> p = {0.3, -0.2};
  const Eigen::MatrixXd A = default_reference_frame(imm, p);
  for (auto _ : state) benchmark::DoNotOptimize(field_jets(imm, p, 2, &A));
}
BENCHMARK(BM_FieldJets);

}  // namespace

BENCHMARK_MAIN();
