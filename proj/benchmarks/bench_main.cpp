// Microbenchmarks for the expensive pipeline stages, on the cantilever case
// at refinement levels 0 and 1.

#include <benchmark/benchmark.h>

#include <map>

#include "verifem/eespt.hpp"
#include "verifem/eet.hpp"
#include "verifem/element_solve.hpp"
#include "verifem/estimator.hpp"
#include "verifem/fem.hpp"
#include "verifem/fixtures.hpp"
#include "verifem/reference.hpp"
#include "verifem/spet.hpp"

using namespace verifem;

namespace {

const Fixture& cantilever(int level) {
  static std::map<int, Fixture> cache;
  auto it = cache.find(level);
  if (it == cache.end())
    it = cache
             .emplace(level,
                      refine_fixture(make_fixture("cantilever_sensor"), level))
             .first;
  return it->second;
}

const FemSolution& solved(int level) {
  static std::map<int, FemSolution> cache;
  auto it = cache.find(level);
  if (it == cache.end()) {
    const Fixture& fx = cantilever(level);
    it = cache.emplace(level, assemble_solve(fx.mesh, fx.material, fx.loads))
             .first;
  }
  return it->second;
}

void BM_assemble_solve(benchmark::State& state) {
  const Fixture& fx = cantilever(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    FemSolution sol = assemble_solve(fx.mesh, fx.material, fx.loads);
    benchmark::DoNotOptimize(sol.u.data());
  }
}
BENCHMARK(BM_assemble_solve)->Arg(0)->Arg(1);

void BM_eet_tractions(benchmark::State& state) {
  const int level = static_cast<int>(state.range(0));
  const Fixture& fx = cantilever(level);
  const FemSolution& sol = solved(level);
  for (auto _ : state) {
    TractionField tr =
        eet_tractions(fx.mesh, fx.material, sol, fx.loads, CostKind::J0);
    benchmark::DoNotOptimize(tr.values.data());
  }
}
BENCHMARK(BM_eet_tractions)->Arg(0)->Arg(1);

void BM_eespt_tractions(benchmark::State& state) {
  const int level = static_cast<int>(state.range(0));
  const Fixture& fx = cantilever(level);
  const FemSolution& sol = solved(level);
  for (auto _ : state) {
    TractionField tr = eespt_tractions(fx.mesh, fx.material, sol, fx.loads,
                                       CostKind::J0, 1e5);
    benchmark::DoNotOptimize(tr.values.data());
  }
}
BENCHMARK(BM_eespt_tractions)->Arg(0)->Arg(1);

void BM_spet_estimate(benchmark::State& state) {
  const int level = static_cast<int>(state.range(0));
  const Fixture& fx = cantilever(level);
  const FemSolution& sol = solved(level);
  for (auto _ : state) {
    SpetResult res = spet_estimate(fx.mesh, fx.material, sol, fx.loads, 4);
    benchmark::DoNotOptimize(res.theta);
  }
}
BENCHMARK(BM_spet_estimate)->Arg(0)->Arg(1);

void BM_element_dual_stress(benchmark::State& state) {
  const int level = static_cast<int>(state.range(0));
  const Fixture& fx = cantilever(level);
  const FemSolution& sol = solved(level);
  const TractionField tr =
      eet_tractions(fx.mesh, fx.material, sol, fx.loads, CostKind::J0);
  for (auto _ : state) {
    AdmissibleStress recon =
        element_dual_stress(fx.mesh, fx.material, fx.loads, tr, 4);
    auto [theta, esq] = cre(fx.mesh, fx.material, sol, recon);
    benchmark::DoNotOptimize(theta);
  }
}
BENCHMARK(BM_element_dual_stress)->Arg(0)->Arg(1);

void BM_reference_error(benchmark::State& state) {
  const int level = static_cast<int>(state.range(0));
  const Fixture& fx = cantilever(level);
  const FemSolution& sol = solved(level);
  for (auto _ : state) {
    ReferenceError ref =
        reference_error(fx.mesh, fx.material, fx.loads, sol, 2);
    benchmark::DoNotOptimize(ref.value);
  }
}
BENCHMARK(BM_reference_error)->Arg(0)->Arg(1);

}  // namespace

BENCHMARK_MAIN();
