// Serial reference kernels against their OpenMP versions on enumerated
// groups with cached Cayley tables. All timings are wall clock.

#include <benchmark/benchmark.h>

#include <map>
#include <memory>
#include <string>

#include "b0/catalog.hpp"
#include "b0/groupkit.hpp"
#include "b0/kernels.hpp"

namespace {

using namespace b0;

const char *const kGroups[] = {
    "freest_special,d=3,p=3",
    "freest_special,d=4,p=2",
    "heisenberg,r=16,d=1",
};

const GroupTable &table(int which) {
  static std::map<int, GroupTable> cache;
  auto it = cache.find(which);
  if (it == cache.end()) {
    auto g = std::make_shared<const PcGroup>(catalog(CatalogParams::parse(kGroups[which])));
    it = cache.emplace(which, enumerate(g, GroupTable::kCayleyLimit)).first;
  }
  return it->second;
}

template <class F> void run(benchmark::State &state, F kernel) {
  const GroupTable &g = table(static_cast<int>(state.range(0)));
  state.SetLabel(kGroups[state.range(0)]);
  for (auto _ : state)
    benchmark::DoNotOptimize(kernel(g));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.order() * g.order()));
}

void BM_CommutatorSetSerial(benchmark::State &s) { run(s, kernels::commutator_set_serial); }
void BM_CommutatorSetParallel(benchmark::State &s) { run(s, kernels::commutator_set_parallel); }
void BM_CommutingPairsSerial(benchmark::State &s) { run(s, kernels::commuting_pairs_serial); }
void BM_CommutingPairsParallel(benchmark::State &s) { run(s, kernels::commuting_pairs_parallel); }
void BM_CenterSerial(benchmark::State &s) { run(s, kernels::center_serial); }
void BM_CenterParallel(benchmark::State &s) { run(s, kernels::center_parallel); }

} // namespace

BENCHMARK(BM_CommutatorSetSerial)->DenseRange(0, 2)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CommutatorSetParallel)->DenseRange(0, 2)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CommutingPairsSerial)->DenseRange(0, 2)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CommutingPairsParallel)->DenseRange(0, 2)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CenterSerial)->DenseRange(0, 2)->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_CenterParallel)->DenseRange(0, 2)->Unit(benchmark::kMicrosecond)->UseRealTime();

BENCHMARK_MAIN();
