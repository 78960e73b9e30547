#include <benchmark/benchmark.h>

#include <atomic>
#include <cstdint>
#include <vector>

#include "cobl/curve_order.hpp"
#include "cobl/grid_domain.hpp"
#include "cobl/scheduler.hpp"

using namespace cobl;

// scheduling overhead: near-empty bodies, so packet dispatch dominates
static void BM_ExecuteCells(benchmark::State& state) {
  const int workers = static_cast<int>(state.range(0));
  const uint64_t packet = static_cast<uint64_t>(state.range(1));
  const GridDomain domain({512, 512});
  const CurveOrder order = CurveOrder::hilbert(2, level_for(domain));
  SchedulePlan plan;
  plan.workers = workers;
  plan.packet_size = packet;
  for (auto _ : state) {
    uint64_t local = 0;
    execute_cells(domain, order, plan,
                  [&local](std::span<const uint32_t> c, int) { local += c[0]; });
    benchmark::DoNotOptimize(local);
  }
  state.SetItemsProcessed(state.iterations() * 512 * 512);
}
BENCHMARK(BM_ExecuteCells)
    ->Args({1, 4096})
    ->Args({4, 4096})
    ->Args({4, 256})
    ->Args({4, 16});

static void BM_ExecuteReduce(benchmark::State& state) {
  const int workers = static_cast<int>(state.range(0));
  const GridDomain domain({1u << 20});
  const CurveOrder order = CurveOrder::zorder(1, level_for(domain));
  SchedulePlan plan;
  plan.workers = workers;
  plan.packet_size = 4096;
  for (auto _ : state) {
    auto [sum, report] = execute_reduce(
        domain, order, plan, uint64_t{0},
        [](uint64_t& acc, std::span<const uint32_t> c) { acc += c[0]; },
        [](uint64_t& into, uint64_t& from) { into += from; });
    benchmark::DoNotOptimize(sum);
  }
  state.SetItemsProcessed(state.iterations() * (int64_t{1} << 20));
}
BENCHMARK(BM_ExecuteReduce)->Arg(1)->Arg(4);

// masked domain: per-cell mask test on top of the out-of-extent subtree pruning
static void BM_MaskedWalk(benchmark::State& state) {
  const GridDomain domain({1024, 1024}, [](std::span<const uint32_t> c) {
    return c[0] <= c[1];  // upper triangle
  });
  const CurveOrder order = CurveOrder::hilbert(2, level_for(domain));
  std::vector<uint32_t> coord(2);
  for (auto _ : state) {
    CurveWalker walker(domain, order);
    uint64_t cells = 0;
    while (walker.next(coord)) ++cells;
    benchmark::DoNotOptimize(cells);
  }
  state.SetItemsProcessed(state.iterations() * 524800);  // 1024*1025/2
}
BENCHMARK(BM_MaskedWalk);
