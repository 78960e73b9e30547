#include <benchmark/benchmark.h>

#include <vector>

#include "cobl/curve.hpp"
#include "cobl/curve_order.hpp"
#include "cobl/grid_domain.hpp"

using namespace cobl;

static void BM_HilbertOrdinal(benchmark::State& state) {
  const int dims = static_cast<int>(state.range(0));
  const int level = static_cast<int>(state.range(1));
  std::vector<uint32_t> coord(static_cast<size_t>(dims));
  const uint64_t total = uint64_t{1} << (dims * level);
  uint64_t o = 0;
  for (auto _ : state) {
    hilbert_coord(o, dims, level, coord);
    benchmark::DoNotOptimize(hilbert_ordinal(coord, level));
    o = (o + 1) & (total - 1);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_HilbertOrdinal)->Args({2, 10})->Args({3, 6})->Args({4, 5});

static void BM_ZOrderOrdinal(benchmark::State& state) {
  const int dims = static_cast<int>(state.range(0));
  const int level = static_cast<int>(state.range(1));
  std::vector<uint32_t> coord(static_cast<size_t>(dims));
  const uint64_t total = uint64_t{1} << (dims * level);
  uint64_t o = 0;
  for (auto _ : state) {
    z_decode(o, dims, level, coord);
    benchmark::DoNotOptimize(z_encode(coord, level));
    o = (o + 1) & (total - 1);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ZOrderOrdinal)->Args({2, 10})->Args({4, 5});

// sequential cursor against one-shot decoding, the fast path of every walk
static void BM_HilbertCursor(benchmark::State& state) {
  const int dims = static_cast<int>(state.range(0));
  const int level = static_cast<int>(state.range(1));
  std::vector<uint32_t> coord(static_cast<size_t>(dims));
  for (auto _ : state) {
    HilbertCursor cursor(dims, level);
    uint64_t sum = 0;
    while (cursor.next(coord)) sum += coord[0];
    benchmark::DoNotOptimize(sum);
  }
  state.SetItemsProcessed(state.iterations() *
                          (int64_t{1} << (dims * level)));
}
BENCHMARK(BM_HilbertCursor)->Args({2, 8})->Args({3, 5});

static void BM_WalkerEnumeration(benchmark::State& state) {
  const uint32_t edge = static_cast<uint32_t>(state.range(0));
  const GridDomain domain({edge, edge});
  const CurveOrder order = CurveOrder::hilbert(2, level_for(domain));
  std::vector<uint32_t> coord(2);
  for (auto _ : state) {
    CurveWalker walker(domain, order);
    uint64_t sum = 0;
    while (walker.next(coord)) sum += coord[0] + coord[1];
    benchmark::DoNotOptimize(sum);
  }
  state.SetItemsProcessed(state.iterations() * int64_t{edge} * edge);
}
BENCHMARK(BM_WalkerEnumeration)->Arg(64)->Arg(256)->Arg(1024);

BENCHMARK_MAIN();
