#pragma once

// Packet partitioning and multi-threaded execution of curve traversals.
//
// A packet is a half-open interval of curve ordinals, the unit of scheduling
// and stealing. Execution modes:
//
//   Static    packet i runs on worker i mod p; no redistribution
//   Stealing  workers start with contiguous packet ranges; an idle worker
//             takes the trailing half (rounded down) of the most-loaded
//             victim's remaining range, so both halves stay curve-contiguous
//             and no packet is ever split
//
// Orders with monotone dimensions that carry dependencies are executed as a
// sequence of phases, one per assignment of the serialized monotone prefix,
// with a barrier between phases; packets never straddle a phase boundary.
//
// Floating-point reductions combine per-packet partials along a fixed
// midpoint-split binary tree indexed by packet number, so results are
// bit-identical for any worker count, mode, or steal timing.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cobl/curve_order.hpp"
#include "cobl/grid_domain.hpp"

namespace cobl {

struct Packet {
  uint64_t start = 0;  // curve ordinal, inclusive
  uint64_t end = 0;    // exclusive
  std::string domain_ref;
};

/// Tiles [0, order.size()) into packets of length packet_size, last one
/// possibly shorter.
std::vector<Packet> partition(const CurveOrder& order, uint64_t packet_size,
                              std::string domain_ref = {});

enum class ScheduleMode { Static, Stealing };

struct SchedulePlan {
  ScheduleMode mode = ScheduleMode::Stealing;
  int workers = 1;
  uint64_t packet_size = 4096;  // ordinals per packet; powers of two keep
                                // packets aligned to phase boundaries
  uint64_t seed = 0;            // reserved for randomized policies; the
                                // shipped protocol is fully deterministic
  // Test instrumentation: invoked before each packet body with
  // (packet index, worker index). Used for delay injection.
  std::function<void(uint64_t, int)> packet_hook;
};

struct WorkerStats {
  uint64_t packets = 0;
  uint64_t cells = 0;
  uint64_t steals = 0;  // steals performed by this worker as the thief
  int64_t busy_ns = 0;
};

struct ExecutionReport {
  ScheduleMode mode = ScheduleMode::Static;
  int workers = 1;
  uint64_t packets_total = 0;
  uint64_t phases = 0;
  uint64_t steals = 0;
  int64_t wall_ns = 0;
  std::vector<WorkerStats> per_worker;

  void accumulate(const ExecutionReport& other);
  std::string to_json() const;
};

namespace exec_detail {

struct PacketTask {
  uint64_t start = 0;
  uint64_t end = 0;
  uint64_t phase = 0;
};

/// Phase-aligned packet tasks for executing `order` over `domain`.
/// serialize_dims names the dimensions whose ascending order carries
/// dependencies; they must form a subset of the order's monotone dims, and
/// the shortest monotone prefix containing them defines the phases.
std::vector<PacketTask> packet_tasks(const GridDomain& domain, const CurveOrder& order,
                                     uint64_t packet_size,
                                     std::span<const int> serialize_dims);

/// Runs every task exactly once across plan.workers threads, phases in
/// ascending order with a barrier between them. fn(packet_index, worker)
/// returns the number of cells it processed.
ExecutionReport run_packets(const SchedulePlan& plan, const std::vector<PacketTask>& tasks,
                            const std::function<uint64_t(uint64_t, int)>& fn);

}  // namespace exec_detail

/// Runs body(coord, worker) for every included cell of the domain, in curve
/// order within each packet. The cells of one packet are delivered as one
/// consecutive ascending run on a single worker, so bodies may vectorize
/// across the run.
template <class Body>
ExecutionReport execute_cells(const GridDomain& domain, const CurveOrder& order,
                              const SchedulePlan& plan, Body&& body,
                              std::span<const int> serialize_dims = {}) {
  const auto tasks =
      exec_detail::packet_tasks(domain, order, plan.packet_size, serialize_dims);
  auto run_one = [&](uint64_t pi, int worker) -> uint64_t {
    CurveWalker walker(domain, order, tasks[pi].start, tasks[pi].end);
    std::vector<uint32_t> coord(static_cast<size_t>(domain.dims()));
    while (walker.next(coord)) body(std::span<const uint32_t>(coord), worker);
    return walker.emitted();
  };
  return exec_detail::run_packets(plan, tasks, run_one);
}

/// Reduction form: each packet owns a private accumulator seeded from `init`;
/// cell(acc, coord) folds cells into it; afterwards the per-packet partials
/// are merged with combine(into, from) along the fixed packet-indexed tree.
template <class Acc, class CellFn, class CombineFn>
std::pair<Acc, ExecutionReport> execute_reduce(const GridDomain& domain,
                                               const CurveOrder& order,
                                               const SchedulePlan& plan, Acc init,
                                               CellFn&& cell, CombineFn&& combine,
                                               std::span<const int> serialize_dims = {}) {
  const auto tasks =
      exec_detail::packet_tasks(domain, order, plan.packet_size, serialize_dims);
  std::vector<Acc> partial(tasks.size(), init);
  auto run_one = [&](uint64_t pi, int worker) -> uint64_t {
    (void)worker;
    CurveWalker walker(domain, order, tasks[pi].start, tasks[pi].end);
    std::vector<uint32_t> coord(static_cast<size_t>(domain.dims()));
    Acc& acc = partial[pi];
    while (walker.next(coord)) cell(acc, std::span<const uint32_t>(coord));
    return walker.emitted();
  };
  ExecutionReport report = exec_detail::run_packets(plan, tasks, run_one);
  if (partial.empty()) return {std::move(init), std::move(report)};
  // midpoint-split merge, shape a function of the packet count alone
  auto merge = [&combine, &partial](auto&& self, size_t lo, size_t hi) -> Acc {
    if (hi - lo == 1) return std::move(partial[lo]);
    const size_t mid = lo + (hi - lo) / 2;
    Acc left = self(self, lo, mid);
    Acc right = self(self, mid, hi);
    combine(left, right);
    return left;
  };
  Acc result = merge(merge, 0, partial.size());
  return {std::move(result), std::move(report)};
}

}  // namespace cobl
