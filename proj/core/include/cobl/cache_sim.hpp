#pragma once

// LRU cache simulation and analytical transfer-cost estimates for comparing
// traversal orders. Storage is addressed as abstract cell indices; an access
// pattern maps an iteration coordinate to the storage cells it touches.

#include <cstdint>
#include <functional>
#include <vector>

#include "cobl/curve_order.hpp"
#include "cobl/grid_domain.hpp"
#include "cobl/scheduler.hpp"

namespace cobl {

struct CacheModel {
  uint32_t line_size = 1;  // storage cells per line
  uint32_t lines = 1;      // capacity in lines; replacement policy is LRU
};

/// Appends the storage cells touched at `coord` to the output vector.
using AccessPattern =
    std::function<void(std::span<const uint32_t>, std::vector<uint64_t>&)>;

/// Misses of a fully-associative LRU cache over the storage trace produced
/// by enumerating the domain in the given order. Throws BudgetError once the
/// trace exceeds access_budget storage accesses.
uint64_t locality_score(const CurveOrder& order, const GridDomain& domain,
                        const AccessPattern& pattern, const CacheModel& cache,
                        uint64_t access_budget = uint64_t{1} << 20);

/// Pairwise kernel over `points` records: iteration (i, j) reads record i
/// from one array and record j from a second, disjoint array.
AccessPattern pairwise_pattern(uint32_t points);

enum class ReplicationModel {
  NodeWorkingSet,  // each node ships its distinct cells once
  PerPacket,       // every packet ships its own working set, no node-level reuse
};

/// Analytical bytes moved if packets were placed on nodes per `node_of_packet`
/// (one entry per packet, values >= 0): sum over nodes of distinct storage
/// cells touched, times record_size_bytes. No execution happens.
uint64_t transfer_cost(const GridDomain& domain, const CurveOrder& order,
                       const std::vector<Packet>& packets,
                       const std::vector<int>& node_of_packet,
                       const AccessPattern& pattern, uint64_t record_size_bytes,
                       ReplicationModel model);

}  // namespace cobl
