#pragma once

// Exact ε-similarity self-join (Euclidean metric).
//
// Points are sorted by lexicographic comparison of their ε-grid cells
// (cell = floor(x/ε) per dimension, dimensions optionally permuted first).
// Join partners always sit in grid cells differing by at most 1 per
// dimension, so after the sort they cluster into a narrow band. The sorted
// sequence is chopped into blocks; block pairs form a 2-D upper-triangular
// domain traversed in curve order through the engine, pruned by per-block
// cell bounding boxes, and every surviving pair is distance-verified, which
// keeps the result exact regardless of pruning.

#include <cstdint>
#include <utility>
#include <vector>

#include "cobl/engine_config.hpp"
#include "cobl/point_set.hpp"

namespace cobl {

struct JoinParams {
  double epsilon = 0.0;
  std::vector<int> dim_permutation;  // empty = identity
  uint32_t block_size = 256;         // points per block of the sorted sequence
};

struct PairHit {
  uint32_t a = 0;  // original ids, a < b
  uint32_t b = 0;
  double distance = 0.0;
};

struct JoinStats {
  uint64_t blocks = 0;
  uint64_t block_pairs_visited = 0;  // block pairs surviving the cell prune
  uint64_t pairs_tested = 0;         // point pairs reaching the distance test
  uint64_t pairs_emitted = 0;
  // Distance-verified pairs whose grid cells differ by >= 2 in some permuted
  // dimension. Such a pair would contradict the grid-interval guarantee the
  // pruning relies on; the count is expected to stay 0 and is asserted in
  // tests. Pairs are emitted regardless, so exactness never depends on it.
  uint64_t interval_violations = 0;
  ExecutionReport exec;
};

struct JoinResult {
  std::vector<PairHit> pairs;  // sorted by (a, b)
  JoinStats stats;
};

/// Permutation sorting point indices by their grid cells, lexicographically
/// in (permuted) dimension order; ties keep input order. epsilon must be > 0.
std::vector<uint32_t> ego_sort(const PointSet& ps, double epsilon,
                               const std::vector<int>& dim_permutation = {});

/// Grid cells of every point, n x d, with dimensions permuted. epsilon > 0.
std::vector<int64_t> ego_cells(const PointSet& ps, double epsilon,
                               const std::vector<int>& dim_permutation = {});

/// Dimension order of decreasing pruning power: the fraction of sampled point
/// pairs separated by more than epsilon in that dimension alone, sampled with
/// a seeded budget. Ties resolve to the lower dimension index.
std::vector<int> choose_dim_permutation(const PointSet& ps, double epsilon,
                                        uint32_t sample_pairs = 10000,
                                        uint64_t seed = 0x5eedu);

/// All pairs (a < b) at Euclidean distance <= epsilon. epsilon = 0 degrades
/// to duplicate detection and runs without the engine.
JoinResult epsilon_self_join(const PointSet& ps, const JoinParams& params,
                             const EngineConfig& config);

/// O(n^2) oracle.
std::vector<PairHit> brute_force_join(const PointSet& ps, double epsilon);

}  // namespace cobl
