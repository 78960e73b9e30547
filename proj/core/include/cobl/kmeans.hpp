#pragma once

// Lloyd k-means over the loop engine.
//
// Each iteration assigns labels (disjoint direct writes) and accumulates
// per-cluster sums, counts, and inertia through the packet-tree reduction,
// so results are deterministic for any worker count or steal timing.
// Fixed rules, shared with the sequential oracle:
//   init        k distinct point indices drawn from the seed
//   ties        nearest-centroid ties go to the lowest centroid index
//   empty       an empty cluster is re-seeded to the point farthest from its
//               assigned centroid (next-farthest for further empties, lower
//               point index on equal distance)
//   stop        after max_iters, or earlier when labels stop changing
//   inertia     recorded per iteration from the assignment pass, against the
//               centroids that pass used

#include <cstdint>
#include <vector>

#include "cobl/engine_config.hpp"
#include "cobl/point_set.hpp"

namespace cobl {

struct KMeansModel {
  uint32_t k = 0;
  uint32_t d = 0;
  std::vector<double> centroids;   // k x d
  std::vector<uint32_t> assignment;  // n labels
  double inertia = 0.0;
};

struct KMeansResult {
  KMeansModel model;
  std::vector<double> inertia_history;  // one entry per executed iteration
  uint32_t iterations = 0;
  ExecutionReport exec;
};

/// Engine-backed Lloyd iterations. The point-index domain is 1-D, where every
/// order degenerates to the ascending scan; parallelism and determinism come
/// from the packet schedule and reduction tree.
KMeansResult kmeans(const PointSet& ps, uint32_t k, uint64_t init_seed,
                    uint32_t max_iters, const EngineConfig& config);

/// Sequential Lloyd oracle implementing the same fixed rules with plain
/// loops and left-to-right accumulation.
KMeansResult lloyd_reference(const PointSet& ps, uint32_t k, uint64_t init_seed,
                             uint32_t max_iters);

}  // namespace cobl
