#include "cobl/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cobl/scheduler.hpp"

namespace cobl {

namespace {

void check_inputs(const PointSet& ps, uint32_t k, uint32_t max_iters) {
  if (k == 0) throw ConfigError("k must be positive");
  if (ps.n < k) throw ConfigError("need at least k points");
  if (max_iters == 0) throw ConfigError("max_iters must be positive");
  for (float v : ps.data)
    if (!std::isfinite(v)) throw DataError("point set contains a non-finite value");
}

// k distinct point indices drawn by a seeded generator, in draw order
std::vector<uint32_t> initial_indices(const PointSet& ps, uint32_t k, uint64_t seed) {
  Rng rng(seed);
  std::vector<uint32_t> chosen;
  std::vector<char> taken(ps.n, 0);
  while (chosen.size() < k) {
    const uint32_t idx = static_cast<uint32_t>(rng.integer(ps.n));
    if (taken[idx]) continue;
    taken[idx] = 1;
    chosen.push_back(idx);
  }
  return chosen;
}

double point_cost(std::span<const float> row, const double* centroid, int d) {
  double s = 0;
  for (int j = 0; j < d; ++j) {
    const double diff = static_cast<double>(row[static_cast<size_t>(j)]) - centroid[j];
    s += diff * diff;
  }
  return s;
}

uint32_t nearest(std::span<const float> row, const std::vector<double>& centroids,
                 uint32_t k, int d, double* cost_out) {
  uint32_t best = 0;
  double best_cost = std::numeric_limits<double>::infinity();
  for (uint32_t c = 0; c < k; ++c) {
    const double cost = point_cost(row, centroids.data() + static_cast<size_t>(c) * d, d);
    if (cost < best_cost) {
      best_cost = cost;
      best = c;
    }
  }
  *cost_out = best_cost;
  return best;
}

// farthest points fill empty clusters: one pass, descending distance, ascending index
void reseed_empty(const PointSet& ps, std::vector<double>& centroids,
                  std::vector<uint64_t>& counts, uint32_t k) {
  std::vector<uint32_t> empty;
  for (uint32_t c = 0; c < k; ++c)
    if (counts[c] == 0) empty.push_back(c);
  if (empty.empty()) return;

  const int d = ps.d;
  std::vector<std::pair<double, uint32_t>> ranked(ps.n);
  for (uint32_t i = 0; i < ps.n; ++i) {
    double cost;
    nearest(ps.row(i), centroids, k, d, &cost);
    ranked[i] = {cost, i};
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first > y.first;
    return x.second < y.second;
  });
  for (size_t e = 0; e < empty.size(); ++e) {
    const uint32_t c = empty[e];
    const auto row = ps.row(ranked[e].second);
    for (int j = 0; j < d; ++j)
      centroids[static_cast<size_t>(c) * d + j] = static_cast<double>(row[static_cast<size_t>(j)]);
    counts[c] = 1;
  }
}

}  // namespace

KMeansResult kmeans(const PointSet& ps, uint32_t k, uint64_t init_seed,
                    uint32_t max_iters, const EngineConfig& config) {
  check_inputs(ps, k, max_iters);
  const int d = ps.d;

  KMeansResult result;
  result.model.k = k;
  result.model.d = d;
  result.model.centroids.assign(static_cast<size_t>(k) * d, 0.0);
  result.model.assignment.assign(ps.n, 0);

  for (uint32_t c = 0; const uint32_t idx : initial_indices(ps, k, init_seed)) {
    const auto row = ps.row(idx);
    for (int j = 0; j < d; ++j)
      result.model.centroids[static_cast<size_t>(c) * d + j] =
          static_cast<double>(row[static_cast<size_t>(j)]);
    ++c;
  }

  GridDomain domain({ps.n});
  const CurveOrder order = CurveOrder::zorder(1, level_for(domain));

  struct Acc {
    std::vector<double> sums;
    std::vector<uint64_t> counts;
    double inertia = 0;
  };
  const Acc zero{std::vector<double>(static_cast<size_t>(k) * d, 0.0),
                 std::vector<uint64_t>(k, 0), 0.0};

  std::vector<uint32_t> prev = result.model.assignment;
  for (uint32_t iter = 0; iter < max_iters; ++iter) {
    auto [acc, exec] = execute_reduce(
        domain, order, config.plan, zero,
        [&](Acc& a, std::span<const uint32_t> coord) {
          const uint32_t i = coord[0];
          const auto row = ps.row(i);
          double cost;
          const uint32_t label = nearest(row, result.model.centroids, k, d, &cost);
          result.model.assignment[i] = label;
          a.inertia += cost;
          a.counts[label]++;
          double* sum = a.sums.data() + static_cast<size_t>(label) * d;
          for (int j = 0; j < d; ++j) sum[j] += static_cast<double>(row[static_cast<size_t>(j)]);
        },
        [](Acc& left, Acc& right) {
          for (size_t i = 0; i < left.sums.size(); ++i) left.sums[i] += right.sums[i];
          for (size_t i = 0; i < left.counts.size(); ++i) left.counts[i] += right.counts[i];
          left.inertia += right.inertia;
        });
    result.exec.accumulate(exec);

    result.inertia_history.push_back(acc.inertia);
    result.model.inertia = acc.inertia;
    result.iterations = iter + 1;

    if (iter > 0 && result.model.assignment == prev) break;
    prev = result.model.assignment;

    for (uint32_t c = 0; c < k; ++c) {
      if (acc.counts[c] == 0) continue;
      const double inv = 1.0 / static_cast<double>(acc.counts[c]);
      for (int j = 0; j < d; ++j)
        result.model.centroids[static_cast<size_t>(c) * d + j] =
            acc.sums[static_cast<size_t>(c) * d + j] * inv;
    }
    reseed_empty(ps, result.model.centroids, acc.counts, k);
  }
  return result;
}

KMeansResult lloyd_reference(const PointSet& ps, uint32_t k, uint64_t init_seed,
                             uint32_t max_iters) {
  check_inputs(ps, k, max_iters);
  const int d = ps.d;

  KMeansResult result;
  result.model.k = k;
  result.model.d = d;
  result.model.centroids.assign(static_cast<size_t>(k) * d, 0.0);
  result.model.assignment.assign(ps.n, 0);

  for (uint32_t c = 0; const uint32_t idx : initial_indices(ps, k, init_seed)) {
    const auto row = ps.row(idx);
    for (int j = 0; j < d; ++j)
      result.model.centroids[static_cast<size_t>(c) * d + j] =
          static_cast<double>(row[static_cast<size_t>(j)]);
    ++c;
  }

  std::vector<uint32_t> prev = result.model.assignment;
  for (uint32_t iter = 0; iter < max_iters; ++iter) {
    std::vector<double> sums(static_cast<size_t>(k) * d, 0.0);
    std::vector<uint64_t> counts(k, 0);
    double inertia = 0;
    for (uint32_t i = 0; i < ps.n; ++i) {
      const auto row = ps.row(i);
      double cost;
      const uint32_t label = nearest(row, result.model.centroids, k, d, &cost);
      result.model.assignment[i] = label;
      inertia += cost;
      counts[label]++;
      for (int j = 0; j < d; ++j)
        sums[static_cast<size_t>(label) * d + j] += static_cast<double>(row[static_cast<size_t>(j)]);
    }

    result.inertia_history.push_back(inertia);
    result.model.inertia = inertia;
    result.iterations = iter + 1;

    if (iter > 0 && result.model.assignment == prev) break;
    prev = result.model.assignment;

    for (uint32_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;
      const double inv = 1.0 / static_cast<double>(counts[c]);
      for (int j = 0; j < d; ++j)
        result.model.centroids[static_cast<size_t>(c) * d + j] =
            sums[static_cast<size_t>(c) * d + j] * inv;
    }
    reseed_empty(ps, result.model.centroids, counts, k);
  }
  return result;
}

}  // namespace cobl
