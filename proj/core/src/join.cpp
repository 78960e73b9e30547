#include "cobl/join.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cobl/scheduler.hpp"

namespace cobl {

namespace {

void check_epsilon(double epsilon) {
  if (!std::isfinite(epsilon) || epsilon < 0)
    throw ConfigError("epsilon must be finite and non-negative");
}

std::vector<int> normalize_permutation(const PointSet& ps,
                                       const std::vector<int>& perm) {
  if (perm.empty()) {
    std::vector<int> identity(static_cast<size_t>(ps.d));
    std::iota(identity.begin(), identity.end(), 0);
    return identity;
  }
  if (perm.size() != static_cast<size_t>(ps.d))
    throw ConfigError("dimension permutation length does not match point dimension");
  std::vector<char> used(static_cast<size_t>(ps.d), 0);
  for (int d : perm) {
    if (d < 0 || d >= static_cast<int>(ps.d) || used[static_cast<size_t>(d)])
      throw ConfigError("dimension permutation is not a permutation");
    used[static_cast<size_t>(d)] = 1;
  }
  return perm;
}

double sq_distance(std::span<const float> a, std::span<const float> b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double diff = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    s += diff * diff;
  }
  return s;
}

}  // namespace

std::vector<int64_t> ego_cells(const PointSet& ps, double epsilon,
                               const std::vector<int>& dim_permutation) {
  check_epsilon(epsilon);
  if (epsilon == 0) throw ConfigError("grid cells need epsilon > 0");
  const auto perm = normalize_permutation(ps, dim_permutation);
  std::vector<int64_t> cells(static_cast<size_t>(ps.n) * ps.d);
  for (uint32_t i = 0; i < ps.n; ++i) {
    const auto row = ps.row(i);
    for (uint32_t d = 0; d < ps.d; ++d) {
      const double v = static_cast<double>(row[static_cast<size_t>(perm[static_cast<size_t>(d)])]);
      cells[static_cast<size_t>(i) * ps.d + d] = static_cast<int64_t>(std::floor(v / epsilon));
    }
  }
  return cells;
}

std::vector<uint32_t> ego_sort(const PointSet& ps, double epsilon,
                               const std::vector<int>& dim_permutation) {
  check_epsilon(epsilon);
  if (epsilon == 0) throw ConfigError("grid sort needs epsilon > 0");
  const auto cells = ego_cells(ps, epsilon, dim_permutation);
  std::vector<uint32_t> order(ps.n);
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
    const int64_t* ca = cells.data() + static_cast<size_t>(a) * ps.d;
    const int64_t* cb = cells.data() + static_cast<size_t>(b) * ps.d;
    for (uint32_t d = 0; d < ps.d; ++d) {
      if (ca[d] != cb[d]) return ca[d] < cb[d];
    }
    return a < b;
  });
  return order;
}

std::vector<int> choose_dim_permutation(const PointSet& ps, double epsilon,
                                        uint32_t sample_pairs, uint64_t seed) {
  check_epsilon(epsilon);
  std::vector<int> perm(static_cast<size_t>(ps.d));
  std::iota(perm.begin(), perm.end(), 0);
  if (ps.n < 2 || epsilon == 0) return perm;

  Rng rng(seed);
  std::vector<uint64_t> separated(static_cast<size_t>(ps.d), 0);
  for (uint32_t s = 0; s < sample_pairs; ++s) {
    const uint32_t a = static_cast<uint32_t>(rng.integer(ps.n));
    uint32_t b = static_cast<uint32_t>(rng.integer(ps.n));
    if (a == b) b = (b + 1) % ps.n;
    const auto ra = ps.row(a), rb = ps.row(b);
    for (uint32_t d = 0; d < ps.d; ++d) {
      const double diff = std::abs(static_cast<double>(ra[static_cast<size_t>(d)]) -
                                   static_cast<double>(rb[static_cast<size_t>(d)]));
      if (diff > epsilon) ++separated[static_cast<size_t>(d)];
    }
  }
  std::stable_sort(perm.begin(), perm.end(), [&](int x, int y) {
    return separated[static_cast<size_t>(x)] > separated[static_cast<size_t>(y)];
  });
  return perm;
}

namespace {

// duplicate detection: epsilon == 0 means exact coordinate equality
JoinResult zero_epsilon_join(const PointSet& ps) {
  std::vector<uint32_t> order(ps.n);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
    const auto ra = ps.row(a), rb = ps.row(b);
    for (uint32_t d = 0; d < ps.d; ++d) {
      if (ra[static_cast<size_t>(d)] != rb[static_cast<size_t>(d)])
        return ra[static_cast<size_t>(d)] < rb[static_cast<size_t>(d)];
    }
    return a < b;
  });
  JoinResult result;
  size_t run = 0;
  while (run < order.size()) {
    size_t stop = run + 1;
    while (stop < order.size() &&
           std::equal(ps.row(order[run]).begin(), ps.row(order[run]).end(),
                      ps.row(order[stop]).begin()))
      ++stop;
    for (size_t i = run; i < stop; ++i)
      for (size_t j = i + 1; j < stop; ++j) {
        const uint32_t a = std::min(order[i], order[j]);
        const uint32_t b = std::max(order[i], order[j]);
        result.stats.pairs_tested++;
        result.pairs.push_back(PairHit{a, b, 0.0});
      }
    run = stop;
  }
  std::sort(result.pairs.begin(), result.pairs.end(), [](const PairHit& x, const PairHit& y) {
    return x.a != y.a ? x.a < y.a : x.b < y.b;
  });
  result.stats.pairs_emitted = result.pairs.size();
  return result;
}

}  // namespace

JoinResult epsilon_self_join(const PointSet& ps, const JoinParams& params,
                             const EngineConfig& config) {
  check_epsilon(params.epsilon);
  for (float v : ps.data)
    if (!std::isfinite(v)) throw DataError("point set contains a non-finite value");
  if (params.block_size == 0) throw ConfigError("block size must be positive");
  if (ps.n == 0) return JoinResult{};
  if (params.epsilon == 0) return zero_epsilon_join(ps);

  const auto perm = params.dim_permutation.empty()
                        ? normalize_permutation(ps, {})
                        : normalize_permutation(ps, params.dim_permutation);
  const auto sorted = ego_sort(ps, params.epsilon, perm);
  const auto cells = ego_cells(ps, params.epsilon, perm);

  const uint32_t bs = params.block_size;
  const uint32_t blocks = (ps.n + bs - 1) / bs;
  const int d = ps.d;

  // per block, per permuted dim: [min cell, max cell]
  std::vector<int64_t> block_lo(static_cast<size_t>(blocks) * d);
  std::vector<int64_t> block_hi(static_cast<size_t>(blocks) * d);
  for (uint32_t b = 0; b < blocks; ++b) {
    const uint32_t lo = b * bs;
    const uint32_t hi = std::min<uint32_t>(lo + bs, ps.n);
    for (int k = 0; k < d; ++k) {
      int64_t mn = cells[static_cast<size_t>(sorted[lo]) * d + k];
      int64_t mx = mn;
      for (uint32_t i = lo + 1; i < hi; ++i) {
        const int64_t c = cells[static_cast<size_t>(sorted[i]) * d + k];
        mn = std::min(mn, c);
        mx = std::max(mx, c);
      }
      block_lo[static_cast<size_t>(b) * d + k] = mn;
      block_hi[static_cast<size_t>(b) * d + k] = mx;
    }
  }

  GridDomain domain({blocks, blocks}, [](std::span<const uint32_t> c) {
    return c[0] <= c[1];
  });
  const CurveOrder order = order_for(domain, config);
  const double eps_sq = params.epsilon * params.epsilon;

  struct Acc {
    std::vector<PairHit> hits;
    uint64_t block_pairs = 0;
    uint64_t tested = 0;
    uint64_t violations = 0;
  };
  auto [result, exec] = execute_reduce(
      domain, order, config.plan, Acc{},
      [&](Acc& acc, std::span<const uint32_t> c) {
        const uint32_t bi = c[0], bj = c[1];
        // prune: some permuted dim has a cell gap of two or more between blocks
        for (int k = 0; k < d; ++k) {
          const int64_t gap =
              std::max(block_lo[static_cast<size_t>(bi) * d + k] -
                           block_hi[static_cast<size_t>(bj) * d + k],
                       block_lo[static_cast<size_t>(bj) * d + k] -
                           block_hi[static_cast<size_t>(bi) * d + k]);
          if (gap >= 2) return;
        }
        acc.block_pairs++;
        const uint32_t ilo = bi * bs, ihi = std::min<uint32_t>(ilo + bs, ps.n);
        const uint32_t jlo = bj * bs, jhi = std::min<uint32_t>(jlo + bs, ps.n);
        for (uint32_t i = ilo; i < ihi; ++i) {
          const uint32_t jstart = (bi == bj) ? i + 1 : jlo;
          const auto rowi = ps.row(sorted[i]);
          for (uint32_t j = jstart; j < jhi; ++j) {
            acc.tested++;
            const double dist_sq = sq_distance(rowi, ps.row(sorted[j]));
            if (dist_sq > eps_sq) continue;
            const uint32_t a = std::min(sorted[i], sorted[j]);
            const uint32_t b = std::max(sorted[i], sorted[j]);
            acc.hits.push_back(PairHit{a, b, std::sqrt(dist_sq)});
            for (int k = 0; k < d; ++k) {
              const int64_t diff = cells[static_cast<size_t>(sorted[i]) * d + k] -
                                   cells[static_cast<size_t>(sorted[j]) * d + k];
              if (diff >= 2 || diff <= -2) {
                acc.violations++;
                break;
              }
            }
          }
        }
      },
      [](Acc& left, Acc& right) {
        left.hits.insert(left.hits.end(),
                         std::make_move_iterator(right.hits.begin()),
                         std::make_move_iterator(right.hits.end()));
        left.block_pairs += right.block_pairs;
        left.tested += right.tested;
        left.violations += right.violations;
      });

  JoinResult out;
  out.pairs = std::move(result.hits);
  std::sort(out.pairs.begin(), out.pairs.end(), [](const PairHit& x, const PairHit& y) {
    return x.a != y.a ? x.a < y.a : x.b < y.b;
  });
  out.stats.blocks = blocks;
  out.stats.block_pairs_visited = result.block_pairs;
  out.stats.pairs_tested = result.tested;
  out.stats.pairs_emitted = out.pairs.size();
  out.stats.interval_violations = result.violations;
  out.stats.exec = std::move(exec);
  return out;
}

std::vector<PairHit> brute_force_join(const PointSet& ps, double epsilon) {
  check_epsilon(epsilon);
  const double eps_sq = epsilon * epsilon;
  std::vector<PairHit> pairs;
  for (uint32_t i = 0; i < ps.n; ++i) {
    const auto ri = ps.row(i);
    for (uint32_t j = i + 1; j < ps.n; ++j) {
      const double dist_sq = sq_distance(ri, ps.row(j));
      if (dist_sq <= eps_sq) pairs.push_back(PairHit{i, j, std::sqrt(dist_sq)});
    }
  }
  return pairs;
}

}  // namespace cobl
