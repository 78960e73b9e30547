#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "cobl/errors.hpp"
#include "cobl/join.hpp"

using namespace cobl;

namespace {

double dist(const PointSet& ps, uint32_t a, uint32_t b) {
  const auto ra = ps.row(a);
  const auto rb = ps.row(b);
  double s = 0;
  for (uint32_t j = 0; j < ps.d; ++j) {
    const double diff = static_cast<double>(ra[j]) - static_cast<double>(rb[j]);
    s += diff * diff;
  }
  return std::sqrt(s);
}

std::vector<std::pair<uint32_t, uint32_t>> id_pairs(const std::vector<PairHit>& hits) {
  std::vector<std::pair<uint32_t, uint32_t>> out;
  out.reserve(hits.size());
  for (const PairHit& h : hits) out.emplace_back(h.a, h.b);
  return out;
}

// Checks a join result against the quadratic oracle and first principles:
// the pair lists must be set-equal, every emitted pair must actually lie
// within epsilon (recomputed here, not trusted from the library), and the
// grid-interval invariant the pruning relies on must hold.
void check_join(const PointSet& ps, double epsilon, const EngineConfig& config,
                const JoinParams& params = {}) {
  JoinParams p = params;
  p.epsilon = epsilon;
  const JoinResult res = epsilon_self_join(ps, p, config);
  const std::vector<PairHit> oracle = brute_force_join(ps, epsilon);

  CHECK(id_pairs(res.pairs) == id_pairs(oracle));
  CHECK(res.stats.interval_violations == 0);
  CHECK(res.stats.pairs_emitted == res.pairs.size());
  CHECK(std::is_sorted(res.pairs.begin(), res.pairs.end(), [](const PairHit& x, const PairHit& y) {
    return x.a != y.a ? x.a < y.a : x.b < y.b;
  }));
  for (const PairHit& h : res.pairs) {
    CHECK(h.a < h.b);
    CHECK(dist(ps, h.a, h.b) <= epsilon);
    CHECK(h.distance == doctest::Approx(dist(ps, h.a, h.b)).epsilon(1e-12));
  }
}

EngineConfig engine(OrderChoice order, uint32_t workers, ScheduleMode mode) {
  EngineConfig config;
  config.order = order;
  config.plan.workers = workers;
  config.plan.mode = mode;
  config.plan.packet_size = 8;
  return config;
}

}  // namespace

TEST_CASE("join matches the quadratic oracle across datasets and engines") {
  struct Case {
    PointSet ps;
    double epsilon;
    EngineConfig config;
  };
  const std::vector<Case> cases = {
      {gen_uniform(100, 2, 1), 0.05, engine(OrderChoice::Hilbert, 1, ScheduleMode::Static)},
      {gen_uniform(300, 2, 2), 0.15, engine(OrderChoice::Hilbert, 4, ScheduleMode::Stealing)},
      {gen_uniform(500, 4, 3), 0.25, engine(OrderChoice::ZOrder, 2, ScheduleMode::Stealing)},
      {gen_uniform(800, 4, 4), 0.40, engine(OrderChoice::Hilbert, 8, ScheduleMode::Stealing)},
      {gen_uniform(400, 8, 5), 0.60, engine(OrderChoice::RowMajor, 4, ScheduleMode::Static)},
      {gen_blobs(300, 2, 4, 6), 0.10, engine(OrderChoice::ZOrder, 4, ScheduleMode::Static)},
      {gen_blobs(500, 4, 5, 7), 0.20, engine(OrderChoice::Hilbert, 4, ScheduleMode::Stealing)},
      {gen_blobs(800, 8, 3, 8), 0.50, engine(OrderChoice::Hilbert, 3, ScheduleMode::Stealing)},
  };
  for (size_t i = 0; i < cases.size(); ++i) {
    CAPTURE(i);
    check_join(cases[i].ps, cases[i].epsilon, cases[i].config);
  }
}

TEST_CASE("small block sizes only change the traversal, not the answer") {
  const PointSet ps = gen_uniform(400, 4, 21);
  const EngineConfig config = engine(OrderChoice::Hilbert, 4, ScheduleMode::Stealing);
  JoinParams params;
  params.block_size = 32;
  check_join(ps, 0.3, config, params);
  params.block_size = 7;
  check_join(ps, 0.3, config, params);
}

TEST_CASE("epsilon zero finds exact duplicates") {
  PointSet ps = gen_uniform(50, 3, 9);
  // plant duplicates: row 50 == row 3, rows 51 and 52 == row 10
  for (uint32_t src : {3u, 10u, 10u})
    for (uint32_t j = 0; j < ps.d; ++j) ps.data.push_back(ps.data[src * ps.d + j]);
  ps.n += 3;

  JoinParams params;
  params.epsilon = 0.0;
  const JoinResult res = epsilon_self_join(ps, params, EngineConfig{});
  const std::vector<std::pair<uint32_t, uint32_t>> expect = {{3, 50}, {10, 51}, {10, 52}, {51, 52}};
  CHECK(id_pairs(res.pairs) == expect);
  CHECK(id_pairs(brute_force_join(ps, 0.0)) == expect);
  for (const PairHit& h : res.pairs) CHECK(h.distance == 0.0);
}

TEST_CASE("grid cells use floor division") {
  PointSet ps;
  ps.n = 5;
  ps.d = 1;
  ps.data = {-0.3f, -0.25f, 0.0f, 0.6f, 0.75f};
  const std::vector<int64_t> cells = ego_cells(ps, 0.25);
  CHECK(cells == std::vector<int64_t>{-2, -1, 0, 2, 3});
}

TEST_CASE("grid sort orders by permuted cells and keeps ties stable") {
  PointSet ps;
  ps.n = 6;
  ps.d = 2;
  // cells at epsilon 0.5: (x cell, y cell)
  ps.data = {
      0.6f, 0.1f,  // (1, 0)
      0.1f, 0.6f,  // (0, 1)
      0.7f, 0.2f,  // (1, 0) again: tie with point 0
      0.1f, 0.1f,  // (0, 0)
      1.2f, 0.1f,  // (2, 0)
      0.2f, 0.2f,  // (0, 0) again: tie with point 3
  };
  // lexicographic by (cell x, cell y): (0,0) (0,0) (0,1) (1,0) (1,0) (2,0)
  CHECK(ego_sort(ps, 0.5) == std::vector<uint32_t>{3, 5, 1, 0, 2, 4});
  // permuting dimensions swaps the comparison order: (0,0) (0,0) (0,1) (0,2) (1,0) (1,0)
  CHECK(ego_sort(ps, 0.5, {1, 0}) == std::vector<uint32_t>{3, 5, 0, 2, 4, 1});
}

TEST_CASE("dimension choice ranks separating power") {
  PointSet ps;
  ps.n = 200;
  ps.d = 2;
  Rng rng(31);
  for (uint32_t i = 0; i < ps.n; ++i) {
    ps.data.push_back(static_cast<float>(rng.uniform() * 0.01));  // dim 0: no spread
    ps.data.push_back(static_cast<float>(rng.uniform() * 10.0));  // dim 1: wide
  }
  const std::vector<int> perm = choose_dim_permutation(ps, 0.5);
  REQUIRE(perm.size() == 2);
  CHECK(perm[0] == 1);
  CHECK(perm[1] == 0);
}

TEST_CASE("the answer does not depend on the dimension permutation") {
  const PointSet ps = gen_blobs(400, 4, 6, 13);
  const EngineConfig config = engine(OrderChoice::Hilbert, 4, ScheduleMode::Stealing);
  JoinParams a, b, c;
  a.epsilon = b.epsilon = c.epsilon = 0.25;
  b.dim_permutation = {3, 2, 1, 0};
  c.dim_permutation = choose_dim_permutation(ps, 0.25);
  const JoinResult ra = epsilon_self_join(ps, a, config);
  const JoinResult rb = epsilon_self_join(ps, b, config);
  const JoinResult rc = epsilon_self_join(ps, c, config);
  CHECK(id_pairs(ra.pairs) == id_pairs(rb.pairs));
  CHECK(id_pairs(ra.pairs) == id_pairs(rc.pairs));
  for (size_t i = 0; i < ra.pairs.size(); ++i) {
    CHECK(ra.pairs[i].distance == rb.pairs[i].distance);
    CHECK(ra.pairs[i].distance == rc.pairs[i].distance);
  }
}

TEST_CASE("invalid inputs are rejected") {
  const PointSet ps = gen_uniform(20, 2, 1);
  JoinParams params;

  params.epsilon = -0.1;
  CHECK_THROWS_AS(epsilon_self_join(ps, params, EngineConfig{}), ConfigError);
  CHECK_THROWS_AS(brute_force_join(ps, -1.0), ConfigError);
  CHECK_THROWS_AS(brute_force_join(ps, std::numeric_limits<double>::quiet_NaN()), ConfigError);

  CHECK_THROWS_AS(ego_sort(ps, 0.0), ConfigError);
  CHECK_THROWS_AS(ego_cells(ps, 0.0), ConfigError);

  params.epsilon = 0.1;
  params.dim_permutation = {0};  // wrong length
  CHECK_THROWS_AS(epsilon_self_join(ps, params, EngineConfig{}), ConfigError);
  params.dim_permutation = {0, 0};  // duplicate
  CHECK_THROWS_AS(epsilon_self_join(ps, params, EngineConfig{}), ConfigError);
  params.dim_permutation = {0, 2};  // out of range
  CHECK_THROWS_AS(epsilon_self_join(ps, params, EngineConfig{}), ConfigError);
  params.dim_permutation.clear();

  params.block_size = 0;
  CHECK_THROWS_AS(epsilon_self_join(ps, params, EngineConfig{}), ConfigError);
  params.block_size = 256;

  PointSet bad = ps;
  bad.data[5] = std::numeric_limits<float>::quiet_NaN();
  CHECK_THROWS_AS(epsilon_self_join(bad, params, EngineConfig{}), DataError);
}
