#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>
#include <vector>

#include "cobl/curve_order.hpp"
#include "cobl/errors.hpp"

using namespace cobl;

namespace {

// Reference listing: every included cell of the domain tagged with its
// ordinal under the order, sorted ascending. The walker must reproduce it.
std::vector<CurvePosition> reference_listing(const GridDomain& domain,
                                             const CurveOrder& order) {
  std::vector<CurvePosition> out;
  std::vector<uint32_t> coord(static_cast<size_t>(domain.dims()), 0);
  while (true) {
    if (domain.mask_allows(coord))
      out.push_back(CurvePosition{order.ordinal_of(coord), coord});
    size_t d = coord.size();
    bool done = false;
    while (d > 0) {
      --d;
      if (++coord[d] < domain.extent(static_cast<int>(d))) break;
      coord[d] = 0;
      if (d == 0) done = true;
    }
    if (done) break;
  }
  std::sort(out.begin(), out.end(),
            [](const CurvePosition& a, const CurvePosition& b) {
              return a.ordinal < b.ordinal;
            });
  return out;
}

void check_walker_matches(const GridDomain& domain, const CurveOrder& order) {
  const auto want = reference_listing(domain, order);
  const auto got = enumerate_cells(domain, order);
  REQUIRE(got.size() == want.size());
  for (size_t i = 0; i < got.size(); ++i) {
    REQUIRE(got[i].ordinal == want[i].ordinal);
    REQUIRE(got[i].coord == want[i].coord);
  }
}

}  // namespace

TEST_CASE("walker equals ordinal-sorted enumeration on assorted domains") {
  check_walker_matches(GridDomain({3, 5}), CurveOrder::hilbert(2, 3));
  check_walker_matches(GridDomain({8, 8}), CurveOrder::hilbert(2, 3));
  check_walker_matches(GridDomain({7, 3, 6}), CurveOrder::hilbert(3, 3));
  check_walker_matches(GridDomain({6, 9}), CurveOrder::zorder(2, 4));
  check_walker_matches(GridDomain({13}), CurveOrder::zorder(1, 4));
  check_walker_matches(GridDomain({5, 5}), CurveOrder::row_major(2, 3));
  check_walker_matches(GridDomain({4, 4, 4}), CurveOrder::composite(3, 2, {2}));
  check_walker_matches(GridDomain({4, 4, 4}),
                       CurveOrder::composite(3, 2, {2}, FreeKind::ZOrder));
  check_walker_matches(GridDomain({3, 7, 5}), CurveOrder::composite(3, 3, {1}));
  check_walker_matches(GridDomain({5, 3, 2, 4}),
                       CurveOrder::composite(4, 3, {3, 0}, FreeKind::Scan));

  const auto upper = [](std::span<const uint32_t> c) { return c[0] <= c[1]; };
  check_walker_matches(GridDomain({8, 8}, upper), CurveOrder::zorder(2, 3));
  check_walker_matches(GridDomain({8, 8}, upper), CurveOrder::hilbert(2, 3));
  const auto band = [](std::span<const uint32_t> c) {
    return c[0] <= c[1] + 2 && c[1] <= c[0] + 2;
  };
  check_walker_matches(GridDomain({16, 16}, band), CurveOrder::hilbert(2, 4));
}

TEST_CASE("documented shape examples") {
  CHECK(enumerate_cells(GridDomain({3, 5}), CurveOrder::hilbert(2, 3)).size() == 15);

  const auto upper = [](std::span<const uint32_t> c) { return c[0] <= c[1]; };
  CHECK(enumerate_cells(GridDomain({8, 8}, upper), CurveOrder::zorder(2, 3)).size() ==
        36);

  const auto blocks =
      enumerate_cells(GridDomain({4, 4, 4}), CurveOrder::composite(3, 2, {2}));
  REQUIRE(blocks.size() == 64);
  for (size_t i = 0; i < blocks.size(); ++i)
    CHECK(blocks[i].coord[2] == i / 16);  // dim 2 ascends in blocks of 16
}

TEST_CASE("composite ordering follows monotone-projection precedence") {
  // emission order: lexicographic on the monotone projection (priority
  // order), free ordinal breaking ties
  const GridDomain domain({4, 4, 4});
  for (const auto& order :
       {CurveOrder::composite(3, 2, {2}), CurveOrder::composite(3, 2, {0, 2}),
        CurveOrder::composite(3, 2, {2, 0}, FreeKind::Scan)}) {
    const auto cells = enumerate_cells(domain, order);
    const auto& mono = order.monotone_dims();
    for (size_t i = 1; i < cells.size(); ++i) {
      const auto& a = cells[i - 1].coord;
      const auto& b = cells[i].coord;
      // the projection of the earlier cell is lexicographically <= later
      bool less_or_equal = true;
      for (int dim : mono) {
        if (a[static_cast<size_t>(dim)] < b[static_cast<size_t>(dim)]) break;
        if (a[static_cast<size_t>(dim)] > b[static_cast<size_t>(dim)]) {
          less_or_equal = false;
          break;
        }
      }
      REQUIRE(less_or_equal);
    }
  }
}

TEST_CASE("row-major factory is an all-monotone composite") {
  const auto order = CurveOrder::row_major(3, 2);
  CHECK(order.kind() == CurveKind::Composite);
  CHECK(order.monotone_dims() == std::vector<int>{0, 1, 2});
  const auto cells = enumerate_cells(GridDomain({3, 2, 4}), order);
  REQUIRE(cells.size() == 24);
  size_t idx = 0;
  for (uint32_t i = 0; i < 3; ++i)
    for (uint32_t j = 0; j < 2; ++j)
      for (uint32_t k = 0; k < 4; ++k, ++idx)
        REQUIRE(cells[idx].coord == std::vector<uint32_t>{i, j, k});
}

TEST_CASE("1-D Hilbert degrades to the ascending scan") {
  const auto order = CurveOrder::hilbert(1, 3);
  CHECK(order.kind() == CurveKind::ZOrder);
  const auto cells = enumerate_cells(GridDomain({8}), order);
  REQUIRE(cells.size() == 8);
  for (uint32_t i = 0; i < 8; ++i) CHECK(cells[i].coord[0] == i);
}

TEST_CASE("ordinal/coordinate round-trip for every kind") {
  for (const auto& order :
       {CurveOrder::hilbert(3, 3), CurveOrder::zorder(3, 3),
        CurveOrder::composite(3, 3, {1}), CurveOrder::row_major(3, 3)}) {
    std::vector<uint32_t> coord(3);
    std::set<std::vector<uint32_t>> seen;
    for (uint64_t d = 0; d < order.size(); ++d) {
      order.coord_of(d, coord);
      REQUIRE(order.ordinal_of(coord) == d);
      seen.insert(coord);
    }
    CHECK(seen.size() == order.size());
  }
}

TEST_CASE("walker windows slice the full enumeration") {
  const GridDomain domain({7, 6});
  const auto order = CurveOrder::hilbert(2, 3);
  const auto full = enumerate_cells(domain, order);
  for (const auto& [lo, hi] : {std::pair<uint64_t, uint64_t>{0, 10},
                              {13, 13},
                              {5, 37},
                              {30, 64}}) {
    CurveWalker walker(domain, order, lo, hi);
    std::vector<uint32_t> coord(2);
    uint64_t ordinal = 0;
    std::vector<CurvePosition> got;
    while (walker.next(coord, ordinal))
      got.push_back(CurvePosition{ordinal, coord});
    std::vector<CurvePosition> want;
    for (const auto& p : full)
      if (p.ordinal >= lo && p.ordinal < hi) want.push_back(p);
    REQUIRE(got.size() == want.size());
    for (size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].ordinal == want[i].ordinal);
      CHECK(got[i].coord == want[i].coord);
    }
  }
}

TEST_CASE("level_for covers the extents tightly") {
  CHECK(level_for(GridDomain({5})) == 3);
  CHECK(level_for(GridDomain({4, 4})) == 2);
  CHECK(level_for(GridDomain({1, 1})) == 0);
  CHECK(level_for(GridDomain({9, 2})) == 4);
}

TEST_CASE("configuration errors") {
  CHECK_THROWS_AS(CurveOrder::composite(3, 2, {0, 0}), ConfigError);
  CHECK_THROWS_AS(CurveOrder::composite(3, 2, {3}), ConfigError);
  CHECK_THROWS_AS(CurveOrder::composite(3, 2, {-1}), ConfigError);
  CHECK_THROWS_AS(CurveOrder::hilbert(2, 40), ConfigError);

  // order hypercube too small for the domain
  const GridDomain domain({9, 9});
  CHECK_THROWS_AS(CurveWalker(domain, CurveOrder::hilbert(2, 3)), ConfigError);
  // dimensionality mismatch
  CHECK_THROWS_AS(CurveWalker(domain, CurveOrder::hilbert(3, 4)), ConfigError);

  std::vector<uint32_t> coord(2);
  CHECK_THROWS_AS(CurveOrder::hilbert(2, 2).coord_of(16, coord), std::domain_error);
}
