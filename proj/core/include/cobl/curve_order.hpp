#pragma once

// Traversal orders over grid domains.
//
// A CurveOrder names a bijection between [0, 2^(level*n)) and the cells of
// the enclosing hypercube. Three kinds:
//
//   Hilbert    space-filling curve, consecutive cells L1-adjacent
//   ZOrder     Morton bit interleave
//   Composite  lexicographic over a priority list of monotone dimensions,
//              with the remaining (free) dimensions traversed by an inner
//              curve per block
//
// Composite ordinal layout, most significant first:
//   [digit of monotone dim m0][digit of m1]...[inner ordinal of free dims]
// where each monotone digit is `level` bits wide and the inner ordinal is
// level*|free| bits. Consequence: if a precedes b lexicographically on the
// monotone dims (in listed priority order), a's ordinal is smaller, so a is
// emitted first. With one free dimension the inner order degenerates to an
// ascending scan; with none the order is pure lexicographic.
//
// 1-D requests for Hilbert collapse to ZOrder, which in 1-D is the identity
// (ascending) order.

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "cobl/curve.hpp"
#include "cobl/grid_domain.hpp"

namespace cobl {

enum class CurveKind { Hilbert, ZOrder, Composite };
enum class FreeKind { Hilbert, ZOrder, Scan };

class CurveOrder {
 public:
  static CurveOrder hilbert(int dims, int level);
  static CurveOrder zorder(int dims, int level);
  // monotone_dims is a priority list (first = most significant), non-empty,
  // no duplicates, each < dims. free_kind applies when >= 2 dims are free;
  // exactly one free dim always scans ascending.
  static CurveOrder composite(int dims, int level, std::vector<int> monotone_dims,
                              FreeKind free_kind = FreeKind::Hilbert);
  // All dims monotone in index order: plain row-major / lexicographic.
  static CurveOrder row_major(int dims, int level);

  CurveKind kind() const { return kind_; }
  FreeKind free_kind() const { return free_kind_; }
  int dims() const { return dims_; }
  int level() const { return level_; }
  const std::vector<int>& monotone_dims() const { return monotone_; }
  const std::vector<int>& free_dims() const { return free_; }

  // Total ordinals over the enclosing hypercube: 2^(level*dims).
  uint64_t size() const { return uint64_t{1} << (static_cast<uint64_t>(dims_) * level_); }
  // Ordinals per fixed monotone assignment: 2^(level*|free|). Equals size()
  // for non-composite orders.
  uint64_t inner_size() const;

  bool covers(const GridDomain& domain) const;

  uint64_t ordinal_of(std::span<const uint32_t> coord) const;
  void coord_of(uint64_t ordinal, std::span<uint32_t> out) const;

 private:
  CurveOrder() = default;
  CurveKind kind_ = CurveKind::ZOrder;
  FreeKind free_kind_ = FreeKind::Scan;
  int dims_ = 1;
  int level_ = 0;
  std::vector<int> monotone_;  // priority order
  std::vector<int> free_;      // ascending dim index
};

// Smallest level whose hypercube side covers every extent of the domain.
int level_for(const GridDomain& domain);

// Spec'd constructor taking the domain: level is derived, kind is Composite.
CurveOrder composite_order(const GridDomain& domain, std::vector<int> monotone_dims,
                           FreeKind free_kind = FreeKind::Hilbert);

struct CurvePosition {
  uint64_t ordinal;
  std::vector<uint32_t> coord;
};

// Streaming enumeration of the included cells of `domain` whose ordinals fall
// in [begin, end), in ascending ordinal order. Out-of-domain and mask-excluded
// cells of the hypercube are skipped; whole subtrees whose bounding box lies
// outside the domain are pruned without descending.
class CurveWalker {
 public:
  CurveWalker(const GridDomain& domain, const CurveOrder& order);
  CurveWalker(const GridDomain& domain, const CurveOrder& order, uint64_t begin,
              uint64_t end);
  ~CurveWalker();
  CurveWalker(CurveWalker&&) noexcept;
  CurveWalker& operator=(CurveWalker&&) noexcept;
  CurveWalker(const CurveWalker&) = delete;
  CurveWalker& operator=(const CurveWalker&) = delete;

  // Writes the next included cell into `coord` (size dims). Returns false
  // when the window is exhausted.
  bool next(std::span<uint32_t> coord);
  bool next(std::span<uint32_t> coord, uint64_t& ordinal);

  uint64_t emitted() const { return emitted_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  uint64_t emitted_ = 0;
};

// Materialized enumeration; desk scale only.
std::vector<CurvePosition> enumerate_cells(const GridDomain& domain,
                                           const CurveOrder& order);

}  // namespace cobl
