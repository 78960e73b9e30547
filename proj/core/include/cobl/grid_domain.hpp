#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "cobl/errors.hpp"

namespace cobl {

/// Predicate deciding whether a cell of the bounding box belongs to the
/// domain. Receives the full coordinate, one value per dimension.
using CellPredicate = std::function<bool(std::span<const uint32_t>)>;

/// An n-dimensional integer iteration domain: per-dimension extents plus an
/// optional cell-inclusion mask (triangular and band shapes live here).
/// Cells are indexed 0..extent-1 in each dimension.
class GridDomain {
 public:
  explicit GridDomain(std::vector<uint32_t> extents)
      : GridDomain(std::move(extents), nullptr) {}

  GridDomain(std::vector<uint32_t> extents, CellPredicate mask)
      : extents_(std::move(extents)), mask_(std::move(mask)) {
    if (extents_.empty()) throw ConfigError("domain needs at least one dimension");
    for (uint32_t e : extents_) {
      if (e == 0) throw ConfigError("domain extent must be >= 1");
    }
  }

  int dims() const { return static_cast<int>(extents_.size()); }
  const std::vector<uint32_t>& extents() const { return extents_; }
  uint32_t extent(int dim) const { return extents_[static_cast<size_t>(dim)]; }
  bool has_mask() const { return static_cast<bool>(mask_); }

  bool in_bounds(std::span<const uint32_t> coord) const {
    for (size_t d = 0; d < extents_.size(); ++d) {
      if (coord[d] >= extents_[d]) return false;
    }
    return true;
  }

  /// Mask check only; the coordinate is assumed in bounds.
  bool mask_allows(std::span<const uint32_t> coord) const {
    return !mask_ || mask_(coord);
  }

  bool included(std::span<const uint32_t> coord) const {
    return in_bounds(coord) && mask_allows(coord);
  }

  /// Cells in the bounding box, ignoring the mask.
  uint64_t box_cells() const {
    uint64_t total = 1;
    for (uint32_t e : extents_) total *= e;
    return total;
  }

  /// Exact cell count honoring the mask. Scans the box; desk scale only.
  uint64_t count_cells() const;

 private:
  std::vector<uint32_t> extents_;
  CellPredicate mask_;
};

}  // namespace cobl
