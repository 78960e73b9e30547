#include "cobl/grid_domain.hpp"

namespace cobl {

uint64_t GridDomain::count_cells() const {
  if (!mask_) return box_cells();
  std::vector<uint32_t> coord(extents_.size(), 0);
  uint64_t count = 0;
  while (true) {
    if (mask_(coord)) ++count;
    size_t d = extents_.size();
    while (d > 0) {
      --d;
      if (++coord[d] < extents_[d]) break;
      coord[d] = 0;
      if (d == 0) return count;
    }
  }
}

}  // namespace cobl
