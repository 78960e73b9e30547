#include "cobl/cache_sim.hpp"

#include <algorithm>
#include <list>
#include <unordered_map>
#include <unordered_set>

namespace cobl {

namespace {

class LruCache {
 public:
  explicit LruCache(uint32_t lines) : capacity_(lines) {}

  // true on hit
  bool touch(uint64_t line) {
    const auto it = where_.find(line);
    if (it != where_.end()) {
      order_.splice(order_.begin(), order_, it->second);
      return true;
    }
    order_.push_front(line);
    where_[line] = order_.begin();
    if (where_.size() > capacity_) {
      where_.erase(order_.back());
      order_.pop_back();
    }
    return false;
  }

 private:
  uint32_t capacity_;
  std::list<uint64_t> order_;
  std::unordered_map<uint64_t, std::list<uint64_t>::iterator> where_;
};

}  // namespace

uint64_t locality_score(const CurveOrder& order, const GridDomain& domain,
                        const AccessPattern& pattern, const CacheModel& cache,
                        uint64_t access_budget) {
  if (cache.line_size < 1 || cache.lines < 1)
    throw ConfigError("cache model needs line_size >= 1 and lines >= 1");
  LruCache lru(cache.lines);
  CurveWalker walker(domain, order);
  std::vector<uint32_t> coord(static_cast<size_t>(domain.dims()));
  std::vector<uint64_t> cells;
  uint64_t misses = 0;
  uint64_t accesses = 0;
  while (walker.next(coord)) {
    cells.clear();
    pattern(coord, cells);
    accesses += cells.size();
    if (accesses > access_budget)
      throw BudgetError("storage trace exceeds the access budget");
    for (uint64_t cell : cells) {
      if (!lru.touch(cell / cache.line_size)) ++misses;
    }
  }
  return misses;
}

AccessPattern pairwise_pattern(uint32_t points) {
  return [points](std::span<const uint32_t> coord, std::vector<uint64_t>& out) {
    out.push_back(coord[0]);
    out.push_back(static_cast<uint64_t>(points) + coord[1]);
  };
}

uint64_t transfer_cost(const GridDomain& domain, const CurveOrder& order,
                       const std::vector<Packet>& packets,
                       const std::vector<int>& node_of_packet,
                       const AccessPattern& pattern, uint64_t record_size_bytes,
                       ReplicationModel model) {
  if (node_of_packet.size() != packets.size())
    throw ConfigError("every packet needs a node assignment");
  int max_node = -1;
  for (int node : node_of_packet) {
    if (node < 0) throw ConfigError("packet assigned to a negative node");
    max_node = std::max(max_node, node);
  }
  std::vector<std::unordered_set<uint64_t>> node_cells(
      static_cast<size_t>(max_node + 1));
  std::vector<uint32_t> coord(static_cast<size_t>(domain.dims()));
  std::vector<uint64_t> cells;
  uint64_t total_cells = 0;
  for (size_t pi = 0; pi < packets.size(); ++pi) {
    CurveWalker walker(domain, order, packets[pi].start, packets[pi].end);
    std::unordered_set<uint64_t> packet_cells;
    auto& sink = model == ReplicationModel::PerPacket
                     ? packet_cells
                     : node_cells[static_cast<size_t>(node_of_packet[pi])];
    while (walker.next(coord)) {
      cells.clear();
      pattern(coord, cells);
      for (uint64_t cell : cells) sink.insert(cell);
    }
    if (model == ReplicationModel::PerPacket) total_cells += packet_cells.size();
  }
  if (model == ReplicationModel::NodeWorkingSet) {
    for (const auto& set : node_cells) total_cells += set.size();
  }
  return total_cells * record_size_bytes;
}

}  // namespace cobl
