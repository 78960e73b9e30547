#include "cobl/scheduler.hpp"

#include <algorithm>
#include <atomic>
#include <barrier>
#include <chrono>
#include <exception>
#include <mutex>
#include <thread>

#include "json.hpp"

namespace cobl {

std::vector<Packet> partition(const CurveOrder& order, uint64_t packet_size,
                              std::string domain_ref) {
  if (packet_size < 1) throw ConfigError("packet_size must be >= 1");
  std::vector<Packet> packets;
  const uint64_t total = order.size();
  packets.reserve(static_cast<size_t>((total + packet_size - 1) / packet_size));
  for (uint64_t start = 0; start < total; start += packet_size) {
    packets.push_back(Packet{start, std::min(start + packet_size, total), domain_ref});
  }
  return packets;
}

void ExecutionReport::accumulate(const ExecutionReport& other) {
  mode = other.mode;
  workers = std::max(workers, other.workers);
  packets_total += other.packets_total;
  phases += other.phases;
  steals += other.steals;
  wall_ns += other.wall_ns;
  if (per_worker.size() < other.per_worker.size())
    per_worker.resize(other.per_worker.size());
  for (size_t w = 0; w < other.per_worker.size(); ++w) {
    per_worker[w].packets += other.per_worker[w].packets;
    per_worker[w].cells += other.per_worker[w].cells;
    per_worker[w].steals += other.per_worker[w].steals;
    per_worker[w].busy_ns += other.per_worker[w].busy_ns;
  }
}

std::string ExecutionReport::to_json() const {
  nlohmann::json j;
  j["mode"] = mode == ScheduleMode::Static ? "static" : "stealing";
  j["workers"] = workers;
  j["packets_total"] = packets_total;
  j["phases"] = phases;
  j["steals"] = steals;
  j["wall_ns"] = wall_ns;
  auto& arr = j["per_worker"] = nlohmann::json::array();
  for (const WorkerStats& st : per_worker) {
    arr.push_back({{"packets", st.packets},
                   {"cells", st.cells},
                   {"steals", st.steals},
                   {"busy_ns", st.busy_ns}});
  }
  return j.dump();
}

namespace exec_detail {

std::vector<PacketTask> packet_tasks(const GridDomain& domain, const CurveOrder& order,
                                     uint64_t packet_size,
                                     std::span<const int> serialize_dims) {
  if (packet_size < 1) throw ConfigError("packet_size must be >= 1");
  if (!order.covers(domain))
    throw ConfigError("curve hypercube does not cover the domain");

  int prefix = 0;
  if (!serialize_dims.empty()) {
    if (order.kind() != CurveKind::Composite)
      throw ConfigError("serialized dimensions need a composite order");
    const auto& mono = order.monotone_dims();
    for (int sd : serialize_dims) {
      const auto it = std::find(mono.begin(), mono.end(), sd);
      if (it == mono.end())
        throw ConfigError("serialized dimension is not monotone in the order");
      prefix = std::max(prefix, static_cast<int>(it - mono.begin()) + 1);
    }
  }

  std::vector<PacketTask> tasks;
  auto tile = [&tasks](uint64_t lo, uint64_t hi, uint64_t step, uint64_t phase) {
    for (uint64_t s = lo; s < hi; s += step)
      tasks.push_back(PacketTask{s, std::min(s + step, hi), phase});
  };

  if (prefix == 0) {
    tile(0, order.size(), packet_size, 0);
    return tasks;
  }

  const int level = order.level();
  const int prefix_bits = level * prefix;
  const uint64_t phase_block = order.size() >> prefix_bits;
  const uint64_t step = std::min(packet_size, phase_block);
  const uint64_t phase_count = uint64_t{1} << prefix_bits;
  const auto& mono = order.monotone_dims();
  const uint64_t digit_mask = (uint64_t{1} << level) - 1;
  uint64_t ph = 0;
  while (ph < phase_count) {
    // skip phases whose monotone digits fall outside the domain, carrying
    // past the whole out-of-bounds digit range at once
    int bad = -1;
    for (int i = 0; i < prefix; ++i) {
      const uint32_t digit =
          static_cast<uint32_t>((ph >> ((prefix - 1 - i) * level)) & digit_mask);
      if (digit >= domain.extent(mono[static_cast<size_t>(i)])) {
        bad = i;
        break;
      }
    }
    if (bad >= 0) {
      const int carry_shift = (prefix - 1 - bad) * level + level;
      if (carry_shift >= 64) break;
      ph = ((ph >> carry_shift) + 1) << carry_shift;
      continue;
    }
    tile(ph * phase_block, (ph + 1) * phase_block, step, ph);
    ++ph;
  }
  return tasks;
}

namespace {

struct Range {
  std::mutex mu;
  uint64_t lo = 0;
  uint64_t hi = 0;
};

}  // namespace

ExecutionReport run_packets(const SchedulePlan& plan, const std::vector<PacketTask>& tasks,
                            const std::function<uint64_t(uint64_t, int)>& fn) {
  if (plan.workers < 1) throw ConfigError("workers must be >= 1");
  const int p = plan.workers;

  std::vector<std::pair<uint64_t, uint64_t>> groups;
  for (size_t i = 0; i < tasks.size();) {
    size_t j = i;
    while (j < tasks.size() && tasks[j].phase == tasks[i].phase) ++j;
    groups.emplace_back(i, j);
    i = j;
  }

  ExecutionReport rep;
  rep.mode = plan.mode;
  rep.workers = p;
  rep.packets_total = tasks.size();
  rep.phases = groups.size();
  rep.per_worker.assign(static_cast<size_t>(p), WorkerStats{});

  std::vector<std::atomic<uint32_t>> exec_count(tasks.size());
  std::vector<Range> ranges(static_cast<size_t>(p));
  std::atomic<bool> abort{false};
  std::atomic<bool> double_run{false};
  std::mutex error_mu;
  std::exception_ptr first_error;
  std::barrier<> sync(p);

  auto run_one = [&](uint64_t idx, int w, WorkerStats& st) {
    const auto t0 = std::chrono::steady_clock::now();
    if (plan.packet_hook) plan.packet_hook(idx, w);
    const uint64_t cells = fn(idx, w);
    const auto t1 = std::chrono::steady_clock::now();
    st.busy_ns += std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
    st.packets += 1;
    st.cells += cells;
    if (exec_count[idx].fetch_add(1, std::memory_order_relaxed) != 0)
      double_run.store(true);
  };

  auto pop_own = [&](int w, uint64_t& idx) {
    Range& r = ranges[static_cast<size_t>(w)];
    std::lock_guard<std::mutex> g(r.mu);
    if (r.lo >= r.hi) return false;
    idx = r.lo++;
    return true;
  };

  // Takes the trailing half of the most-loaded victim's range; both halves
  // remain contiguous. Requires at least 2 remaining packets so a lone
  // packet is never contested with its owner.
  auto try_steal = [&](int self, WorkerStats& st) {
    while (!abort.load()) {
      int victim = -1;
      uint64_t best = 1;
      for (int i = 0; i < p; ++i) {
        if (i == self) continue;
        Range& r = ranges[static_cast<size_t>(i)];
        std::lock_guard<std::mutex> g(r.mu);
        const uint64_t size = r.hi - r.lo;
        if (size > best) {
          best = size;
          victim = i;
        }
      }
      if (victim < 0) return false;
      Range& v = ranges[static_cast<size_t>(victim)];
      Range& mine = ranges[static_cast<size_t>(self)];
      std::scoped_lock both(v.mu, mine.mu);
      const uint64_t size = v.hi - v.lo;
      if (size < 2) continue;  // lost the race, rescan
      const uint64_t take = size / 2;
      mine.lo = v.hi - take;
      mine.hi = v.hi;
      v.hi -= take;
      st.steals += 1;
      return true;
    }
    return false;
  };

  auto worker_main = [&](int w) {
    WorkerStats& st = rep.per_worker[static_cast<size_t>(w)];
    for (const auto& [gs, ge] : groups) {
      try {
        if (!abort.load()) {
          if (plan.mode == ScheduleMode::Static) {
            for (uint64_t i = gs; i < ge; ++i) {
              if (i % static_cast<uint64_t>(p) != static_cast<uint64_t>(w)) continue;
              if (abort.load()) break;
              run_one(i, w, st);
            }
          } else {
            {
              Range& r = ranges[static_cast<size_t>(w)];
              std::lock_guard<std::mutex> g(r.mu);
              const uint64_t len = ge - gs;
              r.lo = gs + len * static_cast<uint64_t>(w) / p;
              r.hi = gs + len * (static_cast<uint64_t>(w) + 1) / p;
            }
            sync.arrive_and_wait();
            uint64_t idx = 0;
            while (!abort.load()) {
              if (pop_own(w, idx)) {
                run_one(idx, w, st);
                continue;
              }
              if (!try_steal(w, st)) break;
            }
          }
        } else if (plan.mode == ScheduleMode::Stealing) {
          sync.arrive_and_wait();  // match the range-setup barrier
        }
      } catch (...) {
        abort.store(true);
        std::lock_guard<std::mutex> g(error_mu);
        if (!first_error) first_error = std::current_exception();
      }
      sync.arrive_and_wait();  // end of phase
    }
  };

  const auto w0 = std::chrono::steady_clock::now();
  {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<size_t>(p));
    for (int w = 0; w < p; ++w) pool.emplace_back(worker_main, w);
  }
  const auto w1 = std::chrono::steady_clock::now();
  rep.wall_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(w1 - w0).count();
  for (const WorkerStats& st : rep.per_worker) rep.steals += st.steals;

  if (first_error) std::rethrow_exception(first_error);
  if (double_run.load()) throw std::logic_error("scheduler executed a packet twice");
  uint64_t ran = 0;
  for (const WorkerStats& st : rep.per_worker) ran += st.packets;
  if (ran != tasks.size()) throw std::logic_error("scheduler dropped packets");
  return rep;
}

}  // namespace exec_detail

}  // namespace cobl
