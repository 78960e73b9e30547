#include "cobl/loop_model.hpp"

#include <algorithm>
#include <bit>
#include <mutex>
#include <unordered_map>

#include "json.hpp"

namespace cobl {

AccessDescriptor AccessDescriptor::affine(std::string array_id, AccessMode mode,
                                          std::vector<int64_t> coeffs, int64_t offset,
                                          ReduceOp op) {
  AccessDescriptor d;
  d.array_id = std::move(array_id);
  d.mode = mode;
  d.op = std::move(op);
  d.index_map = [coeffs = std::move(coeffs),
                 offset](std::span<const uint32_t> coord) -> uint64_t {
    int64_t cell = offset;
    const size_t n = std::min(coeffs.size(), coord.size());
    for (size_t i = 0; i < n; ++i) cell += coeffs[i] * static_cast<int64_t>(coord[i]);
    if (cell < 0) return kNoCell;
    return static_cast<uint64_t>(cell);
  };
  return d;
}

void ArrayStore::define(const std::string& name, size_t cells, double init) {
  arrays_[name].assign(cells, init);
}

bool ArrayStore::defined(const std::string& name) const {
  return arrays_.count(name) != 0;
}

std::vector<double>& ArrayStore::slot(const std::string& name, uint64_t cell) {
  auto it = arrays_.find(name);
  if (it == arrays_.end()) {
    if (!auto_define_) throw ConfigError("undefined array: " + name);
    it = arrays_.emplace(name, std::vector<double>()).first;
  }
  auto& vec = it->second;
  if (cell >= vec.size()) {
    if (!auto_define_)
      throw ConfigError(name + " accessed past its size at cell " + std::to_string(cell));
    vec.resize(static_cast<size_t>(cell) + 1, 0.0);
  }
  return vec;
}

double ArrayStore::read(const std::string& name, uint64_t cell) {
  auto& vec = slot(name, cell);
  if (recorder_) recorder_(name, cell, AccessMode::Read);
  return vec[static_cast<size_t>(cell)];
}

void ArrayStore::write(const std::string& name, uint64_t cell, double value) {
  auto& vec = slot(name, cell);
  if (recorder_) recorder_(name, cell, AccessMode::Write);
  vec[static_cast<size_t>(cell)] = value;
}

void ArrayStore::add(const std::string& name, uint64_t cell, double value) {
  auto& vec = slot(name, cell);
  if (recorder_) recorder_(name, cell, AccessMode::Reduce);
  vec[static_cast<size_t>(cell)] += value;
}

std::span<const double> ArrayStore::values(const std::string& name) const {
  const auto it = arrays_.find(name);
  if (it == arrays_.end()) throw ConfigError("undefined array: " + name);
  return it->second;
}

namespace {

const char* kind_name(DepKind k) {
  switch (k) {
    case DepKind::RAW: return "RAW";
    case DepKind::WAR: return "WAR";
    case DepKind::WAW: return "WAW";
  }
  return "?";
}

bool is_writer(AccessMode m) { return m == AccessMode::Write || m == AccessMode::Reduce; }
bool is_reader(AccessMode m) { return m == AccessMode::Read || m == AccessMode::Reduce; }

std::vector<std::vector<uint32_t>> row_major_iterations(const GridDomain& domain) {
  std::vector<std::vector<uint32_t>> its;
  std::vector<uint32_t> coord(static_cast<size_t>(domain.dims()), 0);
  while (true) {
    if (domain.mask_allows(coord)) its.push_back(coord);
    size_t d = coord.size();
    while (d > 0) {
      --d;
      if (++coord[d] < domain.extent(static_cast<int>(d))) break;
      coord[d] = 0;
      if (d == 0) return its;
    }
  }
}

}  // namespace

std::string DependenceReport::to_json() const {
  nlohmann::json j;
  j["safe_unordered"] = safe_unordered;
  j["schedulable"] = schedulable;
  j["required_monotone_dims"] = required_monotone_dims;
  auto& arr = j["conflicts"] = nlohmann::json::array();
  for (const Conflict& c : conflicts) {
    arr.push_back({{"a", c.a},
                   {"b", c.b},
                   {"array", c.array_id},
                   {"kind", kind_name(c.kind)},
                   {"commutative_reduce", c.commutative_reduce}});
  }
  return j.dump();
}

DependenceReport dependence_check(const LoopNest& nest, uint64_t budget_cells) {
  const uint64_t cells = nest.domain.count_cells();
  if (cells > budget_cells)
    throw BudgetError("domain has " + std::to_string(cells) +
                      " cells, over the dependence budget of " +
                      std::to_string(budget_cells));

  const auto its = row_major_iterations(nest.domain);

  // (array, cell) -> touching (iteration rank, descriptor index)
  struct Touch {
    uint32_t iter;
    uint32_t desc;
  };
  std::unordered_map<std::string, std::unordered_map<uint64_t, std::vector<Touch>>> touches;
  for (uint32_t r = 0; r < its.size(); ++r) {
    for (uint32_t a = 0; a < nest.accesses.size(); ++a) {
      const auto& desc = nest.accesses[static_cast<size_t>(a)];
      if (!desc.index_map) throw ConfigError("access descriptor without an index map");
      const uint64_t cell = desc.index_map(its[r]);
      if (cell == kNoCell) continue;
      touches[desc.array_id][cell].push_back(Touch{r, a});
    }
  }

  constexpr uint64_t kConflictCap = 1000000;
  DependenceReport report;
  // one conflict per (a, b, array): remember which pairs are already recorded
  std::unordered_map<std::string, char> seen;
  auto benign = [&](const AccessDescriptor& x, const AccessDescriptor& y) {
    return x.mode == AccessMode::Reduce && y.mode == AccessMode::Reduce &&
           x.op.name == y.op.name && x.op.commutative && x.op.associative &&
           y.op.commutative && y.op.associative;
  };
  for (const auto& [array, cell_map] : touches) {
    for (const auto& [cell, list] : cell_map) {
      for (size_t i = 0; i < list.size(); ++i) {
        for (size_t j = i + 1; j < list.size(); ++j) {
          Touch t1 = list[i], t2 = list[j];
          if (t1.iter == t2.iter) continue;
          if (t1.iter > t2.iter) std::swap(t1, t2);
          const auto& d1 = nest.accesses[t1.desc];
          const auto& d2 = nest.accesses[t2.desc];
          if (!is_writer(d1.mode) && !is_writer(d2.mode)) continue;

          Conflict c;
          c.a = its[t1.iter];
          c.b = its[t2.iter];
          c.array_id = array;
          if (d1.mode == AccessMode::Reduce && d2.mode == AccessMode::Reduce)
            c.kind = DepKind::WAW;
          else if (is_writer(d1.mode) && is_reader(d2.mode))
            c.kind = DepKind::RAW;
          else if (is_reader(d1.mode) && is_writer(d2.mode))
            c.kind = DepKind::WAR;
          else
            c.kind = DepKind::WAW;
          c.commutative_reduce = benign(d1, d2);

          std::string key = array;
          key += '#';
          key += kind_name(c.kind);
          key += c.commutative_reduce ? "+r" : "";
          for (uint32_t v : c.a) (key += ',') += std::to_string(v);
          key += '|';
          for (uint32_t v : c.b) (key += ',') += std::to_string(v);
          if (!seen.emplace(std::move(key), 1).second) continue;

          report.conflicts.push_back(std::move(c));
          if (report.conflicts.size() > kConflictCap)
            throw BudgetError("conflict list exceeds " + std::to_string(kConflictCap) +
                              " entries");
        }
      }
    }
  }

  std::sort(report.conflicts.begin(), report.conflicts.end(),
            [](const Conflict& x, const Conflict& y) {
              if (x.a != y.a) return x.a < y.a;
              if (x.b != y.b) return x.b < y.b;
              if (x.array_id != y.array_id) return x.array_id < y.array_id;
              return static_cast<int>(x.kind) < static_cast<int>(y.kind);
            });

  report.safe_unordered = true;
  for (const Conflict& c : report.conflicts)
    if (!c.commutative_reduce) report.safe_unordered = false;

  const MonotonyResult mono = monotony_infer(report, nest);
  report.schedulable = mono.schedulable;
  report.required_monotone_dims = mono.dims;
  return report;
}

MonotonyResult monotony_infer(const DependenceReport& report, const LoopNest& nest) {
  std::vector<const Conflict*> binding;
  for (const Conflict& c : report.conflicts)
    if (!c.commutative_reduce) binding.push_back(&c);
  if (binding.empty()) return MonotonyResult{true, {}};

  const int n = nest.domain.dims();
  if (n > 16) throw BudgetError("monotony search supports at most 16 dimensions");

  // subsets ordered by size, then by lexicographic dim list
  std::vector<uint32_t> masks;
  for (uint32_t m = 1; m < (1u << n); ++m) masks.push_back(m);
  std::sort(masks.begin(), masks.end(), [](uint32_t x, uint32_t y) {
    const int px = std::popcount(x), py = std::popcount(y);
    if (px != py) return px < py;
    // lower dim indices first: compare bit-reversed numeric order
    uint32_t rx = 0, ry = 0;
    for (int b = 0; b < 16; ++b) {
      rx = (rx << 1) | ((x >> b) & 1u);
      ry = (ry << 1) | ((y >> b) & 1u);
    }
    return rx > ry;
  });

  for (uint32_t mask : masks) {
    bool ok = true;
    for (const Conflict* c : binding) {
      bool never_greater = true, somewhere_less = false;
      for (int d = 0; d < n; ++d) {
        if (!((mask >> d) & 1u)) continue;
        const uint32_t av = c->a[static_cast<size_t>(d)];
        const uint32_t bv = c->b[static_cast<size_t>(d)];
        if (av > bv) {
          never_greater = false;
          break;
        }
        if (av < bv) somewhere_less = true;
      }
      if (!never_greater || !somewhere_less) {
        ok = false;
        break;
      }
    }
    if (ok) {
      MonotonyResult out;
      out.schedulable = true;
      for (int d = 0; d < n; ++d)
        if ((mask >> d) & 1u) out.dims.push_back(d);
      return out;
    }
  }
  return MonotonyResult{false, {}};
}

ValidateResult validate_instrumented(const LoopNest& nest, uint64_t sample_iterations) {
  if (!nest.body)
    return ValidateResult{false, false, "nest body is opaque; nothing to replay"};
  const auto its = row_major_iterations(nest.domain);
  if (its.empty()) return ValidateResult{true, true, "empty domain"};

  const uint64_t stride =
      std::max<uint64_t>(1, its.size() / std::max<uint64_t>(1, sample_iterations));

  ArrayStore sandbox;
  sandbox.set_auto_define(true);
  struct Rec {
    std::string array;
    uint64_t cell;
    AccessMode mode;
  };
  std::vector<Rec> recorded;
  sandbox.set_recorder([&recorded](const std::string& a, uint64_t c, AccessMode m) {
    recorded.push_back(Rec{a, c, m});
  });

  for (uint64_t r = 0; r < its.size(); r += stride) {
    const auto& it = its[static_cast<size_t>(r)];
    recorded.clear();
    nest.body(it, sandbox);
    for (const Rec& rec : recorded) {
      bool covered = false;
      for (const auto& desc : nest.accesses) {
        if (desc.array_id != rec.array || !desc.index_map) continue;
        if (desc.index_map(it) != rec.cell) continue;
        const bool mode_ok =
            (rec.mode == AccessMode::Read &&
             (desc.mode == AccessMode::Read || desc.mode == AccessMode::Reduce)) ||
            (rec.mode == AccessMode::Write &&
             (desc.mode == AccessMode::Write || desc.mode == AccessMode::Reduce)) ||
            (rec.mode == AccessMode::Reduce && desc.mode == AccessMode::Reduce);
        if (mode_ok) {
          covered = true;
          break;
        }
      }
      if (!covered) {
        std::string at = "(";
        for (size_t d = 0; d < it.size(); ++d) {
          if (d) at += ',';
          at += std::to_string(it[d]);
        }
        at += ')';
        return ValidateResult{true, false,
                              "undeclared access to " + rec.array + "[" +
                                  std::to_string(rec.cell) + "] at iteration " + at};
      }
    }
  }
  return ValidateResult{true, true, ""};
}

namespace {

// a strictly before b under the order's monotone priority list
bool lex_serializes(const std::vector<int>& priority, const Conflict& c) {
  for (int d : priority) {
    const uint32_t av = c.a[static_cast<size_t>(d)];
    const uint32_t bv = c.b[static_cast<size_t>(d)];
    if (av < bv) return true;
    if (av > bv) return false;
  }
  return false;  // equal projection: the pair could run concurrently
}

}  // namespace

NestRun execute_nest(const LoopNest& nest, const CurveOrder& order,
                     const SchedulePlan& plan, ArrayStore store, uint64_t budget_cells) {
  DependenceReport report = dependence_check(nest, budget_cells);
  std::vector<int> serialize;
  if (!report.safe_unordered) {
    bool serialized = order.kind() == CurveKind::Composite;
    if (serialized) {
      for (const Conflict& c : report.conflicts) {
        if (c.commutative_reduce) continue;
        if (!lex_serializes(order.monotone_dims(), c)) {
          serialized = false;
          break;
        }
      }
    }
    if (!serialized) throw UnsafeNestError(report.to_json());
    // shortest monotone prefix that still serializes every binding conflict
    const auto& mono = order.monotone_dims();
    for (size_t len = 1; len <= mono.size(); ++len) {
      std::vector<int> prefix(mono.begin(), mono.begin() + static_cast<long>(len));
      bool ok = true;
      for (const Conflict& c : report.conflicts) {
        if (c.commutative_reduce) continue;
        if (!lex_serializes(prefix, c)) {
          ok = false;
          break;
        }
      }
      if (ok) {
        serialize = std::move(prefix);
        break;
      }
    }
  }

  if (!nest.body) throw ConfigError("nest has no body to execute");
  std::mutex store_mu;
  NestRun run{std::move(store), {}, std::move(report)};
  run.exec = execute_cells(
      nest.domain, order, plan,
      [&](std::span<const uint32_t> coord, int) {
        std::lock_guard<std::mutex> g(store_mu);
        nest.body(coord, run.store);
      },
      serialize);
  return run;
}

}  // namespace cobl
