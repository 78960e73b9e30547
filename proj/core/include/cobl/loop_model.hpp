#pragma once

// Declarative loop nests with read/write/reduce access patterns, brute-force
// dependence detection, and inference of the dimensions that must run in
// ascending order. Everything here is desk-scale analysis tooling: pair
// enumeration is O(cells^2) and guarded by explicit budgets.

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "cobl/curve_order.hpp"
#include "cobl/grid_domain.hpp"
#include "cobl/scheduler.hpp"

namespace cobl {

enum class AccessMode { Read, Write, Reduce };

struct ReduceOp {
  std::string name = "+";
  bool commutative = true;
  bool associative = true;
};

/// Sentinel for "this iteration does not touch the array" (e.g. a stencil
/// read falling off the domain edge).
inline constexpr uint64_t kNoCell = ~uint64_t{0};

struct AccessDescriptor {
  std::string array_id;
  AccessMode mode = AccessMode::Read;
  std::function<uint64_t(std::span<const uint32_t>)> index_map;
  ReduceOp op;  // Reduce mode only

  /// cell = sum(coeffs[d] * coord[d]) + offset; a negative result means no
  /// access at that iteration.
  static AccessDescriptor affine(std::string array_id, AccessMode mode,
                                 std::vector<int64_t> coeffs, int64_t offset = 0,
                                 ReduceOp op = {});
};

/// Named dense double arrays the nest body runs against. Optionally records
/// every access (for instrumented validation) and can auto-define arrays on
/// first touch (for sandboxed runs of bodies with unknown footprints).
class ArrayStore {
 public:
  using Recorder = std::function<void(const std::string&, uint64_t, AccessMode)>;

  void define(const std::string& name, size_t cells, double init = 0.0);
  bool defined(const std::string& name) const;
  double read(const std::string& name, uint64_t cell);
  void write(const std::string& name, uint64_t cell, double value);
  /// reduce(+): read-modify-write recorded as a Reduce access
  void add(const std::string& name, uint64_t cell, double value);
  std::span<const double> values(const std::string& name) const;
  const std::map<std::string, std::vector<double>>& arrays() const { return arrays_; }

  void set_recorder(Recorder r) { recorder_ = std::move(r); }
  void set_auto_define(bool enabled) { auto_define_ = enabled; }

 private:
  std::vector<double>& slot(const std::string& name, uint64_t cell);
  std::map<std::string, std::vector<double>> arrays_;
  Recorder recorder_;
  bool auto_define_ = false;
};

struct LoopNest {
  GridDomain domain{std::vector<uint32_t>{1}};
  std::vector<AccessDescriptor> accesses;
  /// Iteration callback; may be null for purely declarative analysis.
  std::function<void(std::span<const uint32_t>, ArrayStore&)> body;
};

enum class DepKind { RAW, WAR, WAW };

struct Conflict {
  std::vector<uint32_t> a;  // earlier iteration, lexicographically before b
  std::vector<uint32_t> b;
  std::string array_id;
  DepKind kind = DepKind::RAW;
  /// Both sides are reduces with the same commutative-associative operator;
  /// such pairs are order-free and do not constrain scheduling.
  bool commutative_reduce = false;
};

struct DependenceReport {
  std::vector<Conflict> conflicts;
  bool safe_unordered = true;
  /// Some ascending-dimension set serializes every order-constraining
  /// conflict; false marks the nest unschedulable by per-dimension monotony.
  bool schedulable = true;
  std::vector<int> required_monotone_dims;
  std::string to_json() const;
};

/// Enumerates all iteration pairs sharing a storage cell where at least one
/// side writes (Write or Reduce). Read-read sharing is not a conflict.
/// safe_unordered is true when every conflict is a same-operator
/// commutative-associative reduce pair. Throws BudgetError when the domain
/// exceeds budget_cells or the conflict list grows past an internal cap.
DependenceReport dependence_check(const LoopNest& nest, uint64_t budget_cells = 10000);

struct MonotonyResult {
  bool schedulable = false;
  std::vector<int> dims;  // ascending dimension indices
};

/// Smallest dimension set (by size, then lexicographic) such that processing
/// those dimensions in ascending order serializes every order-constraining
/// conflict in its original relative order: for each conflict (a before b),
/// a must not exceed b on any chosen dimension and must be strictly smaller
/// on at least one. Returns schedulable = false when no set works.
MonotonyResult monotony_infer(const DependenceReport& report, const LoopNest& nest);

struct ValidateResult {
  bool verifiable = true;
  bool pass = false;
  std::string detail;
};

/// Replays up to sample_iterations evenly spaced iterations in a recording
/// sandbox and fails on the first storage touch not covered by a declared
/// descriptor. Nests without a body are reported unverifiable.
ValidateResult validate_instrumented(const LoopNest& nest,
                                     uint64_t sample_iterations = 256);

struct NestRun {
  ArrayStore store;
  ExecutionReport exec;
  DependenceReport report;
};

/// Checks the nest, refuses it (UnsafeNestError with the report attached)
/// when the order does not serialize its conflicts, then runs the body
/// through the engine. Body invocations are serialized per store; this is
/// analysis tooling, not the performance path.
NestRun execute_nest(const LoopNest& nest, const CurveOrder& order,
                     const SchedulePlan& plan, ArrayStore store,
                     uint64_t budget_cells = 10000);

}  // namespace cobl
