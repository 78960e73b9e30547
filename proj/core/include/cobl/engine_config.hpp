#pragma once

// How a kernel asks for its traversal: an order choice plus a schedule plan.
// Kernels own their domain shapes, so the choice is resolved against the
// domain (or, for the matrix kernel, against its free dimensions) at run
// time.

#include <vector>

#include "cobl/curve_order.hpp"
#include "cobl/scheduler.hpp"

namespace cobl {

enum class OrderChoice { Hilbert, ZOrder, RowMajor, Composite };

struct EngineConfig {
  OrderChoice order = OrderChoice::Hilbert;
  std::vector<int> monotone_dims;  // OrderChoice::Composite only
  SchedulePlan plan;
};

/// Resolves the choice to a concrete order whose hypercube covers `domain`.
CurveOrder order_for(const GridDomain& domain, const EngineConfig& config);

}  // namespace cobl
