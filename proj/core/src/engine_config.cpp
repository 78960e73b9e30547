#include "cobl/engine_config.hpp"

namespace cobl {

CurveOrder order_for(const GridDomain& domain, const EngineConfig& config) {
  const int n = domain.dims();
  const int level = level_for(domain);
  switch (config.order) {
    case OrderChoice::Hilbert:
      if (n == 1) return CurveOrder::zorder(1, level);
      return CurveOrder::hilbert(n, level);
    case OrderChoice::ZOrder:
      return CurveOrder::zorder(n, level);
    case OrderChoice::RowMajor:
      return CurveOrder::row_major(n, level);
    case OrderChoice::Composite:
      if (config.monotone_dims.empty())
        throw ConfigError("composite order needs at least one monotone dimension");
      return CurveOrder::composite(n, level, config.monotone_dims);
  }
  throw ConfigError("unknown order choice");
}

}  // namespace cobl
