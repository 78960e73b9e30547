#pragma once

// Point datasets and their file formats.
//
// Text format: header line "n d", then one point per line as comma-separated
// decimals. Binary format: 8-byte header (n, d as little-endian uint32),
// then n*d little-endian float32 values, row-major. Loading sniffs the
// binary header and falls back to text.

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "cobl/errors.hpp"

namespace cobl {

struct PointSet {
  uint32_t n = 0;
  uint32_t d = 0;
  std::vector<float> data;  // row-major, n*d values; point ids are row indices

  std::span<const float> row(uint32_t i) const {
    return {data.data() + static_cast<size_t>(i) * d, d};
  }
};

PointSet load_points(const std::string& path);
void save_points_text(const PointSet& ps, const std::string& path);
void save_points_binary(const PointSet& ps, const std::string& path);

/// mt19937_64 with fixed bit-level value transforms. The std distribution
/// classes are not pinned across standard libraries, so datasets built with
/// them would not reproduce; these transforms are.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t bits() { return engine_(); }
  /// [0, 1)
  double uniform() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }
  /// standard normal, Box-Muller
  double gaussian();
  /// [0, bound), unbiased
  uint64_t integer(uint64_t bound);

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// i.i.d. uniform coordinates in [0, 1).
PointSet gen_uniform(uint32_t n, uint32_t d, uint64_t seed);

/// k gaussian blobs: centers uniform in [0,1)^d, point i belongs to blob
/// i mod k with the given per-coordinate spread.
PointSet gen_blobs(uint32_t n, uint32_t d, uint32_t k, uint64_t seed,
                   double spread = 0.05);

}  // namespace cobl
