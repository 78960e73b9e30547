#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cobl/errors.hpp"

namespace cobl {

// Space-filling-curve transforms over the hypercube [0, 2^level)^dims.
//
// Conventions, fixed once and pinned by golden-sequence tests:
//  * Z-order: bit j of dimension d lands at ordinal bit j*dims + d, so
//    dimension 0 occupies the least-significant interleaved bit.
//  * Hilbert: Gray-code construction driven by an (entry, direction) state
//    per recursion level, started at entry 0, direction 0. Dimension j maps
//    to bit j of each per-level subcube word. At level 1 in 2D the curve
//    visits (0,0), (0,1), (1,1), (1,0).
//
// Ordinals are 64-bit; dims*level must stay within 62 bits.

inline constexpr int kMaxOrdinalBits = 62;

void check_curve_shape(int dims, int level);

/// Morton interleave. Each coordinate must be < 2^level.
uint64_t z_encode(std::span<const uint32_t> coord, int level);

/// Inverse of z_encode. The ordinal must be < 2^(level*dims).
void z_decode(uint64_t ordinal, int dims, int level, std::span<uint32_t> out);

/// Hilbert ordinal of a cell. dims >= 2; each coordinate < 2^level.
uint64_t hilbert_ordinal(std::span<const uint32_t> coord, int level);

/// Cell of a Hilbert ordinal. dims >= 2; ordinal < 2^(level*dims).
void hilbert_coord(uint64_t ordinal, int dims, int level, std::span<uint32_t> out);

/// Incremental Hilbert generator over the full hypercube. Emits the same
/// sequence as hilbert_coord over ascending ordinals. A step advances one
/// subcube word and flips a single coordinate bit on the common path, so the
/// per-cell cost is amortized constant; there is no per-step re-derivation
/// from the ordinal.
class HilbertCursor {
 public:
  HilbertCursor(int dims, int level);

  /// Writes the next cell into `out` (dims values). Returns false once the
  /// curve is exhausted; exhaustion is an end-of-sequence signal, not an
  /// error.
  bool next(std::span<uint32_t> out);

  uint64_t emitted() const { return emitted_; }
  uint64_t total() const { return total_; }

 private:
  void set_plane(int depth);

  int dims_;
  int level_;
  uint64_t emitted_ = 0;
  uint64_t total_;
  // per recursion depth: current subcube word and (entry, direction) state
  std::vector<uint32_t> w_, e_, d_;
  std::vector<uint32_t> coord_;
};

namespace curve_detail {

inline uint32_t rotl_bits(uint32_t x, int k, int n) {
  k %= n;
  if (k == 0) return x;
  const uint32_t mask = (n == 32) ? ~0u : ((1u << n) - 1u);
  return ((x << k) | (x >> (n - k))) & mask;
}

inline uint32_t rotr_bits(uint32_t x, int k, int n) {
  k %= n;
  if (k == 0) return x;
  const uint32_t mask = (n == 32) ? ~0u : ((1u << n) - 1u);
  return ((x >> k) | (x << (n - k))) & mask;
}

inline uint32_t gray(uint32_t w) { return w ^ (w >> 1); }

inline uint32_t gray_inv(uint32_t g, int n) {
  uint32_t w = g;
  for (int s = 1; s < n; s <<= 1) w ^= w >> s;
  return w;
}

inline int trailing_ones(uint32_t w) {
  int c = 0;
  while (w & 1u) {
    ++c;
    w >>= 1;
  }
  return c;
}

inline uint32_t entry_point(uint32_t w) {
  if (w == 0) return 0;
  return gray((w - 1) & ~1u);
}

inline int intra_direction(uint32_t w, int n) {
  if (w == 0) return 0;
  if ((w & 1u) == 0) return trailing_ones(w - 1) % n;
  return trailing_ones(w) % n;
}

/// Cell bits of child `w` inside a node with state (e, d).
inline uint32_t child_cell_bits(uint32_t w, uint32_t e, int d, int n) {
  return rotl_bits(gray(w), d + 1, n) ^ e;
}

/// State of the child subcube selected by word `w`.
inline void descend(uint32_t w, uint32_t& e, int& d, int n) {
  e = e ^ rotl_bits(entry_point(w), d + 1, n);
  d = (d + intra_direction(w, n) + 1) % n;
}

}  // namespace curve_detail

}  // namespace cobl
