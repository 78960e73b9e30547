#include "cobl/curve.hpp"

#include <stdexcept>
#include <string>

namespace cobl {

using namespace curve_detail;

void check_curve_shape(int dims, int level) {
  if (dims < 1) throw ConfigError("curve needs dims >= 1");
  if (level < 0) throw ConfigError("curve level must be >= 0");
  if (dims * level > kMaxOrdinalBits)
    throw ConfigError("dims*level exceeds " + std::to_string(kMaxOrdinalBits) +
                      " ordinal bits");
}

uint64_t z_encode(std::span<const uint32_t> coord, int level) {
  const int n = static_cast<int>(coord.size());
  check_curve_shape(n, level);
  uint64_t h = 0;
  for (int d = 0; d < n; ++d) {
    if (level < 32 && coord[d] >= (1u << level))
      throw std::domain_error("coordinate out of range for curve level");
    for (int j = 0; j < level; ++j) {
      h |= static_cast<uint64_t>((coord[d] >> j) & 1u) << (j * n + d);
    }
  }
  return h;
}

void z_decode(uint64_t ordinal, int dims, int level, std::span<uint32_t> out) {
  check_curve_shape(dims, level);
  if (ordinal >> (dims * level))
    throw std::domain_error("ordinal out of range for curve shape");
  for (int d = 0; d < dims; ++d) {
    uint32_t v = 0;
    for (int j = 0; j < level; ++j) {
      v |= static_cast<uint32_t>((ordinal >> (j * dims + d)) & 1u) << j;
    }
    out[d] = v;
  }
}

uint64_t hilbert_ordinal(std::span<const uint32_t> coord, int level) {
  const int n = static_cast<int>(coord.size());
  check_curve_shape(n, level);
  if (n < 2) throw ConfigError("Hilbert order needs dims >= 2; 1-D domains use ascending order");
  for (int d = 0; d < n; ++d) {
    if (level < 32 && coord[d] >= (1u << level))
      throw std::domain_error("coordinate out of range for curve level");
  }
  uint32_t e = 0;
  int dir = 0;
  uint64_t h = 0;
  for (int i = level - 1; i >= 0; --i) {
    uint32_t l = 0;
    for (int j = 0; j < n; ++j) l |= ((coord[j] >> i) & 1u) << j;
    const uint32_t w = gray_inv(rotr_bits(l ^ e, dir + 1, n), n);
    h = (h << n) | w;
    descend(w, e, dir, n);
  }
  return h;
}

void hilbert_coord(uint64_t ordinal, int dims, int level, std::span<uint32_t> out) {
  check_curve_shape(dims, level);
  if (dims < 2) throw ConfigError("Hilbert order needs dims >= 2; 1-D domains use ascending order");
  if (ordinal >> (dims * level))
    throw std::domain_error("ordinal out of range for curve shape");
  uint32_t e = 0;
  int dir = 0;
  for (int j = 0; j < dims; ++j) out[j] = 0;
  const uint32_t word_mask = (1u << dims) - 1u;
  for (int i = level - 1; i >= 0; --i) {
    const uint32_t w =
        static_cast<uint32_t>(ordinal >> (static_cast<uint64_t>(i) * dims)) & word_mask;
    const uint32_t l = child_cell_bits(w, e, dir, dims);
    for (int j = 0; j < dims; ++j) out[j] |= ((l >> j) & 1u) << i;
    descend(w, e, dir, dims);
  }
}

HilbertCursor::HilbertCursor(int dims, int level) : dims_(dims), level_(level) {
  check_curve_shape(dims, level);
  if (dims < 2) throw ConfigError("Hilbert order needs dims >= 2; 1-D domains use ascending order");
  total_ = uint64_t{1} << (static_cast<uint64_t>(dims) * level);
  w_.assign(static_cast<size_t>(level), 0);
  e_.assign(static_cast<size_t>(level), 0);
  d_.assign(static_cast<size_t>(level), 0);
  coord_.assign(static_cast<size_t>(dims), 0);
  for (int t = 0; t < level_; ++t) {
    if (t > 0) {
      uint32_t e = e_[static_cast<size_t>(t - 1)];
      int dir = static_cast<int>(d_[static_cast<size_t>(t - 1)]);
      descend(w_[static_cast<size_t>(t - 1)], e, dir, dims_);
      e_[static_cast<size_t>(t)] = e;
      d_[static_cast<size_t>(t)] = static_cast<uint32_t>(dir);
    }
    set_plane(t);
  }
}

void HilbertCursor::set_plane(int depth) {
  const uint32_t l = child_cell_bits(w_[static_cast<size_t>(depth)],
                                     e_[static_cast<size_t>(depth)],
                                     static_cast<int>(d_[static_cast<size_t>(depth)]), dims_);
  const int plane = level_ - 1 - depth;
  const uint32_t bit = 1u << plane;
  for (int j = 0; j < dims_; ++j) {
    coord_[static_cast<size_t>(j)] =
        (coord_[static_cast<size_t>(j)] & ~bit) | (((l >> j) & 1u) << plane);
  }
}

bool HilbertCursor::next(std::span<uint32_t> out) {
  if (emitted_ >= total_) return false;
  for (int j = 0; j < dims_; ++j) out[j] = coord_[static_cast<size_t>(j)];
  ++emitted_;
  if (emitted_ >= total_) return true;

  const uint32_t full = (1u << dims_) - 1u;
  int t = level_ - 1;
  while (w_[static_cast<size_t>(t)] == full) --t;
  if (t == level_ - 1) {
    // common path: next sibling cell, exactly one coordinate bit flips
    const uint32_t wold = w_[static_cast<size_t>(t)]++;
    const int j = (trailing_ones(wold) + static_cast<int>(d_[static_cast<size_t>(t)]) + 1) % dims_;
    coord_[static_cast<size_t>(j)] ^= 1u;
  } else {
    ++w_[static_cast<size_t>(t)];
    set_plane(t);
    for (int s = t + 1; s < level_; ++s) {
      w_[static_cast<size_t>(s)] = 0;
      uint32_t e = e_[static_cast<size_t>(s - 1)];
      int dir = static_cast<int>(d_[static_cast<size_t>(s - 1)]);
      descend(w_[static_cast<size_t>(s - 1)], e, dir, dims_);
      e_[static_cast<size_t>(s)] = e;
      d_[static_cast<size_t>(s)] = static_cast<uint32_t>(dir);
      set_plane(s);
    }
  }
  return true;
}

}  // namespace cobl
