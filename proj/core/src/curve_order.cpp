#include "cobl/curve_order.hpp"

#include <algorithm>
#include <bit>
#include <optional>
#include <stdexcept>

namespace cobl {

using namespace curve_detail;

namespace {

void check_monotone_list(int dims, const std::vector<int>& mono) {
  if (mono.empty()) throw ConfigError("composite order needs at least one monotone dim");
  std::vector<char> seen(static_cast<size_t>(dims), 0);
  for (int m : mono) {
    if (m < 0 || m >= dims) throw ConfigError("monotone dim out of range");
    if (seen[static_cast<size_t>(m)]) throw ConfigError("duplicate monotone dim");
    seen[static_cast<size_t>(m)] = 1;
  }
}

uint64_t scan_encode(std::span<const uint32_t> coord, int level) {
  uint64_t v = 0;
  for (uint32_t c : coord) {
    if (level < 32 && c >= (1u << level))
      throw std::domain_error("coordinate out of range for curve level");
    v = (v << level) | c;
  }
  return v;
}

void scan_decode(uint64_t ordinal, int level, int dims, std::span<uint32_t> out) {
  const uint64_t mask = (uint64_t{1} << level) - 1;
  for (int i = dims - 1; i >= 0; --i) {
    out[i] = static_cast<uint32_t>(ordinal & mask);
    ordinal >>= level;
  }
}

}  // namespace

CurveOrder CurveOrder::hilbert(int dims, int level) {
  check_curve_shape(dims, level);
  if (dims == 1) return zorder(1, level);
  CurveOrder o;
  o.kind_ = CurveKind::Hilbert;
  o.dims_ = dims;
  o.level_ = level;
  return o;
}

CurveOrder CurveOrder::zorder(int dims, int level) {
  check_curve_shape(dims, level);
  CurveOrder o;
  o.kind_ = CurveKind::ZOrder;
  o.dims_ = dims;
  o.level_ = level;
  return o;
}

CurveOrder CurveOrder::composite(int dims, int level, std::vector<int> monotone_dims,
                                 FreeKind free_kind) {
  check_curve_shape(dims, level);
  check_monotone_list(dims, monotone_dims);
  CurveOrder o;
  o.kind_ = CurveKind::Composite;
  o.dims_ = dims;
  o.level_ = level;
  o.monotone_ = std::move(monotone_dims);
  std::vector<char> mono(static_cast<size_t>(dims), 0);
  for (int m : o.monotone_) mono[static_cast<size_t>(m)] = 1;
  for (int d = 0; d < dims; ++d)
    if (!mono[static_cast<size_t>(d)]) o.free_.push_back(d);
  o.free_kind_ = o.free_.size() >= 2 ? free_kind : FreeKind::Scan;
  return o;
}

CurveOrder CurveOrder::row_major(int dims, int level) {
  std::vector<int> all(static_cast<size_t>(dims));
  for (int d = 0; d < dims; ++d) all[static_cast<size_t>(d)] = d;
  return composite(dims, level, std::move(all), FreeKind::Scan);
}

uint64_t CurveOrder::inner_size() const {
  if (kind_ != CurveKind::Composite) return size();
  return uint64_t{1} << (static_cast<uint64_t>(level_) * free_.size());
}

bool CurveOrder::covers(const GridDomain& domain) const {
  if (domain.dims() != dims_) return false;
  const uint64_t side = uint64_t{1} << level_;
  for (int d = 0; d < dims_; ++d)
    if (domain.extent(d) > side) return false;
  return true;
}

uint64_t CurveOrder::ordinal_of(std::span<const uint32_t> coord) const {
  if (static_cast<int>(coord.size()) != dims_)
    throw ConfigError("coordinate dimensionality mismatch");
  switch (kind_) {
    case CurveKind::Hilbert:
      return hilbert_ordinal(coord, level_);
    case CurveKind::ZOrder:
      return z_encode(coord, level_);
    case CurveKind::Composite: {
      std::vector<uint32_t> part(monotone_.size());
      for (size_t i = 0; i < monotone_.size(); ++i)
        part[i] = coord[static_cast<size_t>(monotone_[i])];
      const uint64_t outer = scan_encode(part, level_);
      part.resize(free_.size());
      for (size_t i = 0; i < free_.size(); ++i)
        part[i] = coord[static_cast<size_t>(free_[i])];
      uint64_t inner = 0;
      if (!free_.empty()) {
        switch (free_kind_) {
          case FreeKind::Hilbert: inner = hilbert_ordinal(part, level_); break;
          case FreeKind::ZOrder: inner = z_encode(part, level_); break;
          case FreeKind::Scan: inner = scan_encode(part, level_); break;
        }
      }
      return (outer << (static_cast<uint64_t>(level_) * free_.size())) | inner;
    }
  }
  return 0;
}

void CurveOrder::coord_of(uint64_t ordinal, std::span<uint32_t> out) const {
  if (static_cast<int>(out.size()) != dims_)
    throw ConfigError("coordinate dimensionality mismatch");
  if (ordinal >= size()) throw std::domain_error("ordinal out of range for curve shape");
  switch (kind_) {
    case CurveKind::Hilbert:
      hilbert_coord(ordinal, dims_, level_, out);
      return;
    case CurveKind::ZOrder:
      z_decode(ordinal, dims_, level_, out);
      return;
    case CurveKind::Composite: {
      const int inner_bits = level_ * static_cast<int>(free_.size());
      const uint64_t inner = ordinal & ((uint64_t{1} << inner_bits) - 1);
      uint64_t outer = ordinal >> inner_bits;
      std::vector<uint32_t> part(std::max(monotone_.size(), free_.size()));
      scan_decode(outer, level_, static_cast<int>(monotone_.size()),
                  std::span<uint32_t>(part.data(), monotone_.size()));
      for (size_t i = 0; i < monotone_.size(); ++i)
        out[static_cast<size_t>(monotone_[i])] = part[i];
      if (!free_.empty()) {
        std::span<uint32_t> fspan(part.data(), free_.size());
        switch (free_kind_) {
          case FreeKind::Hilbert:
            hilbert_coord(inner, static_cast<int>(free_.size()), level_, fspan);
            break;
          case FreeKind::ZOrder:
            z_decode(inner, static_cast<int>(free_.size()), level_, fspan);
            break;
          case FreeKind::Scan:
            scan_decode(inner, level_, static_cast<int>(free_.size()), fspan);
            break;
        }
        for (size_t i = 0; i < free_.size(); ++i)
          out[static_cast<size_t>(free_[i])] = part[i];
      }
      return;
    }
  }
}

int level_for(const GridDomain& domain) {
  int level = 0;
  for (int d = 0; d < domain.dims(); ++d) {
    const uint32_t e = domain.extent(d);
    const int need = e <= 1 ? 0 : std::bit_width(e - 1);
    level = std::max(level, need);
  }
  check_curve_shape(domain.dims(), level);
  return level;
}

CurveOrder composite_order(const GridDomain& domain, std::vector<int> monotone_dims,
                           FreeKind free_kind) {
  return CurveOrder::composite(domain.dims(), level_for(domain), std::move(monotone_dims),
                               free_kind);
}

namespace {

// Depth-first walk of one 2^level-sided hypercube over a subset of dims,
// in Hilbert or Z ordinal order, writing cell bits into the shared coordinate
// buffer at `target` positions. Subtrees with an ordinal range before the
// window or a bounding box outside the extents are skipped whole; once past
// the window end the walk terminates.
struct HypercubeDFS {
  int m = 0;
  int level = 0;
  bool hilbert = false;
  std::vector<int> target;
  std::vector<uint32_t> extent;
  uint32_t* coord = nullptr;

  struct Frame {
    uint32_t next_w;
    uint32_t e;
    int d;
    bool inside;
  };
  std::vector<Frame> stack;
  int depth = -1;
  uint64_t prefix = 0;
  uint64_t begin = 0, end = 0;
  bool root_inside = false;
  bool leaf_pending = false;  // level == 0 singleton emitted flag
  uint64_t ord = 0;

  void configure(int m_, int level_, bool hilbert_, std::vector<int> target_,
                 std::vector<uint32_t> extent_, uint32_t* coord_) {
    m = m_;
    level = level_;
    hilbert = hilbert_;
    target = std::move(target_);
    extent = std::move(extent_);
    coord = coord_;
    stack.assign(static_cast<size_t>(std::max(level, 1)), Frame{});
    root_inside = true;
    const uint64_t side = uint64_t{1} << level;
    for (uint32_t e : extent)
      if (e < side) root_inside = false;
  }

  void reset(uint64_t begin_, uint64_t end_) {
    begin = begin_;
    end = std::min(end_, uint64_t{1} << (static_cast<uint64_t>(m) * level));
    prefix = 0;
    if (level == 0) {
      leaf_pending = begin < end;
      depth = -1;
      return;
    }
    depth = 0;
    stack[0] = Frame{0, 0, 0, root_inside};
  }

  bool next() {
    if (level == 0) {
      if (!leaf_pending) return false;
      leaf_pending = false;
      ord = 0;
      return true;
    }
    const uint32_t fanout = 1u << m;
    while (depth >= 0) {
      Frame& f = stack[static_cast<size_t>(depth)];
      if (f.next_w == fanout) {
        --depth;
        prefix >>= m;
        continue;
      }
      const uint32_t w = f.next_w++;
      const uint32_t l = hilbert ? child_cell_bits(w, f.e, f.d, m) : w;
      const int shift = level - 1 - depth;
      const uint64_t sub_lo = ((prefix << m) | w) << (static_cast<uint64_t>(m) * shift);
      if (sub_lo >= end) {
        depth = -1;
        break;
      }
      if (sub_lo + (uint64_t{1} << (static_cast<uint64_t>(m) * shift)) <= begin) continue;
      for (int j = 0; j < m; ++j) {
        const uint32_t bit = 1u << shift;
        uint32_t& c = coord[target[static_cast<size_t>(j)]];
        c = (c & ~bit) | (((l >> j) & 1u) << shift);
      }
      bool inside = f.inside;
      if (!inside) {
        const uint32_t side = 1u << shift;
        bool out = false;
        inside = true;
        for (int j = 0; j < m; ++j) {
          const uint32_t origin = coord[target[static_cast<size_t>(j)]] & ~(side - 1u);
          const uint32_t ext = extent[static_cast<size_t>(j)];
          if (origin >= ext) {
            out = true;
            break;
          }
          if (origin + side > ext) inside = false;
        }
        if (out) continue;
      }
      if (shift == 0) {
        ord = (prefix << m) | w;
        return true;
      }
      Frame& g = stack[static_cast<size_t>(depth + 1)];
      g.next_w = 0;
      g.inside = inside;
      if (hilbert) {
        uint32_t e = f.e;
        int d = f.d;
        descend(w, e, d, m);
        g.e = e;
        g.d = d;
      }
      prefix = (prefix << m) | w;
      ++depth;
    }
    return false;
  }
};

// Mixed-radix ascending scan over a subset of dims, one level-bit digit per
// dim, first listed dim most significant. Out-of-extent digits are skipped by
// carrying into the next more significant digit, so sparse extents inside a
// large hypercube cost no per-cell scan.
struct LexOdometer {
  int k = 0;
  int level = 0;
  std::vector<int> target;
  std::vector<uint32_t> extent;
  uint32_t* coord = nullptr;
  uint64_t cur = 0, lim = 0;
  uint64_t ord = 0;

  void configure(int k_, int level_, std::vector<int> target_, std::vector<uint32_t> extent_,
                 uint32_t* coord_) {
    k = k_;
    level = level_;
    target = std::move(target_);
    extent = std::move(extent_);
    coord = coord_;
  }

  void reset(uint64_t begin_, uint64_t end_) {
    cur = begin_;
    lim = std::min(end_, uint64_t{1} << (static_cast<uint64_t>(k) * level));
  }

  bool next() {
    const uint64_t digit_mask = (uint64_t{1} << level) - 1;
    while (cur < lim) {
      int bad = -1;
      for (int i = 0; i < k; ++i) {
        const int shift = (k - 1 - i) * level;
        const uint32_t digit = static_cast<uint32_t>((cur >> shift) & digit_mask);
        if (digit >= extent[static_cast<size_t>(i)]) {
          bad = i;
          break;
        }
        coord[target[static_cast<size_t>(i)]] = digit;
      }
      if (bad < 0) {
        ord = cur++;
        return true;
      }
      const int carry_shift = (k - 1 - bad) * level + level;
      if (carry_shift >= 64) return false;
      cur = ((cur >> carry_shift) + 1) << carry_shift;
    }
    return false;
  }
};

}  // namespace

struct CurveWalker::Impl {
  const GridDomain* domain = nullptr;
  CurveOrder order = CurveOrder::zorder(1, 0);
  std::vector<uint32_t> coord;
  uint64_t begin = 0, end = 0;

  HypercubeDFS dfs;       // pure Hilbert/ZOrder, or composite inner curve
  LexOdometer outer;      // composite monotone digits
  LexOdometer inner_odo;  // composite inner scan
  bool composite = false;
  bool inner_is_dfs = false;
  int inner_bits = 0;
  bool outer_loaded = false;
  uint64_t ord = 0;

  bool next_inner() {
    if (inner_is_dfs) {
      if (!dfs.next()) return false;
      ord = (outer.ord << inner_bits) | dfs.ord;
      return true;
    }
    if (!inner_odo.next()) return false;
    ord = (outer.ord << inner_bits) | inner_odo.ord;
    return true;
  }

  bool next_cell() {
    if (!composite) {
      if (!dfs.next()) return false;
      ord = dfs.ord;
      return true;
    }
    while (true) {
      if (outer_loaded && next_inner()) return true;
      if (!outer.next()) return false;
      outer_loaded = true;
      const uint64_t base = outer.ord << inner_bits;
      const uint64_t lo = begin > base ? begin - base : 0;
      const uint64_t inner_total = uint64_t{1} << inner_bits;
      const uint64_t hi = std::min(end - base, inner_total);
      if (inner_is_dfs)
        dfs.reset(lo, hi);
      else
        inner_odo.reset(lo, hi);
    }
  }
};

CurveWalker::CurveWalker(const GridDomain& domain, const CurveOrder& order)
    : CurveWalker(domain, order, 0,
                  uint64_t{1} << (static_cast<uint64_t>(order.dims()) * order.level())) {}

CurveWalker::CurveWalker(const GridDomain& domain, const CurveOrder& order, uint64_t begin,
                         uint64_t end) {
  if (!order.covers(domain))
    throw ConfigError("curve hypercube does not cover the domain");
  impl_ = std::make_unique<Impl>();
  impl_->domain = &domain;
  impl_->order = order;
  impl_->coord.assign(static_cast<size_t>(order.dims()), 0);
  impl_->begin = std::min(begin, order.size());
  impl_->end = std::min(end, order.size());
  if (impl_->end < impl_->begin) impl_->end = impl_->begin;

  const int n = order.dims();
  const int level = order.level();
  uint32_t* buf = impl_->coord.data();
  auto extents_of = [&](const std::vector<int>& dims_list) {
    std::vector<uint32_t> e;
    e.reserve(dims_list.size());
    for (int d : dims_list) e.push_back(domain.extent(d));
    return e;
  };

  if (order.kind() != CurveKind::Composite) {
    std::vector<int> all(static_cast<size_t>(n));
    std::vector<uint32_t> ext(static_cast<size_t>(n));
    for (int d = 0; d < n; ++d) {
      all[static_cast<size_t>(d)] = d;
      ext[static_cast<size_t>(d)] = domain.extent(d);
    }
    impl_->dfs.configure(n, level, order.kind() == CurveKind::Hilbert, std::move(all),
                         std::move(ext), buf);
    impl_->dfs.reset(impl_->begin, impl_->end);
    return;
  }

  impl_->composite = true;
  const auto& mono = order.monotone_dims();
  const auto& free = order.free_dims();
  impl_->inner_bits = level * static_cast<int>(free.size());
  impl_->outer.configure(static_cast<int>(mono.size()), level, mono, extents_of(mono), buf);
  const uint64_t o_lo = impl_->begin >> impl_->inner_bits;
  const uint64_t o_hi =
      (impl_->end + (uint64_t{1} << impl_->inner_bits) - 1) >> impl_->inner_bits;
  impl_->outer.reset(o_lo, o_hi);
  impl_->inner_is_dfs =
      free.size() >= 2 && (order.free_kind() == FreeKind::Hilbert ||
                           order.free_kind() == FreeKind::ZOrder);
  if (impl_->inner_is_dfs) {
    impl_->dfs.configure(static_cast<int>(free.size()), level,
                         order.free_kind() == FreeKind::Hilbert, free, extents_of(free), buf);
  } else {
    impl_->inner_odo.configure(static_cast<int>(free.size()), level, free, extents_of(free),
                               buf);
  }
}

CurveWalker::~CurveWalker() = default;
CurveWalker::CurveWalker(CurveWalker&&) noexcept = default;
CurveWalker& CurveWalker::operator=(CurveWalker&&) noexcept = default;

bool CurveWalker::next(std::span<uint32_t> coord) {
  uint64_t ignore;
  return next(coord, ignore);
}

bool CurveWalker::next(std::span<uint32_t> coord, uint64_t& ordinal) {
  Impl& im = *impl_;
  const bool masked = im.domain->has_mask();
  while (im.next_cell()) {
    if (masked && !im.domain->mask_allows(im.coord)) continue;
    std::copy(im.coord.begin(), im.coord.end(), coord.begin());
    ordinal = im.ord;
    ++emitted_;
    return true;
  }
  return false;
}

std::vector<CurvePosition> enumerate_cells(const GridDomain& domain, const CurveOrder& order) {
  std::vector<CurvePosition> out;
  CurveWalker walker(domain, order);
  std::vector<uint32_t> coord(static_cast<size_t>(domain.dims()));
  uint64_t ord = 0;
  while (walker.next(coord, ord)) out.push_back(CurvePosition{ord, coord});
  return out;
}

}  // namespace cobl
