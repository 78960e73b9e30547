#include "cobl/matmul.hpp"

#include <algorithm>

#include "cobl/point_set.hpp"
#include "cobl/scheduler.hpp"

namespace cobl {

Matrix random_matrix(uint32_t rows, uint32_t cols, uint64_t seed) {
  Matrix m(rows, cols);
  Rng rng(seed);
  for (double& v : m.values) v = 2.0 * rng.uniform() - 1.0;
  return m;
}

Matrix matmul(const Matrix& a, const Matrix& b, uint32_t block_size,
              const EngineConfig& config, ExecutionReport* report) {
  if (a.cols != b.rows) throw ConfigError("inner dimensions do not match");
  if (block_size == 0) throw ConfigError("block size must be positive");

  Matrix c(a.rows, b.cols);
  if (a.rows == 0 || b.cols == 0) return c;

  const uint32_t bi_count = (a.rows + block_size - 1) / block_size;
  const uint32_t bj_count = (b.cols + block_size - 1) / block_size;
  const uint32_t bk_count = std::max<uint32_t>(1, (a.cols + block_size - 1) / block_size);

  FreeKind free_kind = FreeKind::Hilbert;
  switch (config.order) {
    case OrderChoice::Hilbert:
    case OrderChoice::Composite: free_kind = FreeKind::Hilbert; break;
    case OrderChoice::ZOrder: free_kind = FreeKind::ZOrder; break;
    case OrderChoice::RowMajor: free_kind = FreeKind::Scan; break;
  }

  GridDomain domain({bi_count, bj_count, bk_count});
  const CurveOrder order =
      CurveOrder::composite(3, level_for(domain), {2}, free_kind);
  const int serialize[] = {2};

  ExecutionReport exec = execute_cells(
      domain, order, config.plan,
      [&](std::span<const uint32_t> coord, int) {
        const uint32_t i0 = coord[0] * block_size;
        const uint32_t j0 = coord[1] * block_size;
        const uint32_t k0 = coord[2] * block_size;
        const uint32_t i1 = std::min(i0 + block_size, a.rows);
        const uint32_t j1 = std::min(j0 + block_size, b.cols);
        const uint32_t k1 = std::min(k0 + block_size, a.cols);
        for (uint32_t i = i0; i < i1; ++i) {
          for (uint32_t k = k0; k < k1; ++k) {
            const double av = a.at(i, k);
            double* crow = c.values.data() + static_cast<size_t>(i) * c.cols;
            const double* brow = b.values.data() + static_cast<size_t>(k) * b.cols;
            for (uint32_t j = j0; j < j1; ++j) crow[j] += av * brow[j];
          }
        }
      },
      serialize);
  if (report) *report = std::move(exec);
  return c;
}

Matrix matmul_reference(const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows) throw ConfigError("inner dimensions do not match");
  Matrix c(a.rows, b.cols);
  for (uint32_t i = 0; i < a.rows; ++i)
    for (uint32_t j = 0; j < b.cols; ++j) {
      double s = 0;
      for (uint32_t k = 0; k < a.cols; ++k) s += a.at(i, k) * b.at(k, j);
      c.at(i, j) = s;
    }
  return c;
}

}  // namespace cobl
