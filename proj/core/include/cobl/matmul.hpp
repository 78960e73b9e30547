#pragma once

// Blocked matrix multiplication over the loop engine.
//
// The block-index space (bI, bJ, bK) is a 3-D domain traversed by a
// composite order with bK monotone: bK assignments execute as ascending
// phases, and within a phase the (bI, bJ) block pairs follow the chosen
// curve. Each phase writes every C block at most once, so C updates are
// race-free and every element accumulates its K terms in ascending order --
// results are bit-identical across worker counts and steal timings.

#include <cstdint>
#include <vector>

#include "cobl/engine_config.hpp"

namespace cobl {

struct Matrix {
  uint32_t rows = 0;
  uint32_t cols = 0;
  std::vector<double> values;  // row-major

  Matrix() = default;
  Matrix(uint32_t r, uint32_t c) : rows(r), cols(c), values(static_cast<size_t>(r) * c) {}

  double& at(uint32_t i, uint32_t j) { return values[static_cast<size_t>(i) * cols + j]; }
  double at(uint32_t i, uint32_t j) const {
    return values[static_cast<size_t>(i) * cols + j];
  }
};

Matrix random_matrix(uint32_t rows, uint32_t cols, uint64_t seed);

/// C = A * B. config.order picks the traversal of the free (bI, bJ)
/// dimensions; the bK dimension is always monotone. block_size is the tile
/// edge in elements.
Matrix matmul(const Matrix& a, const Matrix& b, uint32_t block_size,
              const EngineConfig& config, ExecutionReport* report = nullptr);

/// Naive triple-loop oracle, k innermost ascending.
Matrix matmul_reference(const Matrix& a, const Matrix& b);

}  // namespace cobl
