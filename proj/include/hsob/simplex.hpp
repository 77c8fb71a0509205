#pragma once

/**
 * @file
 * Revised simplex for packing linear programs
 *
 *     maximize  c^T x   subject to  A x <= b,  x >= 0,   with b >= 0,
 *
 * where the slack basis is feasible and no phase one is needed.  Columns of A
 * are sparse.  The basis inverse is kept explicitly (m x m) with product-form
 * row updates and periodic refactorization.
 */

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace hsob {

struct SparseColumn {
  std::vector<std::pair<std::size_t, double>> entries;  ///< (row, value)
};

struct PackingResult {
  std::vector<double> x;      ///< primal solution (structural columns)
  std::vector<double> duals;  ///< simplex multipliers, one per row
  double objective = 0.0;
  std::size_t iterations = 0;
  bool optimal = false;
};

/// Solves the packing LP.  Dantzig pricing, switching to Bland's rule while a
/// run of degenerate pivots lasts.  Returns optimal = false when `budget`
/// pivots are exhausted; throws std::domain_error on an unbounded ray.
PackingResult maximize_packing(std::size_t rows, std::span<const SparseColumn> columns,
                               std::span<const double> cost, std::span<const double> rhs,
                               std::size_t budget = 100000);

}  // namespace hsob
