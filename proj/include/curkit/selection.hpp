#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "curkit/types.hpp"

namespace curkit {

struct SelectionResult {
  IndexSet row_indices;
  IndexSet col_indices;
  std::optional<Matrix> row_space_approx;  // the sketch X when one was formed
  std::string strategy_tag;
  bool degenerate = false;  // a zero-norm pivot was taken somewhere
};

/// Pivoting on a random sketch: J from CPQR on the k x n sketch X = Omega * A,
/// then I from CPQR on A(:,J)^T, so the rows depend on the chosen columns.
/// `sketch_oversize` adds rows to the sketch beyond k (0 reproduces the plain
/// k x m embedding).
SelectionResult rand_pivot(const Matrix& a, int k, std::uint64_t seed,
                           int sketch_oversize = 0);

/// k distinct indices drawn uniformly without replacement, in draw order.
IndexSet uniform_indices(int universe, int k, std::uint64_t seed);

/// Columns from CPQR on A and rows from CPQR on A^T with no dependence between
/// them. Known-unsafe baseline kept for comparison experiments.
SelectionResult independent_cpqr_pair(const Matrix& a, int k);

/// Columns from CPQR on A, rows from CPQR on the chosen columns A(:,J)^T.
SelectionResult dependent_cpqr_pair(const Matrix& a, int k);

}  // namespace curkit
