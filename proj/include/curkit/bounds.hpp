#pragma once

#include <optional>

#include "curkit/types.hpp"

namespace curkit {

/// A posteriori error bound and conditioning diagnostics for one
/// (matrix, indices, approximator) instance. All norms are absolute; divide
/// by the matrix norm for relative comparisons.
struct BoundReport {
  double kappa = 0.0;        // factor_rows * factor_cols
  double factor_rows = 0.0;  // 1 / sigma_min of the selected-row basis block
  double factor_cols = 0.0;  // 1 / sigma_min of the selected-column basis block
  double residual = 0.0;     // ||A - A X^+ X||
  double residual_col = 0.0; // ||A - Y Y^+ A|| (two-sided bound only)
  double eps_term = 0.0;
  double bound_value = 0.0;
  int k_eps = 0;
  bool infinite = false;  // a basis block was exactly singular
  std::optional<double> actual_error;
};

/// Cross-approximation bound: ||Q_C(I*,:)^+||_2 * ||Q_X(J,:)^-1||_2 *
/// (||A - A X^+ X|| + eps term), where Q_C spans A(:,J) and Q_X spans the row
/// space of x. eps = 0 gives the untruncated bound. x must be |J| x cols(a).
BoundReport curca_bound(const Matrix& a, const IndexSet& i_star, const IndexSet& j_set,
                        const Matrix& x, double eps, NormKind norm);

/// Two-sided bound ||Q_X(J*,:)^+||_2 ||A - AX^+X|| + ||Q_Y(I*,:)^+||_2
/// ||A - Y Y^+ A|| for the projection-based decomposition; x is k x n, y is
/// m x k.
BoundReport curba_bound(const Matrix& a, const IndexSet& i_star, const IndexSet& j_star,
                        const Matrix& x, const Matrix& y, NormKind norm);

/// kappa = ||Q_C(I*,:)^+||_2 * ||Q_X(J,:)^-1||_2.
double condition_number_curca(const Matrix& a, const IndexSet& i_star,
                              const IndexSet& j_set, const Matrix& x);

/// ||A - A X^+ X||: residual of the orthogonal projection of A onto the row
/// space of x.
double row_space_residual(const Matrix& a, const Matrix& x, NormKind norm);

/// ||A - Y Y^+ A||: column-space counterpart.
double col_space_residual(const Matrix& a, const Matrix& y, NormKind norm);

}  // namespace curkit
