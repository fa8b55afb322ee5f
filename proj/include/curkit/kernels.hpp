#pragma once

#include <cstdint>

#include "curkit/types.hpp"

namespace curkit {

/// Default absolute truncation threshold for pseudoinverses.
inline constexpr double kDefaultEps = 1e-15;

struct ThinQR {
  Matrix q;  // orthonormal columns, rows x cols
  Matrix r;  // upper triangular, cols x cols, nonnegative diagonal
};

/// Column-pivoted QR restricted to the first `num_pivots` pivot steps.
/// `q` is rows x num_pivots, `r` is num_pivots x num_pivots upper triangular,
/// and q * r reproduces the pivoted columns of the input. `pivot_norms[t]` is
/// the residual norm of the column chosen at step t (non-increasing).
struct PivotedQR {
  Matrix q;
  Matrix r;
  IndexSet pivots;
  Vector pivot_norms;
  bool degenerate = false;  // a pivot with exactly zero residual norm was taken
};

struct ThinSVD {
  Matrix w;      // left singular vectors
  Vector sigma;  // non-increasing, nonnegative
  Matrix v;      // right singular vectors; input == w * sigma.asDiagonal() * v^T
};

/// Thin SVD split at a threshold: sigma[i] > eps is kept, sigma[i] <= eps is
/// truncated. `k_eps` counts the truncated values.
struct EpsPartition {
  ThinSVD svd;
  double eps = 0.0;
  int rank_kept = 0;
  int k_eps = 0;
};

struct UnderdeterminedSolution {
  Vector x;
  int rank_kept = 0;
  bool rank_zero = false;  // everything truncated; x is the zero vector
};

/// Householder thin QR. Requires cols <= rows.
ThinQR thin_qr(const Matrix& m);

/// Businger-Golub column-pivoted QR: at each step the column with the largest
/// residual norm is chosen; residual norms equal within 1e-14 relative are
/// broken toward the lower column index so degenerate inputs stay
/// deterministic.
PivotedQR cpqr(const Matrix& m, int num_pivots);

/// Thin SVD. Convergence failure of the backend raises an error rather than
/// returning unusable factors.
ThinSVD thin_svd(const Matrix& m);

EpsPartition eps_partition(const Matrix& m, double eps);

/// Applies the truncated pseudoinverse of the partitioned matrix to `b`
/// (V1 * inv(S1) * W1^T * b) without forming the pseudoinverse itself.
Matrix eps_pinv_apply(const EpsPartition& part, const Matrix& b);

/// Minimum-norm solution of min ||trunc(b_mat, eps) * x - rhs||_2 for a wide
/// matrix (rows <= cols), computed in a backward-stable way: partition b_mat
/// at eps, project onto the kept column space, then solve the resulting
/// full-row-rank system through a QR factorization of its transpose. The
/// solution lies in the row space of the kept part.
UnderdeterminedSolution stable_underdetermined_solve(const Matrix& b_mat,
                                                     const Vector& rhs,
                                                     double eps);

/// Row sketch: Omega * a where Omega is sketch_rows x rows(a) with i.i.d.
/// N(0, 1/sketch_rows) entries drawn deterministically from `seed`.
Matrix gaussian_sketch(const Matrix& a, int sketch_rows, std::uint64_t seed);

/// Squared row norms of a matrix with orthonormal columns (checked to 1e-8);
/// the entries sum to the column count.
Vector leverage_scores(const Matrix& q);

double min_singular_value(const Matrix& m);

}  // namespace curkit
