#pragma once

#include <string>

#include "curkit/types.hpp"

namespace curkit {

enum class CoreMode {
  curca_naive_solve,   // C / U * R through a generic dense solver (unstable baseline)
  curca_explicit_pinv, // forms pinv(U) explicitly (unstable on fast decay)
  curca_stable,        // (C*V*inv(S)) * (W'*R), pseudoinverse never materialized
  scurca_factored,     // curca_stable restricted to singular values above eps
  scurca_rowwise,      // row-by-row truncated underdetermined solves
  curba_stable,        // Q_C * (Q_C'*A*Q_R) * Q_R', needs a full pass over A
};

std::string to_string(CoreMode mode);
CoreMode core_mode_from_string(const std::string& name);
bool mode_uses_eps(CoreMode mode);

/// A CUR approximation held in factored form left * right; the dense product
/// is only formed on request.
struct CurFactors {
  Matrix left;   // m x r
  Matrix right;  // r x n
  IndexSet row_indices;
  IndexSet col_indices;
  CoreMode mode = CoreMode::curca_stable;
  double eps_used = 0.0;
  int k_eps = 0;          // truncated singular values of the core (0 unless scurca)
  bool rank_zero = false; // every singular value of the core was truncated
};

/// The row set may be larger than the column set (row oversampling); the
/// reverse case is handled by transposing the computation internally.
CurFactors curca_naive_solve(const Matrix& a, const IndexSet& i_set, const IndexSet& j_set);
CurFactors curca_explicit_pinv(const Matrix& a, const IndexSet& i_set, const IndexSet& j_set);
CurFactors curca_stable(const Matrix& a, const IndexSet& i_set, const IndexSet& j_set);
CurFactors scurca_factored(const Matrix& a, const IndexSet& i_set, const IndexSet& j_set, double eps);
CurFactors scurca_rowwise(const Matrix& a, const IndexSet& i_set, const IndexSet& j_set, double eps);
CurFactors curba_stable(const Matrix& a, const IndexSet& i_set, const IndexSet& j_set);

CurFactors decompose(const Matrix& a, const IndexSet& i_set, const IndexSet& j_set,
                     CoreMode mode, double eps);

Matrix reconstruct(const CurFactors& f);

/// ||A - left*right|| / ||A||. Frobenius accumulates exactly over row blocks;
/// spectral runs power iteration on the residual operator (1e-8 relative
/// convergence, 200 iterations cap) without materializing the product.
double relative_error(const Matrix& a, const CurFactors& f, NormKind norm);

/// Best rank-k approximation error ||A - [[A]]_k|| / ||A|| from the SVD tail.
double tsvd_error(const Matrix& a, int k, NormKind norm);
double tsvd_error(const Vector& singular_values, int k, NormKind norm);

/// Spectral norm of a dense matrix by power iteration (same policy as
/// relative_error).
double spectral_norm(const Matrix& m);

}  // namespace curkit
