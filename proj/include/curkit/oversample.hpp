#pragma once

#include "curkit/types.hpp"

namespace curkit {

enum class OversampleMode { projection, leverage, greedy };

std::string to_string(OversampleMode mode);
OversampleMode oversample_mode_from_string(const std::string& name);

struct OversampleResult {
  IndexSet extra;          // the new indices, disjoint from the input set
  bool degenerate = false; // a zero-norm pivot or all-zero projection occurred
  bool tol_met = true;     // tolerance variant: whether the target was reached
  int rounds = 0;
};

/// Extends `i_set` by p extra row indices of the orthonormal basis of b so
/// that the selected-row block gains minimum singular value: the unchosen rows
/// are projected onto the trailing p right singular vectors of Q_B(I,:) and
/// CPQR picks the p strongest among them. Requires |i_set| >= cols(b) and
/// p <= cols(b); use os_iterated for larger p.
OversampleResult os_projection(const Matrix& b, const IndexSet& i_set, int p,
                               bool pre_orthonormal = false);

/// Tolerance variant: each round projects onto the trailing singular subspace
/// with singular values below `tol` and adds that many indices, stopping once
/// sigma_min of the selected block reaches `tol` or max_rounds is exhausted.
OversampleResult os_projection_tol(const Matrix& b, const IndexSet& i_set,
                                   double tol, int max_rounds,
                                   bool pre_orthonormal = false);

/// The p unchosen indices with the largest leverage scores (ties toward the
/// lower index).
OversampleResult os_leverage(const Matrix& b, const IndexSet& i_set, int p);

/// Greedy selection: each round adds the unchosen row that maximizes
/// sigma_min of the augmented block, evaluated exactly per candidate. Runs in
/// O(n k^2) per round via a rank-one secular update of the Gram spectrum.
OversampleResult os_greedy_minsv(const Matrix& b, const IndexSet& i_set, int p);

/// Splits p into chunks of at most cols(b) and applies `mode` per chunk with
/// the accumulated index set, so p may exceed cols(b).
OversampleResult os_iterated(const Matrix& b, const IndexSet& i_set, int p,
                             OversampleMode mode);

}  // namespace curkit
