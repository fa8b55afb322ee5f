#include "curkit/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "curkit/cur.hpp"
#include "curkit/kernels.hpp"

namespace curkit {

namespace {

double matrix_norm(const Matrix& m, NormKind norm) {
  return norm == NormKind::frobenius ? m.norm() : spectral_norm(m);
}

// 1 / sigma_min of a row block of an orthonormal basis; infinity when the
// block is exactly singular.
double inverse_block_factor(const Matrix& basis, const IndexSet& rows, bool* infinite) {
  const double smin = min_singular_value(select_rows(basis, rows));
  if (smin == 0.0) {
    *infinite = true;
    return std::numeric_limits<double>::infinity();
  }
  return 1.0 / smin;
}

}  // namespace

double row_space_residual(const Matrix& a, const Matrix& x, NormKind norm) {
  if (x.cols() != a.cols())
    throw std::invalid_argument("row_space_residual: x must have the same column count as a");
  const Matrix q_x = thin_qr(Matrix(x.transpose())).q;  // n x k
  const Matrix resid = a - (a * q_x) * q_x.transpose();
  return matrix_norm(resid, norm);
}

double col_space_residual(const Matrix& a, const Matrix& y, NormKind norm) {
  if (y.rows() != a.rows())
    throw std::invalid_argument("col_space_residual: y must have the same row count as a");
  const Matrix q_y = thin_qr(y).q;  // m x k
  const Matrix resid = a - q_y * (q_y.transpose() * a);
  return matrix_norm(resid, norm);
}

BoundReport curca_bound(const Matrix& a, const IndexSet& i_star, const IndexSet& j_set,
                        const Matrix& x, double eps, NormKind norm) {
  if (x.rows() != j_set.size())
    throw std::invalid_argument("curca_bound: x must have |J| rows");
  if (x.cols() != a.cols())
    throw std::invalid_argument("curca_bound: x must have cols(a) columns");
  if (!(eps >= 0.0)) throw std::invalid_argument("curca_bound: eps must be >= 0");

  BoundReport report;
  const Matrix q_c = thin_qr(select_cols(a, j_set)).q;
  const Matrix q_x = thin_qr(Matrix(x.transpose())).q;
  report.factor_rows = inverse_block_factor(q_c, i_star, &report.infinite);
  report.factor_cols = inverse_block_factor(q_x, j_set, &report.infinite);
  report.kappa = report.factor_rows * report.factor_cols;
  report.residual = row_space_residual(a, x, norm);

  if (eps > 0.0) {
    const EpsPartition part = eps_partition(select_block(a, i_star, j_set), eps);
    report.k_eps = part.k_eps;
    if (norm == NormKind::frobenius)
      report.eps_term = eps * std::sqrt(static_cast<double>(part.k_eps));
    else
      report.eps_term = part.k_eps > 0 ? eps : 0.0;
  }
  report.bound_value = report.kappa * (report.residual + report.eps_term);
  return report;
}

BoundReport curba_bound(const Matrix& a, const IndexSet& i_star, const IndexSet& j_star,
                        const Matrix& x, const Matrix& y, NormKind norm) {
  if (x.cols() != a.cols())
    throw std::invalid_argument("curba_bound: x must have cols(a) columns");
  if (y.rows() != a.rows())
    throw std::invalid_argument("curba_bound: y must have rows(a) rows");

  BoundReport report;
  const Matrix q_x = thin_qr(Matrix(x.transpose())).q;  // n x k
  const Matrix q_y = thin_qr(y).q;                      // m x k
  report.factor_cols = inverse_block_factor(q_x, j_star, &report.infinite);
  report.factor_rows = inverse_block_factor(q_y, i_star, &report.infinite);
  report.kappa = report.factor_rows * report.factor_cols;
  report.residual = row_space_residual(a, x, norm);
  report.residual_col = col_space_residual(a, y, norm);
  report.bound_value = report.factor_cols * report.residual +
                       report.factor_rows * report.residual_col;
  return report;
}

double condition_number_curca(const Matrix& a, const IndexSet& i_star,
                              const IndexSet& j_set, const Matrix& x) {
  if (x.rows() != j_set.size() || x.cols() != a.cols())
    throw std::invalid_argument("condition_number_curca: x must be |J| x cols(a)");
  bool infinite = false;
  const Matrix q_c = thin_qr(select_cols(a, j_set)).q;
  const Matrix q_x = thin_qr(Matrix(x.transpose())).q;
  const double fr = inverse_block_factor(q_c, i_star, &infinite);
  const double fc = inverse_block_factor(q_x, j_set, &infinite);
  return fr * fc;
}

}  // namespace curkit
