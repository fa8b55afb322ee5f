#include "curkit/kernels.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>

#include "curkit/rng.hpp"

namespace curkit {

namespace {

constexpr double kPivotTieRel = 1e-14;

void check_finite_nonempty(const Matrix& m, const char* who) {
  if (m.rows() < 1 || m.cols() < 1)
    throw std::invalid_argument(std::string(who) + ": matrix must be at least 1x1");
  if (!m.allFinite())
    throw std::invalid_argument(std::string(who) + ": matrix has non-finite entries");
}

}  // namespace

ThinQR thin_qr(const Matrix& m) {
  check_finite_nonempty(m, "thin_qr");
  if (m.cols() > m.rows())
    throw std::invalid_argument("thin_qr: more columns than rows");
  Eigen::HouseholderQR<Matrix> qr(m);
  const auto cols = m.cols();
  Matrix q = qr.householderQ() * Matrix::Identity(m.rows(), cols);
  Matrix r = qr.matrixQR().topRows(cols).template triangularView<Eigen::Upper>();
  // Fix signs so the diagonal of r is nonnegative.
  for (Eigen::Index j = 0; j < cols; ++j) {
    if (r(j, j) < 0.0) {
      r.row(j) = -r.row(j);
      q.col(j) = -q.col(j);
    }
  }
  return {std::move(q), std::move(r)};
}

PivotedQR cpqr(const Matrix& m, int num_pivots) {
  check_finite_nonempty(m, "cpqr");
  const int rows = static_cast<int>(m.rows());
  const int cols = static_cast<int>(m.cols());
  if (num_pivots < 1 || num_pivots > std::min(rows, cols))
    throw std::invalid_argument("cpqr: num_pivots outside [1, min(rows, cols)]");

  // Column-major working copy; all the work below is on columns.
  Eigen::MatrixXd work = m;
  std::vector<int> perm(static_cast<std::size_t>(cols));
  for (int j = 0; j < cols; ++j) perm[static_cast<std::size_t>(j)] = j;

  Eigen::MatrixXd reflectors = Eigen::MatrixXd::Zero(rows, num_pivots);
  Vector betas = Vector::Zero(num_pivots);
  Vector pivot_norms(num_pivots);
  bool degenerate = false;

  for (int t = 0; t < num_pivots; ++t) {
    // Greedy pivot: largest residual column norm, ties to the lower index.
    int best = t;
    double best_norm = work.col(t).tail(rows - t).norm();
    for (int j = t + 1; j < cols; ++j) {
      const double nrm = work.col(j).tail(rows - t).norm();
      if (nrm > best_norm && (nrm - best_norm) > kPivotTieRel * nrm) {
        best = j;
        best_norm = nrm;
      }
    }
    if (best != t) {
      work.col(t).swap(work.col(best));
      std::swap(perm[static_cast<std::size_t>(t)], perm[static_cast<std::size_t>(best)]);
    }
    pivot_norms(t) = best_norm;
    if (best_norm == 0.0) {
      degenerate = true;
      continue;  // nothing to reflect; trailing block is zero below row t
    }

    Eigen::VectorXd v = work.col(t).tail(rows - t);
    const double alpha = v(0) >= 0.0 ? -best_norm : best_norm;
    v(0) -= alpha;
    const double vsq = v.squaredNorm();
    if (vsq > 0.0) {
      const double beta = 2.0 / vsq;
      reflectors.col(t).tail(rows - t) = v;
      betas(t) = beta;
      for (int j = t; j < cols; ++j) {
        auto tail = work.col(j).tail(rows - t);
        tail -= (beta * v.dot(tail)) * v;
      }
    }
    work(t, t) = alpha;
    work.col(t).tail(rows - t - 1).setZero();
  }

  Matrix r = work.topLeftCorner(num_pivots, num_pivots)
                 .template triangularView<Eigen::Upper>();
  // Accumulate Q by applying the reflectors to the leading identity columns.
  Eigen::MatrixXd q = Eigen::MatrixXd::Identity(rows, num_pivots);
  for (int t = num_pivots - 1; t >= 0; --t) {
    if (betas(t) == 0.0) continue;
    const auto v = reflectors.col(t).tail(rows - t);
    for (int j = 0; j < num_pivots; ++j) {
      auto tail = q.col(j).tail(rows - t);
      tail -= (betas(t) * v.dot(tail)) * v;
    }
  }
  Matrix q_out = q;
  for (int t = 0; t < num_pivots; ++t) {
    if (r(t, t) < 0.0) {
      r.row(t) = -r.row(t);
      q_out.col(t) = -q_out.col(t);
    }
  }

  std::vector<int> chosen(perm.begin(), perm.begin() + num_pivots);
  return {std::move(q_out), std::move(r), IndexSet(std::move(chosen), cols),
          std::move(pivot_norms), degenerate};
}

ThinSVD thin_svd(const Matrix& m) {
  check_finite_nonempty(m, "thin_svd");
  // Two-sided Jacobi with QR preconditioning: unlike the divide-and-conquer
  // backend it never flushes tiny singular values to exact zero, which the
  // factored decomposition modes depend on for rank-deficient cores.
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success)
    throw std::runtime_error("thin_svd: backend failed to converge");
  return {Matrix(svd.matrixU()), Vector(svd.singularValues()), Matrix(svd.matrixV())};
}

EpsPartition eps_partition(const Matrix& m, double eps) {
  if (!(eps >= 0.0))
    throw std::invalid_argument("eps_partition: eps must be >= 0");
  ThinSVD svd = thin_svd(m);
  const int total = static_cast<int>(svd.sigma.size());
  int kept = 0;
  while (kept < total && svd.sigma(kept) > eps) ++kept;
  return {std::move(svd), eps, kept, total - kept};
}

Matrix eps_pinv_apply(const EpsPartition& part, const Matrix& b) {
  if (b.rows() != part.svd.w.rows())
    throw std::invalid_argument("eps_pinv_apply: rhs row count must match the factored matrix");
  const int kept = part.rank_kept;
  const auto n = part.svd.v.rows();
  if (kept == 0) return Matrix::Zero(n, b.cols());
  Matrix t = part.svd.w.leftCols(kept).transpose() * b;
  for (int i = 0; i < kept; ++i) t.row(i) /= part.svd.sigma(i);
  return part.svd.v.leftCols(kept) * t;
}

UnderdeterminedSolution stable_underdetermined_solve(const Matrix& b_mat,
                                                     const Vector& rhs,
                                                     double eps) {
  check_finite_nonempty(b_mat, "stable_underdetermined_solve");
  if (b_mat.rows() > b_mat.cols())
    throw std::invalid_argument("stable_underdetermined_solve: matrix must be wide (rows <= cols)");
  if (rhs.size() != b_mat.rows())
    throw std::invalid_argument("stable_underdetermined_solve: rhs size mismatch");
  if (!(eps >= 0.0))
    throw std::invalid_argument("stable_underdetermined_solve: eps must be >= 0");

  const auto n = b_mat.cols();
  EpsPartition part = eps_partition(b_mat, eps);
  const int kept = part.rank_kept;
  if (kept == 0) return {Vector::Zero(n), 0, true};

  // Projecting the truncated matrix onto its kept column space W1 leaves the
  // full-row-rank system (S1 V1^T) x = W1^T rhs, solved for its minimum-norm
  // solution through a QR factorization of the (tall) transpose.
  Matrix projected_t = part.svd.v.leftCols(kept);  // n x kept
  for (int i = 0; i < kept; ++i) projected_t.col(i) *= part.svd.sigma(i);
  const Vector c = part.svd.w.leftCols(kept).transpose() * rhs;

  Eigen::HouseholderQR<Matrix> qr(projected_t);
  Matrix q_thin = qr.householderQ() * Matrix::Identity(n, kept);
  Matrix r_factor = qr.matrixQR().topRows(kept).template triangularView<Eigen::Upper>();
  const Vector z =
      r_factor.template triangularView<Eigen::Upper>().transpose().solve(c);
  return {q_thin * z, kept, false};
}

Matrix gaussian_sketch(const Matrix& a, int sketch_rows, std::uint64_t seed) {
  check_finite_nonempty(a, "gaussian_sketch");
  if (sketch_rows < 1 || sketch_rows > a.rows())
    throw std::invalid_argument("gaussian_sketch: sketch_rows outside [1, rows]");
  SeededRng rng(seed);
  Matrix omega = gaussian_matrix(sketch_rows, static_cast<int>(a.rows()), rng);
  omega /= std::sqrt(static_cast<double>(sketch_rows));
  return omega * a;
}

Vector leverage_scores(const Matrix& q) {
  check_finite_nonempty(q, "leverage_scores");
  const auto cols = q.cols();
  const double ortho_err =
      (q.transpose() * q - Matrix::Identity(cols, cols)).norm();
  if (ortho_err > 1e-8 * std::sqrt(static_cast<double>(cols)))
    throw std::invalid_argument("leverage_scores: columns are not orthonormal");
  return q.rowwise().squaredNorm();
}

double min_singular_value(const Matrix& m) {
  const ThinSVD svd = thin_svd(m);
  return svd.sigma(svd.sigma.size() - 1);
}

}  // namespace curkit
