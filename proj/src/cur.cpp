#include "curkit/cur.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <stdexcept>

#include "curkit/kernels.hpp"
#include "curkit/rng.hpp"

namespace curkit {

namespace {

void check_sets(const Matrix& a, const IndexSet& i_set, const IndexSet& j_set,
                const char* who) {
  if (i_set.empty() || j_set.empty())
    throw std::invalid_argument(std::string(who) + ": empty index set");
  if (i_set.universe() != static_cast<int>(a.rows()) ||
      j_set.universe() != static_cast<int>(a.cols()))
    throw std::invalid_argument(std::string(who) + ": index universes do not match matrix");
}

CurFactors transposed(const Matrix& a, const IndexSet& i_set, const IndexSet& j_set,
                      CoreMode mode, double eps);

CurFactors make(Matrix left, Matrix right, const IndexSet& i_set, const IndexSet& j_set,
                CoreMode mode, double eps, int k_eps, bool rank_zero) {
  return {std::move(left), std::move(right), i_set, j_set, mode, eps, k_eps, rank_zero};
}

CurFactors curca_naive_impl(const Matrix& a, const IndexSet& i_set, const IndexSet& j_set) {
  const Matrix c = select_cols(a, j_set);
  const Matrix u = select_block(a, i_set, j_set);
  if (u.cwiseAbs().maxCoeff() == 0.0)
    throw std::runtime_error("curca_naive_solve: core block is exactly singular");
  // Least squares min ||X*U - C|| column by column on the transposed system.
  Eigen::ColPivHouseholderQR<Matrix> qr(Matrix(u.transpose()));
  if (qr.rank() == 0)
    throw std::runtime_error("curca_naive_solve: core block is exactly singular");
  Matrix left = qr.solve(Matrix(c.transpose())).transpose();
  return make(std::move(left), select_rows(a, i_set), i_set, j_set,
              CoreMode::curca_naive_solve, 0.0, 0, false);
}

CurFactors curca_explicit_pinv_impl(const Matrix& a, const IndexSet& i_set,
                                    const IndexSet& j_set) {
  const Matrix c = select_cols(a, j_set);
  const ThinSVD svd = thin_svd(select_block(a, i_set, j_set));
  if (svd.sigma(svd.sigma.size() - 1) == 0.0)
    throw std::runtime_error("curca_explicit_pinv: exactly zero singular value in the core");
  Matrix vs = svd.v;
  for (Eigen::Index j = 0; j < vs.cols(); ++j) vs.col(j) /= svd.sigma(j);
  const Matrix pinv = vs * svd.w.transpose();  // the explicitly formed pseudoinverse
  return make(c * pinv, select_rows(a, i_set), i_set, j_set,
              CoreMode::curca_explicit_pinv, 0.0, 0, false);
}

CurFactors curca_stable_impl(const Matrix& a, const IndexSet& i_set,
                             const IndexSet& j_set) {
  const Matrix c = select_cols(a, j_set);
  const ThinSVD svd = thin_svd(select_block(a, i_set, j_set));
  if (svd.sigma(svd.sigma.size() - 1) == 0.0)
    throw std::runtime_error("curca_stable: exactly zero singular value in the core");
  Matrix left = c * svd.v;  // scale columns only after the product
  for (Eigen::Index j = 0; j < left.cols(); ++j) left.col(j) /= svd.sigma(j);
  return make(std::move(left), Matrix(svd.w.transpose() * select_rows(a, i_set)),
              i_set, j_set, CoreMode::curca_stable, 0.0, 0, false);
}

CurFactors scurca_factored_impl(const Matrix& a, const IndexSet& i_set,
                                const IndexSet& j_set, double eps) {
  const Matrix c = select_cols(a, j_set);
  const EpsPartition part = eps_partition(select_block(a, i_set, j_set), eps);
  const int kept = part.rank_kept;
  if (kept == 0) {
    return make(Matrix::Zero(a.rows(), 0), Matrix::Zero(0, a.cols()), i_set, j_set,
                CoreMode::scurca_factored, eps, part.k_eps, true);
  }
  Matrix left = c * part.svd.v.leftCols(kept);
  for (int j = 0; j < kept; ++j) left.col(j) /= part.svd.sigma(j);
  Matrix right = part.svd.w.leftCols(kept).transpose() * select_rows(a, i_set);
  return make(std::move(left), std::move(right), i_set, j_set,
              CoreMode::scurca_factored, eps, part.k_eps, false);
}

CurFactors scurca_rowwise_impl(const Matrix& a, const IndexSet& i_set,
                               const IndexSet& j_set, double eps) {
  if (!(eps > 0.0))
    throw std::invalid_argument("scurca_rowwise: eps must be positive");
  const Matrix c = select_cols(a, j_set);
  const Matrix u_t = select_block(a, i_set, j_set).transpose();
  const Matrix r = select_rows(a, i_set);
  const auto m = a.rows();
  Matrix solutions(m, i_set.size());
  int k_eps = 0;
  bool rank_zero = false;
  for (Eigen::Index i = 0; i < m; ++i) {
    UnderdeterminedSolution sol =
        stable_underdetermined_solve(u_t, c.row(i).transpose(), eps);
    solutions.row(i) = sol.x.transpose();
    if (i == 0) {
      k_eps = static_cast<int>(u_t.rows()) - sol.rank_kept;
      rank_zero = sol.rank_zero;
    }
  }
  return make(std::move(solutions), r, i_set, j_set, CoreMode::scurca_rowwise,
              eps, k_eps, rank_zero);
}

CurFactors curba_stable_impl(const Matrix& a, const IndexSet& i_set,
                             const IndexSet& j_set) {
  const ThinQR qc = thin_qr(select_cols(a, j_set));
  const ThinQR qr_rows = thin_qr(Matrix(select_rows(a, i_set).transpose()));
  for (Eigen::Index t = 0; t < qc.r.rows(); ++t)
    if (qc.r(t, t) == 0.0)
      throw std::runtime_error("curba_stable: selected columns are exactly rank deficient");
  for (Eigen::Index t = 0; t < qr_rows.r.rows(); ++t)
    if (qr_rows.r(t, t) == 0.0)
      throw std::runtime_error("curba_stable: selected rows are exactly rank deficient");
  const Matrix mid = qc.q.transpose() * a * qr_rows.q;
  return make(qc.q, Matrix(mid * qr_rows.q.transpose()), i_set, j_set,
              CoreMode::curba_stable, 0.0, 0, false);
}

CurFactors dispatch(const Matrix& a, const IndexSet& i_set, const IndexSet& j_set,
                    CoreMode mode, double eps) {
  if (i_set.size() < j_set.size()) return transposed(a, i_set, j_set, mode, eps);
  switch (mode) {
    case CoreMode::curca_naive_solve: return curca_naive_impl(a, i_set, j_set);
    case CoreMode::curca_explicit_pinv: return curca_explicit_pinv_impl(a, i_set, j_set);
    case CoreMode::curca_stable: return curca_stable_impl(a, i_set, j_set);
    case CoreMode::scurca_factored: return scurca_factored_impl(a, i_set, j_set, eps);
    case CoreMode::scurca_rowwise: return scurca_rowwise_impl(a, i_set, j_set, eps);
    case CoreMode::curba_stable: return curba_stable_impl(a, i_set, j_set);
  }
  throw std::logic_error("dispatch: unknown mode");
}

// Column-oversampled inputs run on the transpose and swap the factors back.
CurFactors transposed(const Matrix& a, const IndexSet& i_set, const IndexSet& j_set,
                      CoreMode mode, double eps) {
  CurFactors t = dispatch(Matrix(a.transpose()), j_set, i_set, mode, eps);
  return {Matrix(t.right.transpose()), Matrix(t.left.transpose()), i_set, j_set,
          mode, t.eps_used, t.k_eps, t.rank_zero};
}

// Power iteration on op^T op; `op`/`op_t` apply the operator and its
// transpose. Deterministic start vector.
double operator_spectral_norm(Eigen::Index rows, Eigen::Index cols,
                              const std::function<Vector(const Vector&)>& op,
                              const std::function<Vector(const Vector&)>& op_t) {
  SeededRng rng(0x5eedULL);
  Vector v(cols);
  for (Eigen::Index i = 0; i < cols; ++i) v(i) = rng.normal();
  const double vn = v.norm();
  if (vn == 0.0 || rows == 0 || cols == 0) return 0.0;
  v /= vn;
  double sigma = 0.0;
  for (int iter = 0; iter < 200; ++iter) {
    Vector w = op(v);
    const double wn = w.norm();
    if (wn == 0.0) return 0.0;
    w /= wn;
    Vector next = op_t(w);
    const double new_sigma = next.norm();
    if (new_sigma == 0.0) return 0.0;
    v = next / new_sigma;
    if (std::abs(new_sigma - sigma) <= 1e-8 * new_sigma) return new_sigma;
    sigma = new_sigma;
  }
  return sigma;
}

}  // namespace

std::string to_string(CoreMode mode) {
  switch (mode) {
    case CoreMode::curca_naive_solve: return "naive";
    case CoreMode::curca_explicit_pinv: return "explicit_pinv";
    case CoreMode::curca_stable: return "stable";
    case CoreMode::scurca_factored: return "scurca";
    case CoreMode::scurca_rowwise: return "scurca_rowwise";
    case CoreMode::curba_stable: return "curba";
  }
  return "?";
}

CoreMode core_mode_from_string(const std::string& name) {
  if (name == "naive") return CoreMode::curca_naive_solve;
  if (name == "explicit_pinv") return CoreMode::curca_explicit_pinv;
  if (name == "stable") return CoreMode::curca_stable;
  if (name == "scurca") return CoreMode::scurca_factored;
  if (name == "scurca_rowwise") return CoreMode::scurca_rowwise;
  if (name == "curba") return CoreMode::curba_stable;
  throw std::invalid_argument("unknown core mode: " + name);
}

bool mode_uses_eps(CoreMode mode) {
  return mode == CoreMode::scurca_factored || mode == CoreMode::scurca_rowwise;
}

CurFactors curca_naive_solve(const Matrix& a, const IndexSet& i_set, const IndexSet& j_set) {
  check_sets(a, i_set, j_set, "curca_naive_solve");
  return dispatch(a, i_set, j_set, CoreMode::curca_naive_solve, 0.0);
}

CurFactors curca_explicit_pinv(const Matrix& a, const IndexSet& i_set, const IndexSet& j_set) {
  check_sets(a, i_set, j_set, "curca_explicit_pinv");
  return dispatch(a, i_set, j_set, CoreMode::curca_explicit_pinv, 0.0);
}

CurFactors curca_stable(const Matrix& a, const IndexSet& i_set, const IndexSet& j_set) {
  check_sets(a, i_set, j_set, "curca_stable");
  return dispatch(a, i_set, j_set, CoreMode::curca_stable, 0.0);
}

CurFactors scurca_factored(const Matrix& a, const IndexSet& i_set, const IndexSet& j_set,
                           double eps) {
  check_sets(a, i_set, j_set, "scurca_factored");
  if (!(eps >= 0.0)) throw std::invalid_argument("scurca_factored: eps must be >= 0");
  return dispatch(a, i_set, j_set, CoreMode::scurca_factored, eps);
}

CurFactors scurca_rowwise(const Matrix& a, const IndexSet& i_set, const IndexSet& j_set,
                          double eps) {
  check_sets(a, i_set, j_set, "scurca_rowwise");
  return dispatch(a, i_set, j_set, CoreMode::scurca_rowwise, eps);
}

CurFactors curba_stable(const Matrix& a, const IndexSet& i_set, const IndexSet& j_set) {
  check_sets(a, i_set, j_set, "curba_stable");
  return dispatch(a, i_set, j_set, CoreMode::curba_stable, 0.0);
}

CurFactors decompose(const Matrix& a, const IndexSet& i_set, const IndexSet& j_set,
                     CoreMode mode, double eps) {
  check_sets(a, i_set, j_set, "decompose");
  return dispatch(a, i_set, j_set, mode, eps);
}

Matrix reconstruct(const CurFactors& f) {
  if (f.left.cols() == 0) return Matrix::Zero(f.left.rows(), f.right.cols());
  return f.left * f.right;
}

double relative_error(const Matrix& a, const CurFactors& f, NormKind norm) {
  if (f.left.rows() != a.rows() || f.right.cols() != a.cols())
    throw std::invalid_argument("relative_error: factor shapes do not match matrix");
  if (norm == NormKind::frobenius) {
    const double denom = a.norm();
    double acc = 0.0;
    constexpr Eigen::Index kBlock = 256;
    for (Eigen::Index start = 0; start < a.rows(); start += kBlock) {
      const Eigen::Index len = std::min(kBlock, a.rows() - start);
      Matrix diff = a.middleRows(start, len);
      if (f.left.cols() > 0) diff.noalias() -= f.left.middleRows(start, len) * f.right;
      acc += diff.squaredNorm();
    }
    const double num = std::sqrt(acc);
    if (denom == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return num / denom;
  }
  const auto op = [&](const Vector& x) -> Vector {
    Vector y = a * x;
    if (f.left.cols() > 0) y.noalias() -= f.left * (f.right * x);
    return y;
  };
  const auto op_t = [&](const Vector& y) -> Vector {
    Vector x = a.transpose() * y;
    if (f.left.cols() > 0) x.noalias() -= f.right.transpose() * (f.left.transpose() * y);
    return x;
  };
  const double denom = spectral_norm(a);
  const double num = operator_spectral_norm(a.rows(), a.cols(), op, op_t);
  if (denom == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return num / denom;
}

double tsvd_error(const Vector& singular_values, int k, NormKind norm) {
  const int count = static_cast<int>(singular_values.size());
  if (k < 0) throw std::invalid_argument("tsvd_error: negative rank");
  if (count == 0) return 0.0;
  if (norm == NormKind::spectral) {
    if (singular_values(0) == 0.0) return 0.0;
    return k < count ? singular_values(k) / singular_values(0) : 0.0;
  }
  double total = 0.0, tail = 0.0;
  for (int i = 0; i < count; ++i) {
    const double s2 = singular_values(i) * singular_values(i);
    total += s2;
    if (i >= k) tail += s2;
  }
  if (total == 0.0) return 0.0;
  return std::sqrt(tail / total);
}

double tsvd_error(const Matrix& a, int k, NormKind norm) {
  if (k > std::min(a.rows(), a.cols()))
    throw std::invalid_argument("tsvd_error: rank exceeds min dimension");
  return tsvd_error(thin_svd(a).sigma, k, norm);
}

double spectral_norm(const Matrix& m) {
  return operator_spectral_norm(
      m.rows(), m.cols(), [&](const Vector& x) -> Vector { return m * x; },
      [&](const Vector& y) -> Vector { return m.transpose() * y; });
}

}  // namespace curkit
