#include "curkit/oversample.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "curkit/kernels.hpp"

namespace curkit {

namespace {

void check_basis(const Matrix& b, const IndexSet& i_set, const char* who) {
  if (b.rows() < b.cols() || b.cols() < 1)
    throw std::invalid_argument(std::string(who) + ": basis must be tall (rows >= cols >= 1)");
  if (i_set.universe() != static_cast<int>(b.rows()))
    throw std::invalid_argument(std::string(who) + ": index universe must match basis rows");
}

IndexSet map_back(const IndexSet& picks, const IndexSet& comp) {
  std::vector<int> mapped;
  mapped.reserve(static_cast<std::size_t>(picks.size()));
  for (int t = 0; t < picks.size(); ++t) mapped.push_back(comp[picks[t]]);
  return IndexSet(std::move(mapped), comp.universe());
}

// One projection round: CPQR on (Q_B(unchosen,:) * V_trail)^T, indices mapped
// back to basis rows.
IndexSet projection_round(const Matrix& q_b, const IndexSet& selected,
                          const Matrix& v_trail, bool* degenerate) {
  const IndexSet comp = selected.complement();
  Matrix projected = select_rows(q_b, comp) * v_trail;
  PivotedQR piv = cpqr(Matrix(projected.transpose()),
                       static_cast<int>(v_trail.cols()));
  if (piv.degenerate) *degenerate = true;
  return map_back(piv.pivots, comp);
}

// Smallest eigenvalue of diag(lambda) + z z^T with lambda ascending, via the
// secular equation f(mu) = 1 + sum z_i^2 / (lambda_i - mu) on (lambda_0,
// lambda_1). The update is positive semidefinite, so the smallest eigenvalue
// never drops below lambda_0.
double secular_smallest(const Vector& lambda, const Vector& z) {
  const int k = static_cast<int>(lambda.size());
  if (k == 1) return lambda(0) + z(0) * z(0);
  const double lo0 = lambda(0);
  const double hi0 = lambda(1);
  if (z(0) == 0.0 || hi0 <= lo0) return lo0;
  double lo = lo0, hi = hi0;
  for (int iter = 0; iter < 140; ++iter) {
    if ((hi - lo) <= 1e-14 * (std::abs(lo) + std::abs(hi)) + 1e-320) break;
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    double f = 1.0;
    for (int i = 0; i < k; ++i) {
      const double d = lambda(i) - mid;
      f += z(i) * z(i) / d;
    }
    if (f < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return lo + 0.5 * (hi - lo);
}

}  // namespace

std::string to_string(OversampleMode mode) {
  switch (mode) {
    case OversampleMode::projection: return "projection";
    case OversampleMode::leverage: return "leverage";
    case OversampleMode::greedy: return "greedy";
  }
  return "?";
}

OversampleMode oversample_mode_from_string(const std::string& name) {
  if (name == "projection") return OversampleMode::projection;
  if (name == "leverage") return OversampleMode::leverage;
  if (name == "greedy") return OversampleMode::greedy;
  throw std::invalid_argument("unknown oversampling mode: " + name);
}

OversampleResult os_projection(const Matrix& b, const IndexSet& i_set, int p,
                               bool pre_orthonormal) {
  check_basis(b, i_set, "os_projection");
  const int k = static_cast<int>(b.cols());
  const int n = static_cast<int>(b.rows());
  if (i_set.size() < k)
    throw std::invalid_argument("os_projection: need at least cols(b) selected indices");
  if (p < 0 || p > k)
    throw std::invalid_argument("os_projection: p must lie in [0, cols(b)]; use os_iterated for larger p");
  if (p > n - i_set.size())
    throw std::invalid_argument("os_projection: not enough unchosen indices");

  OversampleResult result{IndexSet({}, n), false, true, 0};
  if (p == 0) return result;

  const Matrix q_b = pre_orthonormal ? b : thin_qr(b).q;
  const ThinSVD block_svd = thin_svd(select_rows(q_b, i_set));
  const Matrix v_trail = block_svd.v.rightCols(p);
  result.extra = projection_round(q_b, i_set, v_trail, &result.degenerate);
  result.rounds = 1;
  return result;
}

OversampleResult os_projection_tol(const Matrix& b, const IndexSet& i_set,
                                   double tol, int max_rounds,
                                   bool pre_orthonormal) {
  check_basis(b, i_set, "os_projection_tol");
  if (!(tol > 0.0 && tol < 1.0))
    throw std::invalid_argument("os_projection_tol: tol must lie in (0, 1)");
  if (max_rounds < 0)
    throw std::invalid_argument("os_projection_tol: negative max_rounds");
  const int k = static_cast<int>(b.cols());
  const int n = static_cast<int>(b.rows());
  if (i_set.size() < k)
    throw std::invalid_argument("os_projection_tol: need at least cols(b) selected indices");

  const Matrix q_b = pre_orthonormal ? b : thin_qr(b).q;
  OversampleResult result{IndexSet({}, n), false, false, 0};
  IndexSet selected = i_set;
  for (;;) {
    const ThinSVD block_svd = thin_svd(select_rows(q_b, selected));
    int below = 0;
    for (int i = 0; i < block_svd.sigma.size(); ++i)
      if (block_svd.sigma(i) < tol) ++below;
    if (below == 0) {
      result.tol_met = true;
      break;
    }
    if (result.rounds >= max_rounds) break;
    const int unchosen = n - selected.size();
    const int add = std::min(below, unchosen);
    if (add == 0) break;
    const Matrix v_trail = block_svd.v.rightCols(add);
    IndexSet extra = projection_round(q_b, selected, v_trail, &result.degenerate);
    selected = selected.unioned(extra);
    result.extra = result.extra.unioned(extra);
    ++result.rounds;
  }
  return result;
}

OversampleResult os_leverage(const Matrix& b, const IndexSet& i_set, int p) {
  check_basis(b, i_set, "os_leverage");
  const int n = static_cast<int>(b.rows());
  if (p < 0 || p > n - i_set.size())
    throw std::invalid_argument("os_leverage: p outside [0, unchosen count]");
  OversampleResult result{IndexSet({}, n), false, true, p > 0 ? 1 : 0};
  if (p == 0) return result;

  const Matrix q_b = thin_qr(b).q;
  const Vector scores = leverage_scores(q_b);
  std::vector<int> cand = i_set.complement().indices();
  std::stable_sort(cand.begin(), cand.end(),
                   [&](int a, int c) { return scores(a) > scores(c); });
  cand.resize(static_cast<std::size_t>(p));
  result.extra = IndexSet(std::move(cand), n);
  return result;
}

OversampleResult os_greedy_minsv(const Matrix& b, const IndexSet& i_set, int p) {
  check_basis(b, i_set, "os_greedy_minsv");
  const int n = static_cast<int>(b.rows());
  const int k = static_cast<int>(b.cols());
  if (p < 0 || p > n - i_set.size())
    throw std::invalid_argument("os_greedy_minsv: p outside [0, unchosen count]");
  OversampleResult result{IndexSet({}, n), false, true, 0};
  if (p == 0) return result;

  const Matrix q_b = thin_qr(b).q;
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(k, k);
  {
    const Matrix block = select_rows(q_b, i_set);
    gram = block.transpose() * block;
  }
  std::vector<int> comp = i_set.complement().indices();
  std::vector<int> picked;
  picked.reserve(static_cast<std::size_t>(p));

  for (int round = 0; round < p; ++round) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    if (eig.info() != Eigen::Success)
      throw std::runtime_error("os_greedy_minsv: eigensolver failed");
    const Vector lambda = eig.eigenvalues();  // ascending
    const Eigen::MatrixXd basis = eig.eigenvectors();

    int best_idx = -1;
    double best_mu = -1.0;
    for (std::size_t c = 0; c < comp.size(); ++c) {
      const Vector z = basis.transpose() * q_b.row(comp[c]).transpose();
      double mu = secular_smallest(lambda, z);
      if (mu < 0.0) mu = 0.0;
      if (best_idx < 0 || (mu > best_mu && (mu - best_mu) > 1e-12 * mu)) {
        best_idx = static_cast<int>(c);
        best_mu = mu;
      }
    }
    const int row = comp[static_cast<std::size_t>(best_idx)];
    picked.push_back(row);
    gram += q_b.row(row).transpose() * q_b.row(row);
    comp.erase(comp.begin() + best_idx);
    ++result.rounds;
  }
  result.extra = IndexSet(std::move(picked), n);
  return result;
}

OversampleResult os_iterated(const Matrix& b, const IndexSet& i_set, int p,
                             OversampleMode mode) {
  check_basis(b, i_set, "os_iterated");
  const int n = static_cast<int>(b.rows());
  const int k = static_cast<int>(b.cols());
  if (p < 0 || p > n - i_set.size())
    throw std::invalid_argument("os_iterated: p outside [0, unchosen count]");
  if (mode != OversampleMode::projection) {
    // Leverage and greedy handle any p directly.
    return mode == OversampleMode::leverage ? os_leverage(b, i_set, p)
                                            : os_greedy_minsv(b, i_set, p);
  }
  const Matrix q_b = thin_qr(b).q;
  OversampleResult result{IndexSet({}, n), false, true, 0};
  IndexSet selected = i_set;
  int remaining = p;
  while (remaining > 0) {
    const int chunk = std::min(remaining, k);
    OversampleResult step = os_projection(q_b, selected, chunk, /*pre_orthonormal=*/true);
    result.degenerate = result.degenerate || step.degenerate;
    result.rounds += 1;
    selected = selected.unioned(step.extra);
    result.extra = result.extra.unioned(step.extra);
    remaining -= chunk;
  }
  return result;
}

}  // namespace curkit
