#include "curkit/selection.hpp"

#include <stdexcept>

#include "curkit/kernels.hpp"
#include "curkit/rng.hpp"

namespace curkit {

namespace {

void check_k(const Matrix& a, int k, const char* who) {
  if (k < 1 || k > std::min(a.rows(), a.cols()))
    throw std::invalid_argument(std::string(who) + ": k outside [1, min(rows, cols)]");
}

}  // namespace

SelectionResult rand_pivot(const Matrix& a, int k, std::uint64_t seed,
                           int sketch_oversize) {
  check_k(a, k, "rand_pivot");
  if (sketch_oversize < 0)
    throw std::invalid_argument("rand_pivot: negative sketch_oversize");
  const int sketch_rows =
      std::min(k + sketch_oversize, static_cast<int>(a.rows()));
  Matrix x = gaussian_sketch(a, sketch_rows, seed);
  PivotedQR col_piv = cpqr(x, k);
  IndexSet j_set = col_piv.pivots;
  Matrix c = select_cols(a, j_set);
  PivotedQR row_piv = cpqr(Matrix(c.transpose()), k);
  return {row_piv.pivots, std::move(j_set), std::move(x), "rand_pivot",
          col_piv.degenerate || row_piv.degenerate};
}

IndexSet uniform_indices(int universe, int k, std::uint64_t seed) {
  if (universe < 1) throw std::invalid_argument("uniform_indices: empty universe");
  if (k < 0 || k > universe)
    throw std::invalid_argument("uniform_indices: k outside [0, universe]");
  SeededRng rng(seed);
  std::vector<int> pool(static_cast<std::size_t>(universe));
  for (int i = 0; i < universe; ++i) pool[static_cast<std::size_t>(i)] = i;
  // Partial Fisher-Yates; the first k entries are the sample in draw order.
  for (int i = 0; i < k; ++i) {
    const int j = i + rng.uniform_int(universe - i);
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  pool.resize(static_cast<std::size_t>(k));
  return IndexSet(std::move(pool), universe);
}

SelectionResult independent_cpqr_pair(const Matrix& a, int k) {
  check_k(a, k, "independent_cpqr_pair");
  PivotedQR col_piv = cpqr(a, k);
  PivotedQR row_piv = cpqr(Matrix(a.transpose()), k);
  return {row_piv.pivots, col_piv.pivots, std::nullopt, "independent_cpqr",
          col_piv.degenerate || row_piv.degenerate};
}

SelectionResult dependent_cpqr_pair(const Matrix& a, int k) {
  check_k(a, k, "dependent_cpqr_pair");
  PivotedQR col_piv = cpqr(a, k);
  Matrix c = select_cols(a, col_piv.pivots);
  PivotedQR row_piv = cpqr(Matrix(c.transpose()), k);
  return {row_piv.pivots, col_piv.pivots, std::nullopt, "dependent_cpqr",
          col_piv.degenerate || row_piv.degenerate};
}

}  // namespace curkit
