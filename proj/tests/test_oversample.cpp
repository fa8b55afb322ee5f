#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "curkit/kernels.hpp"
#include "curkit/oversample.hpp"
#include "curkit/rng.hpp"
#include "curkit/selection.hpp"

using namespace curkit;

namespace {

Matrix seeded_orthonormal(int rows, int cols, std::uint64_t seed) {
  SeededRng rng(seed);
  return thin_qr(gaussian_matrix(rows, cols, rng)).q;
}

double block_min_sv(const Matrix& q, const IndexSet& rows) {
  return min_singular_value(select_rows(q, rows));
}

// Exhaustive greedy: full SVD per candidate, same tie-break as the library.
IndexSet greedy_oracle(const Matrix& q, const IndexSet& i_set, int p) {
  IndexSet acc = i_set;
  std::vector<int> picked;
  for (int round = 0; round < p; ++round) {
    std::vector<int> comp = acc.complement().indices();
    int best = -1;
    double best_sv = -1.0;
    for (int candidate : comp) {
      IndexSet trial = acc.unioned(IndexSet({candidate}, acc.universe()));
      const double sv = block_min_sv(q, trial);
      if (best < 0 || (sv > best_sv && (sv - best_sv) > 1e-12 * sv)) {
        best = candidate;
        best_sv = sv;
      }
    }
    picked.push_back(best);
    acc = acc.unioned(IndexSet({best}, acc.universe()));
  }
  return IndexSet(picked, i_set.universe());
}

}  // namespace

TEST_CASE("os_projection picks the dominant projected row") {
  Matrix q(4, 2);
  q << 1.0, 0.0, 0.0, 0.6, 0.0, 0.8, 0.0, 0.0;
  const IndexSet chosen({0, 1}, 4);
  const OversampleResult result = os_projection(q, chosen, 1, /*pre_orthonormal=*/true);
  CHECK(result.extra.indices() == std::vector<int>{2});
  CHECK(!result.degenerate);
  CHECK(block_min_sv(q, chosen.unioned(result.extra)) >= block_min_sv(q, chosen));
}

TEST_CASE("os_projection tie-breaks and flags zero projected rows") {
  Matrix q = Matrix::Zero(4, 2);
  q(0, 0) = 1.0;
  q(1, 1) = 1.0;
  const IndexSet chosen({0, 1}, 4);
  const OversampleResult result = os_projection(q, chosen, 1, /*pre_orthonormal=*/true);
  CHECK(result.extra.indices() == std::vector<int>{2});
  CHECK(result.degenerate);
}

TEST_CASE("os_projection dominates random subsets of the same size") {
  // Monte-Carlo comparison: in nearly every trial the projection pick should
  // sit at or above the 90th percentile of 200 random same-size picks.
  // (It ties or beats the best random pick in the median trial, but not in
  // every trial, so the assertion is on the quantile.)
  int strong_trials = 0;
  const int trials = 100;
  for (std::uint64_t seed = 0; seed < trials; ++seed) {
    const Matrix q = seeded_orthonormal(50, 6, 1000 + seed);
    const IndexSet base = cpqr(Matrix(q.transpose()), 6).pivots;
    const OversampleResult result = os_projection(q, base, 3, /*pre_orthonormal=*/true);
    const double ours = block_min_sv(q, base.unioned(result.extra));
    SeededRng rng(seed);
    int dominated = 0;
    for (int draw = 0; draw < 200; ++draw) {
      const IndexSet random_extra = [&] {
        std::vector<int> comp = base.complement().indices();
        std::vector<int> pick;
        for (int t = 0; t < 3; ++t) {
          const int at = rng.uniform_int(static_cast<int>(comp.size()));
          pick.push_back(comp[static_cast<std::size_t>(at)]);
          comp.erase(comp.begin() + at);
        }
        return IndexSet(pick, 50);
      }();
      if (block_min_sv(q, base.unioned(random_extra)) <= ours) ++dominated;
    }
    if (dominated >= 180) ++strong_trials;
  }
  CHECK(strong_trials >= 95);
}

TEST_CASE("os_projection monotonicity always holds") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Matrix q = seeded_orthonormal(40, 5, seed);
    const IndexSet base = cpqr(Matrix(q.transpose()), 5).pivots;
    for (int p : {1, 3, 5}) {
      const OversampleResult result = os_projection(q, base, p, true);
      CHECK(result.extra.size() == p);
      for (int idx : result.extra.indices()) CHECK(!base.contains(idx));
      CHECK(block_min_sv(q, base.unioned(result.extra)) >= block_min_sv(q, base));
    }
  }
}

TEST_CASE("os_projection with p = k shrinks the inverse-block factor") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Matrix q = seeded_orthonormal(45, 4, 50 + seed);
    const IndexSet base = IndexSet({0, 1, 2, 3}, 45);
    const OversampleResult result = os_projection(q, base, 4, true);
    const double before = 1.0 / block_min_sv(q, base);
    const double after = 1.0 / block_min_sv(q, base.unioned(result.extra));
    CHECK(after <= before);
  }
}

TEST_CASE("CS decomposition pairing of the two blocks") {
  const Matrix q = seeded_orthonormal(30, 6, 9);
  const IndexSet top = IndexSet({0, 1, 2, 3, 4, 5}, 30);
  Vector c = thin_svd(select_rows(q, top)).sigma;               // non-increasing
  Vector s = thin_svd(select_rows(q, top.complement())).sigma;  // non-increasing
  for (int i = 0; i < 6; ++i) {
    const double ci = c(i);
    const double si = s(5 - i);  // pair the largest cosine with the smallest sine
    CHECK(ci * ci + si * si == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("os_projection_tol reaches the target or reports otherwise") {
  const Matrix q = seeded_orthonormal(100, 8, 4);
  const IndexSet base = cpqr(Matrix(q.transpose()), 8).pivots;
  const double tol = std::sqrt(8.0 / 100.0);

  if (block_min_sv(q, base) >= tol) {
    const OversampleResult noop = os_projection_tol(q, base, tol, 5, true);
    CHECK(noop.extra.empty());
    CHECK(noop.tol_met);
  }

  const OversampleResult run = os_projection_tol(q, base, tol, 3, true);
  CHECK(run.rounds <= 3);
  if (run.tol_met) CHECK(block_min_sv(q, base.unioned(run.extra)) >= tol);

  const OversampleResult frozen = os_projection_tol(q, base, 0.999, 0, true);
  CHECK(frozen.extra.empty());
  CHECK(!frozen.tol_met);
}

TEST_CASE("os_leverage ranks unchosen rows by score") {
  Matrix b(5, 2);
  b << 4.0, 0.0, 0.0, 3.0, 2.0, 0.5, 0.0, 1.0, 0.3, 0.1;
  const Matrix q = thin_qr(b).q;
  const Vector scores = leverage_scores(q);
  const IndexSet base({0}, 5);
  const OversampleResult result = os_leverage(b, base, 2);
  // Oracle: full sort of the computed scores over the unchosen rows.
  std::vector<int> expect = base.complement().indices();
  std::stable_sort(expect.begin(), expect.end(),
                   [&](int a, int c) { return scores(a) > scores(c); });
  expect.resize(2);
  CHECK(result.extra.indices() == expect);
}

TEST_CASE("os_leverage tie-breaks toward low indices") {
  Matrix q(4, 2);
  const double h = 0.5;
  q << h, h, h, -h, h, h, h, -h;  // every row has leverage 1/2
  const IndexSet base({0}, 4);
  const OversampleResult result = os_leverage(q, base, 2);
  CHECK(result.extra.indices() == std::vector<int>{1, 2});
}

TEST_CASE("os_greedy_minsv takes the forced direction") {
  Matrix q = Matrix::Zero(4, 2);
  q(0, 0) = 1.0;
  q(2, 1) = 1.0;  // only row 2 spans the missing direction
  const IndexSet base({0}, 4);
  const OversampleResult result = os_greedy_minsv(q, base, 1);
  CHECK(result.extra.indices() == std::vector<int>{2});

  CHECK(os_greedy_minsv(q, base, 0).extra.empty());
}

TEST_CASE("os_greedy_minsv matches the exhaustive oracle") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const Matrix q = seeded_orthonormal(30, 4, 300 + seed);
    const IndexSet base = cpqr(Matrix(q.transpose()), 4).pivots;
    const OversampleResult got = os_greedy_minsv(q, base, 2);
    const IndexSet expect = greedy_oracle(q, base, 2);
    CHECK(got.extra.indices() == expect.indices());
  }
}

TEST_CASE("os_iterated handles p beyond the basis width") {
  const Matrix q = seeded_orthonormal(60, 5, 12);
  const IndexSet base = cpqr(Matrix(q.transpose()), 5).pivots;

  const OversampleResult single = os_projection(q, base, 4, true);
  const OversampleResult chunked = os_iterated(q, base, 4, OversampleMode::projection);
  CHECK(single.extra.indices() == chunked.extra.indices());

  const OversampleResult doubled = os_iterated(q, base, 10, OversampleMode::projection);
  CHECK(doubled.extra.size() == 10);
  for (int idx : doubled.extra.indices()) CHECK(!base.contains(idx));

  const OversampleResult everything =
      os_iterated(q, base, 60 - base.size(), OversampleMode::projection);
  const IndexSet all = base.unioned(everything.extra);
  CHECK(all.size() == 60);
  CHECK(block_min_sv(q, all) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("monotonicity holds for every mode") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Matrix q = seeded_orthonormal(50, 6, 700 + seed);
    const IndexSet base = uniform_indices(50, 6, seed);
    const double before = block_min_sv(q, base);
    for (OversampleMode mode : {OversampleMode::projection, OversampleMode::leverage,
                                OversampleMode::greedy}) {
      const OversampleResult result = os_iterated(q, base, 4, mode);
      CHECK(result.extra.size() == 4);
      CHECK(block_min_sv(q, base.unioned(result.extra)) >= before);
    }
  }
}

TEST_CASE("oversampling preconditions are enforced") {
  const Matrix q = seeded_orthonormal(10, 4, 1);
  const IndexSet base({0, 1, 2, 3}, 10);
  CHECK_THROWS_AS(os_projection(q, base, 5, true), std::invalid_argument);
  CHECK_THROWS_AS(os_projection(q, IndexSet({0, 1}, 10), 1, true), std::invalid_argument);
  CHECK_THROWS_AS(os_projection_tol(q, base, 1.5, 3, true), std::invalid_argument);
  CHECK_THROWS_AS(os_leverage(q, base, 7), std::invalid_argument);
  CHECK_THROWS_AS(os_greedy_minsv(q, base, 7), std::invalid_argument);
}
