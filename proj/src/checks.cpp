#include "curkit/checks.hpp"

#include <cmath>
#include <sstream>

#include "curkit/bounds.hpp"
#include "curkit/cur.hpp"
#include "curkit/kernels.hpp"
#include "curkit/oversample.hpp"
#include "curkit/rng.hpp"
#include "curkit/selection.hpp"
#include "curkit/testbed.hpp"

namespace curkit {

namespace {

CheckResult exact_recovery_check(int seed_count) {
  CheckResult result{"exact_recovery", true, ""};
  std::ostringstream fails;
  const int k = 6;
  for (int seed = 0; seed < seed_count; ++seed) {
    const Matrix a = gen_lowrank_gaussian(100, 80, k, static_cast<std::uint64_t>(seed));
    const SelectionResult sel = rand_pivot(a, k, static_cast<std::uint64_t>(seed));
    for (CoreMode mode :
         {CoreMode::curca_naive_solve, CoreMode::curca_explicit_pinv,
          CoreMode::curca_stable, CoreMode::scurca_factored,
          CoreMode::scurca_rowwise, CoreMode::curba_stable}) {
      const CurFactors f =
          decompose(a, sel.row_indices, sel.col_indices, mode, kDefaultEps);
      const double err = relative_error(a, f, NormKind::frobenius);
      if (!(err <= 1e-10)) {
        result.pass = false;
        fails << " seed=" << seed << " mode=" << to_string(mode) << " err=" << err;
      }
    }
  }
  result.detail = result.pass ? "all modes recover rank-6 inputs" : fails.str();
  return result;
}

CheckResult bound_validity_check(int seed_count) {
  CheckResult result{"bound_validity", true, ""};
  std::ostringstream fails;
  for (int seed = 0; seed < seed_count; ++seed) {
    const auto s = static_cast<std::uint64_t>(seed);
    const int k = 8;
    const Matrix a = (seed % 2 == 0) ? gen_lowrank_gaussian(120, 90, k + 4, s)
                                     : gen_geometric_spectrum(100, 100, 0.7, s);
    const SelectionResult sel = rand_pivot(a, k, s);
    const Matrix x = *sel.row_space_approx;

    const CurFactors stable = curca_stable(a, sel.row_indices, sel.col_indices);
    const double err_stable = (a - reconstruct(stable)).norm();
    const BoundReport plain =
        curca_bound(a, sel.row_indices, sel.col_indices, x, 0.0, NormKind::frobenius);
    if (!(plain.bound_value >= err_stable)) {
      result.pass = false;
      fails << " seed=" << seed << " cross bound=" << plain.bound_value
            << " err=" << err_stable;
    }

    const Matrix core = select_block(a, sel.row_indices, sel.col_indices);
    const double eps = 1.5 * min_singular_value(core);
    const CurFactors truncated =
        scurca_factored(a, sel.row_indices, sel.col_indices, eps);
    const double err_trunc = (a - reconstruct(truncated)).norm();
    const BoundReport trunc_bound =
        curca_bound(a, sel.row_indices, sel.col_indices, x, eps, NormKind::frobenius);
    if (!(trunc_bound.bound_value >= err_trunc)) {
      result.pass = false;
      fails << " seed=" << seed << " truncated bound=" << trunc_bound.bound_value
            << " err=" << err_trunc;
    }

    const CurFactors projective = curba_stable(a, sel.row_indices, sel.col_indices);
    const double err_proj = (a - reconstruct(projective)).norm();
    const Matrix y = select_cols(a, sel.col_indices);
    const BoundReport two_sided =
        curba_bound(a, sel.row_indices, sel.col_indices, x, y, NormKind::frobenius);
    if (!(two_sided.bound_value >= err_proj)) {
      result.pass = false;
      fails << " seed=" << seed << " two-sided bound=" << two_sided.bound_value
            << " err=" << err_proj;
    }
  }
  result.detail = result.pass ? "bounds dominate measured errors" : fails.str();
  return result;
}

CheckResult oversample_monotonicity_check(int seed_count) {
  CheckResult result{"oversample_monotonicity", true, ""};
  std::ostringstream fails;
  for (int seed = 0; seed < seed_count; ++seed) {
    const auto s = static_cast<std::uint64_t>(seed);
    const int k = 6;
    const Matrix a = gen_lowrank_gaussian(80, 60, k + 6, s);
    const SelectionResult sel = rand_pivot(a, k, s);
    const Matrix basis = select_cols(a, sel.col_indices);
    const Matrix q = thin_qr(basis).q;
    const double base = min_singular_value(select_rows(q, sel.row_indices));
    for (OversampleMode mode : {OversampleMode::projection, OversampleMode::leverage,
                                OversampleMode::greedy}) {
      const OversampleResult extra = os_iterated(basis, sel.row_indices, 3, mode);
      const IndexSet grown = sel.row_indices.unioned(extra.extra);
      const double after = min_singular_value(select_rows(q, grown));
      if (!(after >= base)) {
        result.pass = false;
        fails << " seed=" << seed << " mode=" << to_string(mode) << " " << after
              << " < " << base;
      }
    }
  }
  result.detail = result.pass ? "sigma_min never decreases under oversampling"
                              : fails.str();
  return result;
}

CheckResult cross_impl_check(int seed_count) {
  CheckResult result{"cross_impl_agreement", true, ""};
  std::ostringstream fails;
  for (int seed = 0; seed < seed_count; ++seed) {
    const auto s = static_cast<std::uint64_t>(seed);
    const Matrix a = gen_geometric_spectrum(60, 60, 0.5, s);
    for (int k : {5, 12, 20}) {
      const SelectionResult sel = dependent_cpqr_pair(a, k);
      const CurFactors fact =
          scurca_factored(a, sel.row_indices, sel.col_indices, kDefaultEps);
      const CurFactors row =
          scurca_rowwise(a, sel.row_indices, sel.col_indices, kDefaultEps);
      const double e1 = relative_error(a, fact, NormKind::frobenius);
      const double e2 = relative_error(a, row, NormKind::frobenius);
      const double ratio = std::max(e1, e2) / std::min(e1, e2);
      if (!(ratio <= 10.0)) {
        result.pass = false;
        fails << " seed=" << seed << " k=" << k << " ratio=" << ratio;
      }
    }
  }
  result.detail = result.pass ? "factored and row-wise paths agree within 10x"
                              : fails.str();
  return result;
}

CheckResult interpolation_check(int seed_count) {
  CheckResult result{"interpolation", true, ""};
  std::ostringstream fails;
  for (int seed = 0; seed < seed_count; ++seed) {
    const auto s = static_cast<std::uint64_t>(seed);
    SeededRng rng(s);
    const Matrix a = gaussian_matrix(50, 40, rng);
    const SelectionResult sel = rand_pivot(a, 5, s);
    const Matrix rec = reconstruct(curca_stable(a, sel.row_indices, sel.col_indices));
    const double scale = spectral_norm(a);
    const double col_gap =
        (select_cols(rec, sel.col_indices) - select_cols(a, sel.col_indices)).norm();
    const double row_gap =
        (select_rows(rec, sel.row_indices) - select_rows(a, sel.row_indices)).norm();
    if (!(col_gap <= 1e-12 * scale && row_gap <= 1e-12 * scale)) {
      result.pass = false;
      fails << " seed=" << seed << " col_gap=" << col_gap << " row_gap=" << row_gap;
    }
  }
  result.detail =
      result.pass ? "selected rows and columns are reproduced exactly" : fails.str();
  return result;
}

CheckResult determinism_check() {
  CheckResult result{"determinism", true, ""};
  const Matrix a = gen_lowrank_gaussian(60, 50, 8, 7);
  const SelectionResult first = rand_pivot(a, 8, 123);
  const SelectionResult second = rand_pivot(a, 8, 123);
  const Matrix s1 = gaussian_sketch(a, 8, 99);
  const Matrix s2 = gaussian_sketch(a, 8, 99);
  const bool same = first.row_indices == second.row_indices &&
                    first.col_indices == second.col_indices && s1 == s2 &&
                    uniform_indices(100, 10, 5) == uniform_indices(100, 10, 5);
  result.pass = same;
  result.detail = same ? "identical seeds give identical results"
                       : "re-running with a fixed seed changed the output";
  return result;
}

}  // namespace

std::vector<CheckResult> run_verification(bool quick, double eps) {
  if (!(eps >= 0.0))
    return {{"preconditions", false,
             "eps must be >= 0 (got " + format_double(eps) + ")"}};
  const int seeds = quick ? 3 : 12;
  std::vector<CheckResult> results;
  results.push_back(exact_recovery_check(quick ? 2 : 8));
  results.push_back(bound_validity_check(seeds));
  results.push_back(oversample_monotonicity_check(seeds));
  results.push_back(cross_impl_check(quick ? 2 : 6));
  results.push_back(interpolation_check(quick ? 2 : 6));
  results.push_back(determinism_check());
  return results;
}

}  // namespace curkit
