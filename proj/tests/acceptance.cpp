// Acceptance suite: one end-to-end check per shipped guarantee, each printed
// as a single PASS/FAIL line with its runtime. Exits with the failure count.

#include <Eigen/SVD>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "curkit/bounds.hpp"
#include "curkit/cur.hpp"
#include "curkit/kernels.hpp"
#include "curkit/oversample.hpp"
#include "curkit/rng.hpp"
#include "curkit/selection.hpp"
#include "curkit/testbed.hpp"

using namespace curkit;

namespace {

double abs_frob_error(const Matrix& a, const CurFactors& f) {
  return (a - reconstruct(f)).norm();
}

double rel_frob_error(const Matrix& a, const CurFactors& f) {
  return relative_error(a, f, NormKind::frobenius);
}

bool within_rel(double value, double target, double tol) {
  return std::abs(value - target) <= tol * target;
}

// --- criterion 1: closed-form errors of the 2x2 worked example -------------
bool criterion_worked_example(std::string& detail) {
  const double epsilon = 1e-8;
  const Matrix a = gen_two_by_two(epsilon);
  const double bad =
      abs_frob_error(a, curca_stable(a, IndexSet({0}, 2), IndexSet({0}, 2)));
  const double good =
      abs_frob_error(a, curca_stable(a, IndexSet({1}, 2), IndexSet({0}, 2)));
  std::ostringstream out;
  out << "errors " << bad << " / " << good << " vs closed forms 1e8 / 1";
  detail = out.str();
  return within_rel(bad, 1e8, 1e-4) && within_rel(good, 1.0, 1e-4);
}

// --- criterion 2: exact recovery across all six modes ----------------------
bool criterion_exact_recovery(std::string& detail) {
  double worst = 0.0;
  int failures = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int k = (trial % 2 == 0) ? 5 : 20;
    const auto seed = static_cast<std::uint64_t>(trial);
    const Matrix a = gen_lowrank_gaussian(300, 300, k, seed);
    const SelectionResult sel = rand_pivot(a, k, seed);
    for (CoreMode mode :
         {CoreMode::curca_naive_solve, CoreMode::curca_explicit_pinv,
          CoreMode::curca_stable, CoreMode::scurca_factored,
          CoreMode::scurca_rowwise, CoreMode::curba_stable}) {
      const double err =
          rel_frob_error(a, decompose(a, sel.row_indices, sel.col_indices, mode, 1e-15));
      worst = std::max(worst, err);
      if (!(err <= 1e-10)) ++failures;
    }
  }
  std::ostringstream out;
  out << "50 instances x 6 modes, worst relative error " << worst;
  detail = out.str();
  return failures == 0;
}

// --- criterion 3: stability ordering of the implementations ----------------
bool criterion_stability_ordering(std::string& detail) {
  const Matrix a = gen_lowrank_gaussian(300, 300, 20, 0);
  double worst_stable = 0.0;
  for (int k = 1; k <= 40; ++k) {
    const SelectionResult sel = dependent_cpqr_pair(a, k);
    const double e_stable =
        rel_frob_error(a, curca_stable(a, sel.row_indices, sel.col_indices));
    const double e_trunc = rel_frob_error(
        a, scurca_factored(a, sel.row_indices, sel.col_indices, 1e-15));
    if (k >= 20) worst_stable = std::max({worst_stable, e_stable, e_trunc});
  }

  const Matrix g = gen_geometric_spectrum(60, 60, 0.3, 0);
  double worst_explicit = 0.0;
  for (int k = 1; k <= 40; ++k) {
    const SelectionResult sel = dependent_cpqr_pair(g, k);
    try {
      worst_explicit = std::max(
          worst_explicit,
          rel_frob_error(g, curca_explicit_pinv(g, sel.row_indices, sel.col_indices)));
    } catch (const std::exception&) {
      // an exactly singular core aborts that point; exceedance must be measured
    }
  }
  std::ostringstream out;
  out << "stable modes <= " << worst_stable
      << " for k >= 20; explicit pinv peaks at " << worst_explicit
      << " on the fast-decay companion";
  detail = out.str();
  return worst_stable <= 1e-10 && worst_explicit > 1e-8;
}

// --- criterion 4: a posteriori bounds dominate the measured errors ---------
bool criterion_bound_validity(std::string& detail) {
  int valid = 0;
  const int total = 100;
  for (int i = 0; i < total; ++i) {
    const auto seed = static_cast<std::uint64_t>(i);
    const int k = (i % 3 == 0) ? 5 : (i % 3 == 1 ? 10 : 20);
    const int p = (i % 2 == 0) ? 0 : 10;
    Matrix a;
    switch (i % 4) {
      case 0: a = gen_lowrank_gaussian(180, 140, k + 5, seed); break;
      case 1: a = gen_geometric_spectrum(150, 130, 0.7, seed); break;
      case 2: a = gen_snn(300, 200, 60, 0.05, snn_default_weights(60), seed); break;
      default: a = gen_geometric_spectrum(120, 120, 0.85, seed); break;
    }
    const SelectionResult sel = rand_pivot(a, k, seed);
    const Matrix x = *sel.row_space_approx;
    IndexSet i_star = sel.row_indices;
    if (p > 0) {
      const OversampleResult extra = os_iterated(select_cols(a, sel.col_indices),
                                                 i_star, p, OversampleMode::projection);
      i_star = i_star.unioned(extra.extra);
    }

    const double err_cross =
        abs_frob_error(a, curca_stable(a, i_star, sel.col_indices));
    const BoundReport plain =
        curca_bound(a, i_star, sel.col_indices, x, 0.0, NormKind::frobenius);

    const Matrix core = select_block(a, i_star, sel.col_indices);
    const double eps = (i % 2 == 0) ? 1e-15 : 1.5 * min_singular_value(core);
    const double err_trunc =
        abs_frob_error(a, scurca_factored(a, i_star, sel.col_indices, eps));
    const BoundReport truncated =
        curca_bound(a, i_star, sel.col_indices, x, eps, NormKind::frobenius);

    const double err_proj = abs_frob_error(a, curba_stable(a, i_star, sel.col_indices));
    const BoundReport two_sided = curba_bound(a, i_star, sel.col_indices, x,
                                              select_cols(a, sel.col_indices),
                                              NormKind::frobenius);

    if (plain.bound_value >= err_cross && truncated.bound_value >= err_trunc &&
        two_sided.bound_value >= err_proj)
      ++valid;
  }
  std::ostringstream out;
  out << valid << "/" << total << " instances keep all three certificates valid";
  detail = out.str();
  return valid == total;
}

// --- criterion 5: oversampling never hurts the selected block --------------
bool criterion_oversample_monotonic(std::string& detail) {
  int checks = 0, failures = 0;
  for (int trial = 0; trial < 15; ++trial) {
    const auto seed = static_cast<std::uint64_t>(trial);
    Matrix a;
    switch (trial % 3) {
      case 0: a = gen_lowrank_gaussian(80, 60, 12, seed); break;
      case 1: a = gen_geometric_spectrum(70, 50, 0.6, seed); break;
      default: {
        SeededRng rng(seed);
        a = gaussian_matrix(60, 40, rng);
        break;
      }
    }
    const int k = 6;
    const SelectionResult sel = rand_pivot(a, k, seed);
    const Matrix basis = select_cols(a, sel.col_indices);
    const Matrix q = thin_qr(basis).q;
    const double smin_base = min_singular_value(select_rows(q, sel.row_indices));
    for (OversampleMode mode : {OversampleMode::projection, OversampleMode::leverage,
                                OversampleMode::greedy}) {
      for (int p : {1, 3, 6}) {
        const OversampleResult extra = os_iterated(basis, sel.row_indices, p, mode);
        const IndexSet grown = sel.row_indices.unioned(extra.extra);
        const double smin_grown = min_singular_value(select_rows(q, grown));
        ++checks;
        const bool sv_ok = smin_grown >= smin_base;
        const bool factor_ok = 1.0 / smin_grown <= 1.0 / smin_base;
        if (!sv_ok || !factor_ok) ++failures;
      }
    }
  }
  std::ostringstream out;
  out << checks << " mode/p/instance combinations, " << failures << " violations";
  detail = out.str();
  return failures == 0;
}

// --- criterion 6: independent selection fails, oversampling repairs it -----
bool criterion_independent_vs_dependent(std::string& detail) {
  std::ostringstream out;
  bool ok = true;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const int k = 20;
    const Matrix a = gen_block_adversarial(200, 200, 20, 1e-10, seed);
    const SelectionResult indep = independent_cpqr_pair(a, k);
    const SelectionResult dep = dependent_cpqr_pair(a, k);
    const double err_indep =
        rel_frob_error(a, curca_stable(a, indep.row_indices, indep.col_indices));
    const double err_dep =
        rel_frob_error(a, curca_stable(a, dep.row_indices, dep.col_indices));
    const OversampleResult repair =
        os_projection(select_cols(a, indep.col_indices), indep.row_indices, k);
    const double err_repaired = rel_frob_error(
        a, curca_stable(a, indep.row_indices.unioned(repair.extra), indep.col_indices));
    if (seed == 0)
      out << "errors indep " << err_indep << ", dep " << err_dep << ", repaired "
          << err_repaired;
    ok = ok && err_indep >= 1e3 * err_dep && err_repaired <= 100.0 * err_dep;
  }
  detail = out.str();
  return ok;
}

// --- criterion 7: truncation degrades by at most the conditioning budget ---
bool criterion_truncation_budget(std::string& detail) {
  int failures = 0;
  double worst_margin = -1e300;
  for (int trial = 0; trial < 50; ++trial) {
    const auto seed = static_cast<std::uint64_t>(trial);
    const int k = (trial % 2 == 0) ? 5 : 20;
    const Matrix a = gen_lowrank_gaussian(300, 300, k, seed);
    const SelectionResult sel = rand_pivot(a, k, seed);
    const Matrix core = select_block(a, sel.row_indices, sel.col_indices);
    const double eps =
        (trial % 4 < 2) ? 1e-15 : 1.5 * min_singular_value(core);
    const double err_trunc =
        abs_frob_error(a, scurca_factored(a, sel.row_indices, sel.col_indices, eps));
    const double err_plain =
        abs_frob_error(a, curca_stable(a, sel.row_indices, sel.col_indices));
    const double kappa = condition_number_curca(a, sel.row_indices, sel.col_indices,
                                                *sel.row_space_approx);
    const double budget =
        kappa * std::sqrt(static_cast<double>(k)) * eps + 1e-12 * a.norm();
    const double margin = (err_trunc - err_plain) - budget;
    worst_margin = std::max(worst_margin, margin);
    if (margin > 0.0) ++failures;
  }
  std::ostringstream out;
  out << "50 instances, worst slack " << worst_margin << " (<= 0 required)";
  detail = out.str();
  return failures == 0;
}

// --- criterion 8: projection oversampling is competitive -------------------
bool criterion_projection_competitive(std::string& detail) {
  const std::vector<int> ks = {20, 40, 60};
  const int seeds = 5;
  std::vector<double> mean_base(ks.size(), 0.0), mean_proj(ks.size(), 0.0),
      mean_greedy(ks.size(), 0.0);
  for (int seed = 0; seed < seeds; ++seed) {
    const Matrix a =
        gen_snn(5000, 300, 300, 0.025, snn_default_weights(300),
                static_cast<std::uint64_t>(seed));
    for (std::size_t ki = 0; ki < ks.size(); ++ki) {
      const int k = ks[ki];
      const int p = k / 2;
      const SelectionResult sel = rand_pivot(a, k, static_cast<std::uint64_t>(seed));
      const Matrix basis = select_cols(a, sel.col_indices);
      mean_base[ki] +=
          rel_frob_error(a, curca_stable(a, sel.row_indices, sel.col_indices)) / seeds;
      const OversampleResult proj =
          os_iterated(basis, sel.row_indices, p, OversampleMode::projection);
      mean_proj[ki] += rel_frob_error(a, curca_stable(a, sel.row_indices.unioned(proj.extra),
                                                      sel.col_indices)) /
                       seeds;
      const OversampleResult greedy =
          os_greedy_minsv(basis, sel.row_indices, p);
      mean_greedy[ki] +=
          rel_frob_error(a, curca_stable(a, sel.row_indices.unioned(greedy.extra),
                                         sel.col_indices)) /
          seeds;
    }
  }
  bool within_factor = true;
  int proj_improves = 0, greedy_improves = 0;
  std::ostringstream out;
  for (std::size_t ki = 0; ki < ks.size(); ++ki) {
    within_factor = within_factor && mean_proj[ki] <= 3.0 * mean_greedy[ki];
    if (mean_proj[ki] < mean_base[ki]) ++proj_improves;
    if (mean_greedy[ki] < mean_base[ki]) ++greedy_improves;
    out << "k=" << ks[ki] << " base/proj/greedy " << mean_base[ki] << "/"
        << mean_proj[ki] << "/" << mean_greedy[ki] << "  ";
  }
  detail = out.str();
  const int majority = static_cast<int>(ks.size()) / 2 + 1;
  return within_factor && proj_improves >= majority && greedy_improves >= majority;
}

// --- criterion 9: the two truncated implementations agree ------------------
bool criterion_cross_agreement(std::string& detail) {
  const Matrix a = gen_lowrank_gaussian(300, 300, 20, 0);
  double worst_ratio = 1.0;
  for (int k = 1; k <= 40; ++k) {
    const SelectionResult sel = dependent_cpqr_pair(a, k);
    const double e_f = rel_frob_error(
        a, scurca_factored(a, sel.row_indices, sel.col_indices, 1e-15));
    const double e_r = rel_frob_error(
        a, scurca_rowwise(a, sel.row_indices, sel.col_indices, 1e-15));
    const double ratio = std::max(e_f, e_r) / std::min(e_f, e_r);
    worst_ratio = std::max(worst_ratio, ratio);
  }
  std::ostringstream out;
  out << "worst pointwise error ratio " << worst_ratio << " across k = 1..40";
  detail = out.str();
  return worst_ratio <= 10.0;
}

// --- criterion 10: the wide-solver matches the truncated pinv oracle -------
// The oracle applies the truncated pseudoinverse directly from the singular
// triplets; the solver goes through projection plus a QR of the transposed
// system. Past condition 1e8 the small singular subspaces themselves are only
// determined to u * cond, so the routes are compared on a shared partition --
// what is being tested is that the solver's construction loses nothing.
bool criterion_solver_oracle(std::string& detail) {
  double worst = 0.0;
  int failures = 0;
  for (int i = 0; i < 100; ++i) {
    const auto seed = static_cast<std::uint64_t>(i);
    const int m = 10 + (i % 16);
    const int n = m + 10;
    const double cond = std::pow(10.0, 12.0 * i / 99.0);
    SeededRng rng(seed);
    const Matrix w = thin_qr(gaussian_matrix(m, m, rng)).q;
    const Matrix v = thin_qr(gaussian_matrix(n, m, rng)).q;
    Vector sigma(m);
    for (int j = 0; j < m; ++j)
      sigma(j) = std::pow(cond, -static_cast<double>(j) / (m - 1));
    const Matrix b = w * sigma.asDiagonal() * v.transpose();
    Vector rhs(m);
    for (int j = 0; j < m; ++j) rhs(j) = rng.normal();

    const double eps = 1e-15 * sigma(0);
    const Vector x = stable_underdetermined_solve(b, rhs, eps).x;
    const Vector oracle = eps_pinv_apply(eps_partition(b, eps), rhs);
    const double rel = (x - oracle).norm() / oracle.norm();
    worst = std::max(worst, rel);
    if (!(rel <= 1e-10)) ++failures;
  }
  std::ostringstream out;
  out << "100 systems up to condition 1e12, worst relative gap " << worst;
  detail = out.str();
  return failures == 0;
}

struct Criterion {
  int id;
  const char* label;
  double budget_seconds;
  std::function<bool(std::string&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "worked 2x2 example closed forms", 1.0, criterion_worked_example},
      {2, "exact recovery across all modes", 30.0, criterion_exact_recovery},
      {3, "stability ordering of implementations", 120.0, criterion_stability_ordering},
      {4, "a posteriori bound validity", 180.0, criterion_bound_validity},
      {5, "oversampling monotonicity", 60.0, criterion_oversample_monotonic},
      {6, "independent vs dependent selection", 60.0, criterion_independent_vs_dependent},
      {7, "truncation degradation budget", 60.0, criterion_truncation_budget},
      {8, "projection oversampling competitiveness", 300.0, criterion_projection_competitive},
      {9, "cross-implementation agreement", 120.0, criterion_cross_agreement},
      {10, "wide-solver oracle agreement", 30.0, criterion_solver_oracle},
  };

  int failures = 0;
  for (const Criterion& criterion : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string criterion_detail;
    bool pass = false;
    try {
      pass = criterion.run(criterion_detail);
    } catch (const std::exception& err) {
      criterion_detail = std::string("exception: ") + err.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = elapsed <= criterion.budget_seconds;
    if (!in_budget) criterion_detail += " [over time budget]";
    const bool overall = pass && in_budget;
    std::printf("%s criterion %2d (%6.2fs): %s -- %s\n", overall ? "PASS" : "FAIL",
                criterion.id, elapsed, criterion.label, criterion_detail.c_str());
    std::fflush(stdout);
    if (!overall) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures;
}
