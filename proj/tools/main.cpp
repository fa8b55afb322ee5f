// cur-kit: benchmark harness for stabilized cross-approximation experiments.
// Subcommands: sweep, os-compare, verify, decompose. Results land in CSV
// tables, one row per grid point.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <string>

#include "curkit/bounds.hpp"
#include "curkit/checks.hpp"
#include "curkit/cur.hpp"
#include "curkit/experiment.hpp"
#include "curkit/kernels.hpp"
#include "curkit/selection.hpp"
#include "curkit/testbed.hpp"

namespace {

struct CommonOptions {
  std::string gen;
  std::string input;
  std::string k_list;
  std::string p_list = "0";
  std::string os_mode = "projection";
  std::string side = "rows";
  bool danger_both_sides = false;
  std::string strategies = "rand_pivot";
  double eps = curkit::kDefaultEps;
  double eps_rel = -1.0;
  std::string seeds = "0";
  std::string norm = "frobenius";
  std::string out;
  bool no_timing = false;
};

void add_common(CLI::App* cmd, CommonOptions* opts, bool need_k) {
  cmd->add_option("--gen", opts->gen,
                  "generator spec, e.g. lowrank:300x300:r20, block:200x200:s20, "
                  "snn:5000x300, geometric:60x60:0.3, two_by_two:1e-8");
  cmd->add_option("--in", opts->input, "input matrix file (.mtx or .bin)");
  auto* k = cmd->add_option("--k", opts->k_list, "target ranks, e.g. 1..40 or 10..100:10");
  if (need_k) k->required();
  cmd->add_option("--p", opts->p_list, "oversampling amounts, e.g. 0,10,0.5k");
  cmd->add_option("--os-mode", opts->os_mode, "oversampling mode: projection|leverage|greedy");
  cmd->add_option("--side", opts->side, "which indices to oversample: rows|cols|both");
  cmd->add_flag("--danger-both-sides", opts->danger_both_sides,
                "allow the known-harmful side=both configuration");
  cmd->add_option("--strategy", opts->strategies,
                  "selection strategies: rand_pivot|uniform|independent|dependent");
  cmd->add_option("--eps", opts->eps, "absolute truncation threshold");
  cmd->add_option("--eps-rel", opts->eps_rel,
                  "relative truncation threshold (eps = eps-rel * sigma_max of the core)");
  cmd->add_option("--seeds", opts->seeds, "seed list, e.g. 0..4");
  cmd->add_option("--norm", opts->norm, "error norm: frobenius|spectral");
  cmd->add_flag("--no-timing", opts->no_timing, "zero the wall_time_ms column");
}

curkit::ExperimentSpec build_spec(const CommonOptions& opts) {
  curkit::ExperimentSpec spec;
  if (!opts.gen.empty() && !opts.input.empty())
    throw std::invalid_argument("pass either --gen or --in, not both");
  if (opts.gen.empty() && opts.input.empty())
    throw std::invalid_argument("a matrix source is required (--gen or --in)");
  spec.gen = opts.gen.empty() ? curkit::file_generator(opts.input)
                              : curkit::parse_generator(opts.gen);
  if (!opts.k_list.empty()) spec.rank_sweep = curkit::parse_int_list(opts.k_list);
  spec.p_values = curkit::parse_p_list(opts.p_list);
  spec.os_mode = curkit::oversample_mode_from_string(opts.os_mode);
  if (opts.side == "rows")
    spec.side = curkit::OversampleSide::rows;
  else if (opts.side == "cols")
    spec.side = curkit::OversampleSide::cols;
  else if (opts.side == "both")
    spec.side = curkit::OversampleSide::both;
  else
    throw std::invalid_argument("unknown side: " + opts.side);
  spec.danger_both_sides = opts.danger_both_sides;
  spec.strategies.clear();
  for (const auto& name : [&] {
         std::vector<std::string> parts;
         std::string cur;
         for (char c : opts.strategies) {
           if (c == ',') {
             parts.push_back(cur);
             cur.clear();
           } else
             cur.push_back(c);
         }
         parts.push_back(cur);
         return parts;
       }())
    if (!name.empty()) spec.strategies.push_back(curkit::strategy_from_string(name));
  spec.eps = opts.eps;
  if (opts.eps_rel >= 0.0) spec.eps_rel = opts.eps_rel;
  spec.seeds = curkit::parse_seed_list(opts.seeds);
  if (opts.norm == "frobenius")
    spec.norm = curkit::NormKind::frobenius;
  else if (opts.norm == "spectral")
    spec.norm = curkit::NormKind::spectral;
  else
    throw std::invalid_argument("unknown norm: " + opts.norm);
  spec.output_path = opts.out;
  spec.timing = !opts.no_timing;
  return spec;
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      parts.push_back(cur);
      cur.clear();
    } else
      cur.push_back(c);
  }
  parts.push_back(cur);
  return parts;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cur-kit: stabilized cross-approximation benchmark harness"};
  app.require_subcommand(1);

  // sweep
  CommonOptions sweep_opts;
  std::string sweep_modes = "stable";
  auto* sweep = app.add_subcommand("sweep", "run a decomposition-mode sweep to CSV");
  add_common(sweep, &sweep_opts, true);
  sweep->add_option("--modes", sweep_modes,
                    "core modes: naive|explicit_pinv|stable|scurca|scurca_rowwise|curba");
  sweep->add_option("--out", sweep_opts.out, "output CSV path")->required();

  // os-compare
  CommonOptions os_opts;
  std::string os_modes = "projection,leverage,greedy";
  std::string os_core_mode = "stable";
  auto* oscmp = app.add_subcommand("os-compare", "compare oversampling methods to CSV");
  add_common(oscmp, &os_opts, true);
  oscmp->add_option("--modes", os_modes, "oversampling modes to compare (>= 2)");
  oscmp->add_option("--core-mode", os_core_mode, "core mode used for every row");
  oscmp->add_option("--out", os_opts.out, "output CSV path")->required();

  // verify
  bool quick = false;
  double verify_eps = curkit::kDefaultEps;
  auto* verify = app.add_subcommand("verify", "run the self-check battery");
  verify->add_flag("--quick", quick, "reduced seed counts, runs in under a minute");
  verify->add_option("--eps", verify_eps, "truncation threshold used by the checks");

  // decompose
  CommonOptions dec_opts;
  std::string dec_mode = "stable";
  int dec_k = 0;
  std::uint64_t dec_seed = 0;
  std::string dec_prefix;
  auto* dec = app.add_subcommand("decompose", "write one decomposition to factor files");
  dec->add_option("--gen", dec_opts.gen, "generator spec");
  dec->add_option("--in", dec_opts.input, "input matrix file");
  dec->add_option("--k", dec_k, "target rank")->required();
  dec->add_option("--p", dec_opts.p_list, "oversampling amount");
  dec->add_option("--os-mode", dec_opts.os_mode, "oversampling mode");
  dec->add_option("--side", dec_opts.side, "rows|cols");
  dec->add_option("--mode", dec_mode, "core mode");
  dec->add_option("--strategy", dec_opts.strategies, "selection strategy");
  dec->add_option("--eps", dec_opts.eps, "truncation threshold");
  dec->add_option("--seed", dec_seed, "seed");
  dec->add_option("--out", dec_prefix, "output path prefix")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sweep) {
      curkit::ExperimentSpec spec = build_spec(sweep_opts);
      spec.modes.clear();
      for (const auto& name : split_commas(sweep_modes))
        if (!name.empty()) spec.modes.push_back(curkit::core_mode_from_string(name));
      curkit::validate_spec(spec, spec.gen.m, spec.gen.n, false);
      const auto rows = curkit::run_sweep(spec);
      curkit::write_csv(rows, spec.output_path, false);
      std::cout << "wrote " << rows.size() << " rows to " << spec.output_path << "\n";
      return 0;
    }
    if (*oscmp) {
      curkit::ExperimentSpec spec = build_spec(os_opts);
      spec.modes = {curkit::core_mode_from_string(os_core_mode)};
      spec.os_modes.clear();
      for (const auto& name : split_commas(os_modes))
        if (!name.empty())
          spec.os_modes.push_back(curkit::oversample_mode_from_string(name));
      const auto rows = curkit::run_oversample_compare(spec);
      curkit::write_csv(rows, spec.output_path, true);
      std::cout << "wrote " << rows.size() << " rows to " << spec.output_path << "\n";
      return 0;
    }
    if (*verify) {
      const auto results = curkit::run_verification(quick, verify_eps);
      int failures = 0;
      for (const auto& check : results) {
        std::cout << (check.pass ? "PASS " : "FAIL ") << check.name << ": "
                  << check.detail << "\n";
        if (!check.pass) ++failures;
      }
      std::cout << (failures == 0 ? "all checks passed" : "checks failed") << "\n";
      return failures == 0 ? 0 : 1;
    }
    if (*dec) {
      dec_opts.k_list = std::to_string(dec_k);
      dec_opts.seeds = std::to_string(dec_seed);
      curkit::ExperimentSpec spec = build_spec(dec_opts);
      curkit::validate_spec(spec, spec.gen.m, spec.gen.n, false);
      const curkit::Matrix a = curkit::materialize(spec.gen, dec_seed);
      curkit::SelectionResult sel;
      switch (spec.strategies.at(0)) {
        case curkit::Strategy::rand_pivot:
          sel = curkit::rand_pivot(a, dec_k, dec_seed);
          break;
        case curkit::Strategy::uniform: {
          sel.col_indices = curkit::uniform_indices(static_cast<int>(a.cols()), dec_k, dec_seed);
          sel.row_indices = curkit::uniform_indices(static_cast<int>(a.rows()), dec_k, dec_seed + 1);
          sel.strategy_tag = "uniform";
          break;
        }
        case curkit::Strategy::independent:
          sel = curkit::independent_cpqr_pair(a, dec_k);
          break;
        case curkit::Strategy::dependent:
          sel = curkit::dependent_cpqr_pair(a, dec_k);
          break;
      }
      curkit::IndexSet i_star = sel.row_indices;
      curkit::IndexSet j_star = sel.col_indices;
      const int p = curkit::parse_p_list(dec_opts.p_list).at(0).resolve(dec_k);
      if (p > 0) {
        if (spec.side == curkit::OversampleSide::rows) {
          const auto extra = curkit::os_iterated(curkit::select_cols(a, j_star), i_star,
                                                 p, spec.os_mode);
          i_star = i_star.unioned(extra.extra);
        } else {
          const auto extra = curkit::os_iterated(
              curkit::Matrix(curkit::select_rows(a, i_star).transpose()), j_star, p,
              spec.os_mode);
          j_star = j_star.unioned(extra.extra);
        }
      }
      const auto mode = curkit::core_mode_from_string(dec_mode);
      const auto factors = curkit::decompose(a, i_star, j_star, mode, spec.eps);
      curkit::save_raw(factors.left, dec_prefix + ".left.bin");
      curkit::save_raw(factors.right, dec_prefix + ".right.bin");
      nlohmann::json meta;
      meta["mode"] = curkit::to_string(mode);
      meta["eps_used"] = factors.eps_used;
      meta["k_eps"] = factors.k_eps;
      meta["rank_zero"] = factors.rank_zero;
      meta["rows"] = a.rows();
      meta["cols"] = a.cols();
      meta["row_indices"] = factors.row_indices.indices();
      meta["col_indices"] = factors.col_indices.indices();
      meta["relative_error_frobenius"] =
          curkit::relative_error(a, factors, curkit::NormKind::frobenius);
      std::ofstream meta_out(dec_prefix + ".meta.json");
      meta_out << meta.dump(2) << "\n";
      std::cout << "wrote " << dec_prefix << ".{left.bin,right.bin,meta.json}\n";
      return 0;
    }
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
  return 0;
}
