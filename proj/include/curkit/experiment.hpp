#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "curkit/cur.hpp"
#include "curkit/oversample.hpp"
#include "curkit/types.hpp"

namespace curkit {

struct GeneratorSpec {
  enum class Kind { lowrank, block, snn, two_by_two, geometric, file };
  Kind kind = Kind::lowrank;
  int m = 0, n = 0, r = 0;
  int small = 50;
  double scale = 1e-10;
  double density = 0.025;
  double ratio = 0.5;
  double epsilon = 1e-8;
  std::string path;
  std::string label;
};

/// Parses "lowrank:300x300:r20", "block:200x200:s20[:scale1e-10]",
/// "snn:5000x300[:r300][:d0.025]", "geometric:60x60:0.3", "two_by_two:1e-8".
GeneratorSpec parse_generator(const std::string& text);
GeneratorSpec file_generator(const std::string& path);
Matrix materialize(const GeneratorSpec& spec, std::uint64_t seed);

enum class Strategy { rand_pivot, uniform, independent, dependent };
std::string to_string(Strategy strategy);
Strategy strategy_from_string(const std::string& name);

/// Oversampling amount: either an absolute count or a fraction of k
/// ("0.5k"), resolved per sweep point.
struct PAmount {
  bool fractional = false;
  double fraction = 0.0;
  int count = 0;
  int resolve(int k) const;
};

/// "1..40", "10..100:10", "0,5,10", or any comma mix of those.
std::vector<int> parse_int_list(const std::string& text);
std::vector<std::uint64_t> parse_seed_list(const std::string& text);
/// "0,10,0.5k"
std::vector<PAmount> parse_p_list(const std::string& text);

enum class OversampleSide { rows, cols, both };

struct ExperimentSpec {
  GeneratorSpec gen;
  std::vector<int> rank_sweep;
  std::vector<PAmount> p_values = {PAmount{}};
  OversampleMode os_mode = OversampleMode::projection;
  std::vector<OversampleMode> os_modes;  // os-compare only
  OversampleSide side = OversampleSide::rows;
  bool danger_both_sides = false;
  std::vector<CoreMode> modes = {CoreMode::curca_stable};
  std::vector<Strategy> strategies = {Strategy::rand_pivot};
  double eps = 1e-15;
  std::optional<double> eps_rel;  // eps = eps_rel * sigma_max(core) per instance
  std::vector<std::uint64_t> seeds = {0};
  NormKind norm = NormKind::frobenius;
  std::string output_path;
  bool timing = true;
};

struct ResultRow {
  std::uint64_t seed = 0;
  int k = 0;
  int p = 0;
  std::string mode;
  std::string strategy;
  double relative_error = 0.0;
  double tsvd_error = 0.0;
  double bound_value = 0.0;
  double kappa = 0.0;
  double sigma_min_core = 0.0;
  double wall_time_ms = 0.0;
  std::string status = "ok";
  std::optional<double> sigma_min_block;  // oversampled basis block (os-compare)
};

/// Validates the spec before any computation; throws std::invalid_argument on
/// bad fields. Per-row numerical failures land in the row's status column.
void validate_spec(const ExperimentSpec& spec, int rows, int cols, bool os_compare);

std::vector<ResultRow> run_sweep(const ExperimentSpec& spec);
std::vector<ResultRow> run_oversample_compare(const ExperimentSpec& spec);

void write_csv(const std::vector<ResultRow>& rows, const std::string& path,
               bool with_block_column);

/// Worker cap: CURKIT_THREADS when set, otherwise the hardware thread count.
int worker_count();

}  // namespace curkit
