#include "curkit/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>

#include "curkit/bounds.hpp"
#include "curkit/kernels.hpp"
#include "curkit/rng.hpp"
#include "curkit/selection.hpp"
#include "curkit/testbed.hpp"

namespace curkit {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t pos = text.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(text.substr(start));
      break;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
  return parts;
}

long parse_long_or_throw(const std::string& tok, const std::string& what) {
  long value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw std::invalid_argument(what + ": cannot parse integer '" + tok + "'");
  return value;
}

double parse_double_or_throw(const std::string& tok, const std::string& what) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw std::invalid_argument(what + ": cannot parse number '" + tok + "'");
  return value;
}

void parse_dims(const std::string& tok, int* m, int* n) {
  const std::size_t x = tok.find('x');
  if (x == std::string::npos)
    throw std::invalid_argument("generator: dimensions must look like MxN, got '" + tok + "'");
  *m = static_cast<int>(parse_long_or_throw(tok.substr(0, x), "generator dims"));
  *n = static_cast<int>(parse_long_or_throw(tok.substr(x + 1), "generator dims"));
}

std::string sanitize_status(std::string text) {
  for (char& c : text)
    if (c == ',' || c == '\n') c = ';';
  return text;
}

struct SweepContext {
  const ExperimentSpec& spec;
  bool os_compare = false;
};

}  // namespace

GeneratorSpec parse_generator(const std::string& text) {
  auto parts = split(text, ':');
  if (parts.empty() || parts[0].empty())
    throw std::invalid_argument("generator: empty spec");
  GeneratorSpec spec;
  spec.label = text;
  const std::string& kind = parts[0];

  if (kind == "two_by_two") {
    if (parts.size() != 2)
      throw std::invalid_argument("generator: two_by_two takes exactly one parameter");
    spec.kind = GeneratorSpec::Kind::two_by_two;
    spec.epsilon = parse_double_or_throw(parts[1], "two_by_two epsilon");
    spec.m = spec.n = 2;
    return spec;
  }

  if (parts.size() < 2)
    throw std::invalid_argument("generator: missing dimensions in '" + text + "'");
  parse_dims(parts[1], &spec.m, &spec.n);

  if (kind == "lowrank") {
    spec.kind = GeneratorSpec::Kind::lowrank;
    if (parts.size() != 3 || parts[2].empty() || parts[2][0] != 'r')
      throw std::invalid_argument("generator: lowrank needs a rank parameter rR");
    spec.r = static_cast<int>(parse_long_or_throw(parts[2].substr(1), "lowrank rank"));
    return spec;
  }
  if (kind == "block") {
    spec.kind = GeneratorSpec::Kind::block;
    spec.small = 50;
    for (std::size_t i = 2; i < parts.size(); ++i) {
      if (parts[i].rfind("scale", 0) == 0)
        spec.scale = parse_double_or_throw(parts[i].substr(5), "block scale");
      else if (!parts[i].empty() && parts[i][0] == 's')
        spec.small = static_cast<int>(parse_long_or_throw(parts[i].substr(1), "block small"));
      else
        throw std::invalid_argument("generator: unknown block parameter '" + parts[i] + "'");
    }
    return spec;
  }
  if (kind == "snn") {
    spec.kind = GeneratorSpec::Kind::snn;
    spec.r = std::min(300, std::min(spec.m, spec.n));
    for (std::size_t i = 2; i < parts.size(); ++i) {
      if (!parts[i].empty() && parts[i][0] == 'r')
        spec.r = static_cast<int>(parse_long_or_throw(parts[i].substr(1), "snn rank"));
      else if (!parts[i].empty() && parts[i][0] == 'd')
        spec.density = parse_double_or_throw(parts[i].substr(1), "snn density");
      else
        throw std::invalid_argument("generator: unknown snn parameter '" + parts[i] + "'");
    }
    return spec;
  }
  if (kind == "geometric") {
    spec.kind = GeneratorSpec::Kind::geometric;
    if (parts.size() != 3)
      throw std::invalid_argument("generator: geometric needs a decay ratio");
    spec.ratio = parse_double_or_throw(parts[2], "geometric ratio");
    return spec;
  }
  throw std::invalid_argument("generator: unknown kind '" + kind + "'");
}

GeneratorSpec file_generator(const std::string& path) {
  GeneratorSpec spec;
  spec.kind = GeneratorSpec::Kind::file;
  spec.path = path;
  spec.label = path;
  const Matrix probe = materialize(spec, 0);
  spec.m = static_cast<int>(probe.rows());
  spec.n = static_cast<int>(probe.cols());
  return spec;
}

Matrix materialize(const GeneratorSpec& spec, std::uint64_t seed) {
  switch (spec.kind) {
    case GeneratorSpec::Kind::lowrank:
      return gen_lowrank_gaussian(spec.m, spec.n, spec.r, seed);
    case GeneratorSpec::Kind::block:
      return gen_block_adversarial(spec.m, spec.n, spec.small, spec.scale, seed);
    case GeneratorSpec::Kind::snn:
      return gen_snn(spec.m, spec.n, spec.r, spec.density, snn_default_weights(spec.r), seed);
    case GeneratorSpec::Kind::two_by_two:
      return gen_two_by_two(spec.epsilon);
    case GeneratorSpec::Kind::geometric:
      return gen_geometric_spectrum(spec.m, spec.n, spec.ratio, seed);
    case GeneratorSpec::Kind::file: {
      if (spec.path.size() >= 4 && spec.path.substr(spec.path.size() - 4) == ".bin")
        return load_raw(spec.path);
      return load_matrix_market(spec.path);
    }
  }
  throw std::logic_error("materialize: unknown generator kind");
}

std::string to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::rand_pivot: return "rand_pivot";
    case Strategy::uniform: return "uniform";
    case Strategy::independent: return "independent";
    case Strategy::dependent: return "dependent";
  }
  return "?";
}

Strategy strategy_from_string(const std::string& name) {
  if (name == "rand_pivot" || name == "sketch") return Strategy::rand_pivot;
  if (name == "uniform") return Strategy::uniform;
  if (name == "independent") return Strategy::independent;
  if (name == "dependent") return Strategy::dependent;
  throw std::invalid_argument("unknown selection strategy: " + name);
}

int PAmount::resolve(int k) const {
  if (!fractional) return count;
  return static_cast<int>(std::lround(fraction * k));
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> values;
  for (const std::string& tok : split(text, ',')) {
    if (tok.empty()) continue;
    const std::size_t dots = tok.find("..");
    if (dots == std::string::npos) {
      values.push_back(static_cast<int>(parse_long_or_throw(tok, "list")));
      continue;
    }
    const long lo = parse_long_or_throw(tok.substr(0, dots), "range start");
    std::string rest = tok.substr(dots + 2);
    long step = 1;
    const std::size_t colon = rest.find(':');
    if (colon != std::string::npos) {
      step = parse_long_or_throw(rest.substr(colon + 1), "range step");
      rest = rest.substr(0, colon);
    }
    const long hi = parse_long_or_throw(rest, "range end");
    if (step < 1) throw std::invalid_argument("range step must be positive");
    if (hi < lo) throw std::invalid_argument("range end below start");
    for (long v = lo; v <= hi; v += step) values.push_back(static_cast<int>(v));
  }
  return values;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  for (int v : parse_int_list(text)) {
    if (v < 0) throw std::invalid_argument("seeds must be nonnegative");
    seeds.push_back(static_cast<std::uint64_t>(v));
  }
  return seeds;
}

std::vector<PAmount> parse_p_list(const std::string& text) {
  std::vector<PAmount> amounts;
  for (const std::string& tok : split(text, ',')) {
    if (tok.empty()) continue;
    PAmount amount;
    if (tok.back() == 'k') {
      amount.fractional = true;
      amount.fraction = parse_double_or_throw(tok.substr(0, tok.size() - 1), "p fraction");
      if (amount.fraction < 0.0)
        throw std::invalid_argument("p fraction must be nonnegative");
    } else {
      amount.count = static_cast<int>(parse_long_or_throw(tok, "p value"));
      if (amount.count < 0) throw std::invalid_argument("p must be nonnegative");
    }
    amounts.push_back(amount);
  }
  if (amounts.empty()) amounts.push_back(PAmount{});
  return amounts;
}

void validate_spec(const ExperimentSpec& spec, int rows, int cols, bool os_compare) {
  for (int k : spec.rank_sweep) {
    if (k < 1 || k > std::min(rows, cols))
      throw std::invalid_argument("spec: rank " + std::to_string(k) +
                                  " outside [1, min(m, n)] for a " + std::to_string(rows) +
                                  "x" + std::to_string(cols) + " matrix");
  }
  if (spec.side == OversampleSide::both && !spec.danger_both_sides)
    throw std::invalid_argument(
        "spec: oversampling both sides degrades the approximation; pass "
        "--danger-both-sides to run it anyway");
  if (!(spec.eps >= 0.0)) throw std::invalid_argument("spec: eps must be >= 0");
  if (spec.eps_rel && !(*spec.eps_rel >= 0.0))
    throw std::invalid_argument("spec: eps-rel must be >= 0");
  if (spec.seeds.empty()) throw std::invalid_argument("spec: need at least one seed");
  if (os_compare && spec.os_modes.size() < 2)
    throw std::invalid_argument("spec: os-compare needs at least two oversampling modes");
  if (!os_compare && spec.modes.empty())
    throw std::invalid_argument("spec: need at least one core mode");
}

int worker_count() {
  if (const char* env = std::getenv("CURKIT_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) return cap;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace {

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const int workers = std::min<std::size_t>(count, static_cast<std::size_t>(worker_count()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> cursor{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = cursor.fetch_add(1);
        if (i >= count) return;
        fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

SelectionResult select(const Matrix& a, Strategy strategy, int k, std::uint64_t seed) {
  switch (strategy) {
    case Strategy::rand_pivot:
      return rand_pivot(a, k, substream_seed(seed, 0x5e1ec7));
    case Strategy::uniform: {
      IndexSet j = uniform_indices(static_cast<int>(a.cols()), k, substream_seed(seed, 0xc015));
      IndexSet i = uniform_indices(static_cast<int>(a.rows()), k, substream_seed(seed, 0x0125));
      return {std::move(i), std::move(j), std::nullopt, "uniform", false};
    }
    case Strategy::independent:
      return independent_cpqr_pair(a, k);
    case Strategy::dependent:
      return dependent_cpqr_pair(a, k);
  }
  throw std::logic_error("select: unknown strategy");
}

// Row-space approximator for the bound: the sketch when the strategy formed
// one, the selected rows otherwise.
Matrix bound_approximator(const Matrix& a, const SelectionResult& sel) {
  if (sel.row_space_approx) return *sel.row_space_approx;
  return select_rows(a, sel.row_indices);
}

struct OversampledSets {
  IndexSet i_star;
  IndexSet j_star;
  double sigma_min_block = std::numeric_limits<double>::quiet_NaN();
};

OversampledSets apply_oversampling(const Matrix& a, const SelectionResult& sel,
                                   OversampleSide side, OversampleMode mode, int p,
                                   bool want_block_sigma) {
  OversampledSets out{sel.row_indices, sel.col_indices, std::numeric_limits<double>::quiet_NaN()};
  if (p <= 0) {
    if (want_block_sigma) {
      const Matrix q_c = thin_qr(select_cols(a, sel.col_indices)).q;
      out.sigma_min_block = min_singular_value(select_rows(q_c, sel.row_indices));
    }
    return out;
  }
  if (side == OversampleSide::rows || side == OversampleSide::both) {
    const Matrix basis = select_cols(a, sel.col_indices);
    const int avail = static_cast<int>(a.rows()) - out.i_star.size();
    OversampleResult extra = os_iterated(basis, out.i_star, std::min(p, avail), mode);
    out.i_star = out.i_star.unioned(extra.extra);
    if (want_block_sigma) {
      const Matrix q_c = thin_qr(basis).q;
      out.sigma_min_block = min_singular_value(select_rows(q_c, out.i_star));
    }
  }
  if (side == OversampleSide::cols || side == OversampleSide::both) {
    const Matrix basis = select_rows(a, sel.row_indices).transpose();
    const int avail = static_cast<int>(a.cols()) - out.j_star.size();
    OversampleResult extra = os_iterated(basis, out.j_star, std::min(p, avail), mode);
    out.j_star = out.j_star.unioned(extra.extra);
  }
  return out;
}

double resolve_eps(const ExperimentSpec& spec, const Matrix& core) {
  if (spec.eps_rel) {
    const ThinSVD svd = thin_svd(core);
    return *spec.eps_rel * svd.sigma(0);
  }
  return spec.eps;
}

ResultRow evaluate_mode(const ExperimentSpec& spec, const Matrix& a,
                        const Vector& spectrum, const SelectionResult& sel,
                        const OversampledSets& sets, CoreMode mode, int k, int p,
                        std::uint64_t seed) {
  ResultRow row;
  row.seed = seed;
  row.k = k;
  row.p = p;
  row.mode = to_string(mode);
  row.strategy = sel.strategy_tag;
  row.sigma_min_block = sets.sigma_min_block;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const Matrix core = select_block(a, sets.i_star, sets.j_star);
    const double eps = mode_uses_eps(mode) ? resolve_eps(spec, core) : 0.0;
    row.sigma_min_core = min_singular_value(core);
    const CurFactors factors = decompose(a, sets.i_star, sets.j_star, mode, eps);
    row.relative_error = relative_error(a, factors, spec.norm);
    row.tsvd_error = tsvd_error(spectrum, k, spec.norm);

    const double a_norm =
        spec.norm == NormKind::frobenius ? std::sqrt(spectrum.squaredNorm()) : spectrum(0);
    if (spec.side == OversampleSide::both) {
      // No single-sided certificate applies when both index sets grow.
      row.bound_value = std::numeric_limits<double>::quiet_NaN();
      row.kappa = std::numeric_limits<double>::quiet_NaN();
    } else if (mode == CoreMode::curba_stable) {
      const Matrix x = bound_approximator(a, sel);
      const Matrix y = select_cols(a, sel.col_indices);
      const BoundReport report =
          curba_bound(a, sets.i_star, sets.j_star, x, y, spec.norm);
      row.bound_value = report.bound_value / a_norm;
      row.kappa = report.kappa;
    } else if (spec.side == OversampleSide::rows) {
      const Matrix x = bound_approximator(a, sel);
      const BoundReport report = curca_bound(a, sets.i_star, sets.j_star, x, eps, spec.norm);
      row.bound_value = report.bound_value / a_norm;
      row.kappa = report.kappa;
    } else {
      // Column oversampling: the same certificate on the transposed problem.
      const Matrix y_t = select_cols(a, sel.col_indices).transpose();
      const BoundReport report = curca_bound(Matrix(a.transpose()), sets.j_star,
                                             sets.i_star, y_t, eps, spec.norm);
      row.bound_value = report.bound_value / a_norm;
      row.kappa = report.kappa;
    }
  } catch (const std::exception& err) {
    row.status = sanitize_status(std::string("error: ") + err.what());
    row.relative_error = std::numeric_limits<double>::quiet_NaN();
    row.bound_value = std::numeric_limits<double>::quiet_NaN();
    row.kappa = std::numeric_limits<double>::quiet_NaN();
    row.sigma_min_core = std::numeric_limits<double>::quiet_NaN();
  }
  const auto t1 = std::chrono::steady_clock::now();
  row.wall_time_ms =
      spec.timing ? std::chrono::duration<double, std::milli>(t1 - t0).count() : 0.0;
  return row;
}

std::vector<ResultRow> run_grid(const ExperimentSpec& spec, bool os_compare) {
  const std::vector<OversampleMode> os_modes =
      os_compare ? spec.os_modes : std::vector<OversampleMode>{spec.os_mode};
  std::vector<std::vector<ResultRow>> per_seed(spec.seeds.size());

  parallel_for(spec.seeds.size(), [&](std::size_t seed_idx) {
    const std::uint64_t seed = spec.seeds[seed_idx];
    const Matrix a = materialize(spec.gen, seed);
    const Vector spectrum = thin_svd(a).sigma;
    std::vector<ResultRow>& rows = per_seed[seed_idx];

    for (int k : spec.rank_sweep) {
      for (Strategy strategy : spec.strategies) {
        const SelectionResult sel = select(a, strategy, k, seed);
        for (const PAmount& amount : spec.p_values) {
          const int p = amount.resolve(k);
          for (OversampleMode os_mode : os_modes) {
            OversampledSets sets;
            try {
              sets = apply_oversampling(a, sel, spec.side, os_mode, p, os_compare);
            } catch (const std::exception& err) {
              ResultRow row;
              row.seed = seed;
              row.k = k;
              row.p = p;
              row.strategy = sel.strategy_tag;
              row.mode = os_compare ? to_string(os_mode) : "";
              row.status = sanitize_status(std::string("error: ") + err.what());
              rows.push_back(std::move(row));
              continue;
            }
            for (CoreMode mode : spec.modes) {
              ResultRow row = evaluate_mode(spec, a, spectrum, sel, sets, mode, k, p, seed);
              if (os_compare) row.mode = to_string(os_mode) + "+" + row.mode;
              rows.push_back(std::move(row));
            }
          }
        }
      }
    }
  });

  std::vector<ResultRow> all;
  for (auto& chunk : per_seed)
    for (auto& row : chunk) all.push_back(std::move(row));
  return all;
}

}  // namespace

std::vector<ResultRow> run_sweep(const ExperimentSpec& spec) {
  validate_spec(spec, spec.gen.m, spec.gen.n, false);
  return run_grid(spec, false);
}

std::vector<ResultRow> run_oversample_compare(const ExperimentSpec& spec) {
  ExperimentSpec with_baseline = spec;
  // The p = 0 baseline is always part of the comparison.
  const bool has_zero = std::any_of(
      spec.p_values.begin(), spec.p_values.end(), [](const PAmount& amount) {
        return !amount.fractional && amount.count == 0;
      });
  if (!has_zero)
    with_baseline.p_values.insert(with_baseline.p_values.begin(), PAmount{});
  validate_spec(with_baseline, with_baseline.gen.m, with_baseline.gen.n, true);
  return run_grid(with_baseline, true);
}

void write_csv(const std::vector<ResultRow>& rows, const std::string& path,
               bool with_block_column) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << "seed,k,p,mode,strategy,relative_error,tsvd_error,bound_value,kappa,"
         "sigma_min_core,wall_time_ms,status";
  if (with_block_column) out << ",sigma_min_block";
  out << "\n";
  for (const ResultRow& row : rows) {
    out << row.seed << "," << row.k << "," << row.p << "," << row.mode << ","
        << row.strategy << "," << format_double(row.relative_error) << ","
        << format_double(row.tsvd_error) << "," << format_double(row.bound_value)
        << "," << format_double(row.kappa) << "," << format_double(row.sigma_min_core)
        << "," << format_double(row.wall_time_ms) << "," << row.status;
    if (with_block_column)
      out << ","
          << format_double(row.sigma_min_block.value_or(
                 std::numeric_limits<double>::quiet_NaN()));
    out << "\n";
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace curkit
