#pragma once

#include <cstdint>
#include <random>

#include "curkit/types.hpp"

namespace curkit {

/// Deterministic random stream with a fixed cross-platform algorithm.
///
/// The raw generator is std::mt19937_64 (the algorithm is pinned by the
/// standard, unlike the distributions). Uniform doubles take the top 53 bits
/// of one output word; normal variates come from the Box-Muller transform on
/// pairs of uniforms; bounded integers use rejection sampling. Identical
/// seeds therefore produce identical streams on every platform.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform double in the open interval (0, 1).
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal variate (Box-Muller, pairs cached).
  double normal();

  /// Uniform integer in [0, bound).
  int uniform_int(int bound);

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// rows x cols matrix of i.i.d. standard normal entries, filled row by row.
Matrix gaussian_matrix(int rows, int cols, SeededRng& rng);

/// Derive an independent stream seed from a base seed and a stream tag.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t tag);

}  // namespace curkit
