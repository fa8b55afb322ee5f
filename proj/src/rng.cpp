#include "curkit/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace curkit {

double SeededRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

int SeededRng::uniform_int(int bound) {
  if (bound <= 0) throw std::invalid_argument("uniform_int: bound must be positive");
  const std::uint64_t b = static_cast<std::uint64_t>(bound);
  const std::uint64_t threshold = (0 - b) % b;  // 2^64 mod b
  std::uint64_t draw;
  do {
    draw = next_u64();
  } while (draw < threshold);
  return static_cast<int>(draw % b);
}

Matrix gaussian_matrix(int rows, int cols, SeededRng& rng) {
  Matrix out(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) out(i, j) = rng.normal();
  return out;
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t tag) {
  // splitmix64 finalizer over the combined word
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (tag + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace curkit
