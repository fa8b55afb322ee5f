#pragma once

#include <cstdint>
#include <string>

#include "curkit/types.hpp"

namespace curkit {

/// Product of m x r and r x n standard Gaussian factors: rank exactly r.
Matrix gen_lowrank_gaussian(int m, int n, int r, std::uint64_t seed);

/// Block matrix [scale*G11, G12; G21, 0] with independent Gaussian blocks and
/// a `small` x `small` leading block. The leading block is the intersection of
/// the dominant rows and columns, which makes index selection that ignores the
/// row/column coupling fail badly.
Matrix gen_block_adversarial(int m, int n, int small, double scale, std::uint64_t seed);

/// Sparse non-negative sum of weighted rank-one products sum_j w_j x_j y_j^T;
/// each vector entry is nonzero with probability `density` and uniform(0,1)
/// when present. Output is dense.
Matrix gen_snn(int m, int n, int r, double density, const Vector& weights,
               std::uint64_t seed);

/// Weight profile 2/j for j <= 50 and 1/j beyond (1-based), truncated to r.
Vector snn_default_weights(int r);

/// [[epsilon, 1], [1, 0]] for 0 < epsilon < 1.
Matrix gen_two_by_two(double epsilon);

/// U * diag(ratio^i) * V^T with seeded random orthonormal factors;
/// singular values decay geometrically from 1.
Matrix gen_geometric_spectrum(int m, int n, double ratio, std::uint64_t seed);

/// Matrix Market reader: `array real general` and `coordinate real
/// general/symmetric`. Coordinate duplicates are summed, symmetric storage is
/// expanded, 1-based indices become 0-based. Parse errors carry line numbers.
Matrix load_matrix_market(const std::string& path);

/// Writes `array real general` with shortest round-trip decimals, so a
/// write/read cycle is bit-exact.
void save_matrix_market(const Matrix& m, const std::string& path);

/// Raw binary format: little-endian u64 magic, rows, cols, then row-major
/// doubles.
Matrix load_raw(const std::string& path);
void save_raw(const Matrix& m, const std::string& path);

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double value);

}  // namespace curkit
