#include "curkit/testbed.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "curkit/kernels.hpp"
#include "curkit/rng.hpp"

namespace curkit {

namespace {

void check_dims(int m, int n, const char* who) {
  if (m < 1 || n < 1)
    throw std::invalid_argument(std::string(who) + ": dimensions must be positive");
}

[[noreturn]] void parse_fail(const std::string& path, int line, const std::string& msg) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + msg);
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream stream(line);
  std::string tok;
  while (stream >> tok) tokens.push_back(tok);
  return tokens;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

double parse_double(const std::string& tok, const std::string& path, int line) {
  double value = 0.0;
  const char* begin = tok.data();
  const char* end = begin + tok.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end)
    parse_fail(path, line, "cannot parse real value '" + tok + "'");
  return value;
}

long parse_long(const std::string& tok, const std::string& path, int line) {
  long value = 0;
  const char* begin = tok.data();
  const char* end = begin + tok.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end)
    parse_fail(path, line, "cannot parse integer '" + tok + "'");
  return value;
}

}  // namespace

Matrix gen_lowrank_gaussian(int m, int n, int r, std::uint64_t seed) {
  check_dims(m, n, "gen_lowrank_gaussian");
  if (r < 1 || r > std::min(m, n))
    throw std::invalid_argument("gen_lowrank_gaussian: rank outside [1, min(m, n)]");
  SeededRng rng(seed);
  const Matrix left = gaussian_matrix(m, r, rng);
  const Matrix right = gaussian_matrix(r, n, rng);
  return left * right;
}

Matrix gen_block_adversarial(int m, int n, int small, double scale, std::uint64_t seed) {
  check_dims(m, n, "gen_block_adversarial");
  if (small < 1 || small >= std::min(m, n))
    throw std::invalid_argument("gen_block_adversarial: small block outside [1, min(m, n))");
  SeededRng rng(seed);
  Matrix a = Matrix::Zero(m, n);
  a.topLeftCorner(small, small) = scale * gaussian_matrix(small, small, rng);
  a.topRightCorner(small, n - small) = gaussian_matrix(small, n - small, rng);
  a.bottomLeftCorner(m - small, small) = gaussian_matrix(m - small, small, rng);
  return a;
}

Matrix gen_snn(int m, int n, int r, double density, const Vector& weights,
               std::uint64_t seed) {
  check_dims(m, n, "gen_snn");
  if (r < 1) throw std::invalid_argument("gen_snn: rank must be positive");
  if (!(density > 0.0 && density <= 1.0))
    throw std::invalid_argument("gen_snn: density outside (0, 1]");
  if (weights.size() != r)
    throw std::invalid_argument("gen_snn: weight count must equal rank");
  for (int j = 0; j < r; ++j) {
    if (!(weights(j) > 0.0))
      throw std::invalid_argument("gen_snn: weights must be positive");
    if (j > 0 && weights(j) > weights(j - 1))
      throw std::invalid_argument("gen_snn: weights must be non-increasing");
  }
  SeededRng rng(seed);
  Matrix x = Matrix::Zero(m, r);
  Matrix y = Matrix::Zero(n, r);
  for (int j = 0; j < r; ++j) {
    for (int i = 0; i < m; ++i)
      if (rng.uniform() < density) x(i, j) = rng.uniform();
    for (int i = 0; i < n; ++i)
      if (rng.uniform() < density) y(i, j) = rng.uniform();
  }
  return (x * weights.asDiagonal()) * y.transpose();
}

Vector snn_default_weights(int r) {
  if (r < 1) throw std::invalid_argument("snn_default_weights: rank must be positive");
  Vector w(r);
  for (int j = 1; j <= r; ++j)
    w(j - 1) = (j <= 50 ? 2.0 : 1.0) / static_cast<double>(j);
  return w;
}

Matrix gen_two_by_two(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("gen_two_by_two: epsilon outside (0, 1)");
  Matrix a(2, 2);
  a << epsilon, 1.0, 1.0, 0.0;
  return a;
}

Matrix gen_geometric_spectrum(int m, int n, double ratio, std::uint64_t seed) {
  check_dims(m, n, "gen_geometric_spectrum");
  if (!(ratio > 0.0 && ratio < 1.0))
    throw std::invalid_argument("gen_geometric_spectrum: ratio outside (0, 1)");
  const int r = std::min(m, n);
  SeededRng rng(seed);
  const Matrix u = thin_qr(gaussian_matrix(m, r, rng)).q;
  const Matrix v = thin_qr(gaussian_matrix(n, r, rng)).q;
  Vector sigma(r);
  double value = 1.0;
  for (int i = 0; i < r; ++i) {
    sigma(i) = value;
    value *= ratio;
  }
  return u * sigma.asDiagonal() * v.transpose();
}

Matrix load_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open file");
  std::string line;
  int line_no = 0;

  if (!std::getline(in, line)) parse_fail(path, 1, "empty file");
  ++line_no;
  auto header = split_ws(line);
  if (header.size() < 5 || lower(header[0]) != "%%matrixmarket" ||
      lower(header[1]) != "matrix")
    parse_fail(path, line_no,
               "malformed header; expected '%%MatrixMarket matrix <format> <field> <symmetry>'");
  const std::string format = lower(header[2]);
  const std::string field = lower(header[3]);
  const std::string symmetry = lower(header[4]);
  if (format != "coordinate" && format != "array")
    parse_fail(path, line_no, "unsupported format '" + format + "'");
  if (field != "real")
    parse_fail(path, line_no, "unsupported field type '" + field + "' (only real)");
  if (symmetry != "general" && symmetry != "symmetric")
    parse_fail(path, line_no, "unsupported symmetry '" + symmetry + "'");
  if (format == "array" && symmetry == "symmetric")
    parse_fail(path, line_no, "symmetric array storage not supported");

  // Skip comments to the size line.
  do {
    if (!std::getline(in, line)) parse_fail(path, line_no, "missing size line");
    ++line_no;
  } while (!line.empty() && line[0] == '%');
  auto size_tokens = split_ws(line);

  if (format == "coordinate") {
    if (size_tokens.size() != 3)
      parse_fail(path, line_no, "coordinate size line must be 'rows cols nnz'");
    const long rows = parse_long(size_tokens[0], path, line_no);
    const long cols = parse_long(size_tokens[1], path, line_no);
    const long nnz = parse_long(size_tokens[2], path, line_no);
    if (rows < 1 || cols < 1) parse_fail(path, line_no, "dimensions must be positive");
    Matrix a = Matrix::Zero(rows, cols);
    long seen = 0;
    while (seen < nnz) {
      if (!std::getline(in, line))
        parse_fail(path, line_no, "unexpected end of file; expected " +
                                      std::to_string(nnz) + " entries, got " +
                                      std::to_string(seen));
      ++line_no;
      if (line.empty() || line[0] == '%') continue;
      auto tokens = split_ws(line);
      if (tokens.size() != 3)
        parse_fail(path, line_no, "coordinate entry must be 'row col value'");
      const long i = parse_long(tokens[0], path, line_no);
      const long j = parse_long(tokens[1], path, line_no);
      const double v = parse_double(tokens[2], path, line_no);
      if (i < 1 || i > rows || j < 1 || j > cols)
        parse_fail(path, line_no, "entry index (" + std::to_string(i) + ", " +
                                      std::to_string(j) + ") out of bounds");
      a(i - 1, j - 1) += v;
      if (symmetry == "symmetric" && i != j) a(j - 1, i - 1) += v;
      ++seen;
    }
    return a;
  }

  if (size_tokens.size() != 2)
    parse_fail(path, line_no, "array size line must be 'rows cols'");
  const long rows = parse_long(size_tokens[0], path, line_no);
  const long cols = parse_long(size_tokens[1], path, line_no);
  if (rows < 1 || cols < 1) parse_fail(path, line_no, "dimensions must be positive");
  Matrix a(rows, cols);
  // Array storage is column-major, one value per line.
  for (long j = 0; j < cols; ++j) {
    for (long i = 0; i < rows; ++i) {
      do {
        if (!std::getline(in, line))
          parse_fail(path, line_no, "unexpected end of file in array data");
        ++line_no;
      } while (line.empty() || line[0] == '%');
      auto tokens = split_ws(line);
      if (tokens.size() != 1)
        parse_fail(path, line_no, "array data must hold one value per line");
      a(i, j) = parse_double(tokens[0], path, line_no);
    }
  }
  return a;
}

void save_matrix_market(const Matrix& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open file for writing");
  out << "%%MatrixMarket matrix array real general\n";
  out << m.rows() << " " << m.cols() << "\n";
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      out << format_double(m(i, j)) << "\n";
  if (!out) throw std::runtime_error(path + ": write failed");
}

namespace {
constexpr std::uint64_t kBinaryMagic = 0x4355524B49543031ull;  // "CURKIT01"
}

Matrix load_raw(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open file");
  std::uint64_t header[3] = {0, 0, 0};
  in.read(reinterpret_cast<char*>(header), sizeof(header));
  if (!in) throw std::runtime_error(path + ": truncated header");
  if (header[0] != kBinaryMagic)
    throw std::runtime_error(path + ": bad magic; not a raw matrix file");
  const auto rows = static_cast<Eigen::Index>(header[1]);
  const auto cols = static_cast<Eigen::Index>(header[2]);
  if (rows < 1 || cols < 1 || rows > (1 << 24) || cols > (1 << 24))
    throw std::runtime_error(path + ": implausible dimensions in header");
  Matrix m(rows, cols);
  in.read(reinterpret_cast<char*>(m.data()),
          static_cast<std::streamsize>(sizeof(double) * static_cast<std::size_t>(rows * cols)));
  if (!in) throw std::runtime_error(path + ": truncated data section");
  return m;
}

void save_raw(const Matrix& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open file for writing");
  const std::uint64_t header[3] = {kBinaryMagic,
                                   static_cast<std::uint64_t>(m.rows()),
                                   static_cast<std::uint64_t>(m.cols())};
  out.write(reinterpret_cast<const char*>(header), sizeof(header));
  out.write(reinterpret_cast<const char*>(m.data()),
            static_cast<std::streamsize>(sizeof(double) * static_cast<std::size_t>(m.size())));
  if (!out) throw std::runtime_error(path + ": write failed");
}

std::string format_double(double value) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) return "nan";
  return std::string(buffer, ptr);
}

}  // namespace curkit
