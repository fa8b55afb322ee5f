#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace curkit {

/// Dense row-major double matrix, the numeric container used throughout.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// Ordered, duplicate-free list of 0-based indices into a dimension of known
/// size (`universe`). Order is meaningful: pivot order, sampling order.
class IndexSet {
 public:
  IndexSet() = default;
  IndexSet(std::vector<int> indices, int universe);

  static IndexSet full(int universe);

  int size() const { return static_cast<int>(indices_.size()); }
  int universe() const { return universe_; }
  bool empty() const { return indices_.empty(); }
  int operator[](int i) const { return indices_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& indices() const { return indices_; }

  bool contains(int index) const;

  /// This set's entries followed by entries of `other` not already present.
  IndexSet unioned(const IndexSet& other) const;
  /// Ascending list of in-universe indices not in this set.
  IndexSet complement() const;
  /// First `count` entries as a new set.
  IndexSet prefix(int count) const;

  bool operator==(const IndexSet& other) const {
    return universe_ == other.universe_ && indices_ == other.indices_;
  }

 private:
  std::vector<int> indices_;
  int universe_ = 0;
};

Matrix select_rows(const Matrix& a, const IndexSet& rows);
Matrix select_cols(const Matrix& a, const IndexSet& cols);
Matrix select_block(const Matrix& a, const IndexSet& rows, const IndexSet& cols);

enum class NormKind { frobenius, spectral };

std::string to_string(NormKind norm);

}  // namespace curkit
