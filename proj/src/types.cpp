#include "curkit/types.hpp"

#include <algorithm>
#include <stdexcept>

namespace curkit {

IndexSet::IndexSet(std::vector<int> indices, int universe)
    : indices_(std::move(indices)), universe_(universe) {
  if (universe < 0) throw std::invalid_argument("IndexSet: negative universe");
  std::vector<bool> seen(static_cast<std::size_t>(universe), false);
  for (int idx : indices_) {
    if (idx < 0 || idx >= universe)
      throw std::invalid_argument("IndexSet: index " + std::to_string(idx) +
                                  " out of range [0, " + std::to_string(universe) + ")");
    if (seen[static_cast<std::size_t>(idx)])
      throw std::invalid_argument("IndexSet: duplicate index " + std::to_string(idx));
    seen[static_cast<std::size_t>(idx)] = true;
  }
}

IndexSet IndexSet::full(int universe) {
  std::vector<int> all(static_cast<std::size_t>(universe));
  for (int i = 0; i < universe; ++i) all[static_cast<std::size_t>(i)] = i;
  return IndexSet(std::move(all), universe);
}

bool IndexSet::contains(int index) const {
  return std::find(indices_.begin(), indices_.end(), index) != indices_.end();
}

IndexSet IndexSet::unioned(const IndexSet& other) const {
  if (universe_ != other.universe_)
    throw std::invalid_argument("IndexSet::unioned: universe mismatch");
  std::vector<int> merged = indices_;
  for (int idx : other.indices_)
    if (!contains(idx)) merged.push_back(idx);
  return IndexSet(std::move(merged), universe_);
}

IndexSet IndexSet::complement() const {
  std::vector<bool> present(static_cast<std::size_t>(universe_), false);
  for (int idx : indices_) present[static_cast<std::size_t>(idx)] = true;
  std::vector<int> rest;
  rest.reserve(static_cast<std::size_t>(universe_) - indices_.size());
  for (int i = 0; i < universe_; ++i)
    if (!present[static_cast<std::size_t>(i)]) rest.push_back(i);
  return IndexSet(std::move(rest), universe_);
}

IndexSet IndexSet::prefix(int count) const {
  if (count < 0 || count > size())
    throw std::invalid_argument("IndexSet::prefix: bad count");
  return IndexSet(std::vector<int>(indices_.begin(), indices_.begin() + count), universe_);
}

Matrix select_rows(const Matrix& a, const IndexSet& rows) {
  if (rows.universe() != static_cast<int>(a.rows()))
    throw std::invalid_argument("select_rows: universe does not match row count");
  Matrix out(rows.size(), a.cols());
  for (int i = 0; i < rows.size(); ++i) out.row(i) = a.row(rows[i]);
  return out;
}

Matrix select_cols(const Matrix& a, const IndexSet& cols) {
  if (cols.universe() != static_cast<int>(a.cols()))
    throw std::invalid_argument("select_cols: universe does not match column count");
  Matrix out(a.rows(), cols.size());
  for (int j = 0; j < cols.size(); ++j) out.col(j) = a.col(cols[j]);
  return out;
}

Matrix select_block(const Matrix& a, const IndexSet& rows, const IndexSet& cols) {
  return select_cols(select_rows(a, rows), cols);
}

std::string to_string(NormKind norm) {
  return norm == NormKind::frobenius ? "frobenius" : "spectral";
}

}  // namespace curkit
