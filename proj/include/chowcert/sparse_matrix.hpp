#pragma once

// Sparse matrices and vectors over the exact rationals. Entries are stored
// in ordered maps so that every iteration order, and therefore every result
// assembled from one, is deterministic.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "chowcert/rational.hpp"

namespace chowcert {

using SparseVecR = std::map<int, Rat>;

inline void vec_add_scaled(SparseVecR& target, const Rat& scale, const SparseVecR& src) {
  if (scale == 0) return;
  for (const auto& [i, v] : src) {
    Rat& slot = target[i];
    slot += scale * v;
    if (slot == 0) target.erase(i);
  }
}

inline bool vec_is_zero(const SparseVecR& v) { return v.empty(); }

class SparseRatMatrix {
 public:
  SparseRatMatrix() : rows_(0), cols_(0) {}
  SparseRatMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0) throw precondition_error("negative matrix dimension");
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t nnz() const { return entries_.size(); }

  void set(int r, int c, const Rat& v) {
    check_index(r, c);
    if (v == 0)
      entries_.erase({r, c});
    else
      entries_[{r, c}] = v;
  }

  void add(int r, int c, const Rat& v) {
    check_index(r, c);
    if (v == 0) return;
    auto key = std::make_pair(r, c);
    auto it = entries_.find(key);
    if (it == entries_.end()) {
      entries_.emplace(key, v);
    } else {
      it->second += v;
      if (it->second == 0) entries_.erase(it);
    }
  }

  Rat get(int r, int c) const {
    check_index(r, c);
    auto it = entries_.find({r, c});
    return it == entries_.end() ? Rat(0) : it->second;
  }

  const std::map<std::pair<int, int>, Rat>& entries() const { return entries_; }

  // Rows of the product are accumulated exactly; zero results are dropped.
  SparseVecR apply(const SparseVecR& v) const {
    SparseVecR out;
    std::vector<SparseVecR> columns = column_view();
    for (const auto& [c, coeff] : v) {
      if (c < 0 || c >= cols_) throw precondition_error("vector index out of range");
      vec_add_scaled(out, coeff, columns[c]);
    }
    return out;
  }

  SparseRatMatrix multiply(const SparseRatMatrix& rhs) const {
    if (cols_ != rhs.rows_) throw precondition_error("matrix product shape mismatch");
    SparseRatMatrix out(rows_, rhs.cols_);
    std::vector<SparseVecR> lhs_cols = column_view();
    std::vector<SparseVecR> rhs_cols = rhs.column_view();
    for (int c = 0; c < rhs.cols_; ++c) {
      SparseVecR col;
      for (const auto& [k, coeff] : rhs_cols[c]) vec_add_scaled(col, coeff, lhs_cols[k]);
      for (const auto& [r, v] : col) out.set(r, c, v);
    }
    return out;
  }

  std::vector<SparseVecR> column_view() const {
    std::vector<SparseVecR> cols(cols_);
    for (const auto& [rc, v] : entries_) cols[rc.second][rc.first] = v;
    return cols;
  }

  std::vector<SparseVecR> row_view() const {
    std::vector<SparseVecR> rows(rows_);
    for (const auto& [rc, v] : entries_) rows[rc.first][rc.second] = v;
    return rows;
  }

  bool is_zero() const { return entries_.empty(); }

  // Fixed serialized form: {"rows": r, "cols": c, "entries": [[r, c, "p/q"], ...]}
  // with entries sorted by (row, col).
  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["rows"] = rows_;
    j["cols"] = cols_;
    nlohmann::ordered_json ents = nlohmann::ordered_json::array();
    for (const auto& [rc, v] : entries_)
      ents.push_back({rc.first, rc.second, rat_to_string(v)});
    j["entries"] = std::move(ents);
    return j;
  }

  static SparseRatMatrix from_json(const nlohmann::json& j) {
    SparseRatMatrix m(j.at("rows").get<int>(), j.at("cols").get<int>());
    for (const auto& e : j.at("entries"))
      m.set(e.at(0).get<int>(), e.at(1).get<int>(), rat_from_string(e.at(2).get<std::string>()));
    return m;
  }

 private:
  void check_index(int r, int c) const {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
      throw precondition_error("matrix index out of range");
  }

  int rows_, cols_;
  std::map<std::pair<int, int>, Rat> entries_;
};

inline nlohmann::ordered_json sparse_vec_to_json(const SparseVecR& v) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& [i, val] : v) j.push_back({i, rat_to_string(val)});
  return j;
}

}  // namespace chowcert
