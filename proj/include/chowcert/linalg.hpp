#pragma once

// Exact sparse linear algebra over the rationals.
//
// Elimination is fraction-free: rows and columns are carried as primitive
// integer vectors (content 1) and every update has the form
// (pivot * target - coeff * pivot_row) / content, so no rational division
// occurs inside the elimination loops. Pivoting is deterministic: the lowest
// remaining column index, then the lowest original row index among rows that
// are nonzero there. Identical inputs therefore produce identical ranks,
// kernels and solutions.

#include <algorithm>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "chowcert/rational.hpp"
#include "chowcert/sparse_matrix.hpp"

namespace chowcert {

using IntEntry = std::pair<int, Int>;
using IntVec = std::vector<IntEntry>;  // sorted by index, values nonzero

namespace detail {

// Divides by the gcd of the entries and makes the leading entry positive.
// Returns the signed factor g such that (input) = g * (output).
inline Int normalize_content(IntVec& v) {
  if (v.empty()) return 1;
  Int g = 0;
  for (const auto& [i, x] : v) {
    g = gcd(g, x);
    if (g == 1) break;
  }
  if (v.front().second < 0) g = -g;
  if (g != 1)
    for (auto& [i, x] : v) x /= g;
  return g;
}

// target := a * target + b * other, merged over sorted indices.
inline IntVec combine(const Int& a, const IntVec& target, const Int& b, const IntVec& other) {
  IntVec out;
  out.reserve(target.size() + other.size());
  std::size_t i = 0, j = 0;
  while (i < target.size() || j < other.size()) {
    if (j == other.size() || (i < target.size() && target[i].first < other[j].first)) {
      Int val = a * target[i].second;
      if (val != 0) out.emplace_back(target[i].first, std::move(val));
      ++i;
    } else if (i == target.size() || other[j].first < target[i].first) {
      Int val = b * other[j].second;
      if (val != 0) out.emplace_back(other[j].first, std::move(val));
      ++j;
    } else {
      Int val = a * target[i].second + b * other[j].second;
      if (val != 0) out.emplace_back(target[i].first, std::move(val));
      ++i, ++j;
    }
  }
  return out;
}

inline const Int* find_entry(const IntVec& v, int idx) {
  auto it = std::lower_bound(v.begin(), v.end(), idx,
                             [](const IntEntry& e, int i) { return e.first < i; });
  if (it == v.end() || it->first != idx) return nullptr;
  return &it->second;
}

// Clears denominators: returns (w, lambda) with w = lambda * v, lambda > 0,
// and w a primitive integer vector when normalize is set.
inline std::pair<IntVec, Int> to_integer_vec(const SparseVecR& v) {
  Int lambda = 1;
  for (const auto& [i, x] : v) lambda = lcm(lambda, denominator(x));
  IntVec out;
  out.reserve(v.size());
  for (const auto& [i, x] : v) {
    Int val = numerator(x) * (lambda / denominator(x));
    if (val != 0) out.emplace_back(i, std::move(val));
  }
  return {std::move(out), std::move(lambda)};
}

struct EchelonRow {
  IntVec v;
  int origin;  // original row index, used for deterministic tie-breaking
};

// Forward elimination state shared by rank, kernel and solve. Column
// `ncols` acts as an augmented right-hand side and is never pivoted on.
struct RowEchelon {
  int ncols = 0;
  std::vector<EchelonRow> pivot_rows;  // pivot columns strictly increasing
  std::vector<int> pivot_cols;
  bool inconsistent = false;  // a row reduced to (0 .. 0 | nonzero)

  void run(std::vector<EchelonRow> rows, int cols) {
    ncols = cols;
    std::map<int, std::vector<EchelonRow>> buckets;
    for (auto& r : rows) {
      if (r.v.empty()) continue;
      int lead = r.v.front().first;
      buckets[lead].push_back(std::move(r));
    }
    while (!buckets.empty()) {
      auto it = buckets.begin();
      int col = it->first;
      std::vector<EchelonRow> bucket = std::move(it->second);
      buckets.erase(it);
      if (col >= ncols) {
        // Rows supported only on the augmented column.
        inconsistent = true;
        break;
      }
      auto best = std::min_element(bucket.begin(), bucket.end(),
                                   [](const EchelonRow& a, const EchelonRow& b) {
                                     return a.origin < b.origin;
                                   });
      EchelonRow pivot = std::move(*best);
      bucket.erase(best);
      const Int& p = pivot.v.front().second;
      for (auto& r : bucket) {
        const Int& e = r.v.front().second;
        r.v = combine(p, r.v, -e, pivot.v);
        normalize_content(r.v);
        if (r.v.empty()) continue;
        buckets[r.v.front().first].push_back(std::move(r));
      }
      pivot_cols.push_back(col);
      pivot_rows.push_back(std::move(pivot));
    }
  }

  // Back-substitution: clears every pivot column from the rows above it.
  void reduce() {
    for (int i = static_cast<int>(pivot_rows.size()) - 1; i >= 0; --i) {
      for (int j = i + 1; j < static_cast<int>(pivot_rows.size()); ++j) {
        const Int* e = find_entry(pivot_rows[i].v, pivot_cols[j]);
        if (!e) continue;
        const Int& p = pivot_rows[j].v.front().second;
        pivot_rows[i].v = combine(p, pivot_rows[i].v, -*e, pivot_rows[j].v);
        normalize_content(pivot_rows[i].v);
      }
    }
  }
};

inline std::vector<EchelonRow> matrix_rows(const SparseRatMatrix& m) {
  std::vector<EchelonRow> rows;
  rows.reserve(m.rows());
  auto sparse_rows = m.row_view();
  for (int r = 0; r < m.rows(); ++r) {
    auto [iv, lambda] = to_integer_vec(sparse_rows[r]);
    normalize_content(iv);
    rows.push_back({std::move(iv), r});
  }
  return rows;
}

}  // namespace detail

inline int rank(const SparseRatMatrix& m) {
  detail::RowEchelon ech;
  ech.run(detail::matrix_rows(m), m.cols());
  return static_cast<int>(ech.pivot_cols.size());
}

// Independent cross-check path: dense-in-rows elimination modulo a prime.
// Shares no code with the exact elimination above.
inline int rank_mod(const SparseRatMatrix& m, std::uint64_t p) {
  std::vector<std::map<int, std::uint64_t>> rows(m.rows());
  for (const auto& [rc, v] : m.entries()) {
    Int num = numerator(v) % Int(p);
    Int den = denominator(v) % Int(p);
    if (den == 0) throw precondition_error("denominator divisible by cross-check prime");
    std::uint64_t nu = static_cast<std::uint64_t>(((num % Int(p)) + Int(p)) % Int(p));
    std::uint64_t de = static_cast<std::uint64_t>(((den % Int(p)) + Int(p)) % Int(p));
    // Fermat inverse; p is prime.
    std::uint64_t inv = 1, base = de, e = p - 2;
    while (e) {
      if (e & 1) inv = static_cast<std::uint64_t>((__uint128_t)inv * base % p);
      base = static_cast<std::uint64_t>((__uint128_t)base * base % p);
      e >>= 1;
    }
    std::uint64_t val = static_cast<std::uint64_t>((__uint128_t)nu * inv % p);
    if (val) rows[rc.first][rc.second] = val;
  }
  int rk = 0;
  std::map<int, std::map<int, std::uint64_t>> pivots;  // col -> reduced row
  for (auto& row : rows) {
    while (!row.empty()) {
      int lead = row.begin()->first;
      auto piv = pivots.find(lead);
      if (piv == pivots.end()) break;
      std::uint64_t c = row.begin()->second;
      std::uint64_t pv = piv->second.at(lead);
      std::uint64_t inv = 1, base = pv, e = p - 2;
      while (e) {
        if (e & 1) inv = static_cast<std::uint64_t>((__uint128_t)inv * base % p);
        base = static_cast<std::uint64_t>((__uint128_t)base * base % p);
        e >>= 1;
      }
      std::uint64_t factor = static_cast<std::uint64_t>((__uint128_t)c * inv % p);
      for (const auto& [j, pv_j] : piv->second) {
        std::uint64_t sub = static_cast<std::uint64_t>((__uint128_t)factor * pv_j % p);
        auto it = row.find(j);
        std::uint64_t cur = (it == row.end()) ? 0 : it->second;
        std::uint64_t nv = (cur + p - sub) % p;
        if (nv)
          row[j] = nv;
        else if (it != row.end())
          row.erase(it);
      }
    }
    if (!row.empty()) {
      pivots[row.begin()->first] = row;
      ++rk;
    }
  }
  return rk;
}

// Exact rank confirmed against modular ranks. The modular rank can only drop
// below the exact rank (for unlucky primes); exceeding it means a bug.
inline int rank_checked(const SparseRatMatrix& m) {
  int r = rank(m);
  const std::uint64_t primes[] = {1000003ull, 998244353ull, 2147483629ull};
  for (std::uint64_t p : primes) {
    int rp = rank_mod(m, p);
    if (rp > r) throw consistency_error("modular rank exceeds exact rank");
    if (rp == r) return r;
  }
  throw consistency_error("exact rank not confirmed by any cross-check prime");
}

// Basis of { v : M v = 0 }. Vectors are primitive integer vectors with the
// free coordinate positive; one vector per non-pivot column, in column order.
inline std::vector<SparseVecR> kernel_basis(const SparseRatMatrix& m) {
  detail::RowEchelon ech;
  ech.run(detail::matrix_rows(m), m.cols());
  ech.reduce();
  std::vector<bool> is_pivot(m.cols(), false);
  for (int c : ech.pivot_cols) is_pivot[c] = true;
  std::vector<SparseVecR> basis;
  for (int f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    SparseVecR v;
    v[f] = 1;
    for (std::size_t i = 0; i < ech.pivot_rows.size(); ++i) {
      const Int* e = detail::find_entry(ech.pivot_rows[i].v, f);
      if (e) v[ech.pivot_cols[i]] = Rat(-*e, ech.pivot_rows[i].v.front().second);
    }
    auto [iv, lambda] = detail::to_integer_vec(v);
    detail::normalize_content(iv);
    SparseVecR scaled;
    for (auto& [i, x] : iv) scaled[i] = Rat(x);
    if (scaled[f] < 0)
      for (auto& [i, x] : scaled) x = -x;
    basis.push_back(std::move(scaled));
  }
  return basis;
}

struct LinearSolution {
  SparseVecR particular;
  std::vector<SparseVecR> homogeneous;
};

// Solves M x = b exactly; returns nullopt when the system is inconsistent.
inline std::optional<LinearSolution> solve_exact(const SparseRatMatrix& m, const SparseVecR& b) {
  for (const auto& [i, v] : b)
    if (i < 0 || i >= m.rows()) throw precondition_error("rhs index out of range");
  auto rows = detail::matrix_rows(m);
  // Append the rhs as an extra column that is never pivoted on.
  {
    std::vector<SparseVecR> rat_rows = m.row_view();
    rows.clear();
    for (int r = 0; r < m.rows(); ++r) {
      SparseVecR row = rat_rows[r];
      auto it = b.find(r);
      if (it != b.end() && it->second != 0) row[m.cols()] = it->second;
      auto [iv, lambda] = detail::to_integer_vec(row);
      detail::normalize_content(iv);
      rows.push_back({std::move(iv), r});
    }
  }
  detail::RowEchelon ech;
  ech.run(std::move(rows), m.cols());
  if (ech.inconsistent) return std::nullopt;
  ech.reduce();
  LinearSolution sol;
  for (std::size_t i = 0; i < ech.pivot_rows.size(); ++i) {
    const Int* rhs = detail::find_entry(ech.pivot_rows[i].v, m.cols());
    if (rhs)
      sol.particular[ech.pivot_cols[i]] = Rat(*rhs, ech.pivot_rows[i].v.front().second);
  }
  // Kernel of M from the same reduced echelon (augmented column excluded).
  std::vector<bool> is_pivot(m.cols(), false);
  for (int c : ech.pivot_cols) is_pivot[c] = true;
  for (int f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    SparseVecR v;
    v[f] = 1;
    for (std::size_t i = 0; i < ech.pivot_rows.size(); ++i) {
      const Int* e = detail::find_entry(ech.pivot_rows[i].v, f);
      if (e) v[ech.pivot_cols[i]] = Rat(-*e, ech.pivot_rows[i].v.front().second);
    }
    auto [iv, lambda] = detail::to_integer_vec(v);
    detail::normalize_content(iv);
    SparseVecR scaled;
    for (auto& [i, x] : iv) scaled[i] = Rat(x);
    if (scaled[f] < 0)
      for (auto& [i, x] : scaled) x = -x;
    sol.homogeneous.push_back(std::move(scaled));
  }
  return sol;
}

// Incremental column-span echelon. Columns are inserted in a fixed order and
// each new column is reduced against all earlier ones, so the stored basis is
// deterministic. Columns inserted with a tag have their coefficients tracked
// through every reduction, which is what coordinate extraction needs.
class SpanEchelon {
 public:
  explicit SpanEchelon(int dim) : dim_(dim) {}

  int dim() const { return dim_; }
  int rank() const { return static_cast<int>(cols_.size()); }

  bool insert(const SparseVecR& v, int tag = -1) {
    auto [cur, lambda] = detail::to_integer_vec(v);
    std::map<int, Rat> expr;
    if (tag >= 0) expr[tag] = Rat(lambda);
    reduce_through(cur, expr);
    if (cur.empty()) return false;
    Int g = detail::normalize_content(cur);
    for (auto& [t, c] : expr) c /= Rat(g);
    int lead = cur.front().first;
    cols_.push_back({std::move(cur), lead, std::move(expr)});
    return true;
  }

  bool contains(const SparseVecR& v) const {
    IntVec cur = detail::to_integer_vec(v).first;
    std::map<int, Rat> expr;
    reduce_through(cur, expr);
    return cur.empty();
  }

  // Expresses v as sum_t c_t * (tagged input t) modulo the untagged columns.
  // nullopt when v is outside the span.
  std::optional<std::map<int, Rat>> express(const SparseVecR& v) const {
    auto [cur, lambda] = detail::to_integer_vec(v);
    Rat scale(lambda);
    std::map<int, Rat> acc;  // invariant: cur = scale * v + sum acc_t * input_t + untagged
    for (const auto& col : cols_) {
      const Int* e = detail::find_entry(cur, col.lead);
      if (!e) continue;
      const Int& p = col.v.front().second;
      Int coeff = *e;
      cur = detail::combine(p, cur, -coeff, col.v);
      scale *= Rat(p);
      for (auto& [t, c] : acc) c *= Rat(p);
      for (const auto& [t, c] : col.expr) {
        Rat& slot = acc[t];
        slot -= Rat(coeff) * c;
        if (slot == 0) acc.erase(t);
      }
      Int g = detail::normalize_content(cur);
      if (g != 1) {
        scale /= Rat(g);
        for (auto& [t, c] : acc) c /= Rat(g);
      }
    }
    if (!cur.empty()) return std::nullopt;
    std::map<int, Rat> out;
    for (auto& [t, c] : acc) {
      Rat val = -c / scale;
      if (val != 0) out[t] = val;
    }
    return out;
  }

 private:
  struct Col {
    IntVec v;
    int lead;
    std::map<int, Rat> expr;
  };

  void reduce_through(IntVec& cur, std::map<int, Rat>& expr) const {
    for (const auto& col : cols_) {
      if (cur.empty()) return;
      const Int* e = detail::find_entry(cur, col.lead);
      if (!e) continue;
      const Int& p = col.v.front().second;
      Int coeff = *e;
      cur = detail::combine(p, cur, -coeff, col.v);
      for (auto& [t, c] : expr) c *= Rat(p);
      for (const auto& [t, c] : col.expr) {
        Rat& slot = expr[t];
        slot -= Rat(coeff) * c;
        if (slot == 0) expr.erase(t);
      }
      Int g = 0;
      for (const auto& [i, x] : cur) {
        g = gcd(g, x);
        if (g == 1) break;
      }
      if (g > 1) {
        for (auto& [i, x] : cur) x /= g;
        for (auto& [t, c] : expr) c /= Rat(g);
      }
    }
  }

  int dim_;
  std::vector<Col> cols_;
};

// Quotient of span(kernel_vectors) by span(image_vectors). Quotient
// representatives are chosen greedily from the kernel list in input order,
// so identical inputs yield the identical chosen basis.
class QuotientSpace {
 public:
  QuotientSpace(int ambient, const std::vector<SparseVecR>& kernel_vectors,
                const std::vector<SparseVecR>& image_vectors)
      : ambient_(ambient), kernel_ech_(ambient), mixed_(ambient) {
    for (const auto& v : kernel_vectors) kernel_ech_.insert(v);
    for (const auto& v : image_vectors) {
      if (!kernel_ech_.contains(v))
        throw precondition_error("image vector outside the kernel span");
      mixed_.insert(v);
    }
    image_rank_ = mixed_.rank();
    int tag = 0;
    for (const auto& v : kernel_vectors) {
      if (mixed_.insert(v, tag)) {
        reps_.push_back(v);
        ++tag;
      }
    }
    if (quotient_dim() != static_cast<int>(reps_.size()))
      throw consistency_error("quotient representative count mismatch");
  }

  int ambient_dim() const { return ambient_; }
  int kernel_rank() const { return kernel_ech_.rank(); }
  int image_rank() const { return image_rank_; }
  int quotient_dim() const { return kernel_ech_.rank() - image_rank_; }
  const std::vector<SparseVecR>& quotient_reps() const { return reps_; }

  // Coordinates of v with respect to the chosen representatives; constant on
  // cosets of the image span.
  std::vector<Rat> coords(const SparseVecR& v) const {
    if (!kernel_ech_.contains(v))
      throw precondition_error("vector outside the kernel span");
    auto expr = mixed_.express(v);
    if (!expr) throw consistency_error("kernel vector failed mixed-span reduction");
    std::vector<Rat> out(reps_.size(), Rat(0));
    for (const auto& [t, c] : *expr) out[t] = c;
    return out;
  }

 private:
  int ambient_;
  SpanEchelon kernel_ech_;
  SpanEchelon mixed_;
  int image_rank_ = 0;
  std::vector<SparseVecR> reps_;
};

inline QuotientSpace quotient_space(int ambient, const std::vector<SparseVecR>& kernel_vectors,
                                    const std::vector<SparseVecR>& image_vectors) {
  return QuotientSpace(ambient, kernel_vectors, image_vectors);
}

}  // namespace chowcert
