#pragma once

// Incremental sparse row echelon form over a field. Columns are integers;
// a smaller column index is "more leading".

#include <algorithm>
#include <unordered_map>
#include <utility>
#include <vector>

#include "natmult/field.hpp"

namespace natmult {

template <class Field>
class SparseEchelon {
 public:
  using value_type = typename Field::value_type;
  struct Entry {
    std::size_t col;
    value_type val;
  };
  using Row = std::vector<Entry>;  // strictly increasing columns, no zeros

  explicit SparseEchelon(Field k) : k_(std::move(k)) {}

  /// Sorts, combines and drops zeros.
  Row normalize(Row r) const {
    std::sort(r.begin(), r.end(), [](const Entry& a, const Entry& b) { return a.col < b.col; });
    Row out;
    for (auto& e : r) {
      if (!out.empty() && out.back().col == e.col) {
        out.back().val = k_.add(out.back().val, e.val);
        if (k_.is_zero(out.back().val)) out.pop_back();
      } else if (!k_.is_zero(e.val)) {
        out.push_back(std::move(e));
      }
    }
    return out;
  }

  /// Reduces the row against the current pivots. With `full`, every entry
  /// sitting in a pivot column is cleared, otherwise only leading ones.
  Row reduce(Row r, bool full) const {
    Row tmp;
    std::size_t pos = 0;
    while (pos < r.size()) {
      auto it = pivots_.find(r[pos].col);
      if (it == pivots_.end()) {
        if (!full) return Row(r.begin() + static_cast<std::ptrdiff_t>(pos), r.end());
        ++pos;
        continue;
      }
      const Row& pr = rows_[it->second];
      value_type c = k_.neg(r[pos].val);  // pivot rows are monic
      tmp.clear();
      tmp.reserve(r.size() + pr.size());
      for (std::size_t i = 0; i < pos; ++i) tmp.push_back(std::move(r[i]));
      std::size_t i = pos + 1, j = 1;
      while (i < r.size() && j < pr.size()) {
        if (r[i].col < pr[j].col) tmp.push_back(std::move(r[i++]));
        else if (r[i].col > pr[j].col) {
          tmp.push_back({pr[j].col, k_.mul(pr[j].val, c)});
          ++j;
        } else {
          value_type s = k_.add(r[i].val, k_.mul(pr[j].val, c));
          if (!k_.is_zero(s)) tmp.push_back({r[i].col, std::move(s)});
          ++i;
          ++j;
        }
      }
      for (; i < r.size(); ++i) tmp.push_back(std::move(r[i]));
      for (; j < pr.size(); ++j) tmp.push_back({pr[j].col, k_.mul(pr[j].val, c)});
      std::swap(r, tmp);
    }
    return full ? r : Row{};
  }

  /// Adds a row (already normalized). Returns true if the rank grew.
  bool insert(Row r) {
    r = reduce(std::move(r), false);
    if (r.empty()) return false;
    value_type inv = k_.inv(r.front().val);
    for (auto& e : r) e.val = k_.mul(e.val, inv);
    pivots_.emplace(r.front().col, rows_.size());
    rows_.push_back(std::move(r));
    return true;
  }

  bool in_span(Row r) const { return reduce(std::move(r), true).empty(); }
  bool has_pivot(std::size_t col) const { return pivots_.count(col) != 0; }
  std::size_t rank() const { return rows_.size(); }
  const std::vector<Row>& rows() const { return rows_; }

 private:
  Field k_;
  std::vector<Row> rows_;
  std::unordered_map<std::size_t, std::size_t> pivots_;
};

/// Dense rank of a small matrix over F_p, destroying the input.
inline std::size_t dense_rank_mod_p(std::vector<std::uint32_t>& a, std::size_t rows, std::size_t cols,
                                    std::uint64_t p) {
  std::size_t rank = 0;
  PrimeField k(p);
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && a[piv * cols + c] == 0) ++piv;
    if (piv == rows) continue;
    if (piv != rank)
      for (std::size_t j = c; j < cols; ++j) std::swap(a[piv * cols + j], a[rank * cols + j]);
    std::uint64_t inv = k.inv(a[rank * cols + c]);
    for (std::size_t j = c; j < cols; ++j) a[rank * cols + j] = static_cast<std::uint32_t>(a[rank * cols + j] * inv % p);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      std::uint64_t f = a[r * cols + c];
      if (!f) continue;
      f = p - f;
      for (std::size_t j = c; j < cols; ++j)
        a[r * cols + j] = static_cast<std::uint32_t>((a[r * cols + j] + f * a[rank * cols + j]) % p);
    }
    ++rank;
  }
  return rank;
}

}  // namespace natmult
