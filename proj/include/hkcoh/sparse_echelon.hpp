#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hkcoh/exactlin.hpp"

namespace hkcoh {

// Sparse vector: entries sorted by index, no explicit zeros.
struct SparseVector {
  std::vector<std::pair<std::uint32_t, Rational>> entries;

  bool empty() const { return entries.empty(); }
  Vector to_dense(std::size_t length) const {
    Vector v(length);
    for (const auto& [i, x] : entries) v.at(i) = x;
    return v;
  }
  static SparseVector from_dense(const Vector& v) {
    SparseVector s;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (sgn(v[i]) != 0) s.entries.emplace_back(static_cast<std::uint32_t>(i), v[i]);
    return s;
  }
};

// Incremental reduced row echelon form over sparse rows. Every stored row has
// a pivot entry 1 and a tail supported on non-pivot columns only; the pivot of
// a new row is its leftmost column. The result is the unique RREF of the span
// of all inserted vectors.
class SparseEchelon {
 public:
  explicit SparseEchelon(std::size_t length)
      : length_(length), row_of_(length, kNone), occurs_(length), scratch_(length), touched_flag_(length, 0) {}

  std::size_t length() const { return length_; }
  std::size_t rank() const { return pivots_.size(); }
  bool is_pivot(std::size_t col) const { return row_of_[col] != kNone; }

  // Row whose pivot is `col` (pivot entry included).
  const SparseVector& row_for_pivot(std::size_t col) const { return rows_.at(row_of_.at(col)); }

  bool insert(const SparseVector& v) {
    // Reduce against current rows into the dense scratch buffer.
    for (const auto& [c, x] : v.entries) {
      if (c >= length_) throw std::out_of_range("SparseEchelon: column out of range");
      if (row_of_[c] == kNone) accumulate(c, x);
    }
    for (const auto& [c, x] : v.entries) {
      if (row_of_[c] == kNone) continue;
      for (const auto& [cc, y] : rows_[row_of_[c]].entries) {
        if (cc == c) continue;
        accumulate(cc, -x * y);
      }
    }
    SparseVector r;
    std::sort(touched_.begin(), touched_.end());
    for (auto c : touched_) {
      if (sgn(scratch_[c]) != 0) r.entries.emplace_back(c, scratch_[c]);
      scratch_[c] = 0;
      touched_flag_[c] = 0;
    }
    touched_.clear();
    if (r.empty()) return false;

    const std::uint32_t pivot = r.entries.front().first;
    const Rational inv = 1 / r.entries.front().second;
    for (auto& [c, x] : r.entries) x *= inv;

    // Eliminate the new pivot column from existing rows.
    for (std::uint32_t ri : occurs_[pivot]) {
      SparseVector& row = rows_[ri];
      auto it = std::lower_bound(row.entries.begin(), row.entries.end(), pivot,
                                 [](const auto& e, std::uint32_t c) { return e.first < c; });
      if (it == row.entries.end() || it->first != pivot) continue;
      const Rational f = it->second;
      row = combine(row, -f, r, ri);
    }
    occurs_[pivot].clear();
    occurs_[pivot].shrink_to_fit();

    const auto id = static_cast<std::uint32_t>(rows_.size());
    for (const auto& [c, x] : r.entries)
      if (c != pivot) occurs_[c].push_back(id);
    row_of_[pivot] = id;
    pivots_.push_back(pivot);
    rows_.push_back(std::move(r));
    return true;
  }

  std::vector<std::size_t> non_pivot_columns() const {
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < length_; ++c)
      if (row_of_[c] == kNone) out.push_back(c);
    return out;
  }

  const std::vector<SparseVector>& rows() const { return rows_; }

 private:
  static constexpr std::uint32_t kNone = 0xffffffffu;

  void accumulate(std::uint32_t c, const Rational& x) {
    if (!touched_flag_[c]) {
      touched_flag_[c] = 1;
      touched_.push_back(c);
    }
    scratch_[c] += x;
  }

  // a + f*b; registers row id `self` in occurs_ for columns new to a.
  SparseVector combine(const SparseVector& a, const Rational& f, const SparseVector& b, std::uint32_t self) {
    SparseVector out;
    out.entries.reserve(a.entries.size() + b.entries.size());
    std::size_t i = 0, j = 0;
    while (i < a.entries.size() || j < b.entries.size()) {
      if (j == b.entries.size() || (i < a.entries.size() && a.entries[i].first < b.entries[j].first)) {
        out.entries.push_back(a.entries[i++]);
      } else if (i == a.entries.size() || b.entries[j].first < a.entries[i].first) {
        Rational x = f * b.entries[j].second;
        out.entries.emplace_back(b.entries[j].first, std::move(x));
        occurs_[b.entries[j].first].push_back(self);
        ++j;
      } else {
        Rational x = a.entries[i].second + f * b.entries[j].second;
        if (sgn(x) != 0) out.entries.emplace_back(a.entries[i].first, std::move(x));
        ++i;
        ++j;
      }
    }
    return out;
  }

  std::size_t length_;
  std::vector<std::uint32_t> row_of_;
  std::vector<std::vector<std::uint32_t>> occurs_;
  std::vector<SparseVector> rows_;
  std::vector<std::size_t> pivots_;
  Vector scratch_;
  std::vector<std::uint32_t> touched_;
  std::vector<char> touched_flag_;
};

}  // namespace hkcoh
