#pragma once

// Homogeneous linear operators on a graded vector space W_0 + ... + W_top.
// An operator of shift s maps W_k to W_{k+s}; blocks outside the range are
// absent and act as zero.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hkcoh/exactlin.hpp"
#include "hkcoh/sparse_echelon.hpp"

namespace hkcoh {

class GradedOperator {
 public:
  GradedOperator() = default;
  GradedOperator(std::vector<std::size_t> dims, int shift) : dims_(std::move(dims)), shift_(shift) {
    if (dims_.empty()) throw std::invalid_argument("graded space needs at least one degree");
    blocks_.resize(dims_.size());
    for (unsigned k = 0; k < dims_.size(); ++k)
      if (has_block(k)) blocks_[k] = Matrix(dims_[k + shift_], dims_[k]);
  }

  static GradedOperator identity(const std::vector<std::size_t>& dims) {
    GradedOperator op(dims, 0);
    for (unsigned k = 0; k < dims.size(); ++k) op.blocks_[k] = Matrix::identity(dims[k]);
    return op;
  }

  // Acts on W_k as scalars[k] * Id.
  static GradedOperator diagonal(const std::vector<std::size_t>& dims, const std::vector<Rational>& scalars) {
    if (scalars.size() != dims.size()) throw std::invalid_argument("one scalar per degree expected");
    GradedOperator op(dims, 0);
    for (unsigned k = 0; k < dims.size(); ++k) op.blocks_[k] = scalars[k] * Matrix::identity(dims[k]);
    return op;
  }

  const std::vector<std::size_t>& dims() const { return dims_; }
  unsigned top() const { return static_cast<unsigned>(dims_.size() - 1); }
  int shift() const { return shift_; }

  bool has_block(unsigned k) const {
    const long t = static_cast<long>(k) + shift_;
    return k < dims_.size() && t >= 0 && t < static_cast<long>(dims_.size());
  }
  Matrix& block(unsigned k) {
    if (!has_block(k)) throw std::out_of_range("no block in this degree");
    return blocks_[k];
  }
  const Matrix& block(unsigned k) const {
    if (!has_block(k)) throw std::out_of_range("no block in this degree");
    return blocks_[k];
  }

  // Image of v in W_k; empty when it lands outside the range.
  Vector apply(unsigned k, const Vector& v) const {
    if (k >= dims_.size() || v.size() != dims_[k]) throw std::invalid_argument("apply: vector does not fit degree");
    if (!has_block(k)) return {};
    return blocks_[k] * v;
  }

  bool is_zero() const {
    for (unsigned k = 0; k < dims_.size(); ++k)
      if (has_block(k) && !blocks_[k].is_zero()) return false;
    return true;
  }

  GradedOperator& operator+=(const GradedOperator& o) {
    add_scaled(Rational(1), o);
    return *this;
  }
  GradedOperator& operator-=(const GradedOperator& o) {
    add_scaled(Rational(-1), o);
    return *this;
  }
  GradedOperator& operator*=(const Rational& c) {
    for (auto& b : blocks_) b *= c;
    return *this;
  }
  void add_scaled(const Rational& c, const GradedOperator& o) {
    check_compatible(o);
    if (o.shift_ != shift_) throw std::invalid_argument("cannot add operators of different shifts");
    for (unsigned k = 0; k < dims_.size(); ++k)
      if (has_block(k)) blocks_[k].add_scaled(c, o.blocks_[k]);
  }
  friend GradedOperator operator+(GradedOperator a, const GradedOperator& b) { return a += b; }
  friend GradedOperator operator-(GradedOperator a, const GradedOperator& b) { return a -= b; }
  friend GradedOperator operator*(const Rational& c, GradedOperator a) { return a *= c; }

  // Composition a after b.
  friend GradedOperator operator*(const GradedOperator& a, const GradedOperator& b) {
    a.check_compatible(b);
    GradedOperator c(a.dims_, a.shift_ + b.shift_);
    for (unsigned k = 0; k < c.dims_.size(); ++k) {
      if (!c.has_block(k) || !b.has_block(k)) continue;
      const unsigned mid = static_cast<unsigned>(static_cast<long>(k) + b.shift_);
      c.blocks_[k] = a.blocks_[mid] * b.blocks_[k];
    }
    return c;
  }

  friend bool operator==(const GradedOperator& a, const GradedOperator& b) {
    if (a.dims_ != b.dims_) return false;
    if (a.shift_ != b.shift_) return a.is_zero() && b.is_zero();
    for (unsigned k = 0; k < a.dims_.size(); ++k)
      if (a.has_block(k) && a.blocks_[k] != b.blocks_[k]) return false;
    return true;
  }
  friend bool operator!=(const GradedOperator& a, const GradedOperator& b) { return !(a == b); }

  // Flattened coordinates in a layout shared by all shifts -top..top, so that
  // operators of different shifts live in complementary coordinate blocks.
  static std::size_t flat_length(const std::vector<std::size_t>& dims) {
    std::size_t s = 0;
    for (auto x : dims) s += x;
    return s * s;
  }
  std::size_t flat_offset(unsigned k) const {
    std::size_t off = 0;
    const long t = static_cast<long>(top());
    for (long s = -t; s < shift_; ++s)
      for (unsigned j = 0; j < dims_.size(); ++j) {
        const long img = static_cast<long>(j) + s;
        if (img >= 0 && img <= t) off += dims_[j] * dims_[img];
      }
    for (unsigned j = 0; j < k; ++j)
      if (has_block(j)) off += blocks_[j].rows() * blocks_[j].cols();
    return off;
  }
  SparseVector flatten() const {
    SparseVector out;
    if (shift_ < -static_cast<long>(top()) || shift_ > static_cast<long>(top())) return out;
    std::size_t off = flat_offset(0);
    for (unsigned k = 0; k < dims_.size(); ++k) {
      if (!has_block(k)) continue;
      const auto& data = blocks_[k].data();
      for (std::size_t i = 0; i < data.size(); ++i)
        if (sgn(data[i]) != 0) out.entries.emplace_back(static_cast<std::uint32_t>(off + i), data[i]);
      off += data.size();
    }
    return out;
  }

  Rational trace() const {
    Rational t;
    if (shift_ != 0) return t;
    for (const auto& b : blocks_)
      for (std::size_t i = 0; i < b.rows(); ++i) t += b(i, i);
    return t;
  }

  // Shift 0 and acting on each W_k by a scalar that is affine in k, as the
  // grading operator does. Brackets with such an operator rescale
  // homogeneous operators.
  bool is_degree_scalar() const {
    if (shift_ != 0) return false;
    std::vector<Rational> s;
    for (unsigned k = 0; k < dims_.size(); ++k) {
      const Matrix& b = blocks_[k];
      if (b.rows() == 0) {
        s.emplace_back();
        continue;
      }
      Rational c = b(0, 0);
      if (b != c * Matrix::identity(b.rows())) return false;
      s.push_back(c);
    }
    // Empty degrees carry no constraint, but keep the check simple and strict.
    for (std::size_t k = 2; k < s.size(); ++k)
      if (s[k] - s[k - 1] != s[1] - s[0]) return false;
    return true;
  }

 private:
  void check_compatible(const GradedOperator& o) const {
    if (dims_ != o.dims_) throw std::invalid_argument("operators act on different graded spaces");
  }

  std::vector<std::size_t> dims_;
  int shift_ = 0;
  std::vector<Matrix> blocks_;
};

inline GradedOperator bracket(const GradedOperator& a, const GradedOperator& b) {
  GradedOperator c = a * b;
  c -= b * a;
  return c;
}

}  // namespace hkcoh
