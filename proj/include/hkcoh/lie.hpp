#pragma once

// Spans of graded operators with exact membership, Lie closure by bracket
// saturation, structure constants and Killing forms.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hkcoh/exactlin.hpp"
#include "hkcoh/graded_operator.hpp"
#include "hkcoh/sparse_echelon.hpp"

namespace hkcoh {

// Linearly independent operators X_0, X_1, ... in insertion order. Membership
// runs on sparse flattened coordinates: residuals R_i = X_i - (combination of
// earlier X_j) vanish at the probe coordinates of all earlier residuals, so a
// candidate is reduced by one pass over the probes.
class LieBasis {
 public:
  explicit LieBasis(std::vector<std::size_t> dims)
      : dims_(std::move(dims)), length_(GradedOperator::flat_length(dims_)), scratch_(length_), flag_(length_, 0) {}

  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t dim() const { return elements_.size(); }
  const std::vector<GradedOperator>& elements() const { return elements_; }
  const GradedOperator& operator[](std::size_t i) const { return elements_.at(i); }

  // Adds x if it is not in the span; returns whether it was added.
  bool insert(const GradedOperator& x) {
    auto [residual, coeffs] = reduce(x);
    if (residual.empty()) return false;
    const std::size_t k = elements_.size();
    // R_k = X_k - sum_i c_i R_i = X_k - sum_i c_i sum_j T_ij X_j
    Vector t(k + 1);
    t[k] = 1;
    for (std::size_t i = 0; i < k; ++i) {
      if (sgn(coeffs[i]) == 0) continue;
      for (std::size_t j = 0; j < transform_[i].size(); ++j)
        if (sgn(transform_[i][j]) != 0) t[j] -= coeffs[i] * transform_[i][j];
    }
    probes_.push_back(residual.entries.front().first);
    probe_values_.push_back(residual.entries.front().second);
    residuals_.push_back(std::move(residual));
    transform_.push_back(std::move(t));
    elements_.push_back(x);
    return true;
  }

  // Coefficients of x in the elements, if x lies in the span.
  std::optional<Vector> coordinates(const GradedOperator& x) const {
    auto [residual, coeffs] = reduce(x);
    if (!residual.empty()) return std::nullopt;
    Vector out(elements_.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      if (sgn(coeffs[i]) == 0) continue;
      for (std::size_t j = 0; j < transform_[i].size(); ++j)
        if (sgn(transform_[i][j]) != 0) out[j] += coeffs[i] * transform_[i][j];
    }
    return out;
  }

  bool contains(const GradedOperator& x) const { return reduce(x).first.empty(); }

  // Number of elements per shift.
  std::map<int, std::size_t> grading_dims() const {
    std::map<int, std::size_t> out;
    for (const auto& x : elements_) ++out[x.shift()];
    return out;
  }

 private:
  // x = sum_i coeffs_i R_i + residual
  std::pair<SparseVector, Vector> reduce(const GradedOperator& x) const {
    if (x.dims() != dims_) throw std::invalid_argument("operator acts on a different graded space");
    SparseVector flat = x.flatten();
    Vector coeffs(residuals_.size());
    for (const auto& [c, v] : flat.entries) add(c, v);
    for (std::size_t i = 0; i < residuals_.size(); ++i) {
      if (!flag_[probes_[i]] || sgn(scratch_[probes_[i]]) == 0) continue;
      Rational f = scratch_[probes_[i]] / probe_values_[i];
      for (const auto& [c, v] : residuals_[i].entries) add(c, -f * v);
      coeffs[i] = std::move(f);
    }
    SparseVector residual;
    std::sort(touched_.begin(), touched_.end());
    for (auto c : touched_) {
      if (sgn(scratch_[c]) != 0) residual.entries.emplace_back(c, scratch_[c]);
      scratch_[c] = 0;
      flag_[c] = 0;
    }
    touched_.clear();
    return {std::move(residual), std::move(coeffs)};
  }

  void add(std::uint32_t c, const Rational& v) const {
    if (!flag_[c]) {
      flag_[c] = 1;
      touched_.push_back(c);
    }
    scratch_[c] += v;
  }

  std::vector<std::size_t> dims_;
  std::size_t length_;
  std::vector<GradedOperator> elements_;
  std::vector<SparseVector> residuals_;
  std::vector<std::uint32_t> probes_;
  std::vector<Rational> probe_values_;
  std::vector<Vector> transform_;  // R_i = sum_j transform_[i][j] X_j
  mutable Vector scratch_;
  mutable std::vector<char> flag_;
  mutable std::vector<std::uint32_t> touched_;
};

// Smallest subspace containing the generators and stable under ad_g for each
// generator g; it is spanned by iterated brackets of generators, hence is the
// Lie algebra they generate. Generators acting by degree-affine scalars only
// rescale homogeneous operators and are not bracketed.
inline LieBasis lie_closure(const std::vector<GradedOperator>& generators) {
  if (generators.empty()) throw std::invalid_argument("lie_closure needs at least one generator");
  LieBasis basis(generators.front().dims());
  std::vector<const GradedOperator*> active;
  for (const auto& g : generators) {
    basis.insert(g);
    if (!g.is_degree_scalar()) active.push_back(&g);
  }
  for (std::size_t i = 0; i < basis.dim(); ++i)
    for (const GradedOperator* g : active) {
      GradedOperator b = bracket(*g, basis[i]);
      if (!b.is_zero()) basis.insert(b);
    }
  return basis;
}

// Structure constants: column j of ad(i) holds the coordinates of [X_i, X_j].
inline Matrix ad_matrix(const LieBasis& basis, std::size_t i) {
  const std::size_t n = basis.dim();
  Matrix ad(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    auto c = basis.coordinates(bracket(basis[i], basis[j]));
    if (!c) throw std::logic_error("span is not closed under brackets");
    for (std::size_t r = 0; r < n; ++r) ad(r, j) = (*c)[r];
  }
  return ad;
}

inline bool is_bracket_closed(const LieBasis& basis) {
  for (std::size_t i = 0; i < basis.dim(); ++i)
    for (std::size_t j = i + 1; j < basis.dim(); ++j)
      if (!basis.contains(bracket(basis[i], basis[j]))) return false;
  return true;
}

// K_ij = tr(ad_i ad_j)
inline Matrix killing_form(const LieBasis& basis) {
  const std::size_t n = basis.dim();
  std::vector<Matrix> ads;
  for (std::size_t i = 0; i < n; ++i) ads.push_back(ad_matrix(basis, i));
  Matrix k(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      Rational t;
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          if (sgn(ads[i](a, b)) != 0 && sgn(ads[j](b, a)) != 0) t += ads[i](a, b) * ads[j](b, a);
      k(i, j) = t;
      k(j, i) = t;
    }
  return k;
}

}  // namespace hkcoh
