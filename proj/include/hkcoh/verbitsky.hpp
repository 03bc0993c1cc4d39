#pragma once

// The graded algebra SH(V, n) = S^*V / I, where I is the ideal generated by
// the harmonic space H_{n+1} = ker(Laplacian) in S^{n+1}V. Degree k of the
// model stands for cohomological degree 2k of a manifold of real dimension
// 4n, so A_0 .. A_{2n} are the graded pieces.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "hkcoh/exactlin.hpp"
#include "hkcoh/monomial.hpp"
#include "hkcoh/quadspace.hpp"
#include "hkcoh/sparse_echelon.hpp"

namespace hkcoh {

// Laplacian S^m V -> S^{m-2} V. On a monomial x_1...x_m it is
// sum_{j<k} 2 b(x_j, x_k) x_1..^x_j..^x_k..x_m, so that
// Delta(a^m) = m(m-1) q(a) a^{m-2}.
inline Matrix laplacian(const QuadraticSpace& space, unsigned m, const MonomialTable& table) {
  if (m < 2) throw std::invalid_argument("laplacian requires degree m >= 2");
  if (table.variables() != space.dim() || table.max_degree() < m)
    throw std::invalid_argument("laplacian: monomial table does not cover S^m");
  const Matrix& g = space.gram();
  Matrix out(table.size(m - 2), table.size(m));
  Monomial rest;
  for (std::size_t col = 0; col < table.size(m); ++col) {
    const Monomial& x = table.monomial(m, col);
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = j + 1; k < m; ++k) {
        const Rational& b = g(x[j], x[k]);
        if (sgn(b) == 0) continue;
        rest.clear();
        for (std::size_t p = 0; p < m; ++p)
          if (p != j && p != k) rest.push_back(x[p]);
        out(table.index_of(rest), col) += 2 * b;
      }
  }
  return out;
}

inline Matrix laplacian(const QuadraticSpace& space, unsigned m) {
  return laplacian(space, m, MonomialTable(space.dim(), m));
}

// Basis of H_m = ker(Laplacian) in S^m V; all of S^m for m < 2.
inline std::vector<Vector> harmonic_space(const QuadraticSpace& space, unsigned m, const MonomialTable& table) {
  if (m < 2) {
    std::vector<Vector> basis;
    for (std::size_t i = 0; i < table.size(m); ++i) {
      Vector e(table.size(m));
      e[i] = 1;
      basis.push_back(std::move(e));
    }
    return basis;
  }
  return kernel(laplacian(space, m, table));
}

inline std::vector<Vector> harmonic_space(const QuadraticSpace& space, unsigned m) {
  return harmonic_space(space, m, MonomialTable(space.dim(), std::max(m, 1u)));
}

// Element of the model: one coordinate vector per degree, in the quotient
// bases of the A_k.
struct AlgebraElement {
  std::vector<Vector> parts;

  friend bool operator==(const AlgebraElement&, const AlgebraElement&) = default;
};

class VerbitskyModel {
 public:
  const QuadraticSpace& space() const { return space_; }
  unsigned n() const { return n_; }
  unsigned top_degree() const { return 2 * n_; }
  std::size_t dim(unsigned k) const { return basis_.at(k).size(); }
  std::vector<std::size_t> dims() const {
    std::vector<std::size_t> out;
    for (const auto& b : basis_) out.push_back(b.size());
    return out;
  }
  std::size_t total_dim() const {
    std::size_t s = 0;
    for (const auto& b : basis_) s += b.size();
    return s;
  }
  const MonomialTable& monomials() const { return table_; }

  // Monomials of S^k whose classes form the basis of A_k.
  const std::vector<std::size_t>& basis_monomials(unsigned k) const { return basis_.at(k); }

  // Normal form of monomial `m` of S^k, added with coefficient c into `out`.
  void add_normal_form(unsigned k, std::size_t m, const Rational& c, Vector& out) const {
    if (sgn(c) == 0) return;
    if (k <= n_) {
      out[m] += c;
      return;
    }
    for (const auto& [i, x] : nf_[k][m].entries) out[i] += c * x;
  }
  Vector normal_form(unsigned k, std::size_t m) const {
    Vector out(dim(k));
    add_normal_form(k, m, Rational(1), out);
    return out;
  }

  // Class in A_k of a polynomial given in monomial coordinates of S^k.
  Vector reduce(unsigned k, const Vector& poly) const {
    if (poly.size() != table_.size(k)) throw std::invalid_argument("reduce: polynomial length mismatch");
    Vector out(dim(k));
    for (std::size_t m = 0; m < poly.size(); ++m) add_normal_form(k, m, poly[m], out);
    return out;
  }

  // Representative polynomial supported on the basis monomials.
  Vector lift(unsigned k, const Vector& coords) const {
    Vector poly(table_.size(k));
    for (std::size_t i = 0; i < coords.size(); ++i) poly[basis_[k][i]] = coords[i];
    return poly;
  }

  // Reduced echelon basis of I_k as dense vectors in S^k (empty for k <= n).
  std::vector<Vector> ideal_basis(unsigned k) const {
    std::vector<Vector> out;
    if (k <= n_) return out;
    for (std::size_t m = 0; m < table_.size(k); ++m) {
      if (position_[k][m] >= 0) continue;
      Vector row(table_.size(k));
      row[m] = 1;
      for (const auto& [i, x] : nf_[k][m].entries) row[basis_[k][i]] = -x;
      out.push_back(std::move(row));
    }
    return out;
  }

  // Coordinates of (basis a of A_j) * (basis b of A_k) in A_{j+k}.
  Vector multiply_basis(unsigned j, std::size_t a, unsigned k, std::size_t b) const {
    Vector out(dim(j + k));
    add_normal_form(j + k, table_.product_index(j, basis_[j][a], k, basis_[k][b]), Rational(1), out);
    return out;
  }

  // x in A_j times y in A_k.
  Vector multiply(unsigned j, const Vector& x, unsigned k, const Vector& y) const {
    if (j + k > top_degree()) return {};
    Vector out(dim(j + k));
    for (std::size_t a = 0; a < x.size(); ++a) {
      if (sgn(x[a]) == 0) continue;
      for (std::size_t b = 0; b < y.size(); ++b) {
        if (sgn(y[b]) == 0) continue;
        add_normal_form(j + k, table_.product_index(j, basis_[j][a], k, basis_[k][b]), x[a] * y[b], out);
      }
    }
    return out;
  }

  AlgebraElement zero() const {
    AlgebraElement z;
    for (unsigned k = 0; k <= top_degree(); ++k) z.parts.emplace_back(dim(k));
    return z;
  }
  AlgebraElement unit() const {
    AlgebraElement u = zero();
    u.parts[0][0] = 1;
    return u;
  }
  AlgebraElement homogeneous(unsigned k, const Vector& coords) const {
    if (coords.size() != dim(k)) throw std::invalid_argument("homogeneous: coordinate length mismatch");
    AlgebraElement e = zero();
    e.parts[k] = coords;
    return e;
  }
  // Class of a vector v in V = A_1.
  AlgebraElement linear(const Vector& v) const { return homogeneous(1, v); }
  // Class of a polynomial in S^k.
  AlgebraElement polynomial_class(unsigned k, const Vector& poly) const { return homogeneous(k, reduce(k, poly)); }

  // Dual quadratic element qbar = sum (G^-1)_ij e_i e_j in S^2 V.
  const Vector& qbar() const { return qbar_; }
  AlgebraElement qbar_class() const { return polynomial_class(2, qbar_); }

  AlgebraElement multiply(const AlgebraElement& x, const AlgebraElement& y) const {
    check(x);
    check(y);
    AlgebraElement out = zero();
    for (unsigned j = 0; j <= top_degree(); ++j) {
      if (is_zero(x.parts[j])) continue;
      for (unsigned k = 0; j + k <= top_degree(); ++k) {
        if (is_zero(y.parts[k])) continue;
        Vector p = multiply(j, x.parts[j], k, y.parts[k]);
        for (std::size_t i = 0; i < p.size(); ++i) out.parts[j + k][i] += p[i];
      }
    }
    return out;
  }

  AlgebraElement power(const AlgebraElement& x, unsigned e) const {
    AlgebraElement r = unit();
    for (unsigned i = 0; i < e; ++i) r = multiply(r, x);
    return r;
  }

  AlgebraElement add(AlgebraElement x, const AlgebraElement& y, const Rational& c = 1) const {
    check(x);
    check(y);
    for (unsigned k = 0; k <= top_degree(); ++k) x.parts[k] = axpy(c, y.parts[k], std::move(x.parts[k]));
    return x;
  }

  // Linear functional on A_{2n}, normalized so that the class of qbar^n has
  // integral 1.
  const Vector& integral_functional() const { return integral_; }

  Rational integrate(const AlgebraElement& x) const {
    check(x);
    return dot(integral_, x.parts[top_degree()]);
  }

  void check(const AlgebraElement& x) const {
    if (x.parts.size() != top_degree() + 1) throw std::invalid_argument("element has wrong number of degrees");
    for (unsigned k = 0; k <= top_degree(); ++k)
      if (x.parts[k].size() != dim(k)) throw std::invalid_argument("element coordinates have wrong length");
  }

 private:
  friend VerbitskyModel build_model(const QuadraticSpace& space, unsigned n);

  QuadraticSpace space_;
  unsigned n_ = 0;
  MonomialTable table_;
  std::vector<std::vector<std::size_t>> basis_;   // [k] -> standard monomials
  std::vector<std::vector<long>> position_;       // [k][monomial] -> basis position or -1
  std::vector<std::vector<SparseVector>> nf_;     // [k][monomial] -> normal form, k > n
  Vector qbar_;
  Vector integral_;
};

// Builds SH(V,n). For k > n the ideal piece is I_k = S^{k-n-1} H_{n+1},
// obtained as H_{n+1} in degree n+1 and as V * I_{k-1} above it; the basis of
// A_k consists of the monomials that are not pivots of the reduced echelon
// form of I_k.
inline VerbitskyModel build_model(const QuadraticSpace& space, unsigned n) {
  const std::size_t d = space.dim();
  if (d < 2) throw std::invalid_argument("build_model requires dim V >= 2");
  if (n < 1) throw std::invalid_argument("build_model requires n >= 1");
  if (2 * n > MonomialTable::kMaxDegree) throw std::invalid_argument("build_model supports n <= 4");

  VerbitskyModel model;
  model.space_ = space;
  model.n_ = n;
  model.table_ = MonomialTable(d, 2 * n);
  const MonomialTable& table = model.table_;
  const unsigned top = 2 * n;
  model.basis_.resize(top + 1);
  model.position_.resize(top + 1);
  model.nf_.resize(top + 1);

  for (unsigned k = 0; k <= n; ++k) {
    for (std::size_t m = 0; m < table.size(k); ++m) {
      model.basis_[k].push_back(m);
      model.position_[k].push_back(static_cast<long>(m));
    }
  }

  std::vector<SparseVector> previous;  // reduced rows of I_{k-1}
  for (unsigned k = n + 1; k <= top; ++k) {
    SparseEchelon ideal(table.size(k));
    if (k == n + 1) {
      for (const auto& h : harmonic_space(space, k, table)) ideal.insert(SparseVector::from_dense(h));
    } else {
      for (const auto& row : previous) {
        for (std::size_t i = 0; i < d; ++i) {
          SparseVector g;
          for (const auto& [m, x] : row.entries)
            g.entries.emplace_back(static_cast<std::uint32_t>(table.product_index(1, i, k - 1, m)), x);
          std::sort(g.entries.begin(), g.entries.end(),
                    [](const auto& a, const auto& b) { return a.first < b.first; });
          ideal.insert(g);
        }
      }
    }
    auto standard = ideal.non_pivot_columns();
    model.basis_[k] = standard;
    model.position_[k].assign(table.size(k), -1);
    for (std::size_t i = 0; i < standard.size(); ++i) model.position_[k][standard[i]] = static_cast<long>(i);
    model.nf_[k].resize(table.size(k));
    for (std::size_t m = 0; m < table.size(k); ++m) {
      SparseVector& nf = model.nf_[k][m];
      if (model.position_[k][m] >= 0) {
        nf.entries.emplace_back(static_cast<std::uint32_t>(model.position_[k][m]), Rational(1));
        continue;
      }
      for (const auto& [c, x] : ideal.row_for_pivot(m).entries) {
        if (c == m) continue;
        nf.entries.emplace_back(static_cast<std::uint32_t>(model.position_[k][c]), -x);
      }
    }
    previous = ideal.rows();
  }

  // qbar in S^2
  const Matrix& ginv = space.gram_inverse();
  model.qbar_ = Vector(table.size(2));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) {
      Rational c = i == j ? ginv(i, i) : Rational(2 * ginv(i, j));
      if (sgn(c) != 0) model.qbar_[table.index_of({static_cast<unsigned>(i), static_cast<unsigned>(j)})] += c;
    }

  if (model.dim(top) != 1) throw std::logic_error("top degree of the model is not one-dimensional");
  Vector power = model.qbar_;
  for (unsigned e = 1; e < n; ++e) power = table.multiply(2 * e, power, 2, model.qbar_);
  Vector top_class = model.reduce(top, power);
  if (sgn(top_class[0]) == 0) throw std::logic_error("class of qbar^n vanishes in the top degree");
  model.integral_ = Vector{1 / top_class[0]};
  return model;
}

}  // namespace hkcoh
