#pragma once

// Exact rational linear algebra: dense matrices over Q, reduced row echelon
// form, kernels, linear solves, symmetric signatures and square classes.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

namespace hkcoh {

using Rational = mpq_class;
using Integer = mpz_class;
using Vector = std::vector<Rational>;

// ---------------------------------------------------------------------------
// Rational <-> string ("p/q" in lowest terms, q > 0; integers print bare)

inline std::string to_string(const Rational& r) { return r.get_str(); }

// p/q in lowest terms. mpq_class(p, q) alone does not canonicalize.
inline Rational ratio(long p, long q) {
  if (q == 0) throw std::invalid_argument("zero denominator");
  Rational r(p, q);
  r.canonicalize();
  return r;
}

inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == ' '; }), s.end());
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  auto slash = s.find('/');
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  auto valid_int = [](const std::string& t, bool allow_sign) {
    if (t.empty()) return false;
    std::size_t i = 0;
    if (allow_sign && (t[0] == '-' || t[0] == '+')) i = 1;
    if (i == t.size()) return false;
    return std::all_of(t.begin() + static_cast<std::ptrdiff_t>(i), t.end(),
                       [](char c) { return c >= '0' && c <= '9'; });
  };
  if (!valid_int(num, true) || !valid_int(den, false))
    throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
  if (num[0] == '+') num.erase(0, 1);
  Integer p(num, 10), q(den, 10);
  if (q == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  Rational r(p, q);
  r.canonicalize();
  return r;
}

// ---------------------------------------------------------------------------
// Dense matrix

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::initializer_list<std::initializer_list<Rational>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw std::invalid_argument("ragged matrix initializer");
      for (const auto& x : row) data_.push_back(x);
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }
  static Matrix diagonal(const Vector& d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }
  static Matrix column(const Vector& v) {
    Matrix m(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
    return m;
  }
  static Matrix from_columns(const std::vector<Vector>& cols, std::size_t rows) {
    Matrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != rows) throw std::invalid_argument("column length mismatch");
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  const std::vector<Rational>& data() const { return data_; }

  Vector row(std::size_t i) const {
    return Vector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                  data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }
  Vector col(std::size_t j) const {
    Vector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Rational& x) { return sgn(x) == 0; });
  }
  bool is_square() const { return rows_ == cols_; }
  bool is_symmetric() const {
    if (!is_square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i + 1; j < cols_; ++j)
        if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
  }
  std::size_t nonzeros() const {
    return static_cast<std::size_t>(
        std::count_if(data_.begin(), data_.end(), [](const Rational& x) { return sgn(x) != 0; }));
  }

  Matrix& operator+=(const Matrix& o) {
    check_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k)
      if (sgn(o.data_[k]) != 0) data_[k] += o.data_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k)
      if (sgn(o.data_[k]) != 0) data_[k] -= o.data_[k];
    return *this;
  }
  Matrix& operator*=(const Rational& c) {
    for (auto& x : data_)
      if (sgn(x) != 0) x *= c;
    return *this;
  }
  // this += c * o
  void add_scaled(const Rational& c, const Matrix& o) {
    check_same_shape(o);
    if (sgn(c) == 0) return;
    for (std::size_t k = 0; k < data_.size(); ++k)
      if (sgn(o.data_[k]) != 0) data_[k] += c * o.data_[k];
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator-(Matrix a) {
    for (auto& x : a.data_) x = -x;
    return a;
  }
  friend Matrix operator*(const Rational& c, Matrix a) { return a *= c; }

  // Zero entries of either factor are skipped; most operators here are sparse.
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product dimension mismatch");
    Matrix c(a.rows_, b.cols_);
    if (a.rows_ == 0 || b.cols_ == 0) return c;
    // Column index lists of nonzeros per row of b.
    std::vector<std::vector<std::size_t>> nz(b.rows_);
    for (std::size_t k = 0; k < b.rows_; ++k)
      for (std::size_t j = 0; j < b.cols_; ++j)
        if (sgn(b(k, j)) != 0) nz[k].push_back(j);
    Rational t;
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Rational& x = a(i, k);
        if (sgn(x) == 0) continue;
        for (std::size_t j : nz[k]) {
          t = x * b(k, j);
          c(i, j) += t;
        }
      }
    }
    return c;
  }

  friend Vector operator*(const Matrix& a, const Vector& v) {
    if (a.cols_ != v.size()) throw std::invalid_argument("matrix-vector dimension mismatch");
    Vector out(a.rows_);
    for (std::size_t j = 0; j < a.cols_; ++j) {
      if (sgn(v[j]) == 0) continue;
      for (std::size_t i = 0; i < a.rows_; ++i)
        if (sgn(a(i, j)) != 0) out[i] += a(i, j) * v[j];
    }
    return out;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

 private:
  void check_same_shape(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

inline Rational dot(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot product length mismatch");
  Rational s;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (sgn(a[i]) != 0 && sgn(b[i]) != 0) s += a[i] * b[i];
  return s;
}

inline bool is_zero(const Vector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return sgn(x) == 0; });
}

inline Vector axpy(const Rational& c, const Vector& x, Vector y) {
  if (x.size() != y.size()) throw std::invalid_argument("axpy length mismatch");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (sgn(x[i]) != 0) y[i] += c * x[i];
  return y;
}

// ---------------------------------------------------------------------------
// Row reduction

struct Echelon {
  Matrix reduced;                  // reduced row echelon form, zero rows at the bottom
  std::vector<std::size_t> pivots; // pivot column of row i, i < rank
  std::size_t rank() const { return pivots.size(); }
};

// Gauss-Jordan elimination. Pivot row for each column is the candidate with
// the largest |numerator|, ties broken by the smaller row index.
inline Echelon rref(Matrix m) {
  Echelon e;
  const std::size_t rows = m.rows(), cols = m.cols();
  std::size_t r = 0;
  Rational factor;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t best = rows;
    for (std::size_t i = r; i < rows; ++i) {
      if (sgn(m(i, c)) == 0) continue;
      if (best == rows || mpz_cmpabs(m(i, c).get_num_mpz_t(), m(best, c).get_num_mpz_t()) > 0) best = i;
    }
    if (best == rows) continue;
    if (best != r)
      for (std::size_t j = 0; j < cols; ++j) std::swap(m(r, j), m(best, j));
    Rational inv = 1 / m(r, c);
    for (std::size_t j = c; j < cols; ++j)
      if (sgn(m(r, j)) != 0) m(r, j) *= inv;
    std::vector<std::size_t> support;
    for (std::size_t j = c; j < cols; ++j)
      if (sgn(m(r, j)) != 0) support.push_back(j);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || sgn(m(i, c)) == 0) continue;
      factor = m(i, c);
      for (std::size_t j : support) m(i, j) -= factor * m(r, j);
    }
    e.pivots.push_back(c);
    ++r;
  }
  e.reduced = std::move(m);
  return e;
}

inline std::size_t rank(const Matrix& m) { return rref(m).rank(); }

// Kernel basis from the reduced echelon form: one vector per free column,
// with a 1 in that column.
inline std::vector<Vector> kernel(const Matrix& m) {
  Echelon e = rref(m);
  const std::size_t cols = m.cols();
  std::vector<bool> is_pivot(cols, false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<Vector> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    Vector v(cols);
    v[f] = 1;
    for (std::size_t i = 0; i < e.rank(); ++i) v[e.pivots[i]] = -e.reduced(i, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

// One solution of m x = b with free variables set to zero, or nullopt.
inline std::optional<Vector> solve_linear(const Matrix& m, const Vector& b) {
  if (b.size() != m.rows()) throw std::invalid_argument("solve_linear: right-hand side length mismatch");
  Matrix aug(m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b[i];
  }
  Echelon e = rref(std::move(aug));
  if (!e.pivots.empty() && e.pivots.back() == m.cols()) return std::nullopt;
  Vector x(m.cols());
  for (std::size_t i = 0; i < e.rank(); ++i) x[e.pivots[i]] = e.reduced(i, m.cols());
  return x;
}

inline std::optional<Matrix> inverse(const Matrix& m) {
  if (!m.is_square()) throw std::invalid_argument("inverse of non-square matrix");
  const std::size_t n = m.rows();
  Matrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  Echelon e = rref(std::move(aug));
  if (e.rank() < n || e.pivots[n - 1] != n - 1) return std::nullopt;
  Matrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = e.reduced(i, n + j);
  return inv;
}

inline Rational determinant(Matrix m) {
  if (!m.is_square()) throw std::invalid_argument("determinant of non-square matrix");
  const std::size_t n = m.rows();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(m(p, c)) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
      det = -det;
    }
    det *= m(c, c);
    Rational inv = 1 / m(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (sgn(m(i, c)) == 0) continue;
      Rational f = m(i, c) * inv;
      for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return det;
}

// ---------------------------------------------------------------------------
// Signature by symmetric elimination

struct Signature {
  std::size_t plus = 0;
  std::size_t minus = 0;
  std::size_t zero = 0;
  friend bool operator==(const Signature&, const Signature&) = default;
};

// Congruence diagonalization. A nonzero diagonal pivot is preferred (largest
// |numerator|, then smallest index). When the remaining diagonal vanishes, a
// nonzero s_ij spans a hyperbolic 2x2 block; the basis change e_i -> e_i + e_j
// puts 2 s_ij on the diagonal and the block then yields one positive and one
// negative pivot.
inline Signature ldl_signature(const Matrix& s) {
  if (!s.is_symmetric()) throw std::invalid_argument("ldl_signature: matrix is not symmetric");
  Matrix a = s;
  std::vector<std::size_t> alive(a.rows());
  for (std::size_t i = 0; i < alive.size(); ++i) alive[i] = i;
  Signature sig;

  auto eliminate_with = [&](std::size_t p) {
    // a <- a - a[:,p] a[p,:] / a[p,p] on the remaining indices
    Rational inv = 1 / a(p, p);
    for (std::size_t i : alive) {
      if (i == p || sgn(a(i, p)) == 0) continue;
      Rational f = a(i, p) * inv;
      for (std::size_t j : alive)
        if (j != p && sgn(a(p, j)) != 0) a(i, j) -= f * a(p, j);
    }
    alive.erase(std::find(alive.begin(), alive.end(), p));
  };

  while (!alive.empty()) {
    std::size_t best = a.rows();
    for (std::size_t i : alive) {
      if (sgn(a(i, i)) == 0) continue;
      if (best == a.rows() || mpz_cmpabs(a(i, i).get_num_mpz_t(), a(best, best).get_num_mpz_t()) > 0) best = i;
    }
    if (best != a.rows()) {
      (sgn(a(best, best)) > 0 ? sig.plus : sig.minus) += 1;
      eliminate_with(best);
      continue;
    }
    // All remaining diagonal entries vanish.
    std::size_t bi = a.rows(), bj = a.rows();
    for (std::size_t i : alive) {
      for (std::size_t j : alive)
        if (j > i && sgn(a(i, j)) != 0) { bi = i; bj = j; break; }
      if (bi != a.rows()) break;
    }
    if (bi == a.rows()) {
      sig.zero += alive.size();
      break;
    }
    // Change of basis e_i -> e_i + e_j makes the (i,i) entry 2 a_ij != 0.
    for (std::size_t k : alive) {
      if (k == bi) continue;
      a(bi, k) += a(bj, k);
      a(k, bi) = a(bi, k);
    }
    a(bi, bi) = 2 * a(bi, bj);
  }
  return sig;
}

// ---------------------------------------------------------------------------
// Square classes Q^x / (Q^x)^2

namespace detail {

inline void pollard_factor(const Integer& n, std::vector<Integer>& out, unsigned seed = 1) {
  if (n == 1) return;
  if (mpz_probab_prime_p(n.get_mpz_t(), 40) > 0) {
    out.push_back(n);
    return;
  }
  if (mpz_perfect_square_p(n.get_mpz_t())) {
    Integer r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    pollard_factor(r, out, seed);
    pollard_factor(r, out, seed);
    return;
  }
  // Brent's variant of Pollard rho.
  for (unsigned c = seed;; ++c) {
    Integer x = 2, y = 2, d = 1;
    auto f = [&](const Integer& v) {
      Integer t = v * v + c;
      mpz_mod(t.get_mpz_t(), t.get_mpz_t(), n.get_mpz_t());
      return t;
    };
    while (d == 1) {
      x = f(x);
      y = f(f(y));
      Integer diff = abs(x - y);
      mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
    }
    if (d != n) {
      pollard_factor(d, out, c + 1);
      pollard_factor(Integer(n / d), out, c + 1);
      return;
    }
  }
}

// Squarefree kernel of a positive integer: product of primes with odd exponent.
inline Integer squarefree_kernel(Integer n) {
  if (n <= 0) throw std::invalid_argument("squarefree_kernel expects a positive integer");
  Integer result = 1;
  auto strip = [&](unsigned long p) {
    unsigned e = 0;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
      ++e;
    }
    if (e % 2 == 1) result *= p;
  };
  strip(2);
  for (unsigned long p = 3; p < 100000; p += 2) {
    if (n == 1) break;
    Integer pp = Integer(p) * p;
    if (pp > n) break;
    strip(p);
  }
  if (n == 1) return result;
  std::vector<Integer> primes;
  pollard_factor(n, primes);
  std::sort(primes.begin(), primes.end());
  for (std::size_t i = 0; i < primes.size();) {
    std::size_t j = i;
    while (j < primes.size() && primes[j] == primes[i]) ++j;
    if ((j - i) % 2 == 1) result *= primes[i];
    i = j;
  }
  return result;
}

}  // namespace detail

// A class in Q^x/(Q^x)^2, stored as its signed squarefree representative.
class SquarefreeClass {
 public:
  SquarefreeClass() = default;
  // rep must already be a nonzero squarefree integer.
  static SquarefreeClass from_squarefree(Integer rep) {
    if (rep == 0) throw std::invalid_argument("square class representative must be nonzero");
    SquarefreeClass c;
    c.rep_ = std::move(rep);
    return c;
  }

  const Integer& representative() const { return rep_; }
  bool is_trivial() const { return rep_ == 1; }
  std::string to_string() const { return rep_.get_str(); }

  // s*t / gcd(s,t)^2 is squarefree when s and t are.
  friend SquarefreeClass operator*(const SquarefreeClass& a, const SquarefreeClass& b) {
    Integer g;
    mpz_gcd(g.get_mpz_t(), a.rep_.get_mpz_t(), b.rep_.get_mpz_t());
    Integer prod = a.rep_ * b.rep_;
    prod /= g * g;
    return from_squarefree(prod);
  }
  friend bool operator==(const SquarefreeClass&, const SquarefreeClass&) = default;

 private:
  Integer rep_ = 1;
};

inline SquarefreeClass squarefree_class(const Rational& r) {
  if (sgn(r) == 0) throw std::invalid_argument("squarefree_class: zero has no square class");
  // p/q and p*q differ by the square q^2.
  Integer n = abs(r.get_num()) * r.get_den();
  Integer k = detail::squarefree_kernel(n);
  return SquarefreeClass::from_squarefree(sgn(r) < 0 ? Integer(-k) : k);
}

// ---------------------------------------------------------------------------
// Incremental span with exact membership

// Maintains the reduced echelon form of a growing set of independent vectors
// together with the change of basis back to the inserted vectors, so that
// members can be expressed in the original generators.
class EchelonSpan {
 public:
  explicit EchelonSpan(std::size_t length) : length_(length) {}

  std::size_t length() const { return length_; }
  std::size_t dim() const { return rows_.size(); }

  // Returns true and records v when v is independent of the current span.
  bool insert(const Vector& v) {
    auto [residual, coeffs] = reduce(v);
    auto lead = first_nonzero(residual);
    if (!lead) return false;
    const std::size_t k = rows_.size();
    coeffs.resize(k + 1);
    coeffs[k] = 1;
    Rational inv = 1 / residual[*lead];
    for (auto& x : residual) if (sgn(x) != 0) x *= inv;
    for (auto& x : coeffs) if (sgn(x) != 0) x *= inv;
    for (auto& row : transform_) row.resize(k + 1);
    for (std::size_t i = 0; i < k; ++i) {
      Rational f = rows_[i][*lead];
      if (sgn(f) == 0) continue;
      rows_[i] = axpy(-f, residual, std::move(rows_[i]));
      transform_[i] = axpy(-f, coeffs, std::move(transform_[i]));
    }
    rows_.push_back(std::move(residual));
    transform_.push_back(std::move(coeffs));
    pivots_.push_back(*lead);
    return true;
  }

  bool contains(const Vector& v) const { return !first_nonzero(reduce(v).first); }

  // Coefficients of v in the inserted (original) vectors, if v is in the span.
  std::optional<Vector> coordinates(const Vector& v) const {
    auto [residual, coeffs] = reduce(v);
    if (first_nonzero(residual)) return std::nullopt;
    // reduce() gives v - sum c_i row_i, with row_i = sum T_ij orig_j, and the
    // subtraction coefficients are returned negated in coeffs.
    Vector out(rows_.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = -coeffs[j];
    return out;
  }

  const std::vector<std::size_t>& pivots() const { return pivots_; }

 private:
  // Returns (residual, accumulated coefficient vector in original generators
  // of what was added to v). residual = v + sum coeffs_j orig_j.
  std::pair<Vector, Vector> reduce(const Vector& v) const {
    if (v.size() != length_) throw std::invalid_argument("EchelonSpan: vector length mismatch");
    Vector residual = v;
    Vector coeffs(rows_.size());
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const Rational f = residual[pivots_[i]];
      if (sgn(f) == 0) continue;
      residual = axpy(-f, rows_[i], std::move(residual));
      coeffs = axpy(-f, transform_[i], std::move(coeffs));
    }
    return {std::move(residual), std::move(coeffs)};
  }

  static std::optional<std::size_t> first_nonzero(const Vector& v) {
    for (std::size_t i = 0; i < v.size(); ++i)
      if (sgn(v[i]) != 0) return i;
    return std::nullopt;
  }

  std::size_t length_;
  std::vector<Vector> rows_;
  std::vector<Vector> transform_;
  std::vector<std::size_t> pivots_;
};

}  // namespace hkcoh
