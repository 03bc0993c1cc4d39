#pragma once

// Rational quadratic spaces (V, q), reflections, Cartan-Dieudonne
// factorization of isometries, spinor norms and the Mukai extension.
//
// Spinor norm convention: SN(tau_v) is the square class of q(v).

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hkcoh/exactlin.hpp"
#include "hkcoh/random.hpp"

namespace hkcoh {

class QuadraticSpace {
 public:
  QuadraticSpace() = default;
  explicit QuadraticSpace(Matrix gram) : gram_(std::move(gram)) {
    if (!gram_.is_square()) throw std::invalid_argument("Gram matrix must be square");
    if (!gram_.is_symmetric()) throw std::invalid_argument("Gram matrix must be symmetric");
    auto inv = inverse(gram_);
    if (!inv) throw std::invalid_argument("Gram matrix is degenerate");
    gram_inverse_ = std::move(*inv);
  }

  static QuadraticSpace diagonal(const std::vector<long>& entries) {
    Vector d;
    for (long e : entries) d.emplace_back(e);
    return QuadraticSpace(Matrix::diagonal(d));
  }

  std::size_t dim() const { return gram_.rows(); }
  const Matrix& gram() const { return gram_; }
  const Matrix& gram_inverse() const { return gram_inverse_; }

  Rational bilinear(const Vector& a, const Vector& b) const {
    if (a.size() != dim() || b.size() != dim())
      throw std::invalid_argument("bilinear: vector length does not match dimension");
    Rational s;
    for (std::size_t i = 0; i < dim(); ++i) {
      if (sgn(a[i]) == 0) continue;
      for (std::size_t j = 0; j < dim(); ++j)
        if (sgn(b[j]) != 0 && sgn(gram_(i, j)) != 0) s += a[i] * gram_(i, j) * b[j];
    }
    return s;
  }
  Rational q(const Vector& a) const { return bilinear(a, a); }

  Signature signature() const { return ldl_signature(gram_); }

  Vector basis_vector(std::size_t i) const {
    Vector e(dim());
    e.at(i) = 1;
    return e;
  }

  friend bool operator==(const QuadraticSpace& a, const QuadraticSpace& b) { return a.gram_ == b.gram_; }

 private:
  Matrix gram_;
  Matrix gram_inverse_;
};

inline Rational bilinear(const QuadraticSpace& space, const Vector& a, const Vector& b) {
  return space.bilinear(a, b);
}

inline bool is_isometry(const QuadraticSpace& space, const Matrix& phi) {
  if (phi.rows() != space.dim() || phi.cols() != space.dim()) return false;
  return phi.transpose() * space.gram() * phi == space.gram();
}

// x in so(V,q) iff x^T G + G x = 0.
inline bool is_skew(const QuadraticSpace& space, const Matrix& x) {
  if (x.rows() != space.dim() || x.cols() != space.dim()) return false;
  return (x.transpose() * space.gram() + space.gram() * x).is_zero();
}

// Basis of so(V,q): G^{-1}(E_ij - E_ji) for i < j.
inline std::vector<Matrix> so_basis(const QuadraticSpace& space) {
  const std::size_t d = space.dim();
  std::vector<Matrix> out;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      Matrix s(d, d);
      s(i, j) = 1;
      s(j, i) = -1;
      out.push_back(space.gram_inverse() * s);
    }
  return out;
}

// tau_v(x) = x - 2 b(x,v)/q(v) v
inline Matrix reflection(const QuadraticSpace& space, const Vector& v) {
  const Rational qv = space.q(v);
  if (sgn(qv) == 0) throw std::invalid_argument("isotropic reflection vector");
  const std::size_t d = space.dim();
  Vector gv = space.gram() * v;  // b(x, v) = x . Gv
  Matrix tau = Matrix::identity(d);
  const Rational c = Rational(2) / qv;
  for (std::size_t i = 0; i < d; ++i) {
    if (sgn(v[i]) == 0) continue;
    for (std::size_t j = 0; j < d; ++j)
      if (sgn(gv[j]) != 0) tau(i, j) -= c * v[i] * gv[j];
  }
  return tau;
}

inline Matrix compose_reflections(const QuadraticSpace& space, const std::vector<Vector>& vs) {
  Matrix m = Matrix::identity(space.dim());
  for (const auto& v : vs) m = m * reflection(space, v);
  return m;
}

inline SquarefreeClass spinor_norm_of_reflections(const QuadraticSpace& space, const std::vector<Vector>& vs) {
  SquarefreeClass sn;
  for (const auto& v : vs) sn = sn * squarefree_class(space.q(v));
  return sn;
}

struct IsometryWitness {
  Matrix phi;
  std::vector<Vector> reflections;  // phi = tau_{r_0} tau_{r_1} ... tau_{r_{k-1}}
  int det = 1;
  SquarefreeClass spinor_norm;
};

// Orthogonal basis of non-isotropic vectors, by Gram-Schmidt over the
// standard basis. When every remaining vector is isotropic, a pair with
// b(w_i, w_j) != 0 is replaced by w_i + w_j.
inline std::vector<Vector> orthogonal_basis(const QuadraticSpace& space) {
  const std::size_t d = space.dim();
  std::vector<Vector> pending;
  for (std::size_t i = 0; i < d; ++i) pending.push_back(space.basis_vector(i));
  std::vector<Vector> out;
  while (!pending.empty()) {
    std::optional<std::size_t> pick;
    for (std::size_t i = 0; i < pending.size() && !pick; ++i)
      if (sgn(space.q(pending[i])) != 0) pick = i;
    if (!pick) {
      for (std::size_t i = 0; i < pending.size() && !pick; ++i)
        for (std::size_t j = i + 1; j < pending.size(); ++j)
          if (sgn(space.bilinear(pending[i], pending[j])) != 0) {
            pending[i] = axpy(Rational(1), pending[j], pending[i]);
            pick = i;
            break;
          }
      if (!pick) throw std::logic_error("orthogonal_basis: form is degenerate");
    }
    Vector u = pending[*pick];
    pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(*pick));
    const Rational qu = space.q(u);
    for (auto& w : pending) {
      Rational c = space.bilinear(w, u) / qu;
      if (sgn(c) != 0) w = axpy(-c, u, w);
    }
    out.push_back(std::move(u));
  }
  return out;
}

// Multiple of v with coprime integer entries, first nonzero entry positive.
// Reflections and square classes do not see the scaling.
inline Vector primitive_integer_vector(const Vector& v) {
  Integer den = 1, num = 0;
  for (const auto& x : v) {
    if (sgn(x) == 0) continue;
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
  }
  for (const auto& x : v) {
    if (sgn(x) == 0) continue;
    Integer t = x.get_num() * (den / x.get_den());
    mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), t.get_mpz_t());
  }
  if (num == 0) return v;
  for (const auto& x : v)
    if (sgn(x) != 0) {
      if (sgn(x) < 0) num = -num;
      break;
    }
  Vector out;
  for (const auto& x : v) out.emplace_back(Rational(x * den / num));
  return out;
}

// Cartan-Dieudonne over a field of characteristic 0. Works through an
// orthogonal basis u_1..u_d of non-isotropic vectors; at each step the
// remaining isometry psi fixes u_1..u_{i-1}, and psi(u_i) is moved back to
// u_i by tau_{psi u - u}, or by tau_u tau_{psi u + u} when psi u - u is
// isotropic. All reflection vectors are orthogonal to the fixed u_j.
inline IsometryWitness decompose_isometry(const QuadraticSpace& space, const Matrix& phi) {
  if (!is_isometry(space, phi)) throw std::invalid_argument("decompose_isometry: not an isometry");
  std::vector<Vector> applied;  // psi = tau_{applied.back()} ... tau_{applied[0]} phi
  Matrix psi = phi;
  for (const auto& u : orthogonal_basis(space)) {
    Vector image = psi * u;
    if (image == u) continue;
    Vector diff = axpy(Rational(-1), u, image);
    if (sgn(space.q(diff)) != 0) {
      diff = primitive_integer_vector(diff);
      psi = reflection(space, diff) * psi;
      applied.push_back(std::move(diff));
    } else {
      Vector sum = primitive_integer_vector(axpy(Rational(1), u, image));
      psi = reflection(space, u) * (reflection(space, sum) * psi);
      applied.push_back(std::move(sum));
      applied.push_back(primitive_integer_vector(u));
    }
  }
  if (psi != Matrix::identity(space.dim())) throw std::logic_error("decompose_isometry: residual is not the identity");
  // tau_k ... tau_1 phi = 1  =>  phi = tau_1 ... tau_k
  IsometryWitness w;
  w.phi = phi;
  w.reflections = std::move(applied);
  w.det = w.reflections.size() % 2 == 0 ? 1 : -1;
  w.spinor_norm = spinor_norm_of_reflections(space, w.reflections);
  return w;
}

// Basis order (e0, e4, v_1, ..., v_d): Gram [[0,1],[1,0]] (+) G.
inline QuadraticSpace mukai_extend(const QuadraticSpace& space) {
  const std::size_t d = space.dim();
  Matrix g(d + 2, d + 2);
  g(0, 1) = 1;
  g(1, 0) = 1;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) g(i + 2, j + 2) = space.gram()(i, j);
  return QuadraticSpace(std::move(g));
}

// Every nonzero integer vector with entries in [-bound, bound] and q(v) = 0,
// up to sign (first nonzero entry positive). An empty result only means none
// exist in the box.
inline std::vector<Vector> isotropic_vectors_in_box(const QuadraticSpace& space, long bound) {
  const std::size_t d = space.dim();
  std::vector<long> cur(d, -bound);
  std::vector<Vector> out;
  while (true) {
    std::size_t first = d;
    for (std::size_t i = 0; i < d; ++i)
      if (cur[i] != 0) { first = i; break; }
    if (first < d && cur[first] > 0) {
      Vector v;
      for (long c : cur) v.emplace_back(c);
      if (sgn(space.q(v)) == 0) out.push_back(std::move(v));
    }
    std::size_t k = d;
    while (k > 0) {
      --k;
      if (cur[k] < bound) { ++cur[k]; break; }
      cur[k] = -bound;
      if (k == 0) return out;
    }
    if (d == 0) return out;
  }
}

inline Vector random_integer_vector(SeededRng& rng, std::size_t d, long bound) {
  Vector v(d);
  for (auto& x : v) x = rng.uniform(-bound, bound);
  return v;
}

inline Vector random_nonisotropic_vector(const QuadraticSpace& space, SeededRng& rng, long bound = 3) {
  while (true) {
    Vector v = random_integer_vector(rng, space.dim(), bound);
    if (sgn(space.q(v)) != 0) return v;
  }
}

// Product of `count` reflections in random small integer vectors.
inline IsometryWitness random_isometry(const QuadraticSpace& space, SeededRng& rng, std::size_t count, long bound = 3) {
  IsometryWitness w;
  for (std::size_t i = 0; i < count; ++i) w.reflections.push_back(random_nonisotropic_vector(space, rng, bound));
  w.phi = compose_reflections(space, w.reflections);
  w.det = count % 2 == 0 ? 1 : -1;
  w.spinor_norm = spinor_norm_of_reflections(space, w.reflections);
  return w;
}

}  // namespace hkcoh
