#pragma once

// Pointwise model of a hyperkaehler manifold: M = H^n with the standard
// metric, the Kaehler forms of I, J, K and their Lefschetz, dual Lefschetz
// and Weil operators on the exterior algebra of M*.

#include <bit>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "hkcoh/exactlin.hpp"
#include "hkcoh/graded_operator.hpp"
#include "hkcoh/lefschetz.hpp"
#include "hkcoh/lie.hpp"

namespace hkcoh {

enum class Quaternion { I, J, K };

inline const char* to_string(Quaternion a) {
  switch (a) {
    case Quaternion::I: return "I";
    case Quaternion::J: return "J";
    default: return "K";
  }
}

struct QuaternionModule {
  unsigned n = 0;
  Matrix i, j, k;  // left multiplication, 4n x 4n
  Matrix g;        // metric Gram, identity in the standard basis

  std::size_t real_dim() const { return 4 * n; }
  const Matrix& complex_structure(Quaternion a) const {
    switch (a) {
      case Quaternion::I: return i;
      case Quaternion::J: return j;
      default: return k;
    }
  }
};

// Each summand H has real basis (1, i, j, k); I, J act by left
// multiplication with i, j and K = IJ.
inline QuaternionModule build_quaternion_model(unsigned n) {
  if (n < 1) throw std::invalid_argument("quaternion model needs n >= 1");
  const Matrix li{{0, -1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, -1}, {0, 0, 1, 0}};
  const Matrix lj{{0, 0, -1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}, {0, -1, 0, 0}};
  QuaternionModule m;
  m.n = n;
  const std::size_t d = 4 * n;
  m.i = Matrix(d, d);
  m.j = Matrix(d, d);
  for (unsigned s = 0; s < n; ++s)
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t c = 0; c < 4; ++c) {
        m.i(4 * s + r, 4 * s + c) = li(r, c);
        m.j(4 * s + r, 4 * s + c) = lj(r, c);
      }
  m.k = m.i * m.j;
  m.g = Matrix::identity(d);
  return m;
}

// omega_a(x, y) = g(a x, y), as the matrix W with omega(x, y) = x^T W y.
inline Matrix two_form(const QuaternionModule& m, const Matrix& a) { return a.transpose() * m.g; }
inline Matrix two_form(const QuaternionModule& m, Quaternion a) { return two_form(m, m.complex_structure(a)); }

// Exterior algebra of M* with basis e^S, S a subset of {0..4n-1} as a
// bitmask; within a degree, subsets are ordered by mask value.
class ExteriorBasis {
 public:
  explicit ExteriorBasis(unsigned dim) : dim_(dim), by_degree_(dim + 1), index_(std::size_t{1} << dim) {
    for (std::uint32_t s = 0; s < (1u << dim); ++s) {
      const unsigned p = static_cast<unsigned>(std::popcount(s));
      index_[s] = by_degree_[p].size();
      by_degree_[p].push_back(s);
    }
  }
  unsigned dim() const { return dim_; }
  std::vector<std::size_t> dims() const {
    std::vector<std::size_t> out;
    for (const auto& v : by_degree_) out.push_back(v.size());
    return out;
  }
  std::uint32_t mask(unsigned p, std::size_t i) const { return by_degree_[p][i]; }
  std::size_t index(std::uint32_t mask) const { return index_[mask]; }

  // e^i wedge e^S = sign * e^{S+i}, sign = (-1)^{#{s in S : s < i}}; 0 if i in S.
  static int wedge_sign(unsigned i, std::uint32_t s) {
    if (s & (1u << i)) return 0;
    return std::popcount(s & ((1u << i) - 1)) % 2 == 0 ? 1 : -1;
  }

 private:
  unsigned dim_;
  std::vector<std::vector<std::uint32_t>> by_degree_;
  std::vector<std::size_t> index_;
};

struct ExteriorOperators {
  unsigned n = 0;
  std::vector<std::size_t> dims;
  std::map<Quaternion, GradedOperator> l, lambda, w;
  GradedOperator theta;  // (deg - 2n) Id
};

// Wedge with the 2-form sum_{i<j} W_ij e^i e^j (W skew).
inline GradedOperator wedge_two_form(const ExteriorBasis& ext, const Matrix& w) {
  GradedOperator op(ext.dims(), 2);
  const unsigned dim = ext.dim();
  for (unsigned p = 0; p + 2 <= dim; ++p) {
    Matrix& b = op.block(p);
    for (std::size_t c = 0; c < b.cols(); ++c) {
      const std::uint32_t s = ext.mask(p, c);
      for (unsigned i = 0; i < dim; ++i)
        for (unsigned j = i + 1; j < dim; ++j) {
          if (sgn(w(i, j)) == 0) continue;
          // e^i e^j e^S = e^i (sj e^{S+j})
          const int sj = ExteriorBasis::wedge_sign(j, s);
          if (sj == 0) continue;
          const std::uint32_t t = s | (1u << j);
          const int si = ExteriorBasis::wedge_sign(i, t);
          if (si == 0) continue;
          b(ext.index(t | (1u << i)), c) += Rational(si * sj) * w(i, j);
        }
    }
  }
  return op;
}

// Derivation extension of e^i -> sum_j a_ij e^j.
inline GradedOperator derivation_extension(const ExteriorBasis& ext, const Matrix& a) {
  GradedOperator op(ext.dims(), 0);
  const unsigned dim = ext.dim();
  for (unsigned p = 0; p <= dim; ++p) {
    Matrix& b = op.block(p);
    for (std::size_t c = 0; c < b.cols(); ++c) {
      const std::uint32_t s = ext.mask(p, c);
      // replace the factor e^i (at position `pos` in S) by a_ij e^j
      unsigned pos = 0;
      for (unsigned i = 0; i < dim; ++i) {
        if (!(s & (1u << i))) continue;
        const std::uint32_t rest = s & ~(1u << i);
        for (unsigned j = 0; j < dim; ++j) {
          if (sgn(a(i, j)) == 0) continue;
          if (j != i && (rest & (1u << j))) continue;
          // e^S = (-1)^pos e^i e^rest, and e^j e^rest = wedge_sign(j, rest) e^{rest+j}
          const int sign = (pos % 2 == 0 ? 1 : -1) * ExteriorBasis::wedge_sign(j, rest);
          b(ext.index(rest | (1u << j)), c) += Rational(sign) * a(i, j);
        }
        ++pos;
      }
    }
  }
  return op;
}

inline GradedOperator transpose(const GradedOperator& op) {
  GradedOperator t(op.dims(), -op.shift());
  for (unsigned k = 0; k < op.dims().size(); ++k)
    if (op.has_block(k)) t.block(static_cast<unsigned>(static_cast<long>(k) + op.shift())) = op.block(k).transpose();
  return t;
}

inline ExteriorOperators exterior_operators(const QuaternionModule& m) {
  if (m.n > 2) throw std::invalid_argument("exterior dimension cap");
  ExteriorBasis ext(static_cast<unsigned>(m.real_dim()));
  ExteriorOperators ops;
  ops.n = m.n;
  ops.dims = ext.dims();
  for (Quaternion a : {Quaternion::I, Quaternion::J, Quaternion::K}) {
    GradedOperator l = wedge_two_form(ext, two_form(m, a));
    // the basis e^S is orthonormal for the induced metric, so the adjoint is the transpose
    ops.lambda.emplace(a, transpose(l));
    ops.l.emplace(a, std::move(l));
    ops.w.emplace(a, derivation_extension(ext, m.complex_structure(a)));
  }
  std::vector<Rational> s;
  for (std::size_t p = 0; p < ops.dims.size(); ++p) s.emplace_back(static_cast<long>(p) - 2 * static_cast<long>(m.n));
  ops.theta = GradedOperator::diagonal(ops.dims, s);
  return ops;
}

struct So41Report {
  std::map<std::string, bool> identities;
  std::size_t closure_dim = 0;
  Signature killing;
  std::vector<std::string> failures;
  bool pass() const {
    for (const auto& [name, ok] : identities)
      if (!ok) return false;
    return closure_dim == 10 && killing == Signature{4, 6, 0};
  }
};

inline So41Report verify_so41(const ExteriorOperators& ops) {
  using Q = Quaternion;
  So41Report rep;
  auto check = [&](const std::string& name, const GradedOperator& lhs, const GradedOperator& rhs) {
    bool ok = lhs == rhs;
    rep.identities[name] = ok;
    if (!ok) rep.failures.push_back(name);
  };
  const auto& l = ops.l;
  const auto& lam = ops.lambda;
  const auto& w = ops.w;
  GradedOperator zero(ops.dims, 0);
  check("[Lambda_I,L_J]=W_K", bracket(lam.at(Q::I), l.at(Q::J)), w.at(Q::K));
  check("[Lambda_J,L_K]=W_I", bracket(lam.at(Q::J), l.at(Q::K)), w.at(Q::I));
  check("[Lambda_K,L_I]=W_J", bracket(lam.at(Q::K), l.at(Q::I)), w.at(Q::J));
  check("[Lambda_I,Lambda_J]=0", bracket(lam.at(Q::I), lam.at(Q::J)), GradedOperator(ops.dims, -4));
  check("[Lambda_J,Lambda_K]=0", bracket(lam.at(Q::J), lam.at(Q::K)), GradedOperator(ops.dims, -4));
  check("[Lambda_K,Lambda_I]=0", bracket(lam.at(Q::K), lam.at(Q::I)), GradedOperator(ops.dims, -4));
  for (Q a : {Q::I, Q::J, Q::K}) {
    const std::string s = to_string(a);
    check("[L_" + s + ",Lambda_" + s + "]=theta", bracket(l.at(a), lam.at(a)), ops.theta);
    check("[theta,L_" + s + "]=2L_" + s, bracket(ops.theta, l.at(a)), Rational(2) * l.at(a));
    check("[theta,Lambda_" + s + "]=-2Lambda_" + s, bracket(ops.theta, lam.at(a)), Rational(-2) * lam.at(a));
  }

  std::vector<GradedOperator> gens;
  for (Q a : {Q::I, Q::J, Q::K}) {
    gens.push_back(l.at(a));
    gens.push_back(lam.at(a));
  }
  LieBasis closure = lie_closure(gens);
  rep.closure_dim = closure.dim();
  rep.killing = ldl_signature(killing_form(closure));
  if (rep.closure_dim != 10) rep.failures.push_back("closure_dim");
  if (!(rep.killing == Signature{4, 6, 0})) rep.failures.push_back("killing_signature");
  return rep;
}

}  // namespace hkcoh
