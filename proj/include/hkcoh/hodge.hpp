#pragma once

// Rational CM-type Hodge structures of weight 2 on V, their Weil derivations,
// extension of isometries to the model algebra and transport of Weil
// derivations.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hkcoh/exactlin.hpp"
#include "hkcoh/graded_operator.hpp"
#include "hkcoh/lefschetz.hpp"
#include "hkcoh/quadspace.hpp"
#include "hkcoh/verbitsky.hpp"

namespace hkcoh {

// sigma = x + i y spans H^{2,0}; q(x) = q(y) > 0, b(x, y) = 0.
struct HodgePlane {
  Vector x;
  Vector y;

  HodgePlane swapped() const { return {y, x}; }
};

inline void validate_plane(const QuadraticSpace& space, const HodgePlane& p) {
  if (p.x.size() != space.dim() || p.y.size() != space.dim())
    throw std::invalid_argument("Hodge plane vectors have the wrong length");
  const Rational qx = space.q(p.x);
  if (qx != space.q(p.y) || sgn(space.bilinear(p.x, p.y)) != 0 || sgn(qx) <= 0)
    throw std::invalid_argument("degenerate Hodge plane");
}

// w = (2/c)(x y^T G - y x^T G), c = q(x): w x = -2y, w y = 2x, w = 0 on the
// orthogonal complement.
inline Matrix weil_derivation(const QuadraticSpace& space, const HodgePlane& p) {
  validate_plane(space, p);
  const Rational c = Rational(2) / space.q(p.x);
  const Vector gx = space.gram() * p.x;
  const Vector gy = space.gram() * p.y;
  const std::size_t d = space.dim();
  Matrix w(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) w(i, j) = c * (p.x[i] * gy[j] - p.y[i] * gx[j]);
  return w;
}

inline Matrix inverse_or_throw(const Matrix& m) {
  auto inv = inverse(m);
  if (!inv) throw std::invalid_argument("matrix is not invertible");
  return std::move(*inv);
}

inline bool is_hodge_isometry(const QuadraticSpace& space, const Matrix& phi, const HodgePlane& p1,
                              const HodgePlane& p2) {
  if (!is_isometry(space, phi)) throw std::invalid_argument("is_hodge_isometry: not an isometry");
  return phi * weil_derivation(space, p1) == weil_derivation(space, p2) * phi;
}

// The automorphism of the model induced by the symmetric powers of phi.
inline GradedOperator extend_isometry(const VerbitskyModel& model, const Matrix& phi) {
  if (!is_isometry(model.space(), phi)) throw std::invalid_argument("extend_isometry: not an isometry");
  const MonomialTable& table = model.monomials();
  const std::size_t d = model.space().dim();
  std::vector<Vector> images;  // phi e_v as polynomials of degree 1
  for (std::size_t v = 0; v < d; ++v) images.push_back(phi.col(v));
  GradedOperator psi(model.dims(), 0);
  psi.block(0)(0, 0) = 1;
  for (unsigned k = 1; k <= model.top_degree(); ++k) {
    Matrix& b = psi.block(k);
    for (std::size_t s = 0; s < model.dim(k); ++s) {
      const Monomial& mono = table.monomial(k, model.basis_monomials(k)[s]);
      Vector poly = images[mono[0]];
      for (std::size_t t = 1; t < mono.size(); ++t) poly = table.multiply(static_cast<unsigned>(t), poly, 1, images[mono[t]]);
      Vector col = model.reduce(k, poly);
      for (std::size_t r = 0; r < col.size(); ++r) b(r, s) = col[r];
    }
  }
  return psi;
}

inline GradedOperator inverse(const GradedOperator& op) {
  if (op.shift() != 0) throw std::invalid_argument("only degree-preserving operators are inverted");
  GradedOperator inv(op.dims(), 0);
  for (unsigned k = 0; k < op.dims().size(); ++k) inv.block(k) = inverse_or_throw(op.block(k));
  return inv;
}

enum class Verdict { J_certified, Jplus_certified, unknown };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::J_certified: return "J_certified";
    case Verdict::Jplus_certified: return "Jplus_certified";
    default: return "unknown";
  }
}

struct MembershipVerdict {
  Verdict verdict = Verdict::unknown;
  int det = 1;
  SquarefreeClass spinor_norm;
};

// det 1 with trivial spinor norm lies in the image of Spin; det 1 lies in SO;
// nothing is certified for det -1.
inline MembershipVerdict certify_membership(const QuadraticSpace& space, const Matrix& phi) {
  IsometryWitness w = decompose_isometry(space, phi);
  MembershipVerdict v;
  v.det = w.det;
  v.spinor_norm = w.spinor_norm;
  if (w.det == 1) v.verdict = w.spinor_norm.is_trivial() ? Verdict::J_certified : Verdict::Jplus_certified;
  return v;
}

struct TransportReport {
  bool hodge_isometry = false;
  MembershipVerdict membership;
  std::vector<unsigned> degrees_checked;
  std::vector<bool> degree_pass;
  bool transport = false;
};

inline TransportReport transport_verify(const VerbitskyModel& model, const Matrix& phi, const HodgePlane& p1,
                                        const HodgePlane& p2) {
  TransportReport rep;
  rep.hodge_isometry = is_hodge_isometry(model.space(), phi, p1, p2);
  if (!rep.hodge_isometry) throw std::invalid_argument("transport_verify: phi is not a Hodge isometry");
  rep.membership = certify_membership(model.space(), phi);
  GradedOperator psi = extend_isometry(model, phi);
  GradedOperator psi_inv = inverse(psi);
  GradedOperator w1 = so_derivation(model, weil_derivation(model.space(), p1));
  GradedOperator w2 = so_derivation(model, weil_derivation(model.space(), p2));
  GradedOperator conj = psi * w1 * psi_inv;
  rep.transport = true;
  for (unsigned k = 0; k <= model.top_degree(); ++k) {
    rep.degrees_checked.push_back(k);
    const bool ok = conj.block(k) == w2.block(k);
    rep.degree_pass.push_back(ok);
    rep.transport = rep.transport && ok;
  }
  return rep;
}

}  // namespace hkcoh
