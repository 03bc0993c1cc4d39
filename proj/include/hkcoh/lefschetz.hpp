#pragma once

// Lefschetz operators on the model, their sl2 completions, derivations from
// so(V,q) and the total Lie algebra g_tot.
//
// Shifts are in model degrees: L_h has shift +1 (cohomological degree +2),
// and the grading operator acts on A_k as (2k - 2n) Id.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hkcoh/exactlin.hpp"
#include "hkcoh/graded_operator.hpp"
#include "hkcoh/lie.hpp"
#include "hkcoh/quadspace.hpp"
#include "hkcoh/verbitsky.hpp"

namespace hkcoh {

// Acts on degree k of a graded space with top degree `top` as (2k - top) Id.
inline GradedOperator weight_operator(const std::vector<std::size_t>& dims) {
  const long top = static_cast<long>(dims.size()) - 1;
  std::vector<Rational> s;
  for (long k = 0; k <= top; ++k) s.emplace_back(2 * k - top);
  return GradedOperator::diagonal(dims, s);
}

inline GradedOperator grading_operator(const VerbitskyModel& model) { return weight_operator(model.dims()); }

// Multiplication by the class c in A_j.
inline GradedOperator multiplication_operator(const VerbitskyModel& model, unsigned j, const Vector& c) {
  if (c.size() != model.dim(j)) throw std::invalid_argument("multiplication_operator: class has wrong length");
  GradedOperator op(model.dims(), static_cast<int>(j));
  const MonomialTable& table = model.monomials();
  for (unsigned k = 0; k + j <= model.top_degree(); ++k) {
    Matrix& b = op.block(k);
    Vector col(model.dim(k + j));
    for (std::size_t s = 0; s < model.dim(k); ++s) {
      std::fill(col.begin(), col.end(), Rational(0));
      for (std::size_t a = 0; a < c.size(); ++a) {
        if (sgn(c[a]) == 0) continue;
        model.add_normal_form(k + j,
                              table.product_index(j, model.basis_monomials(j)[a], k, model.basis_monomials(k)[s]),
                              c[a], col);
      }
      for (std::size_t r = 0; r < col.size(); ++r) b(r, s) = col[r];
    }
  }
  return op;
}

inline GradedOperator lefschetz_operator(const VerbitskyModel& model, const Vector& h) {
  if (h.size() != model.space().dim()) throw std::invalid_argument("lefschetz_operator: vector has wrong length");
  return multiplication_operator(model, 1, h);
}

// Block of op^e from degree k (zero-height matrix when out of range).
inline Matrix power_block(const GradedOperator& op, unsigned k, unsigned e) {
  Matrix m = Matrix::identity(op.dims()[k]);
  long deg = k;
  for (unsigned i = 0; i < e; ++i) {
    if (!op.has_block(static_cast<unsigned>(deg))) return Matrix(0, op.dims()[k]);
    m = op.block(static_cast<unsigned>(deg)) * m;
    deg += op.shift();
  }
  return m;
}

// For a shift-1 operator L on a graded space with top degree 2n: L^{2k} maps
// degree n-k isomorphically onto degree n+k for k = 0..n.
inline bool has_hard_lefschetz(const GradedOperator& l) {
  if (l.shift() != 1) throw std::invalid_argument("Lefschetz operator must have shift 1");
  const unsigned top = l.top();
  if (top % 2 != 0) return false;
  const unsigned n = top / 2;
  for (unsigned k = 0; k <= n; ++k) {
    if (l.dims()[n - k] != l.dims()[n + k]) return false;
    Matrix p = power_block(l, n - k, 2 * k);
    if (rank(p) != l.dims()[n - k]) return false;
  }
  return true;
}

inline bool has_lefschetz(const VerbitskyModel& model, const Vector& h) {
  return has_hard_lefschetz(lefschetz_operator(model, h));
}

// sl2 completion of a Lefschetz operator L (shift 1, weights 2k - top) via the
// primitive decomposition: P_m = ker L^{top-2m+1} in degree m, and
// Lambda(L^j p) = j (r - j + 1) L^{j-1} p for p in P_m, r = top - 2m.
inline GradedOperator sl2_dual(const GradedOperator& l) {
  if (l.shift() != 1) throw std::invalid_argument("Lefschetz operator must have shift 1");
  if (!has_hard_lefschetz(l)) throw std::invalid_argument("no sl2 completion");
  const auto& dims = l.dims();
  const unsigned top = l.top();
  const unsigned n = top / 2;

  // columns[k]: basis L^{k-m} p of degree k; images[k]: Lambda of those.
  std::vector<std::vector<Vector>> columns(top + 1), images(top + 1);
  for (unsigned m = 0; m <= n; ++m) {
    const unsigned r = top - 2 * m;
    std::vector<Vector> prim;
    Matrix kill = power_block(l, m, r + 1);
    if (kill.rows() == 0) {
      for (std::size_t i = 0; i < dims[m]; ++i) {
        Vector e(dims[m]);
        e[i] = 1;
        prim.push_back(std::move(e));
      }
    } else {
      prim = kernel(kill);
    }
    for (const auto& p : prim) {
      Vector prev;  // L^{j-1} p
      Vector cur = p;
      for (unsigned j = 0; j <= r; ++j) {
        const unsigned k = m + j;
        Vector img(k > 0 ? dims[k - 1] : 0);
        if (j > 0) {
          const Rational c(static_cast<long>(j * (r - j + 1)));
          for (std::size_t i = 0; i < prev.size(); ++i) img[i] = c * prev[i];
        }
        columns[k].push_back(cur);
        images[k].push_back(std::move(img));
        if (j < r) {
          prev = cur;
          cur = l.apply(k, cur);
        }
      }
    }
  }

  GradedOperator lambda(dims, -1);
  for (unsigned k = 1; k <= top; ++k) {
    if (columns[k].size() != dims[k]) throw std::logic_error("primitive decomposition has the wrong size");
    Matrix basis = Matrix::from_columns(columns[k], dims[k]);
    auto inv = inverse(basis);
    if (!inv) throw std::logic_error("primitive decomposition is not a basis");
    lambda.block(k) = Matrix::from_columns(images[k], dims[k - 1]) * *inv;
  }

  GradedOperator theta = weight_operator(dims);
  if (bracket(l, lambda) != theta) throw std::logic_error("sl2 completion failed [L, Lambda] = theta");
  return lambda;
}

inline GradedOperator dual_lefschetz(const VerbitskyModel& model, const Vector& h) {
  return sl2_dual(lefschetz_operator(model, h));
}

// Dimension of {X of shift -1 : [L, X] = 0}. Zero means the completion Lambda
// is unique. Returns nothing when the dense system would exceed max_entries.
inline std::optional<std::size_t> sl2_uniqueness_kernel_dim(const GradedOperator& l,
                                                            std::size_t max_entries = 2'000'000) {
  if (l.shift() != 1) throw std::invalid_argument("Lefschetz operator must have shift 1");
  const auto& dims = l.dims();
  const unsigned top = l.top();
  std::vector<std::size_t> uoff(top + 2, 0);  // unknown offsets for X_k: A_k -> A_{k-1}, k >= 1
  for (unsigned k = 1; k <= top; ++k) uoff[k + 1] = uoff[k] + dims[k - 1] * dims[k];
  const std::size_t unknowns = uoff[top + 1];
  std::size_t equations = 0;
  for (auto x : dims) equations += x * x;
  if (unknowns == 0) return 0;
  if (equations * unknowns > max_entries) return std::nullopt;

  // [L,X] on degree k: L_{k-1} X_k - X_{k+1} L_k
  Matrix sys(equations, unknowns);
  std::size_t row = 0;
  for (unsigned k = 0; k <= top; ++k) {
    for (std::size_t i = 0; i < dims[k]; ++i)
      for (std::size_t j = 0; j < dims[k]; ++j, ++row) {
        if (k >= 1) {
          const Matrix& lk = l.block(k - 1);
          for (std::size_t a = 0; a < dims[k - 1]; ++a)
            if (sgn(lk(i, a)) != 0) sys(row, uoff[k] + a * dims[k] + j) += lk(i, a);
        }
        if (k + 1 <= top) {
          const Matrix& lk = l.block(k);
          for (std::size_t b = 0; b < dims[k + 1]; ++b)
            if (sgn(lk(b, j)) != 0) sys(row, uoff[k + 1] + i * dims[k + 1] + b) -= lk(b, j);
        }
      }
  }
  return unknowns - rank(sys);
}

// Degree-0 derivation of the model extending x on A_1 and killing the unit.
inline GradedOperator so_derivation(const VerbitskyModel& model, const Matrix& x) {
  if (!is_skew(model.space(), x)) throw std::invalid_argument("so_derivation: x is not skew for the form");
  const MonomialTable& table = model.monomials();
  GradedOperator op(model.dims(), 0);
  Monomial rest;
  for (unsigned k = 1; k <= model.top_degree(); ++k) {
    Matrix& b = op.block(k);
    Vector col(model.dim(k));
    for (std::size_t s = 0; s < model.dim(k); ++s) {
      std::fill(col.begin(), col.end(), Rational(0));
      const Monomial& mono = table.monomial(k, model.basis_monomials(k)[s]);
      for (std::size_t t = 0; t < mono.size(); ++t) {
        rest.clear();
        for (std::size_t p = 0; p < mono.size(); ++p)
          if (p != t) rest.push_back(mono[p]);
        const std::size_t ri = table.index_of(rest);
        for (std::size_t a = 0; a < x.rows(); ++a) {
          const Rational& c = x(a, mono[t]);
          if (sgn(c) == 0) continue;
          model.add_normal_form(k, table.product_index(1, a, k - 1, ri), c, col);
        }
      }
      for (std::size_t r = 0; r < col.size(); ++r) b(r, s) = col[r];
    }
  }
  return op;
}

// d vectors with the Lefschetz property spanning V: coordinate vectors first,
// then e_i + e_j, then e_i - e_j, keeping a candidate when it is Lefschetz and
// independent of those already kept.
inline std::vector<Vector> lefschetz_generators(const VerbitskyModel& model) {
  const std::size_t d = model.space().dim();
  std::vector<Vector> candidates;
  for (std::size_t i = 0; i < d; ++i) candidates.push_back(model.space().basis_vector(i));
  for (int sign : {1, -1})
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j) {
        Vector v = model.space().basis_vector(i);
        v[j] = sign;
        candidates.push_back(std::move(v));
      }
  EchelonSpan span(d);
  std::vector<Vector> out;
  for (const auto& v : candidates) {
    if (out.size() == d) break;
    if (span.contains(v)) continue;
    if (!has_lefschetz(model, v)) continue;
    span.insert(v);
    out.push_back(v);
  }
  if (out.size() != d) throw std::logic_error("no spanning set of Lefschetz classes found");
  return out;
}

struct SL2Triple {
  Vector h;
  GradedOperator l;
  GradedOperator lambda;
};

inline std::vector<SL2Triple> sl2_triples(const VerbitskyModel& model, const std::vector<Vector>& hs) {
  std::vector<SL2Triple> out;
  for (const auto& h : hs) {
    GradedOperator l = lefschetz_operator(model, h);
    GradedOperator lambda = sl2_dual(l);
    out.push_back({h, std::move(l), std::move(lambda)});
  }
  return out;
}

// Generators theta, L_h, Lambda_h of g_tot.
inline std::vector<GradedOperator> gtot_generators(const VerbitskyModel& model, const std::vector<SL2Triple>& triples) {
  std::vector<GradedOperator> gens{grading_operator(model)};
  for (const auto& t : triples) gens.push_back(t.l);
  for (const auto& t : triples) gens.push_back(t.lambda);
  return gens;
}

struct GtotReport {
  std::size_t dim = 0;
  std::size_t expected_dim = 0;
  std::vector<std::size_t> grading_dims;  // shifts -1, 0, +1
  std::vector<std::size_t> expected_grading;
  bool dim_ok = false;
  bool grading_ok = false;
  bool commuting_duals = false;
  bool abelian_parts = false;
  bool derivation_check = false;
  std::optional<Signature> killing;
  std::optional<Signature> expected_killing;
  bool killing_ok = true;
  std::vector<std::string> failures;

  bool pass() const {
    return dim_ok && grading_ok && commuting_duals && abelian_parts && derivation_check && killing_ok;
  }
};

inline GtotReport verify_gtot_structure(const LieBasis& basis, const VerbitskyModel& model,
                                        const std::vector<SL2Triple>& triples, bool with_killing) {
  GtotReport rep;
  const std::size_t d = model.space().dim();
  rep.dim = basis.dim();
  rep.expected_dim = (d + 2) * (d + 1) / 2;
  rep.dim_ok = rep.dim == rep.expected_dim;
  if (!rep.dim_ok) rep.failures.push_back("dim");

  auto gd = basis.grading_dims();
  for (int s : {-1, 0, 1}) rep.grading_dims.push_back(gd.count(s) ? gd[s] : 0);
  rep.expected_grading = {d, d * (d - 1) / 2 + 1, d};
  std::size_t counted = 0;
  for (const auto& [s, c] : gd) counted += c;
  rep.grading_ok = rep.grading_dims == rep.expected_grading && counted == rep.dim;
  if (!rep.grading_ok) rep.failures.push_back("grading_dims");

  rep.commuting_duals = true;
  for (std::size_t i = 0; i < triples.size() && rep.commuting_duals; ++i)
    for (std::size_t j = i + 1; j < triples.size(); ++j)
      if (!bracket(triples[i].lambda, triples[j].lambda).is_zero()) {
        rep.commuting_duals = false;
        rep.failures.push_back("commuting_duals " + std::to_string(i) + "," + std::to_string(j));
        break;
      }

  std::vector<const GradedOperator*> plus, minus;
  for (const auto& x : basis.elements()) {
    if (x.shift() == 1) plus.push_back(&x);
    if (x.shift() == -1) minus.push_back(&x);
  }
  rep.abelian_parts = true;
  for (const auto* part : {&plus, &minus})
    for (std::size_t i = 0; i < part->size() && rep.abelian_parts; ++i)
      for (std::size_t j = i + 1; j < part->size(); ++j)
        if (!bracket(*(*part)[i], *(*part)[j]).is_zero()) {
          rep.abelian_parts = false;
          rep.failures.push_back("abelian_parts");
          break;
        }

  rep.derivation_check = true;
  for (const auto& x : so_basis(model.space())) {
    GradedOperator dx = so_derivation(model, x);
    if (!basis.contains(dx)) {
      rep.derivation_check = false;
      rep.failures.push_back("derivation_check");
      break;
    }
  }

  if (with_killing) {
    rep.killing = ldl_signature(killing_form(basis));
    Signature sig = model.space().signature();
    const std::size_t p = sig.plus + 1, m = sig.minus + 1;
    rep.expected_killing = Signature{p * m, p * (p - 1) / 2 + m * (m - 1) / 2, 0};
    rep.killing_ok = *rep.killing == *rep.expected_killing;
    if (!rep.killing_ok) rep.failures.push_back("killing_signature");
  }
  return rep;
}

}  // namespace hkcoh
