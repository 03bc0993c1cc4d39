#pragma once

// Fujiki-type relations on the model, checked as exact polynomial identities
// by polarization over all basis multisets.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hkcoh/exactlin.hpp"
#include "hkcoh/verbitsky.hpp"

namespace hkcoh {

namespace detail {

// Hafnian of the Gram restricted to the slots of `m`: sum over perfect
// matchings of the product of b over matched pairs.
inline Rational hafnian(const Matrix& g, const std::vector<unsigned>& m) {
  if (m.empty()) return 1;
  if (m.size() % 2 != 0) return 0;
  Rational total;
  std::vector<unsigned> rest;
  for (std::size_t j = 1; j < m.size(); ++j) {
    const Rational& b = g(m[0], m[j]);
    if (sgn(b) == 0) continue;
    rest.clear();
    for (std::size_t p = 1; p < m.size(); ++p)
      if (p != j) rest.push_back(m[p]);
    total += b * hafnian(g, rest);
  }
  return total;
}

inline Integer double_factorial(long k) {
  Integer r = 1;
  for (long i = k; i > 1; i -= 2) r *= i;
  return r;
}

inline std::string multiset_string(const std::vector<unsigned>& m) {
  std::string s = "[";
  for (std::size_t i = 0; i < m.size(); ++i) s += (i ? "," : "") + std::to_string(m[i]);
  return s + "]";
}

// Sparse polynomial in a fixed number of variables, exponent vectors as keys.
class Polynomial {
 public:
  using Exponents = std::vector<std::uint8_t>;

  explicit Polynomial(std::size_t variables = 0) : vars_(variables) {}

  static Polynomial constant(std::size_t variables, const Rational& c) {
    Polynomial p(variables);
    p.add_term(Exponents(variables, 0), c);
    return p;
  }

  void add_term(const Exponents& e, const Rational& c) {
    if (sgn(c) == 0) return;
    auto [it, fresh] = terms_.emplace(e, c);
    if (!fresh) {
      it->second += c;
      if (sgn(it->second) == 0) terms_.erase(it);
    }
  }

  Polynomial& operator+=(const Polynomial& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  Polynomial scaled(const Rational& c) const {
    Polynomial p(vars_);
    if (sgn(c) == 0) return p;
    for (const auto& [e, x] : terms_) p.terms_.emplace(e, x * c);
    return p;
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial p(a.vars_);
    Exponents e(a.vars_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = static_cast<std::uint8_t>(ea[i] + eb[i]);
        p.add_term(e, ca * cb);
      }
    return p;
  }

  bool is_zero() const { return terms_.empty(); }
  const std::map<Exponents, Rational>& terms() const { return terms_; }

 private:
  std::size_t vars_;
  std::map<Exponents, Rational> terms_;
};

}  // namespace detail

struct FujikiReport {
  Rational c_n;
  bool eq22 = false;
  bool eq23 = false;
  bool eq24 = false;
  std::vector<std::string> failures;  // offending multisets / monomials
  bool pass() const { return eq22 && eq23 && eq24; }
};

// Integral of the monomial with index m in S^{2n}.
inline Rational monomial_integral(const VerbitskyModel& model, std::size_t m) {
  Vector nf = model.normal_form(model.top_degree(), m);
  return model.integral_functional()[0] * nf[0];
}

// Polynomial int[a^{2n-r} b^r] in the 2d variables (a, b).
inline detail::Polynomial mixed_integral(const VerbitskyModel& model, unsigned r) {
  const std::size_t d = model.space().dim();
  const MonomialTable& table = model.monomials();
  const unsigned top = model.top_degree();
  detail::Polynomial p(2 * d);
  detail::Polynomial::Exponents e(2 * d);
  for (std::size_t ia = 0; ia < table.size(top - r); ++ia) {
    const Monomial& ma = table.monomial(top - r, ia);
    const Integer ca = MonomialTable::multinomial(ma);
    for (std::size_t ib = 0; ib < table.size(r); ++ib) {
      const Monomial& mb = table.monomial(r, ib);
      Rational f = monomial_integral(model, table.product_index(top - r, ia, r, ib));
      if (sgn(f) == 0) continue;
      std::fill(e.begin(), e.end(), 0);
      for (unsigned v : ma) ++e[v];
      for (unsigned v : mb) ++e[d + v];
      p.add_term(e, f * Rational(ca * MonomialTable::multinomial(mb)));
    }
  }
  return p;
}

// b(u, w) as a polynomial, u and w each either the a-block or the b-block.
inline detail::Polynomial form_polynomial(const QuadraticSpace& space, bool u_is_b, bool w_is_b) {
  const std::size_t d = space.dim();
  detail::Polynomial p(2 * d);
  detail::Polynomial::Exponents e(2 * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const Rational& g = space.gram()(i, j);
      if (sgn(g) == 0) continue;
      std::fill(e.begin(), e.end(), 0);
      ++e[(u_is_b ? d : 0) + i];
      ++e[(w_is_b ? d : 0) + j];
      p.add_term(e, g);
    }
  return p;
}

// C_n from the first multiset where q^n polarizes to a nonzero value.
inline Rational fujiki_constant(const VerbitskyModel& model) {
  const Matrix& g = model.space().gram();
  const unsigned top = model.top_degree();
  const MonomialTable& table = model.monomials();
  const Rational dfact(detail::double_factorial(2 * static_cast<long>(model.n()) - 1));
  for (std::size_t m = 0; m < table.size(top); ++m) {
    Rational h = detail::hafnian(g, table.monomial(top, m));
    if (sgn(h) != 0) return monomial_integral(model, m) * dfact / h;
  }
  throw std::logic_error("q^n has no nonzero polarization");
}

inline FujikiReport fujiki_verify(const VerbitskyModel& model) {
  FujikiReport rep;
  const Matrix& g = model.space().gram();
  const unsigned n = model.n();
  const unsigned top = model.top_degree();
  const MonomialTable& table = model.monomials();
  const Rational dfact(detail::double_factorial(2 * static_cast<long>(n) - 1));

  // int[x_1 ... x_2n] = C haf / (2n-1)!!
  std::optional<Rational> c;
  std::vector<Rational> values(table.size(top));
  for (std::size_t m = 0; m < table.size(top); ++m) values[m] = monomial_integral(model, m);
  for (std::size_t m = 0; m < table.size(top) && !c; ++m) {
    Rational h = detail::hafnian(g, table.monomial(top, m));
    if (sgn(h) != 0) c = values[m] * dfact / h;
  }
  if (!c) throw std::logic_error("q^n has no nonzero polarization");
  rep.c_n = *c;
  rep.eq22 = true;
  for (std::size_t m = 0; m < table.size(top); ++m) {
    const Monomial& mono = table.monomial(top, m);
    if (values[m] * dfact != rep.c_n * detail::hafnian(g, mono)) {
      rep.eq22 = false;
      rep.failures.push_back("eq22 " + detail::multiset_string(mono));
    }
  }

  // int[a^{2n-1} b] = C q(a)^{n-1} b(a,b), polarized in a, b = e_y.
  rep.eq23 = true;
  std::vector<unsigned> rest;
  for (std::size_t m = 0; m < table.size(top - 1); ++m) {
    const Monomial& mono = table.monomial(top - 1, m);
    for (unsigned y = 0; y < model.space().dim(); ++y) {
      Rational rhs;
      for (std::size_t t = 0; t < mono.size(); ++t) {
        const Rational& b = g(mono[t], y);
        if (sgn(b) == 0) continue;
        rest.clear();
        for (std::size_t p = 0; p < mono.size(); ++p)
          if (p != t) rest.push_back(mono[p]);
        rhs += b * detail::hafnian(g, rest);
      }
      rhs *= rep.c_n / dfact;
      Rational lhs = values[table.product_index(top - 1, m, 1, y)];
      if (lhs != rhs) {
        rep.eq23 = false;
        auto full = mono;
        full.push_back(y);
        rep.failures.push_back("eq23 " + detail::multiset_string(full) + " b-slot " + std::to_string(y));
      }
    }
  }

  // (2n-1) int[a^{2n-2} b^2] = C q(a)^{n-1} q(b) on b(a,b) = 0. Substituting
  // b' = q(a) b - b(a,b) a, which satisfies b(a,b') = 0 identically, turns it
  // into the polynomial identity
  //   (2n-1)(q^2 J2 - 2 q beta J1 + beta^2 J0) = C q^n (q q(b) - beta^2)
  // with J_r = int[a^{2n-r} b^r], q = q(a), beta = b(a,b).
  const std::size_t vars = 2 * model.space().dim();
  detail::Polynomial qa = form_polynomial(model.space(), false, false);
  detail::Polynomial qb = form_polynomial(model.space(), true, true);
  detail::Polynomial beta = form_polynomial(model.space(), false, true);
  detail::Polynomial j0 = mixed_integral(model, 0);
  detail::Polynomial j1 = mixed_integral(model, 1);
  detail::Polynomial j2 = mixed_integral(model, 2);

  detail::Polynomial lhs = qa * qa * j2;
  lhs += (qa * beta * j1).scaled(-2);
  lhs += beta * beta * j0;
  lhs = lhs.scaled(Rational(2 * n - 1));

  detail::Polynomial qn = detail::Polynomial::constant(vars, 1);
  for (unsigned i = 0; i < n; ++i) qn = qn * qa;
  detail::Polynomial inner = qa * qb;
  inner += (beta * beta).scaled(-1);
  detail::Polynomial phi = lhs;
  phi += (qn * inner).scaled(-rep.c_n);
  rep.eq24 = phi.is_zero();
  if (!rep.eq24) {
    const auto& [e, coeff] = *phi.terms().begin();
    std::string s = "eq24 residual monomial a^";
    std::vector<unsigned> ea, eb;
    for (std::size_t i = 0; i < vars / 2; ++i)
      for (unsigned k = 0; k < e[i]; ++k) ea.push_back(static_cast<unsigned>(i));
    for (std::size_t i = 0; i < vars / 2; ++i)
      for (unsigned k = 0; k < e[vars / 2 + i]; ++k) eb.push_back(static_cast<unsigned>(i));
    rep.failures.push_back(s + detail::multiset_string(ea) + " b^" + detail::multiset_string(eb) + " coeff " +
                           to_string(coeff));
  }
  return rep;
}

struct ToddFujikiReport {
  std::vector<Rational> c;     // C_0 .. C_n
  std::vector<bool> identity;  // polynomial identity holds for k
  std::vector<bool> pass;      // identity holds and C_k != 0
  bool c0_positive = false;
  std::vector<std::string> failures;
};

// For t = t_0 + t_2 + ... (even model degrees only, t_0 = 1), checks
// int[a^{2k} t] = C_k q(a)^k for k = 0..n.
inline ToddFujikiReport todd_fujiki_verify(const VerbitskyModel& model, const AlgebraElement& t) {
  model.check(t);
  if (t.parts[0][0] != 1) throw std::invalid_argument("todd_fujiki_verify: degree-0 component must be 1");
  for (unsigned k = 1; k <= model.top_degree(); k += 2)
    if (!is_zero(t.parts[k])) throw std::invalid_argument("todd_fujiki_verify: t must live in even model degrees");

  const Matrix& g = model.space().gram();
  const MonomialTable& table = model.monomials();
  const unsigned n = model.n();
  ToddFujikiReport rep;
  for (unsigned k = 0; k <= n; ++k) {
    const unsigned deg = 2 * k;
    const Vector& tk = t.parts[model.top_degree() - deg];
    const Rational dfact(detail::double_factorial(2 * static_cast<long>(k) - 1));
    std::vector<Rational> values(table.size(deg));
    for (std::size_t m = 0; m < table.size(deg); ++m) {
      Vector prod = model.multiply(deg, model.normal_form(deg, m), model.top_degree() - deg, tk);
      values[m] = dot(model.integral_functional(), prod);
    }
    std::optional<Rational> ck;
    for (std::size_t m = 0; m < table.size(deg) && !ck; ++m) {
      Rational h = detail::hafnian(g, table.monomial(deg, m));
      if (sgn(h) != 0) ck = values[m] * dfact / h;
    }
    bool ok = ck.has_value();
    for (std::size_t m = 0; m < table.size(deg) && ok; ++m)
      if (values[m] * dfact != *ck * detail::hafnian(g, table.monomial(deg, m))) {
        ok = false;
        rep.failures.push_back("k=" + std::to_string(k) + " " + detail::multiset_string(table.monomial(deg, m)));
      }
    rep.c.push_back(ck.value_or(Rational(0)));
    rep.identity.push_back(ok);
    rep.pass.push_back(ok && sgn(*ck) != 0);
  }
  rep.c0_positive = sgn(rep.c[0]) > 0;
  return rep;
}

}  // namespace hkcoh
