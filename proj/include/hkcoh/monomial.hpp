#pragma once

// Monomial bases of the symmetric powers S^k V, k = 0..max_degree.
//
// A monomial of degree k is a non-decreasing tuple of variable indices.
// Within each degree monomials are listed in lexicographic order of these
// tuples; that order is the column order used by all echelon computations.

#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "hkcoh/exactlin.hpp"

namespace hkcoh {

using Monomial = std::vector<unsigned>;

class MonomialTable {
 public:
  static constexpr unsigned kMaxDegree = 8;
  static constexpr unsigned kMaxVariables = 255;

  MonomialTable() = default;
  MonomialTable(std::size_t variables, unsigned max_degree) : variables_(variables), max_degree_(max_degree) {
    if (max_degree > kMaxDegree) throw std::invalid_argument("monomial degree above supported maximum of 8");
    if (variables > kMaxVariables) throw std::invalid_argument("too many variables for packed monomials");
    monomials_.resize(max_degree + 1);
    index_.resize(max_degree + 1);
    for (unsigned k = 0; k <= max_degree; ++k) {
      Monomial cur;
      enumerate(k, 0, cur);
      for (std::size_t i = 0; i < monomials_[k].size(); ++i) index_[k].emplace(pack(monomials_[k][i]), i);
    }
  }

  std::size_t variables() const { return variables_; }
  unsigned max_degree() const { return max_degree_; }
  std::size_t size(unsigned k) const { return monomials_.at(k).size(); }
  const Monomial& monomial(unsigned k, std::size_t i) const { return monomials_.at(k).at(i); }

  std::size_t index_of(const Monomial& sorted) const {
    auto it = index_.at(sorted.size()).find(pack(sorted));
    if (it == index_.at(sorted.size()).end()) throw std::out_of_range("monomial not in table");
    return it->second;
  }

  // Index of the product of monomial i of degree j and monomial l of degree k.
  std::size_t product_index(unsigned j, std::size_t i, unsigned k, std::size_t l) const {
    const Monomial& a = monomials_[j][i];
    const Monomial& b = monomials_[k][l];
    std::uint64_t key = 0;
    std::size_t ia = 0, ib = 0, pos = 0;
    while (ia < a.size() || ib < b.size()) {
      unsigned next;
      if (ib == b.size() || (ia < a.size() && a[ia] <= b[ib])) next = a[ia++];
      else next = b[ib++];
      key |= static_cast<std::uint64_t>(next + 1) << (8 * pos++);
    }
    return index_[j + k].at(key);
  }

  // Multiplicity of variable v in monomial i of degree k.
  static std::vector<unsigned> exponents(const Monomial& m, std::size_t variables) {
    std::vector<unsigned> e(variables, 0);
    for (unsigned v : m) ++e[v];
    return e;
  }

  // Number of distinct orderings of the tuple: k! / prod(m_v!).
  static Integer multinomial(const Monomial& m) {
    Integer r;
    mpz_fac_ui(r.get_mpz_t(), m.size());
    std::size_t i = 0;
    while (i < m.size()) {
      std::size_t j = i;
      while (j < m.size() && m[j] == m[i]) ++j;
      Integer f;
      mpz_fac_ui(f.get_mpz_t(), j - i);
      r /= f;
      i = j;
    }
    return r;
  }

  // Product of two polynomials given as coordinate vectors in S^j and S^k.
  Vector multiply(unsigned j, const Vector& a, unsigned k, const Vector& b) const {
    if (a.size() != size(j) || b.size() != size(k)) throw std::invalid_argument("polynomial length mismatch");
    Vector out(size(j + k));
    for (std::size_t x = 0; x < a.size(); ++x) {
      if (sgn(a[x]) == 0) continue;
      for (std::size_t y = 0; y < b.size(); ++y)
        if (sgn(b[y]) != 0) out[product_index(j, x, k, y)] += a[x] * b[y];
    }
    return out;
  }

 private:
  static std::uint64_t pack(const Monomial& m) {
    std::uint64_t key = 0;
    for (std::size_t p = 0; p < m.size(); ++p) key |= static_cast<std::uint64_t>(m[p] + 1) << (8 * p);
    return key;
  }

  void enumerate(unsigned remaining, unsigned start, Monomial& cur) {
    if (remaining == 0) {
      monomials_[cur.size()].push_back(cur);
      return;
    }
    for (unsigned v = start; v < variables_; ++v) {
      cur.push_back(v);
      enumerate(remaining - 1, v, cur);
      cur.pop_back();
    }
  }

  std::size_t variables_ = 0;
  unsigned max_degree_ = 0;
  std::vector<std::vector<Monomial>> monomials_;
  std::vector<std::unordered_map<std::uint64_t, std::size_t>> index_;
};

}  // namespace hkcoh
