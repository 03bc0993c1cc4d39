#include <gtest/gtest.h>

#include "hkcoh/lefschetz.hpp"
#include "hkcoh/lie.hpp"
#include "hkcoh/random.hpp"

using namespace hkcoh;

namespace {

QuadraticSpace diag(std::vector<long> d) { return QuadraticSpace::diagonal(d); }

// Solves [L, X] = theta for X of shift -1 as one dense linear system,
// unknowns ordered block by block (X_k : A_k -> A_{k-1}) in row-major order.
std::optional<GradedOperator> solve_dual_dense(const GradedOperator& l) {
  const auto& dims = l.dims();
  const unsigned top = l.top();
  std::vector<std::size_t> off(top + 2, 0);
  for (unsigned k = 1; k <= top; ++k) off[k + 1] = off[k] + dims[k - 1] * dims[k];
  std::size_t eqs = 0;
  for (auto x : dims) eqs += x * x;
  Matrix sys(eqs, off[top + 1]);
  Vector rhs(eqs);
  std::size_t row = 0;
  for (unsigned k = 0; k <= top; ++k)
    for (std::size_t i = 0; i < dims[k]; ++i)
      for (std::size_t j = 0; j < dims[k]; ++j, ++row) {
        if (i == j) rhs[row] = 2 * static_cast<long>(k) - static_cast<long>(top);
        // (L X)_{ij} on A_k: sum_a L_{k-1}(i,a) X_k(a,j)
        if (k >= 1)
          for (std::size_t a = 0; a < dims[k - 1]; ++a) sys(row, off[k] + a * dims[k] + j) += l.block(k - 1)(i, a);
        // (X L)_{ij}: sum_b X_{k+1}(i,b) L_k(b,j)
        if (k < top)
          for (std::size_t b = 0; b < dims[k + 1]; ++b) sys(row, off[k + 1] + i * dims[k + 1] + b) -= l.block(k)(b, j);
      }
  auto sol = solve_linear(sys, rhs);
  if (!sol) return std::nullopt;
  GradedOperator x(dims, -1);
  for (unsigned k = 1; k <= top; ++k)
    for (std::size_t a = 0; a < dims[k - 1]; ++a)
      for (std::size_t j = 0; j < dims[k]; ++j) x.block(k)(a, j) = (*sol)[off[k] + a * dims[k] + j];
  return x;
}

LieBasis closure_for(const VerbitskyModel& m, const std::vector<Vector>& hs) {
  return lie_closure(gtot_generators(m, sl2_triples(m, hs)));
}

}  // namespace

TEST(Grading, Eigenvalues) {
  auto m = build_model(diag({1, 1, 1}), 1);
  auto t = grading_operator(m);
  EXPECT_EQ(t.block(0), Matrix::diagonal({-2}));
  EXPECT_EQ(t.block(1), Rational(0) * Matrix::identity(3));
  EXPECT_EQ(t.block(2), Matrix::diagonal({2}));
  auto m2 = build_model(diag({1, 1, 1, 1, 1}), 2);
  auto t2 = grading_operator(m2);
  for (unsigned k = 0; k <= 4; ++k) EXPECT_EQ(t2.block(k), Rational(2 * static_cast<int>(k) - 4) * Matrix::identity(m2.dim(k)));
  EXPECT_EQ(t2.trace(), 0);
}

TEST(Lefschetz, OperatorExamples) {
  auto m = build_model(diag({1, 1, 1}), 1);
  auto l = lefschetz_operator(m, {1, 0, 0});
  EXPECT_EQ(l.apply(0, {1}), (Vector{1, 0, 0}));
  // e1^2 = qbar/3 in A_2
  Vector third = m.qbar_class().parts[2];
  for (auto& x : third) x /= 3;
  EXPECT_EQ(l.apply(1, {1, 0, 0}), third);
  EXPECT_TRUE(l.apply(2, {1}).empty());
  EXPECT_EQ(bracket(grading_operator(m), l), Rational(2) * l);
}

TEST(Lefschetz, Property) {
  SeededRng rng(67);
  auto s = diag({1, -1, 1});
  for (unsigned n : {1u, 2u}) {
    auto m = build_model(s, n);
    for (int t = 0; t < 10; ++t) {
      Vector h = random_nonisotropic_vector(s, rng);
      EXPECT_TRUE(has_lefschetz(m, h));
    }
    for (const auto& a : isotropic_vectors_in_box(s, 2)) EXPECT_FALSE(has_lefschetz(m, a));
    EXPECT_FALSE(has_lefschetz(m, Vector(3)));
  }
}

TEST(DualLefschetz, WorkedExample) {
  auto m = build_model(diag({1, 1, 1}), 1);
  auto lam = dual_lefschetz(m, {1, 0, 0});
  EXPECT_EQ(lam.apply(1, {1, 0, 0}), (Vector{2}));
  EXPECT_EQ(lam.apply(1, {0, 1, 0}), (Vector{0}));
  EXPECT_EQ(lam.apply(1, {0, 0, 1}), (Vector{0}));
  EXPECT_EQ(lam.apply(2, m.qbar_class().parts[2]), (Vector{6, 0, 0}));
  try {
    dual_lefschetz(build_model(diag({1, -1, 1}), 1), {1, 1, 0});
    FAIL() << "expected a throw";
  } catch (const std::invalid_argument& e) {
    EXPECT_STREQ(e.what(), "no sl2 completion");
  }
}

TEST(DualLefschetz, MatchesDenseSolveAndIsUnique) {
  SeededRng rng(71);
  std::vector<std::pair<QuadraticSpace, unsigned>> cases{{diag({1, 1, 1}), 1},
                                                         {diag({1, -1, 1, 2}), 2},
                                                         {QuadraticSpace(Matrix{{2, 1, 0}, {1, -1, 0}, {0, 0, 3}}), 2},
                                                         {diag({1, 1, 1, 1, 1}), 2}};
  for (const auto& [s, n] : cases) {
    auto m = build_model(s, n);
    for (int t = 0; t < 3; ++t) {
      Vector h = random_nonisotropic_vector(s, rng);
      auto l = lefschetz_operator(m, h);
      auto lam = sl2_dual(l);
      auto oracle = solve_dual_dense(l);
      ASSERT_TRUE(oracle.has_value());
      EXPECT_EQ(lam, *oracle);
      auto theta = grading_operator(m);
      EXPECT_EQ(bracket(l, lam), theta);
      EXPECT_EQ(bracket(theta, lam), Rational(-2) * lam);
      EXPECT_EQ(bracket(theta, l), Rational(2) * l);
      auto kd = sl2_uniqueness_kernel_dim(l);
      ASSERT_TRUE(kd.has_value());
      EXPECT_EQ(*kd, 0u);
    }
  }
}

TEST(DualLefschetz, InverseScaling) {
  auto m = build_model(diag({1, -1, 1, 2}), 2);
  Vector h{1, 0, 2, 1};
  auto lam = dual_lefschetz(m, h);
  for (Rational c : {Rational(3), ratio(-2, 5)}) {
    Vector ch = h;
    for (auto& x : ch) x *= c;
    EXPECT_EQ(dual_lefschetz(m, ch), (1 / c) * lam);
  }
}

TEST(LieClosure, Dimensions) {
  auto m = build_model(diag({1, 1, 1}), 1);
  EXPECT_EQ(lie_closure({grading_operator(m)}).dim(), 1u);

  auto g3 = closure_for(m, lefschetz_generators(m));
  EXPECT_EQ(g3.dim(), 10u);
  EXPECT_TRUE(is_bracket_closed(g3));
  auto gd = g3.grading_dims();
  EXPECT_EQ(gd[-1], 3u);
  EXPECT_EQ(gd[0], 4u);
  EXPECT_EQ(gd[1], 3u);

  auto m5 = build_model(diag({1, 1, 1, 1, 1}), 2);
  EXPECT_EQ(closure_for(m5, lefschetz_generators(m5)).dim(), 21u);

  auto split = build_model(diag({1, 1, -1, -1}), 1);
  auto gs = closure_for(split, lefschetz_generators(split));
  EXPECT_EQ(gs.dim(), 15u);
  auto sd = gs.grading_dims();
  EXPECT_EQ(sd[-1], 4u);
  EXPECT_EQ(sd[0], 7u);
  EXPECT_EQ(sd[1], 4u);
}

TEST(LieClosure, IndependentOfGeneratingSet) {
  SeededRng rng(73);
  auto s = diag({1, -1, 1, 2});
  auto m = build_model(s, 2);
  auto a = closure_for(m, lefschetz_generators(m));
  std::vector<Vector> hs;
  EchelonSpan span(4);
  while (hs.size() < 4) {
    Vector h = random_nonisotropic_vector(s, rng, 4);
    if (has_lefschetz(m, h) && span.insert(h)) hs.push_back(h);
  }
  auto b = closure_for(m, hs);
  ASSERT_EQ(a.dim(), b.dim());
  for (const auto& x : a.elements()) EXPECT_TRUE(b.contains(x));
  for (const auto& x : b.elements()) EXPECT_TRUE(a.contains(x));
}

TEST(LieClosure, DegreeZeroRestrictsToSkewPlusScalar) {
  for (auto [s, n] : {std::pair{diag({1, 1, 1}), 1u}, {diag({1, -1, 1, 2}), 2u}}) {
    auto m = build_model(s, n);
    auto g = closure_for(m, lefschetz_generators(m));
    for (const auto& x : g.elements()) {
      if (x.shift() != 0) continue;
      const Matrix& r = x.block(1);
      Matrix sym = r.transpose() * s.gram() + s.gram() * r;
      // sym must be 2c G for one scalar c
      Rational c = sym(0, 0) / (2 * s.gram()(0, 0));
      EXPECT_EQ(sym, (2 * c) * s.gram());
    }
  }
}

TEST(GtotStructure, Reports) {
  struct Case {
    std::vector<long> d;
    unsigned n;
  };
  for (const auto& c : {Case{{1, 1, 1}, 1}, Case{{1, 1, 1}, 2}, Case{{1, 1, -1, -1}, 1}, Case{{1, 1, 1, 1, 1}, 2}}) {
    auto m = build_model(diag(c.d), c.n);
    auto triples = sl2_triples(m, lefschetz_generators(m));
    auto g = lie_closure(gtot_generators(m, triples));
    auto rep = verify_gtot_structure(g, m, triples, true);
    EXPECT_TRUE(rep.pass()) << (rep.failures.empty() ? "" : rep.failures[0]);
    const std::size_t d = c.d.size();
    EXPECT_EQ(rep.dim, (d + 2) * (d + 1) / 2);
  }
  auto m = build_model(diag({1, 1, 1}), 1);
  auto triples = sl2_triples(m, lefschetz_generators(m));
  auto rep = verify_gtot_structure(lie_closure(gtot_generators(m, triples)), m, triples, true);
  EXPECT_EQ(*rep.killing, (Signature{4, 6, 0}));
  EXPECT_TRUE(bracket(triples[0].lambda, triples[1].lambda).is_zero());
}

TEST(SoDerivation, LeibnizAndInvariantElement) {
  SeededRng rng(79);
  for (auto [s, n] : {std::pair{diag({1, 1, 1}), 1u}, {QuadraticSpace(Matrix{{2, 1, 0}, {1, -1, 0}, {0, 0, 3}}), 2u},
                      {diag({1, -1, 1, 1, -1}), 2u}}) {
    auto m = build_model(s, n);
    EXPECT_TRUE(so_derivation(m, Matrix(s.dim(), s.dim())).is_zero());
    for (const auto& x : so_basis(s)) {
      auto dx = so_derivation(m, x);
      EXPECT_EQ(dx.block(1), x);
      EXPECT_TRUE(is_zero(dx.apply(2, m.qbar_class().parts[2])));
      for (unsigned j = 0; j <= m.top_degree(); ++j)
        for (std::size_t a = 0; a < m.dim(j); ++a)
          for (unsigned k = 0; j + k <= m.top_degree(); ++k)
            for (std::size_t b = 0; b < m.dim(k); ++b) {
              Vector ea(m.dim(j)), eb(m.dim(k));
              ea[a] = 1;
              eb[b] = 1;
              Vector lhs = dx.apply(j + k, m.multiply_basis(j, a, k, b));
              Vector rhs = axpy(Rational(1), m.multiply(j, dx.apply(j, ea), k, eb), m.multiply(j, ea, k, dx.apply(k, eb)));
              ASSERT_EQ(lhs, rhs);
            }
    }
  }
  auto m = build_model(diag({1, 1, 1}), 1);
  EXPECT_THROW(so_derivation(m, Matrix::identity(3)), std::invalid_argument);
}
