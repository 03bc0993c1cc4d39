#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "hkcoh/exactlin.hpp"
#include "hkcoh/random.hpp"
#include "hkcoh/sparse_echelon.hpp"

using namespace hkcoh;

namespace {

Rational R(const char* s) { return parse_rational(s); }

Matrix random_matrix(SeededRng& rng, std::size_t r, std::size_t c, long bound, int zero_bias = 0) {
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      if (zero_bias > 0 && rng.uniform(0, zero_bias) != 0) continue;
      m(i, j) = ratio(rng.uniform(-bound, bound), rng.uniform(1, 3));
    }
  return m;
}

// Leibniz expansion.
Rational leibniz_det(const Matrix& m) {
  std::vector<std::size_t> p(m.rows());
  std::iota(p.begin(), p.end(), 0);
  Rational total;
  do {
    int inv = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
      for (std::size_t j = i + 1; j < p.size(); ++j) inv += p[i] > p[j];
    Rational t = inv % 2 ? -1 : 1;
    for (std::size_t i = 0; i < p.size(); ++i) t *= m(i, p[i]);
    total += t;
  } while (std::next_permutation(p.begin(), p.end()));
  return total;
}

// Squarefree part by trial division.
long naive_squarefree(long n) {
  long sign = n < 0 ? -1 : 1, r = 1;
  n = std::labs(n);
  for (long p = 2; p <= n; ++p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e % 2) r *= p;
  }
  return sign * r;
}

}  // namespace

TEST(Rational, ParseAndPrint) {
  EXPECT_EQ(R("3/6"), ratio(1, 2));
  EXPECT_EQ(R("-4"), Rational(-4));
  EXPECT_EQ(to_string(R("-10/4")), "-5/2");
  EXPECT_EQ(to_string(R("6/3")), "2");
  EXPECT_THROW(R("1/0"), std::invalid_argument);
  EXPECT_THROW(R("abc"), std::invalid_argument);
  EXPECT_THROW(R(""), std::invalid_argument);
  EXPECT_THROW(R("1/2/3"), std::invalid_argument);
}

TEST(Kernel, Examples) {
  EXPECT_TRUE(kernel(Matrix::identity(3)).empty());
  auto z = kernel(Matrix(2, 3));
  ASSERT_EQ(z.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(z[i][j], Rational(i == j ? 1 : 0));
  auto k = kernel(Matrix{{1, 1, 0}, {0, 0, 1}});
  ASSERT_EQ(k.size(), 1u);
  EXPECT_EQ(k[0], (Vector{-1, 1, 0}) ) << "kernel basis vector";
}

TEST(Kernel, RandomRankNullity) {
  SeededRng rng(11);
  for (int t = 0; t < 30; ++t) {
    const std::size_t r = rng.uniform(1, 6), c = rng.uniform(1, 7);
    // low rank product to get nontrivial kernels
    Matrix m = random_matrix(rng, r, 2, 4) * random_matrix(rng, 2, c, 4);
    auto ker = kernel(m);
    EXPECT_EQ(ker.size(), c - rank(m));
    for (const auto& v : ker) EXPECT_TRUE(is_zero(m * v));
    if (!ker.empty()) {
      EXPECT_EQ(rank(Matrix::from_columns(ker, c)), ker.size());
    }
  }
}

TEST(Solve, Examples) {
  Vector b{3, -1, R("2/7")};
  EXPECT_EQ(solve_linear(Matrix::identity(3), b), b);
  EXPECT_EQ(solve_linear(Matrix{{1, 1}}, Vector{2}), (Vector{2, 0}));
  EXPECT_FALSE(solve_linear(Matrix{{0, 0}}, Vector{1}).has_value());
  EXPECT_THROW(solve_linear(Matrix{{1, 1}}, Vector{1, 2}), std::invalid_argument);
}

TEST(Solve, RoundTrip) {
  SeededRng rng(5);
  for (int t = 0; t < 30; ++t) {
    Matrix m = random_matrix(rng, rng.uniform(1, 5), rng.uniform(1, 5), 5);
    Vector x(m.cols());
    for (auto& e : x) e = rng.uniform(-4, 4);
    Vector b = m * x;
    auto s = solve_linear(m, b);
    ASSERT_TRUE(s.has_value());
    EXPECT_EQ(m * *s, b);
  }
}

TEST(Inverse, DeterminantMatchesLeibniz) {
  SeededRng rng(3);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = rng.uniform(1, 5);
    Matrix m = random_matrix(rng, n, n, 6);
    EXPECT_EQ(determinant(m), leibniz_det(m));
    auto inv = inverse(m);
    if (sgn(leibniz_det(m)) == 0) {
      EXPECT_FALSE(inv.has_value());
    } else {
      ASSERT_TRUE(inv.has_value());
      EXPECT_EQ(m * *inv, Matrix::identity(n));
    }
  }
  EXPECT_FALSE(inverse(Matrix{{1, 2}, {2, 4}}).has_value());
}

TEST(Signature, Examples) {
  EXPECT_EQ(ldl_signature(Matrix::diagonal({1, 1, 1, -1})), (Signature{3, 1, 0}));
  EXPECT_EQ(ldl_signature(Matrix{{0, 1}, {1, 0}}), (Signature{1, 1, 0}));
  EXPECT_EQ(ldl_signature(Matrix::diagonal({2, 0, -3, -5})), (Signature{1, 2, 1}));
  EXPECT_THROW(ldl_signature(Matrix{{1, 2}, {0, 1}}), std::invalid_argument);
}

TEST(Signature, CongruenceInvariant) {
  SeededRng rng(17);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = rng.uniform(1, 6);
    Vector d(n);
    Signature expect;
    for (auto& x : d) {
      x = rng.uniform(-3, 3);
      (sgn(x) > 0 ? expect.plus : sgn(x) < 0 ? expect.minus : expect.zero) += 1;
    }
    Matrix p = random_matrix(rng, n, n, 3);
    if (sgn(determinant(p)) == 0) continue;
    Matrix s = p.transpose() * Matrix::diagonal(d) * p;
    EXPECT_EQ(ldl_signature(s), expect);
  }
}

TEST(SquarefreeClass, Examples) {
  EXPECT_EQ(squarefree_class(18).to_string(), "2");
  EXPECT_EQ(squarefree_class(R("4/9")).to_string(), "1");
  EXPECT_EQ(squarefree_class(R("-50/3")).to_string(), "-6");
  EXPECT_THROW(squarefree_class(0), std::invalid_argument);
  // product of two large primes goes through Pollard rho
  Integer p("1000003"), q("999983");
  EXPECT_EQ(squarefree_class(Rational(p * p * q * 4)).representative(), q);
  EXPECT_EQ(squarefree_class(Rational(p * q * 9)).representative(), p * q);
}

TEST(SquarefreeClass, MatchesTrialDivisionAndSquareInvariance) {
  SeededRng rng(23);
  for (int t = 0; t < 200; ++t) {
    long a = rng.uniform(-5000, 5000);
    if (a == 0) continue;
    EXPECT_EQ(squarefree_class(a).representative(), naive_squarefree(a)) << a;
    Rational c(rng.uniform(1, 40), rng.uniform(1, 40));
    if (rng.uniform(0, 1)) c = -c;
    EXPECT_EQ(squarefree_class(Rational(a) * c * c), squarefree_class(a));
  }
}

TEST(SquarefreeClass, Multiplication) {
  SeededRng rng(29);
  for (int t = 0; t < 100; ++t) {
    long a = rng.uniform(-300, 300), b = rng.uniform(-300, 300);
    if (a == 0 || b == 0) continue;
    EXPECT_EQ(squarefree_class(a) * squarefree_class(b), squarefree_class(Rational(a * b)));
  }
}

TEST(EchelonSpan, CoordinatesReconstruct) {
  SeededRng rng(31);
  EchelonSpan span(5);
  std::vector<Vector> kept;
  for (int t = 0; t < 8; ++t) {
    Vector v(5);
    for (auto& x : v) x = rng.uniform(-2, 2);
    if (span.insert(v)) kept.push_back(v);
  }
  EXPECT_EQ(span.dim(), rank(Matrix::from_columns(kept, 5)));
  Vector w = axpy(Rational(3), kept[0], axpy(ratio(-1, 2), kept.back(), Vector(5)));
  auto c = span.coordinates(w);
  ASSERT_TRUE(c.has_value());
  Vector back(5);
  for (std::size_t i = 0; i < kept.size(); ++i) back = axpy((*c)[i], kept[i], back);
  EXPECT_EQ(back, w);
}

TEST(SparseEchelon, AgreesWithDenseRref) {
  SeededRng rng(37);
  for (int t = 0; t < 25; ++t) {
    const std::size_t rows = rng.uniform(1, 9), cols = rng.uniform(1, 12);
    Matrix m = random_matrix(rng, rows, cols, 3, 2);
    SparseEchelon se(cols);
    for (std::size_t i = 0; i < rows; ++i) se.insert(SparseVector::from_dense(m.row(i)));
    Echelon e = rref(m);
    ASSERT_EQ(se.rank(), e.rank());
    // the reduced row echelon form is unique
    for (std::size_t i = 0; i < e.rank(); ++i) {
      ASSERT_TRUE(se.is_pivot(e.pivots[i]));
      EXPECT_EQ(se.row_for_pivot(e.pivots[i]).to_dense(cols), e.reduced.row(i));
    }
  }
}
