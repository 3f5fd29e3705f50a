#include <gtest/gtest.h>

#include <random>

#include "hodgelim/matrix.hpp"
#include "hodgelim/module_basis.hpp"
#include "oracles.hpp"
#include "random_util.hpp"

using namespace hodgelim;

namespace {
Poly P(std::initializer_list<long> cs) {
  std::vector<Rat> v;
  for (long c : cs) v.emplace_back(c);
  return Poly(std::move(v));
}
}  // namespace

TEST(Rat, CanonicalFormAndStrings) {
  EXPECT_EQ(Rat(4, -6).str(), "-2/3");
  EXPECT_EQ(Rat::parse("10/5").str(), "2");
  EXPECT_EQ(Rat::parse("-0/7"), Rat(0));
  EXPECT_EQ(Rat::parse("+3/9").str(), "1/3");
  EXPECT_THROW(Rat::parse("1/0"), std::domain_error);
  EXPECT_THROW(Rat::parse("1.5"), std::invalid_argument);
  EXPECT_THROW(Rat::parse("1/-2"), std::invalid_argument);
  EXPECT_EQ(Rat(-7, 2).floor_long(), -4);
  EXPECT_EQ(Rat(-7, 2).frac(), Rat(1, 2));
}

TEST(Poly, ZeroHasNoDegree) {
  EXPECT_FALSE(Poly().degree().has_value());
  EXPECT_TRUE(Poly().degree_at_most(-5));
  EXPECT_EQ(*P({0, 0, 3}).degree(), 2);
  EXPECT_EQ(P({1, 2, 0, 0}).coeffs().size(), 2u);
}

TEST(PolyGcd, Examples) {
  EXPECT_EQ(poly_gcd(P({-1, 0, 1}), P({-1, 1})), P({-1, 1}));
  EXPECT_EQ(poly_gcd(Poly(), Poly()), Poly());
  EXPECT_EQ(poly_gcd(P({2, 2}), P({4})), Poly(1));
}

TEST(PolyGcd, CommutativeAndAssociativeOnRandomTriples) {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 200; ++it) {
    Poly common = gen::random_poly(rng, 2, 0.0);
    Poly a = common * gen::random_poly(rng, 3);
    Poly b = common * gen::random_poly(rng, 3);
    Poly c = gen::random_poly(rng, 3) * common;
    EXPECT_EQ(poly_gcd(a, b), poly_gcd(b, a));
    EXPECT_EQ(poly_gcd(poly_gcd(a, b), c), poly_gcd(a, poly_gcd(b, c)));
    Poly g = poly_gcd(a, b);
    if (!g.is_zero()) {
      EXPECT_TRUE(divmod(a, g).second.is_zero());
      EXPECT_TRUE(divmod(b, g).second.is_zero());
    }
  }
}

TEST(MinorGcd, Examples) {
  PolyMatrix col(2, 1);
  col(0, 0) = P({0, 1});
  col(1, 0) = P({0, 0, 1});
  EXPECT_EQ(minor_gcd(col, 1), P({0, 1}));
  EXPECT_EQ(minor_gcd(PolyMatrix::identity(2), 2), Poly(1));
  col(0, 0) = P({-1, 1});
  col(1, 0) = P({1, 1});
  EXPECT_EQ(minor_gcd(col, 1), Poly(1));
  EXPECT_THROW(minor_gcd(col, 2), std::out_of_range);
  EXPECT_EQ(minor_gcd(PolyMatrix(2, 2), 1), Poly());
}

TEST(Bareiss, RankMatchesGenericEvaluation) {
  std::mt19937_64 rng(5);
  for (int it = 0; it < 100; ++it) {
    PolyMatrix a = gen::random_poly_matrix(rng, 3, 2, 2);
    PolyMatrix b = gen::random_poly_matrix(rng, 2, 4, 2);
    PolyMatrix m = a * b;  // rank <= 2
    std::size_t best = 0;
    for (long x = -6; x <= 6; ++x) best = std::max(best, rank(evaluate(m, Rat(x, 3))));
    EXPECT_EQ(poly_rank(m), best);
    EXPECT_LE(poly_rank(m), 2u);
  }
}

TEST(MinimalKernelBasis, Examples) {
  PolyMatrix m(1, 2);
  m(0, 0) = P({0, 1});
  m(0, 1) = P({-1});
  PolyMatrix k = minimal_kernel_basis(m);
  ASSERT_EQ(k.cols(), 1u);
  // normalize scalar
  Rat s = k(0, 0).lead();
  EXPECT_EQ(Rat(1) / s * k(0, 0), Poly(1));
  EXPECT_EQ(Rat(1) / s * k(1, 0), P({0, 1}));

  EXPECT_EQ(minimal_kernel_basis(PolyMatrix::identity(2)).cols(), 0u);
}

TEST(MinimalKernelBasis, MinimalDegreesAgainstBruteForce) {
  PolyMatrix m(1, 2);
  m(0, 0) = P({0, -1, 1});
  m(0, 1) = P({1, -1});
  PolyMatrix k = minimal_kernel_basis(m);
  ASSERT_EQ(k.cols(), 1u);
  EXPECT_EQ(*k(1, 0).degree(), 1);
  EXPECT_EQ(*k(0, 0).degree(), 0);
  for (int d = 0; d <= 3; ++d) EXPECT_EQ(oracle::kernel_dim_bounded(m, d), static_cast<std::size_t>(d));
}

TEST(MinimalKernelBasis, RandomPropertyChecks) {
  std::mt19937_64 rng(2024);
  for (int it = 0; it < 60; ++it) {
    std::uniform_int_distribution<int> rows(1, 2), extra(1, 2);
    const std::size_t r = static_cast<std::size_t>(rows(rng));
    const std::size_t c = r + static_cast<std::size_t>(extra(rng));
    PolyMatrix m = gen::random_poly_matrix(rng, r, c, 2);
    PolyMatrix k = minimal_kernel_basis(m);
    EXPECT_EQ(k.cols(), c - poly_rank(m));
    if (k.cols() == 0) continue;
    EXPECT_TRUE((m * k).is_zero());
    EXPECT_EQ(minor_gcd(k, k.cols()), Poly(1));
    // minimality: for every degree bound D the number of kernel vectors of
    // degree <= D equals what the basis degrees predict
    std::vector<int> degs;
    for (std::size_t j = 0; j < k.cols(); ++j) {
      int d = 0;
      for (std::size_t i = 0; i < c; ++i)
        if (!k(i, j).is_zero()) d = std::max(d, *k(i, j).degree());
      degs.push_back(d);
    }
    for (int D = 0; D <= 3; ++D) {
      std::size_t predicted = 0;
      for (int d : degs)
        if (D >= d) predicted += static_cast<std::size_t>(D - d + 1);
      EXPECT_EQ(oracle::kernel_dim_bounded(m, D), predicted) << "D=" << D;
    }
  }
}
