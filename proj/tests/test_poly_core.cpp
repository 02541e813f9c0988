#include <gtest/gtest.h>

#include "support.hpp"

using namespace natmult;
using namespace natmult::testing;

TEST(Field, InverseBasics) {
  FP f5(5);
  EXPECT_EQ(f5.inv(1), 1u);
  EXPECT_EQ(f5.inv(2), 3u);
  QQ q;
  EXPECT_EQ(q.inv(mpq_class(3, 4)), mpq_class(4, 3));
  EXPECT_EQ(field_inverse(q, q.one()), q.one());
}

TEST(Field, InverseOfZeroThrows) {
  FP f7(7);
  try {
    f7.inv(0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::division_by_zero);
  }
  EXPECT_THROW(QQ{}.inv(0), Error);
}

TEST(Field, RejectsComposite) {
  try {
    FP bad(6);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_characteristic);
  }
}

TEST(Field, ResiduesCanonical) {
  FP f5(5);
  EXPECT_EQ(f5.from_int(-1), 4u);
  EXPECT_EQ(f5.from_int(12), 2u);
  EXPECT_EQ(f5.from_rational(mpq_class(1, 2)), 3u);
  EXPECT_THROW(f5.from_rational(mpq_class(1, 5)), Error);
  EXPECT_EQ(f5.to_rational(4), mpq_class(-1));
}

TEST(Field, MismatchedCharacteristic) {
  try {
    require_same_field(FP(5), FP(7));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::incompatible_coefficient);
  }
  auto R5 = fp_ring(5, {"x"});
  auto R7 = fp_ring(7, {"x"});
  try {
    auto h = P(R5, "x") + P(R7, "x");
    (void)h;
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::incompatible_coefficient);
  }
}

TEST(MonomialOrder, GrevlexConventions) {
  auto R = qq_ring({"x", "y"});
  EXPECT_GT(R->compare(R->monomial({1, 0}), R->monomial({0, 1})), 0);
  EXPECT_GT(R->compare(R->monomial({3, 0}), R->monomial({0, 2})), 0);
  EXPECT_EQ(R->compare(R->monomial({2, 1}), R->monomial({2, 1})), 0);
}

TEST(MonomialOrder, GrevlexVsGrlex) {
  // x^2 z vs x y^2: grlex prefers x^2 z, grevlex prefers x y^2.
  auto G = qq_ring({"x", "y", "z"}, MonomialOrder::grlex());
  auto R = qq_ring({"x", "y", "z"}, MonomialOrder::grevlex());
  EXPECT_GT(G->compare(G->monomial({2, 0, 1}), G->monomial({1, 2, 0})), 0);
  EXPECT_LT(R->compare(R->monomial({2, 0, 1}), R->monomial({1, 2, 0})), 0);
}

TEST(MonomialOrder, WeightedTiebreak) {
  auto R = qq_ring({"a", "b", "w"}, MonomialOrder::weighted_order({1, 1, 2}));
  auto w = R->monomial({0, 0, 1});
  auto ab = R->monomial({1, 1, 0});
  EXPECT_EQ(w.weighted_degree(), 2);
  EXPECT_EQ(ab.weighted_degree(), 2);
  int c = R->compare(w, ab);
  EXPECT_NE(c, 0);
  EXPECT_EQ(c, -R->compare(ab, w));
  // grevlex tiebreak: the monomial with the smaller last exponent wins.
  EXPECT_LT(c, 0);
}

TEST(MonomialOrder, LengthMismatch) {
  auto R2 = qq_ring({"x", "y"});
  auto R3 = qq_ring({"x", "y", "z"});
  try {
    compare_monomials(R2->monomial({1, 0}), R3->monomial({1, 0, 0}), MonomialOrder::grevlex());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::incompatible_ring);
  }
}

TEST(MonomialOrder, EliminationBlock) {
  auto R = qq_ring({"t", "x", "y"}, MonomialOrder::elimination(1));
  // Anything involving t beats any t-free monomial.
  EXPECT_GT(R->compare(R->monomial({1, 0, 0}), R->monomial({0, 5, 5})), 0);
  EXPECT_GT(R->compare(R->monomial({0, 1, 0}), R->monomial({0, 0, 1})), 0);
}

TEST(Polynomial, Arithmetic) {
  auto R = qq_ring({"x", "y"});
  EXPECT_EQ((P(R, "x+y") * P(R, "x-y")).to_string(), "x^2 - y^2");
  auto f = P(R, "3x^2y - 1/2 y + 7");
  EXPECT_TRUE((f + (-f)).is_zero());
  EXPECT_TRUE((f - f).terms().empty());
}

TEST(Polynomial, FreshmansDream) {
  auto R = fp_ring(3, {"x", "y"});
  EXPECT_EQ(P(R, "(x+y)^3"), P(R, "x^3+y^3"));
}

TEST(Polynomial, RingMismatch) {
  auto R = qq_ring({"x", "y"});
  auto S = qq_ring({"x", "z"});
  try {
    auto h = P(R, "x") + P(S, "x");
    (void)h;
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::incompatible_ring);
  }
}

TEST(Polynomial, TermsStrictlyDescending) {
  auto R = qq_ring({"x", "y", "z"});
  auto f = P(R, "z + y^2 + x y z + x + 1 + x^3 - x^3");
  for (std::size_t i = 1; i < f.size(); ++i)
    EXPECT_GT(R->compare(f.terms()[i - 1].mono, f.terms()[i].mono), 0);
  for (const auto& t : f.terms()) EXPECT_FALSE(R->field().is_zero(t.coeff));
}

TEST(Substitute, VeroneseRelationVanishes) {
  auto S = qq_ring({"x", "y"});
  auto A = qq_ring({"a", "b", "c"});
  std::vector<Polynomial<QQ>> imgs{P(S, "x^2"), P(S, "x*y"), P(S, "y^2")};
  EXPECT_TRUE(substitute(P(A, "b^2 - a*c"), imgs).is_zero());
  EXPECT_EQ(substitute(P(A, "a"), imgs), P(S, "x^2"));
}

TEST(Substitute, ExampleOneGenerator) {
  auto S = qq_ring({"a", "b", "x"});
  auto R = qq_ring({"u", "v", "w"});
  std::vector<Polynomial<QQ>> imgs{P(S, "a"), P(S, "b"), P(S, "x^3 + x^2*a + x*b")};
  EXPECT_EQ(substitute(P(R, "w"), imgs), P(S, "x^3+x^2a+xb"));
}

TEST(Substitute, ArityMismatch) {
  auto S = qq_ring({"x", "y"});
  auto A = qq_ring({"a", "b", "c"});
  std::vector<Polynomial<QQ>> imgs{P(S, "x^2"), P(S, "x*y")};
  try {
    substitute(P(A, "a"), imgs);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::incompatible_ring);
  }
}

TEST(Parse, SyntaxAndParameters) {
  auto R = qq_ring({"x", "y"});
  EXPECT_EQ(parse_polynomial<QQ>("x^(2n+1) - y^(2n)", R, {{"n", 2}}), P(R, "x^5 - y^4"));
  EXPECT_EQ(P(R, "xy"), P(R, "x*y"));
  EXPECT_EQ(P(R, "2/4 x"), P(R, "1/2*x"));
  try {
    P(R, "x + z");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::parse_error);
  }
  EXPECT_THROW(P(R, "x^"), Error);
  EXPECT_THROW(P(R, "(x+y"), Error);
}

TEST(Ring, RejectsDuplicateNames) {
  EXPECT_THROW(qq_ring({"x", "x"}), Error);
}

// Randomized algebraic laws with a fixed seed.
class PolyLaws : public ::testing::TestWithParam<int> {};

TEST_P(PolyLaws, RingAxiomsHold) {
  std::mt19937_64 rng(1234 + GetParam());
  auto R = fp_ring(101, {"x", "y", "z"});
  auto f = random_poly(R, rng, 4, 5), g = random_poly(R, rng, 4, 5), h = random_poly(R, rng, 3, 4);
  EXPECT_EQ((f + g) * h, f * h + g * h);
  EXPECT_EQ(f * g, g * f);
  EXPECT_EQ((f * g) * h, f * (g * h));
}

TEST_P(PolyLaws, FrobeniusIsAdditive) {
  std::mt19937_64 rng(99 + GetParam());
  auto R = fp_ring(5, {"x", "y"});
  auto f = random_poly(R, rng, 3, 4), g = random_poly(R, rng, 3, 4);
  EXPECT_EQ((f + g).pow(5), f.pow(5) + g.pow(5));
}

TEST_P(PolyLaws, SubstituteIsHomomorphism) {
  std::mt19937_64 rng(7 + GetParam());
  auto A = qq_ring({"a", "b", "c"});
  auto S = qq_ring({"x", "y"});
  std::vector<Polynomial<QQ>> imgs{random_poly(S, rng, 2, 3), random_poly(S, rng, 2, 3), random_poly(S, rng, 2, 3)};
  auto f = random_poly(A, rng, 3, 4), g = random_poly(A, rng, 3, 4);
  EXPECT_EQ(substitute(f * g, imgs), substitute(f, imgs) * substitute(g, imgs));
  EXPECT_EQ(substitute(f + g, imgs), substitute(f, imgs) + substitute(g, imgs));
}

TEST_P(PolyLaws, OrderIsTotalAndMultiplicative) {
  std::mt19937_64 rng(555 + GetParam());
  for (auto ord : {MonomialOrder::lex(), MonomialOrder::grlex(), MonomialOrder::grevlex(),
                   MonomialOrder::weighted_order({1, 2, 3}), MonomialOrder::elimination(1)}) {
    auto R = qq_ring({"x", "y", "z"}, ord);
    std::uniform_int_distribution<unsigned> e(0, 3);
    std::vector<Monomial> ms;
    for (int i = 0; i < 12; ++i) ms.push_back(R->monomial({e(rng), e(rng), e(rng)}));
    for (auto& u : ms)
      for (auto& v : ms) {
        int c = R->compare(u, v);
        EXPECT_EQ(c == 0, u == v);
        EXPECT_EQ(c, -R->compare(v, u));
        for (auto& w : ms) {
          if (c < 0 && R->compare(v, w) < 0) {
            EXPECT_LT(R->compare(u, w), 0);
          }
          if (c < 0) {
            EXPECT_LT(R->compare(u * w, v * w), 0);
          }
        }
        EXPECT_LE(R->compare(R->one(), u), 0);
      }
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, PolyLaws, ::testing::Range(0, 10));
