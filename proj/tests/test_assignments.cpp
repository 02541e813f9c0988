#include <gtest/gtest.h>

#include "support.hpp"

using namespace natmult;
using namespace natmult::testing;

namespace {

template <class Field>
RingPresentation<Field> quadric(const RingPtr<Field>& A) {
  return RingPresentation<Field>::make(A, {P(A, "b^2 - a*c")});
}

template <class Fn>
void expect_error(ErrorCode code, Fn&& fn) {
  try {
    fn();
    ADD_FAILURE() << "no error raised";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

}  // namespace

TEST(Index, Validation) {
  auto frob = Assignment::of(AssignmentKind::frobenius_powers);
  expect_error(ErrorCode::invalid_index, [&] { validate_index(frob, 3, 6); });
  expect_error(ErrorCode::invalid_index, [&] { validate_index(frob, 3, 1); });
  expect_error(ErrorCode::invalid_characteristic, [&] { validate_index(frob, 0, 4); });
  expect_error(ErrorCode::invalid_index, [&] { validate_index(Assignment::of(AssignmentKind::powers), 0, 0); });
  validate_index(frob, 3, 27);
  validate_index(Assignment::of(AssignmentKind::powers), 0, 7);
}

TEST(Family, PowersAndFrobeniusPowers) {
  auto A = fp_ring(3, {"a", "b", "c"});
  auto R = quadric(A);
  auto m2 = family_ideal(Assignment::of(AssignmentKind::powers), R, 2);
  EXPECT_TRUE(m2.equals(I(A, "a^2, a*b, a*c, b^2, b*c, c^2")));
  auto f3 = family_ideal(Assignment::of(AssignmentKind::frobenius_powers), R, 3);
  EXPECT_TRUE(f3.equals(I(A, "a^3, b^3, c^3, b^2 - a*c")));
  EXPECT_EQ(colength(f3).value, 13u);
}

TEST(Family, CustomTemplates) {
  auto S = qq_ring({"x", "y"});
  auto R = RingPresentation<QQ>::make(S);
  auto A = Assignment::custom({"x^n", "y^(2*n)"});
  EXPECT_TRUE(family_ideal(A, R, 3).equals(I(S, "x^3, y^6")));
  EXPECT_EQ(colength(family_ideal(A, R, 4)).value, 32u);
}

TEST(Family, TableCachesAndRejectsNonPrimary) {
  auto S = qq_ring({"x", "y"});
  auto R = RingPresentation<QQ>::make(S);
  FamilyTable<QQ> ok(Assignment::custom({"x^n", "y^n"}), R);
  auto a = ok.at(2);
  auto b = ok.at(2);
  EXPECT_TRUE(a.equals(b));
  FamilyTable<QQ> bad(Assignment::custom({"x^n"}), R);
  expect_error(ErrorCode::infinite_colength, [&] { bad.at(1); });
}

TEST(Splitting, RegularRingGivesBracketPower) {
  auto S = fp_ring(3, {"x", "y"});
  auto R = RingPresentation<FP>::make(S);
  EXPECT_TRUE(splitting_ideal(R, 9).equals(I(S, "x^9, y^9")));
  EXPECT_EQ(splitting_number(R, 9), 81u);
  expect_error(ErrorCode::invalid_characteristic,
               [] { splitting_number(RingPresentation<QQ>::make(qq_ring({"x"})), 4); });
}

TEST(Splitting, QuadricNumbers) {
  // (q^2 + 1) / 2 for the A_1 singularity.
  auto A3 = fp_ring(3, {"a", "b", "c"});
  EXPECT_EQ(splitting_number(quadric(A3), 3), 5u);
  EXPECT_EQ(splitting_number(quadric(A3), 9), 41u);
  EXPECT_EQ(splitting_number(quadric(A3), 27), 365u);
  auto A5 = fp_ring(5, {"a", "b", "c"});
  EXPECT_EQ(splitting_number(quadric(A5), 5), 13u);
  EXPECT_EQ(splitting_number(quadric(A5), 25), 313u);
}

TEST(Splitting, GradedRouteMatchesGroebnerColon) {
  auto A3 = fp_ring(3, {"a", "b", "c"});
  auto R3 = quadric(A3);
  for (std::uint64_t q : {3u, 9u}) {
    auto graded = splitting_ideal(R3, q);
    EXPECT_TRUE(graded.equals(splitting_ideal_groebner(R3, q))) << q;
    EXPECT_EQ(colength(graded).value, splitting_number(R3, q));
    EXPECT_TRUE(graded.contains(R3.relations));
    EXPECT_TRUE(graded.contains(bracket_power(R3.maximal_ideal(), q)));
  }
  auto A5 = fp_ring(5, {"a", "b", "c"});
  auto R5 = quadric(A5);
  EXPECT_TRUE(splitting_ideal(R5, 5).equals(splitting_ideal_groebner(R5, 5)));
}

TEST(Splitting, NonPrincipalRelations) {
  // Cubic Veronese: three quadric relations in four variables.
  auto S = fp_ring(5, {"x", "y"});
  std::vector<Polynomial<FP>> imgs{P(S, "x^3"), P(S, "x^2*y"), P(S, "x*y^2"), P(S, "y^3")};
  auto R = kernel_presentation(imgs, {"a", "b", "c", "d"});
  ASSERT_EQ(R.relations.groebner_basis().size(), 3u);
  auto graded = splitting_ideal(R, 5);
  EXPECT_TRUE(graded.equals(splitting_ideal_groebner(R, 5)));
  EXPECT_EQ(colength(graded).value, splitting_number(R, 5));
}

class RandomHypersurface : public ::testing::TestWithParam<int> {};

TEST_P(RandomHypersurface, GradedRouteMatchesGroebnerColon) {
  std::mt19937_64 rng(6100 + GetParam());
  auto A = fp_ring(3, {"x", "y", "z"});
  auto f = random_poly(A, rng, 3, 3, false);
  if (f.is_zero() || f.low_degree() < 2) f = f * P(A, "x + z");
  auto R = RingPresentation<FP>::make(A, {f});
  auto graded = splitting_ideal(R, 3);
  EXPECT_TRUE(graded.equals(splitting_ideal_groebner(R, 3))) << f.to_string();
  EXPECT_EQ(colength(graded).value, splitting_number(R, 3)) << f.to_string();
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomHypersurface, ::testing::Range(0, 12));

TEST(DifferentialPowers, VeroneseContraction) {
  auto S = qq_ring({"x", "y"});
  auto V = veronese(S);
  auto DP = Assignment::of(AssignmentKind::differential_powers);
  for (unsigned n = 1; n <= 6; ++n) {
    auto D = family_ideal(DP, V.presentation, n, &V.map);
    auto expected = V.presentation.lift(ideal_power(V.presentation.maximal_ideal(), (n + 1) / 2));
    EXPECT_TRUE(D.equals(expected)) << n;
  }
  EXPECT_TRUE(family_ideal(DP, V.map.target, 3).equals(I(S, "x^3, x^2*y, x*y^2, y^3")));
}

TEST(DifferentialPowers, Unsupported) {
  auto S = qq_ring({"x", "y"});
  auto V = veronese(S);
  auto DP = Assignment::of(AssignmentKind::differential_powers);
  expect_error(ErrorCode::unsupported_ring, [&] { family_ideal(DP, V.presentation, 2); });
  Matrix<QQ> r{{-1, 0}, {0, 1}};
  auto refl = std::make_shared<GroupAction<QQ>>(S, std::vector<Matrix<QQ>>{r});
  auto W = invariant_ring(refl);
  expect_error(ErrorCode::unsupported_ring, [&] { differential_power_contracted(W.map, 2); });
}

TEST(Bounded, PowersAndFrobeniusPowers) {
  auto A = fp_ring(3, {"a", "b", "c"});
  auto R = quadric(A);
  auto pw = check_bounded(Assignment::of(AssignmentKind::powers), R, 1, {1, 2, 3, 4});
  EXPECT_TRUE(pw.all_hold());
  for (const auto& row : pw.rows) EXPECT_EQ(row.minimal_exponent, row.n);

  auto S = fp_ring(3, {"x", "y"});
  auto reg = RingPresentation<FP>::make(S);
  auto frob = Assignment::of(AssignmentKind::frobenius_powers);
  auto tight = check_bounded(frob, reg, 1, {3, 9});
  EXPECT_FALSE(tight.all_hold());
  for (const auto& row : tight.rows) EXPECT_EQ(row.minimal_exponent, 2 * row.n - 1);
  EXPECT_TRUE(check_bounded(frob, reg, 2, {3, 9, 27}).all_hold());
}

TEST(Characteristic, SwapAutomorphism) {
  auto A = fp_ring(3, {"a", "b", "c"});
  auto R = quadric(A);
  LinearAutomorphism<FP> swap{{P(A, "c"), P(A, "b"), P(A, "a")}, "swap"};
  LinearAutomorphism<FP> neg{{P(A, "a"), P(A, "-b"), P(A, "c")}, "negate"};
  for (auto kind : {AssignmentKind::powers, AssignmentKind::frobenius_powers, AssignmentKind::splitting_ideals})
    EXPECT_TRUE(check_characteristic(Assignment::of(kind), R, {swap, neg}, {3, 9}).all_stable()) << to_string(kind);

  LinearAutomorphism<FP> shear{{P(A, "a + b"), P(A, "b"), P(A, "c")}, "shear"};
  expect_error(ErrorCode::invalid_automorphism,
               [&] { check_characteristic(Assignment::of(AssignmentKind::powers), R, {shear}, {1}); });
}

TEST(Characteristic, WitnessForNonCharacteristicFamily) {
  auto S = qq_ring({"x", "y"});
  auto R = RingPresentation<QQ>::make(S);
  LinearAutomorphism<QQ> swap{{P(S, "y"), P(S, "x")}, "swap"};
  auto rep = check_characteristic(Assignment::custom({"x^n", "y^(2*n)"}), R, {swap}, {1, 2});
  ASSERT_EQ(rep.cells.size(), 2u);
  EXPECT_FALSE(rep.cells[0].stable);
  EXPECT_EQ(rep.cells[0].witness, "x");
  EXPECT_EQ(rep.cells[0].witness_image, "y");
}

TEST(Intersection, AcrossVeronese) {
  auto S = fp_ring(3, {"x", "y"});
  auto V = veronese(S);
  EXPECT_TRUE(check_intersection(Assignment::of(AssignmentKind::differential_powers), V.map, {1, 2, 3, 4}).all_equal());
  EXPECT_TRUE(check_intersection(Assignment::of(AssignmentKind::splitting_ideals), V.map, {3, 9}).all_equal());
  auto pw = check_intersection(Assignment::of(AssignmentKind::powers), V.map, {1, 2});
  EXPECT_TRUE(pw.rows[0].equal);
  EXPECT_FALSE(pw.rows[1].equal);
  EXPECT_FALSE(pw.rows[1].witness.empty());
}

TEST(Intersection, SplittingIdealsOverF5) {
  auto S = fp_ring(5, {"x", "y"});
  auto V = veronese(S);
  EXPECT_TRUE(check_intersection(Assignment::of(AssignmentKind::splitting_ideals), V.map, {5, 25}).all_equal());
}

TEST(Bounded, SplittingIdealsUseIndexAsExponent) {
  auto A = fp_ring(3, {"a", "b", "c"});
  auto rep = check_bounded(Assignment::of(AssignmentKind::splitting_ideals), quadric(A), 1, {3, 9});
  EXPECT_TRUE(rep.all_hold());
  for (const auto& row : rep.rows) EXPECT_EQ(row.minimal_exponent, row.n);
}

TEST(Bounded, CustomFamilyOfExampleTwo) {
  auto S = qq_ring({"x", "y"});
  auto R = RingPresentation<QQ>::make(S);
  auto J = Assignment::custom({"x^(2n+1) - y^(2n)", "y^(4n)", "x^(2n-1)*y^(2n)"});
  // x^3 y = y (x^3 - y^2) + y^3 with y^3 standard, so m^4 is not inside J_1;
  // the staircase closes exactly at degree 6n - 1.
  auto four = check_bounded(J, R, 4, {1, 2, 3});
  for (const auto& row : four.rows) {
    EXPECT_FALSE(row.holds);
    EXPECT_EQ(row.minimal_exponent, 6 * row.n - 1);
  }
  EXPECT_TRUE(check_bounded(J, R, 6, {1, 2, 3, 4}).all_hold());
}

TEST(Families, NestedAndContainPowers) {
  auto A = fp_ring(3, {"a", "b", "c"});
  auto R = quadric(A);
  for (auto kind : {AssignmentKind::frobenius_powers, AssignmentKind::splitting_ideals}) {
    auto a3 = family_ideal(Assignment::of(kind), R, 3);
    auto a9 = family_ideal(Assignment::of(kind), R, 9);
    EXPECT_TRUE(a3.contains(a9)) << to_string(kind);
  }
  auto S = qq_ring({"x", "y"});
  auto V = veronese(S);
  auto DP = Assignment::of(AssignmentKind::differential_powers);
  for (unsigned n = 1; n <= 5; ++n) {
    auto D = family_ideal(DP, V.presentation, n, &V.map);
    EXPECT_TRUE(family_ideal(DP, V.presentation, n - (n > 1), &V.map).contains(D));
    EXPECT_TRUE(D.contains(V.presentation.lift(ideal_power(V.presentation.maximal_ideal(), n))));
  }
  for (std::uint64_t q : {3u, 9u})
    EXPECT_TRUE(splitting_ideal(R, q).contains(bracket_power(R.maximal_ideal(), q)));
}

TEST(Splitting, IndependentOfRelationGenerators) {
  auto A = fp_ring(3, {"a", "b", "c"});
  auto R1 = quadric(A);
  auto R2 = RingPresentation<FP>::make(A, {P(A, "2*b^2 + a*c")});
  EXPECT_TRUE(splitting_ideal(R1, 9).equals(splitting_ideal(R2, 9)));
}
