#include <gtest/gtest.h>

#include "support.hpp"

using namespace natmult;
using namespace natmult::testing;

namespace {

std::vector<std::uint64_t> range(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> v;
  for (auto n = lo; n <= hi; ++n) v.push_back(n);
  return v;
}

std::vector<std::uint64_t> lengths(const VolumeSeries& s) {
  std::vector<std::uint64_t> v;
  for (const auto& r : s.rows) v.push_back(r.length);
  return v;
}

template <class Field>
RingPresentation<Field> quadric(const RingPtr<Field>& A) {
  return RingPresentation<Field>::make(A, {P(A, "b^2 - a*c")});
}

mpq_class frac(long a, long b) {
  mpq_class r(a, b);
  r.canonicalize();
  return r;
}

Assignment example_two_family() {
  return Assignment::custom({"x^(2n+1) - y^(2n)", "y^(4n)", "x^(2n-1)*y^(2n)"}, "J");
}

}  // namespace

TEST(VolumeTable, Powers) {
  auto S = qq_ring({"x", "y"});
  auto s = volume_table(Assignment::of(AssignmentKind::powers), RingPresentation<QQ>::make(S), range(1, 5));
  EXPECT_EQ(lengths(s), (std::vector<std::uint64_t>{1, 3, 6, 10, 15}));
  EXPECT_EQ(s.dimension, 2);
  EXPECT_EQ(s.rows[4].normalized, frac(15, 25));
  for (const auto& r : s.rows) EXPECT_EQ(r.cross_check, "macaulay_matrix");
}

TEST(VolumeTable, ExampleTwoTarget) {
  auto S = qq_ring({"x", "y"});
  auto s = volume_table(example_two_family(), RingPresentation<QQ>::make(S), range(1, 4));
  EXPECT_EQ(lengths(s), (std::vector<std::uint64_t>{8, 32, 72, 128}));
  auto b = vol_bounds(s);
  EXPECT_EQ(b.lower, 8);
  EXPECT_EQ(b.upper, 8);
  EXPECT_EQ(b.last, 8);
}

TEST(VolumeTable, FrobeniusPowers) {
  auto S = fp_ring(3, {"x", "y"});
  auto s = volume_table(Assignment::of(AssignmentKind::frobenius_powers), RingPresentation<FP>::make(S), {27, 3, 9});
  EXPECT_EQ(lengths(s), (std::vector<std::uint64_t>{9, 81, 729}));
  EXPECT_EQ(s.rows.front().n, 3u);
}

TEST(VolumeTable, RejectsNonPrimaryEntry) {
  auto S = qq_ring({"x", "y"});
  try {
    volume_table(Assignment::custom({"x^n"}), RingPresentation<QQ>::make(S), {1, 2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::infinite_colength);
    EXPECT_NE(std::string(e.what()).find("index 1"), std::string::npos);
  }
}

TEST(VolBounds, PowersToTwenty) {
  auto S = qq_ring({"x", "y"});
  auto s = volume_table(Assignment::of(AssignmentKind::powers), RingPresentation<QQ>::make(S), range(1, 20));
  auto b = vol_bounds(s);
  EXPECT_EQ(b.last, frac(210, 400));
  EXPECT_EQ(b.lower, b.last);
  EXPECT_EQ(b.upper, frac(66, 121));
  EXPECT_EQ(b.label, "finite-stage bounds");
  auto fit = advisory_fit(s);
  ASSERT_TRUE(fit);
  EXPECT_NEAR(fit->leading, 0.5, 1e-9);
  EXPECT_NEAR(fit->subleading, 0.5, 1e-9);
}

TEST(VolBounds, TooFewRows) {
  VolumeSeries s;
  s.rows.resize(2);
  EXPECT_THROW(vol_bounds(s), Error);
}

TEST(Multiplicity, HilbertSamuelOfVeronese) {
  auto S = qq_ring({"x", "y"});
  auto V = veronese(S);
  auto m = multiplicity(MultiplicityKind::hilbert_samuel, V.presentation, range(1, 6));
  for (std::size_t i = 0; i < m.series.rows.size(); ++i) EXPECT_EQ(m.series.rows[i].length, (i + 1) * (i + 1));
  EXPECT_EQ(m.estimate, 2);
}

TEST(Multiplicity, FSignatureAndHilbertKunzOfQuadric) {
  auto A = fp_ring(3, {"a", "b", "c"});
  auto R = quadric(A);
  auto fs = multiplicity(MultiplicityKind::f_signature, R, {3, 9, 27});
  EXPECT_EQ(lengths(fs.series), (std::vector<std::uint64_t>{5, 41, 365}));
  EXPECT_EQ(fs.estimate, mpq_class(365, 729));
  EXPECT_EQ(fs.series.rows[0].cross_check, "groebner_count");
  auto hk = multiplicity(MultiplicityKind::hilbert_kunz, R, {3, 9, 27});
  EXPECT_EQ(hk.series.rows[0].length, 13u);
  EXPECT_NEAR(hk.estimate.get_d(), 1.5, 0.05);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_LE(fs.series.rows[i].length, hk.series.rows[i].length);
}

TEST(Multiplicity, RegularRingIsOne) {
  for (std::uint64_t p : {2u, 3u, 5u}) {
    auto S = fp_ring(p, {"x", "y"});
    auto R = RingPresentation<FP>::make(S);
    std::vector<std::uint64_t> qs{p, p * p, p * p * p};
    auto hk = multiplicity(MultiplicityKind::hilbert_kunz, R, qs);
    auto fs = multiplicity(MultiplicityKind::f_signature, R, qs);
    for (std::size_t i = 0; i < 3; ++i) {
      EXPECT_EQ(hk.series.rows[i].normalized, 1);
      EXPECT_EQ(fs.series.rows[i].normalized, 1);
    }
  }
  auto S = qq_ring({"x", "y", "z"});
  // 3! C(n+2, 3) / n^3 at n = 4, tending to 1.
  EXPECT_EQ(multiplicity(MultiplicityKind::hilbert_samuel, RingPresentation<QQ>::make(S), range(1, 4)).estimate,
            frac(6 * 20, 64));
}

TEST(Multiplicity, DifferentialSignatureOfVeronese) {
  auto S = qq_ring({"x", "y"});
  auto V = veronese(S);
  auto m = multiplicity(MultiplicityKind::differential_signature, V.presentation, {4, 10, 20}, &V.map);
  EXPECT_EQ(lengths(m.series), (std::vector<std::uint64_t>{4, 25, 100}));
  EXPECT_EQ(m.estimate, mpq_class(1, 2));
  EXPECT_EQ(m.series.rows[0].cross_check, "image_span");
  EXPECT_THROW(multiplicity(MultiplicityKind::differential_signature, V.presentation, {2}), Error);
}

TEST(Transform, SplittingIdealsAcrossVeronese) {
  auto S = fp_ring(3, {"x", "y"});
  auto V = veronese(S);
  auto rep = transformation_check(V.map, Assignment::of(AssignmentKind::splitting_ideals), {3, 9, 27});
  ASSERT_EQ(rep.rows.size(), 3u);
  EXPECT_EQ(rep.rank, 2u);
  EXPECT_EQ(rep.rows[0].lhs, 10);
  EXPECT_EQ(rep.rows[0].rhs, 9);
  EXPECT_EQ(rep.rows[2].ratio, mpq_class(730, 729));
  EXPECT_EQ(rep.audit.bounded.verdict, Verdict::pass);
  EXPECT_EQ(rep.audit.intersection.verdict, Verdict::pass);
  EXPECT_EQ(rep.audit.etale.verdict, Verdict::pass);
  EXPECT_EQ(rep.audit.characteristic.verdict, Verdict::not_checked);
  EXPECT_EQ(rep.conclusion, Conclusion::consistent);
}

TEST(Transform, ExampleTwoViolatesRule) {
  auto S = qq_ring({"x", "y"});
  auto V = veronese(S);
  TransformOptions<QQ> opts;
  opts.target_automorphisms.push_back({{P(S, "y"), P(S, "x")}, "swap"});
  auto rep = transformation_check(V.map, example_two_family(), range(1, 6), opts);
  std::vector<std::uint64_t> src{5, 22, 51, 92, 145, 210};
  EXPECT_EQ(lengths(rep.source), src);
  EXPECT_EQ(rep.audit.characteristic.verdict, Verdict::fail);
  EXPECT_NE(rep.audit.characteristic.detail.find("x^3 - y^2 -> "), std::string::npos) << rep.audit.characteristic.detail;
  EXPECT_NEAR(rep.rows.back().ratio.get_d(), 1.5, 0.15 * 1.5);
  EXPECT_EQ(rep.conclusion, Conclusion::violates);
}

TEST(Transform, ExampleOneViolatesRule) {
  auto T = fp_ring(5, {"a", "b", "x"}, MonomialOrder::weighted_order({1, 1, 2}));
  auto tgt = RingPresentation<FP>::make(T);
  std::vector<Polynomial<FP>> imgs{P(T, "a"), P(T, "b"), P(T, "x^3 + x^2*a + x*b")};
  auto map = FiniteMap<FP>::make(kernel_presentation(imgs, {"u", "v", "w"}, tgt), tgt, imgs, 3);
  auto rep = transformation_check(map, Assignment::contraction_of(AssignmentKind::powers), range(2, 8));
  EXPECT_EQ(rep.audit.etale.verdict, Verdict::fail);
  EXPECT_EQ(rep.target.rows.back().length, 120u);
  EXPECT_GT(rep.rows.back().ratio.get_d(), 1.2);
  EXPECT_EQ(rep.conclusion, Conclusion::violates);
}

TEST(Transform, IdentityIsConsistent) {
  auto S = qq_ring({"x", "y"});
  auto R = RingPresentation<QQ>::make(S);
  auto id = FiniteMap<QQ>::make(R, R, {P(S, "x"), P(S, "y")}, 1);
  auto rep = transformation_check(id, Assignment::of(AssignmentKind::powers), range(1, 4));
  for (const auto& r : rep.rows) EXPECT_EQ(r.ratio, 1);
  EXPECT_EQ(rep.conclusion, Conclusion::consistent);
}

TEST(Pi1Bound, Examples) {
  EXPECT_EQ(pi1_bound(mpq_class(1, 2)).bound, std::optional<std::uint64_t>(2));
  EXPECT_EQ(pi1_bound(1).bound, std::optional<std::uint64_t>(1));
  EXPECT_FALSE(pi1_bound(0).bound);
  EXPECT_FALSE(pi1_bound(-1).bound);
  EXPECT_EQ(pi1_bound(mpq_class(2, 7)).bound, std::optional<std::uint64_t>(3));
}
