#pragma once

#include <random>
#include <string>
#include <vector>

#include "natmult/natmult.hpp"

namespace natmult::testing {

using QQ = RationalField;
using FP = PrimeField;

inline RingPtr<QQ> qq_ring(std::vector<std::string> names, MonomialOrder ord = MonomialOrder::grevlex()) {
  return PolyRing<QQ>::make(QQ{}, std::move(names), std::move(ord));
}

inline RingPtr<FP> fp_ring(std::uint64_t p, std::vector<std::string> names,
                           MonomialOrder ord = MonomialOrder::grevlex()) {
  return PolyRing<FP>::make(FP(p), std::move(names), std::move(ord));
}

template <class Field>
Polynomial<Field> P(const RingPtr<Field>& R, const std::string& text) {
  return parse_polynomial<Field>(text, R);
}

template <class Field>
Ideal<Field> I(const RingPtr<Field>& R, const std::string& gens) {
  return Ideal<Field>(R, parse_polynomials<Field>(gens, R));
}

/// Random polynomial with small integer coefficients and bounded degree.
template <class Field>
Polynomial<Field> random_poly(const RingPtr<Field>& R, std::mt19937_64& rng, unsigned max_deg, unsigned nterms,
                              bool allow_constant = true) {
  std::uniform_int_distribution<int> coeff(-4, 4);
  std::vector<typename Polynomial<Field>::Term> terms;
  std::vector<unsigned> e(R->nvars());
  for (unsigned t = 0; t < nterms; ++t) {
    unsigned budget = std::uniform_int_distribution<unsigned>(allow_constant ? 0 : 1, max_deg)(rng);
    std::fill(e.begin(), e.end(), 0);
    for (unsigned b = 0; b < budget; ++b) ++e[std::uniform_int_distribution<std::size_t>(0, R->nvars() - 1)(rng)];
    int c = coeff(rng);
    if (c == 0) c = 1;
    terms.push_back({R->monomial(e), R->field().from_int(c)});
  }
  return Polynomial<Field>::from_terms(R, std::move(terms));
}

/// The sign action x -> -x on a two-variable ring.
template <class Field>
std::shared_ptr<const GroupAction<Field>> sign_action(const RingPtr<Field>& S) {
  const auto& k = S->field();
  Matrix<Field> minus{{k.from_int(-1), k.zero()}, {k.zero(), k.from_int(-1)}};
  return std::make_shared<GroupAction<Field>>(S, std::vector<Matrix<Field>>{minus});
}

/// Second Veronese subring k[x^2, xy, y^2] presented as k[a,b,c]/(b^2 - ac).
template <class Field>
InvariantRing<Field> veronese(const RingPtr<Field>& S) {
  return invariant_ring(sign_action(S));
}

}  // namespace natmult::testing
