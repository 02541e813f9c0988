#pragma once

// Colengths of m-primary ideals. Polynomial-ring colengths stand in for
// power-series colengths: when m^N ⊆ I the two quotients coincide, and
// truncation_bound certifies N per ideal.

#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

#include "natmult/groebner.hpp"
#include "natmult/linalg.hpp"

namespace natmult {

struct ColengthResult {
  enum class Method { groebner_count, macaulay_matrix };

  std::uint64_t value = 0;
  std::optional<std::vector<Monomial>> standard_monomials;
  Method method = Method::groebner_count;
};

inline const char* to_string(ColengthResult::Method m) {
  return m == ColengthResult::Method::groebner_count ? "groebner-count" : "macaulay-matrix";
}

/// Exponent bound per variable from pure powers among the leading monomials;
/// nullopt if some variable has no pure power (quotient infinite-dimensional).
inline std::optional<std::vector<unsigned>> staircase_box(const std::vector<Monomial>& lms, std::size_t nvars) {
  std::vector<unsigned> box(nvars, 0);
  for (const auto& m : lms) {
    if (m.is_one()) return std::vector<unsigned>(nvars, 0);
    std::size_t support = 0, var = 0;
    for (std::size_t i = 0; i < nvars; ++i)
      if (m[i]) {
        ++support;
        var = i;
      }
    if (support == 1 && (box[var] == 0 || m[var] < box[var])) box[var] = m[var];
  }
  for (auto b : box)
    if (b == 0) return std::nullopt;
  return box;
}

/// Calls visit(exponents) for every monomial outside the monomial ideal
/// generated by lms. Requires a finite staircase.
inline void for_each_standard_monomial(const std::vector<Monomial>& lms, std::size_t nvars,
                                       const std::function<void(const std::vector<unsigned>&)>& visit) {
  auto box = staircase_box(lms, nvars);
  if (!box) fail(ErrorCode::infinite_colength, "ideal is not m-primary");
  if (nvars == 0) {
    if (lms.empty()) visit({});
    return;
  }
  for (const auto& m : lms)
    if (m.is_one()) return;
  std::vector<unsigned> e(nvars, 0);
  const std::size_t last = nvars - 1;
  for (;;) {
    // Allowed range of the last exponent over this prefix.
    unsigned limit = (*box)[last];
    for (const auto& m : lms) {
      bool ok = true;
      for (std::size_t i = 0; i < last && ok; ++i)
        if (m[i] > e[i]) ok = false;
      if (ok) limit = std::min(limit, m[last]);
    }
    for (unsigned t = 0; t < limit; ++t) {
      e[last] = t;
      visit(e);
    }
    e[last] = 0;
    std::size_t i = last;
    while (i > 0) {
      --i;
      if (++e[i] < (*box)[i]) break;
      e[i] = 0;
      if (i == 0) return;
    }
    if (last == 0) return;
  }
}

inline std::uint64_t count_standard_monomials(const std::vector<Monomial>& lms, std::size_t nvars) {
  auto box = staircase_box(lms, nvars);
  if (!box) fail(ErrorCode::infinite_colength, "ideal is not m-primary");
  for (const auto& m : lms)
    if (m.is_one()) return 0;
  if (nvars == 0) return 1;
  std::uint64_t count = 0;
  std::vector<unsigned> e(nvars, 0);
  const std::size_t last = nvars - 1;
  for (;;) {
    unsigned limit = (*box)[last];
    for (const auto& m : lms) {
      bool ok = true;
      for (std::size_t i = 0; i < last && ok; ++i)
        if (m[i] > e[i]) ok = false;
      if (ok) limit = std::min(limit, m[last]);
    }
    count += limit;
    if (last == 0) return count;
    std::size_t i = last;
    for (;;) {
      --i;
      if (++e[i] < (*box)[i]) break;
      e[i] = 0;
      if (i == 0) return count;
    }
  }
}

template <class Field>
bool is_m_primary(const Ideal<Field>& I) {
  return staircase_box(I.leading_monomials(), I.ring().nvars()).has_value();
}

/// dim_k of the quotient, counted as standard monomials of the reduced basis.
template <class Field>
ColengthResult colength(const Ideal<Field>& I, bool list_monomials = false) {
  auto lms = I.leading_monomials();
  if (!staircase_box(lms, I.ring().nvars())) fail(ErrorCode::infinite_colength, "ideal " + I.to_string() + " is not m-primary");
  ColengthResult r;
  r.method = ColengthResult::Method::groebner_count;
  if (list_monomials) {
    std::vector<Monomial> std_monos;
    for_each_standard_monomial(lms, I.ring().nvars(),
                               [&](const std::vector<unsigned>& e) { std_monos.push_back(I.ring().monomial(e)); });
    r.value = std_monos.size();
    r.standard_monomials = std::move(std_monos);
  } else {
    r.value = count_standard_monomials(lms, I.ring().nvars());
  }
  return r;
}

/// All exponent vectors of total degree exactly d.
inline std::vector<std::vector<unsigned>> monomials_of_degree(std::size_t nvars, unsigned d) {
  std::vector<std::vector<unsigned>> out;
  if (nvars == 0) {
    if (d == 0) out.push_back({});
    return out;
  }
  std::vector<unsigned> e(nvars, 0);
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t i, unsigned left) {
    if (i + 1 == nvars) {
      e[i] = left;
      out.push_back(e);
      return;
    }
    for (unsigned t = left + 1; t-- > 0;) {
      e[i] = t;
      rec(i + 1, left - t);
    }
  };
  rec(0, d);
  return out;
}

/// Smallest N with every degree-N monomial in I (hence m^N ⊆ I), by normal forms.
/// A local quotient of length L has m^L ⊆ I, so the search stops at the
/// colength; a quotient with points away from the origin is rejected.
template <class Field>
unsigned truncation_bound(const Ideal<Field>& I, unsigned cap = 100000) {
  auto lms = I.leading_monomials();
  const std::size_t n = I.ring().nvars();
  if (!staircase_box(lms, n)) fail(ErrorCode::infinite_colength, "ideal " + I.to_string() + " is not m-primary");
  int top = -1;
  std::uint64_t length = 0;
  for_each_standard_monomial(lms, n, [&](const std::vector<unsigned>& e) {
    int d = 0;
    for (auto x : e) d += static_cast<int>(x);
    top = std::max(top, d);
    ++length;
  });
  auto contains_monomial = [&](const std::vector<unsigned>& e) {
    return I.contains(Polynomial<Field>::monomial(I.ring_ptr(), I.ring().monomial(e)));
  };
  if (length > 0)
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<unsigned> e(n, 0);
      e[i] = static_cast<unsigned>(std::min<std::uint64_t>(length, 65535));
      if (!contains_monomial(e))
        fail(ErrorCode::not_local, "ideal " + I.to_string() + " has zeros away from the origin");
    }
  const auto limit = static_cast<unsigned>(std::min<std::uint64_t>(length, cap));
  for (unsigned N = static_cast<unsigned>(top + 1); N <= limit; ++N) {
    bool all = true;
    for (const auto& e : monomials_of_degree(n, N))
      if (!contains_monomial(e)) {
        all = false;
        break;
      }
    if (all) return N;
  }
  if (length == 0) return 0;
  fail(ErrorCode::resource_exhausted, "truncation bound exceeds cap " + std::to_string(cap));
}

namespace detail {

/// Index of all monomials of total degree <= D, most leading (highest degree) first.
class MonomialIndex {
 public:
  MonomialIndex(std::size_t nvars, unsigned D) {
    for (unsigned d = D + 1; d-- > 0;)
      for (auto& e : monomials_of_degree(nvars, d)) {
        index_.emplace(e, list_.size());
        list_.push_back(std::move(e));
        degree_.push_back(d);
      }
  }
  std::size_t size() const { return list_.size(); }
  std::size_t at(const std::vector<unsigned>& e) const { return index_.at(e); }
  const std::vector<unsigned>& exps(std::size_t i) const { return list_[i]; }
  unsigned degree(std::size_t i) const { return degree_[i]; }

 private:
  struct Hash {
    std::size_t operator()(const std::vector<unsigned>& v) const {
      std::size_t h = 1469598103934665603ULL;
      for (auto x : v) h = (h ^ x) * 1099511628211ULL;
      return h;
    }
  };
  std::vector<std::vector<unsigned>> list_;
  std::vector<unsigned> degree_;
  std::unordered_map<std::vector<unsigned>, std::size_t, Hash> index_;
};

}  // namespace detail

/// Independent colength: row-reduce all g*m with deg(g*m) <= D against the
/// monomial basis of degree <= D. Conclusive once the span V holds every
/// monomial of degree N'..D and D - deg(g) + 1 + lowdeg(g) >= N' for every
/// generator g: cofactor terms too large for V then only contribute in
/// degrees >= N', so V = I ∩ S_{<=D} and m^{N'} ⊆ I. Otherwise inconclusive.
template <class Field>
ColengthResult colength_oracle(const Ideal<Field>& I, unsigned D) {
  using Row = typename SparseEchelon<Field>::Row;
  const auto& ring = I.ring();
  const std::size_t n = ring.nvars();
  detail::MonomialIndex idx(n, D);
  SparseEchelon<Field> ech(ring.field());
  std::vector<unsigned> e(n);
  for (const auto& g : I.generators()) {
    int dg = g.total_degree();
    if (dg > static_cast<int>(D)) continue;
    for (unsigned d = 0; d + dg <= D; ++d)
      for (const auto& m : monomials_of_degree(n, d)) {
        Row row;
        for (const auto& t : g.terms()) {
          for (std::size_t i = 0; i < n; ++i) e[i] = t.mono[i] + m[i];
          row.push_back({idx.at(e), t.coeff});
        }
        ech.insert(ech.normalize(std::move(row)));
      }
  }
  // Highest degree band fully inside the span.
  unsigned lowest_full = D + 1;
  for (unsigned d = D + 1; d-- > 0;) {
    bool full = true;
    for (const auto& m : monomials_of_degree(n, d)) {
      Row unit{{idx.at(m), ring.field().one()}};
      if (!ech.in_span(std::move(unit))) {
        full = false;
        break;
      }
    }
    if (!full) break;
    lowest_full = d;
  }
  bool conclusive = lowest_full <= D;
  for (const auto& g : I.generators())
    if (static_cast<long>(D) - g.total_degree() + 1 + g.low_degree() < static_cast<long>(lowest_full)) conclusive = false;
  if (!conclusive)
    fail(ErrorCode::inconclusive, "degree cap " + std::to_string(D) + " too small for the Macaulay oracle");
  ColengthResult r;
  r.method = ColengthResult::Method::macaulay_matrix;
  r.value = idx.size() - ech.rank();
  return r;
}

/// Oracle with the default cap truncation_bound + max generator degree,
/// escalating a few times if the first cap is inconclusive.
template <class Field>
ColengthResult colength_oracle(const Ideal<Field>& I) {
  int delta = 0;
  for (const auto& g : I.generators()) delta = std::max(delta, g.total_degree());
  unsigned D = truncation_bound(I) + static_cast<unsigned>(delta);
  for (int attempt = 0;; ++attempt) {
    try {
      return colength_oracle(I, D);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::inconclusive || attempt == 3) throw;
      D += static_cast<unsigned>(std::max(delta, 1));
    }
  }
}

}  // namespace natmult
