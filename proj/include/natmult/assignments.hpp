#pragma once

// Families of ideals indexed by n: powers, Frobenius powers, differential
// powers, splitting ideals and user templates, plus the bounded,
// characteristic and intersection checks.

#include <cmath>
#include <functional>
#include <mutex>

#include "natmult/parse.hpp"
#include "natmult/ring_maps.hpp"

namespace natmult {

enum class AssignmentKind { powers, frobenius_powers, differential_powers, splitting_ideals, custom };

inline const char* to_string(AssignmentKind k) {
  switch (k) {
    case AssignmentKind::powers: return "powers";
    case AssignmentKind::frobenius_powers: return "frobenius_powers";
    case AssignmentKind::differential_powers: return "differential_powers";
    case AssignmentKind::splitting_ideals: return "splitting_ideals";
    case AssignmentKind::custom: return "custom";
  }
  return "?";
}

inline AssignmentKind assignment_kind_from_string(const std::string& s) {
  for (auto k : {AssignmentKind::powers, AssignmentKind::frobenius_powers, AssignmentKind::differential_powers,
                 AssignmentKind::splitting_ideals, AssignmentKind::custom})
    if (s == to_string(k)) return k;
  fail(ErrorCode::invalid_argument, "unknown assignment kind '" + s + "'");
}

struct Assignment {
  AssignmentKind kind = AssignmentKind::powers;
  std::vector<std::string> templates;  // custom: generators in the parameter n
  std::string label;
  // Across a map, the source family is the contraction of the target family
  // (always the case for custom families, whose templates live on the target).
  bool contracted = false;

  static Assignment of(AssignmentKind k) { return Assignment{k, {}, to_string(k), false}; }
  static Assignment custom(std::vector<std::string> templates, std::string label = "custom") {
    return Assignment{AssignmentKind::custom, std::move(templates), std::move(label), true};
  }
  static Assignment contraction_of(AssignmentKind k) {
    return Assignment{k, {}, std::string(to_string(k)) + " (contracted)", true};
  }
  bool indexed_by_prime_powers() const {
    return kind == AssignmentKind::frobenius_powers || kind == AssignmentKind::splitting_ideals;
  }
};

/// Rejects indices outside the assignment's index set.
inline void validate_index(const Assignment& A, std::uint64_t characteristic, std::uint64_t n) {
  if (n == 0) fail(ErrorCode::invalid_index, "indices start at 1");
  if (!A.indexed_by_prime_powers()) return;
  if (characteristic == 0)
    fail(ErrorCode::invalid_characteristic, std::string(to_string(A.kind)) + " need positive characteristic");
  if (n == 1 || !is_power_of(n, characteristic))
    fail(ErrorCode::invalid_index,
         std::to_string(n) + " is not a power p^e (e >= 1) of p = " + std::to_string(characteristic));
}

namespace detail {

/// Integer weight vectors making every given polynomial homogeneous.
template <class Field>
std::vector<std::vector<long long>> homogenizing_gradings(const std::vector<Polynomial<Field>>& hs, std::size_t n) {
  std::vector<std::vector<mpq_class>> rows;
  for (const auto& h : hs)
    for (std::size_t t = 1; t < h.size(); ++t) {
      std::vector<mpq_class> d(n);
      for (std::size_t i = 0; i < n; ++i)
        d[i] = static_cast<long>(h.terms()[t].mono[i]) - static_cast<long>(h.terms()[0].mono[i]);
      rows.push_back(std::move(d));
    }
  // Reduced row echelon form over Q, then one kernel vector per free column.
  std::vector<std::size_t> pivot_cols;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < rows.size(); ++c) {
    std::size_t piv = r;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[r]);
    mpq_class inv = 1 / rows[r][c];
    for (auto& v : rows[r]) v *= inv;
    for (std::size_t o = 0; o < rows.size(); ++o) {
      if (o == r || rows[o][c] == 0) continue;
      mpq_class f = rows[o][c];
      for (std::size_t j = 0; j < n; ++j) rows[o][j] -= f * rows[r][j];
    }
    pivot_cols.push_back(c);
    ++r;
  }
  std::vector<std::vector<long long>> out;
  for (std::size_t free = 0; free < n; ++free) {
    if (std::find(pivot_cols.begin(), pivot_cols.end(), free) != pivot_cols.end()) continue;
    std::vector<mpq_class> w(n, 0);
    w[free] = 1;
    for (std::size_t k = 0; k < pivot_cols.size(); ++k) w[pivot_cols[k]] = -rows[k][free];
    mpz_class den = 1;
    for (auto& v : w) den = lcm(den, mpz_class(v.get_den()));
    std::vector<long long> iw;
    for (auto& v : w) iw.push_back(mpz_class(v * den).get_si());
    out.push_back(std::move(iw));
  }
  return out;
}

/// Row echelon form of a dense matrix in place, pivoting only in the first
/// `cols` columns; returns the rank. With `reduced`, pivots are 1 and cleared
/// above as well.
template <class Field>
std::size_t dense_echelon(const Field& k, std::vector<std::vector<typename Field::value_type>>& a, std::size_t cols,
                          bool reduced, std::vector<std::size_t>* pivots = nullptr) {
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < a.size(); ++c) {
    std::size_t piv = rank;
    while (piv < a.size() && k.is_zero(a[piv][c])) ++piv;
    if (piv == a.size()) continue;
    std::swap(a[piv], a[rank]);
    const std::size_t width = a[rank].size();
    auto inv = k.inv(a[rank][c]);
    for (std::size_t j = c; j < width; ++j) a[rank][j] = k.mul(a[rank][j], inv);
    for (std::size_t r = reduced ? 0 : rank + 1; r < a.size(); ++r) {
      if (r == rank || k.is_zero(a[r][c])) continue;
      auto f = a[r][c];
      for (std::size_t j = c; j < width; ++j)
        if (!k.is_zero(a[rank][j])) a[r][j] = k.sub(a[r][j], k.mul(f, a[rank][j]));
    }
    if (pivots) pivots->push_back(c);
    ++rank;
  }
  return rank;
}

/// (x_1^q, ..., x_n^q) : (h_1, ..., h_r) by graded linear algebra on S/m^[q].
/// The map g -> (g h_i) is block diagonal for any grading making the h_i
/// homogeneous; its rank is the colength of the colon, and its kernel is
/// the colon modulo m^[q].
template <class Field>
struct BracketColon {
  using Poly = Polynomial<Field>;
  std::uint64_t colength = 0;
  std::vector<Poly> basis;  // reduced Groebner basis, only when requested
};

template <class Field>
BracketColon<Field> bracket_colon(const RingPtr<Field>& ring, std::uint64_t q, std::vector<Polynomial<Field>> hs,
                                  bool want_basis) {
  using Poly = Polynomial<Field>;
  using Value = typename Field::value_type;
  const auto& k = ring->field();
  const std::size_t n = ring->nvars();
  BracketColon<Field> out;
  double size = std::pow(static_cast<double>(q), static_cast<double>(n));
  if (size > 5e7) fail(ErrorCode::resource_exhausted, "S/m^[q] has too many monomials (" + std::to_string(size) + ")");
  const std::uint64_t total = static_cast<std::uint64_t>(std::llround(size));

  // Drop terms already in m^[q].
  std::vector<Poly> hq;
  for (auto& h : hs) {
    std::vector<typename Poly::Term> keep;
    for (const auto& t : h.terms()) {
      bool inside = true;
      for (std::size_t i = 0; i < n && inside; ++i)
        if (t.mono[i] >= q) inside = false;
      if (inside) keep.push_back(t);
    }
    if (!keep.empty()) hq.push_back(Poly::from_sorted_terms(ring, std::move(keep)));
  }
  if (hq.empty()) {  // every h lies in m^[q]: the colon is the unit ideal
    out.colength = 0;
    if (want_basis) out.basis.push_back(Poly::constant(ring, 1));
    return out;
  }

  auto grads = homogenizing_gradings(hq, n);
  auto key_of = [&](const unsigned* e) {
    std::vector<long long> key(grads.size(), 0);
    for (std::size_t g = 0; g < grads.size(); ++g)
      for (std::size_t i = 0; i < n; ++i) key[g] += grads[g][i] * static_cast<long long>(e[i]);
    return key;
  };
  auto decode = [&](std::uint64_t code, unsigned* e) {
    for (std::size_t i = 0; i < n; ++i) {
      e[i] = static_cast<unsigned>(code % q);
      code /= q;
    }
  };
  auto encode = [&](const unsigned* e) {
    std::uint64_t code = 0;
    for (std::size_t i = n; i-- > 0;) code = code * q + e[i];
    return code;
  };

  std::map<std::vector<long long>, std::vector<std::uint64_t>> blocks;
  std::vector<std::uint32_t> pos(total);
  std::vector<unsigned> e(n), f(n);
  for (std::uint64_t code = 0; code < total; ++code) {
    decode(code, e.data());
    auto& b = blocks[key_of(e.data())];
    pos[code] = static_cast<std::uint32_t>(b.size());
    b.push_back(code);
  }
  std::vector<std::vector<long long>> shift;
  for (const auto& h : hq) {
    std::vector<unsigned> lead = h.leading_monomial().exponents();
    shift.push_back(key_of(lead.data()));
  }
  auto to_monomial = [&](std::uint64_t code) {
    decode(code, e.data());
    return ring->monomial(std::span<const unsigned>(e.data(), n));
  };

  std::vector<std::uint64_t> pivot_codes;
  std::vector<Poly> kernel_rows;
  for (auto& [key, rows] : blocks) {
    if (want_basis)  // descending in the ring order, so pivots are leading monomials
      std::sort(rows.begin(), rows.end(),
                [&](std::uint64_t a, std::uint64_t b) { return ring->compare(to_monomial(a), to_monomial(b)) > 0; });
    std::vector<std::size_t> offset;
    std::vector<const std::vector<std::uint64_t>*> targets;
    std::size_t cols = 0;
    for (std::size_t i = 0; i < hq.size(); ++i) {
      std::vector<long long> tk(key.size());
      for (std::size_t g = 0; g < key.size(); ++g) tk[g] = key[g] + shift[i][g];
      auto it = blocks.find(tk);
      targets.push_back(it == blocks.end() ? nullptr : &it->second);
      offset.push_back(cols);
      if (it != blocks.end()) cols += it->second.size();
    }
    const std::size_t width = cols + (want_basis ? rows.size() : 0);
    std::vector<std::vector<Value>> A(rows.size(), std::vector<Value>(width, k.zero()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      decode(rows[r], e.data());
      for (std::size_t i = 0; i < hq.size(); ++i) {
        if (!targets[i]) continue;
        for (const auto& t : hq[i].terms()) {
          bool inside = true;
          for (std::size_t v = 0; v < n && inside; ++v) {
            f[v] = e[v] + t.mono[v];
            if (f[v] >= q) inside = false;
          }
          if (!inside) continue;
          auto& cell = A[r][offset[i] + pos[encode(f.data())]];
          cell = k.add(cell, t.coeff);
        }
      }
      if (want_basis) A[r][cols + r] = k.one();
    }
    std::size_t rank = dense_echelon(k, A, cols, false);
    out.colength += rank;
    if (!want_basis || rank == rows.size()) continue;
    // Rows rank.. hold kernel vectors in the identity block; bring them to RREF.
    std::vector<std::vector<Value>> K;
    for (std::size_t r = rank; r < rows.size(); ++r)
      K.emplace_back(A[r].begin() + static_cast<std::ptrdiff_t>(cols), A[r].end());
    std::vector<std::size_t> piv;
    std::size_t kr = dense_echelon(k, K, rows.size(), true, &piv);
    for (std::size_t r = 0; r < kr; ++r) {
      std::vector<typename Poly::Term> terms;
      for (std::size_t c = 0; c < rows.size(); ++c)
        if (!k.is_zero(K[r][c])) terms.push_back({to_monomial(rows[c]), K[r][c]});
      pivot_codes.push_back(rows[piv[r]]);
      kernel_rows.push_back(Poly::from_sorted_terms(ring, std::move(terms)));
    }
  }
  if (!want_basis) return out;

  // The leading monomials form an upper set in the box, so a pivot is a
  // minimal generator iff dividing by any variable leaves the set.
  std::vector<char> is_pivot(total, 0);
  for (auto c : pivot_codes) is_pivot[c] = 1;
  std::vector<std::uint64_t> stride(n, 1);
  for (std::size_t i = 1; i < n; ++i) stride[i] = stride[i - 1] * q;
  std::vector<Poly> basis;
  for (std::size_t i = 0; i < n; ++i)
    if (!is_pivot[(q - 1) * stride[i]]) basis.push_back(Poly::monomial(ring, ring->variable(i, static_cast<unsigned>(q))));
  for (std::size_t a = 0; a < pivot_codes.size(); ++a) {
    decode(pivot_codes[a], e.data());
    bool minimal = true;
    for (std::size_t i = 0; i < n && minimal; ++i)
      if (e[i] > 0 && is_pivot[pivot_codes[a] - stride[i]]) minimal = false;
    if (minimal) basis.push_back(kernel_rows[a]);
  }
  std::sort(basis.begin(), basis.end(), [&](const Poly& a, const Poly& b) {
    return ring->compare(a.leading_monomial(), b.leading_monomial()) < 0;
  });
  out.basis = std::move(basis);
  return out;
}

/// Generators of I^[q] : I. A principal I = (f) gives f^{q-1} directly.
template <class Field>
std::vector<Polynomial<Field>> fedder_numerator(const RingPresentation<Field>& R, std::uint64_t q) {
  const auto& gb = R.relations.groebner_basis();
  if (gb.size() == 1) return {gb[0].pow(static_cast<unsigned>(q - 1))};
  return colon(bracket_power(R.relations, q), R.relations).generators();
}

}  // namespace detail

/// Preimage in the ambient ring of the q-th splitting ideal of R = S/I:
/// m^[q] : (I^[q] : I).
template <class Field>
Ideal<Field> splitting_ideal(const RingPresentation<Field>& R, std::uint64_t q) {
  validate_index(Assignment::of(AssignmentKind::splitting_ideals), R.ambient->characteristic(), q);
  auto M = bracket_power(R.maximal_ideal(), q);
  if (R.is_regular()) return M;
  auto bc = detail::bracket_colon(R.ambient, q, detail::fedder_numerator(R, q), true);
  return Ideal<Field>::from_reduced_basis(R.ambient, std::move(bc.basis));
}

/// The same ideal computed entirely with Groebner colons.
template <class Field>
Ideal<Field> splitting_ideal_groebner(const RingPresentation<Field>& R, std::uint64_t q) {
  validate_index(Assignment::of(AssignmentKind::splitting_ideals), R.ambient->characteristic(), q);
  auto M = bracket_power(R.maximal_ideal(), q);
  if (R.is_regular()) return M;
  auto inner = colon(bracket_power(R.relations, q), R.relations);
  return colon(M, inner);
}

/// a_q = ℓ(S / splitting ideal), as the rank of the graded multiplication map.
template <class Field>
std::uint64_t splitting_number(const RingPresentation<Field>& R, std::uint64_t q) {
  validate_index(Assignment::of(AssignmentKind::splitting_ideals), R.ambient->characteristic(), q);
  if (R.is_regular()) {
    std::uint64_t v = 1;
    for (std::size_t i = 0; i < R.nvars(); ++i) v *= q;
    return v;
  }
  return detail::bracket_colon(R.ambient, q, detail::fedder_numerator(R, q), false).colength;
}

/// n-th differential power of the source of a group-backed map into a
/// polynomial ring: the contraction of n-th power of the target maximal ideal.
template <class Field>
Ideal<Field> differential_power_contracted(const FiniteMap<Field>& map, unsigned n) {
  if (n == 0) fail(ErrorCode::invalid_index, "indices start at 1");
  if (!map.target.is_regular()) fail(ErrorCode::unsupported_ring, "differential powers need a regular target");
  if (!map.action) fail(ErrorCode::unsupported_ring, "differential powers of a singular ring need a group action");
  if (!map.action->is_small())
    fail(ErrorCode::unsupported_ring, "group contains a pseudo-reflection; the inclusion is not etale in codimension one");
  return contract_ideal(map, ideal_power(map.target.maximal_ideal(), n));
}

/// A(R)_n as an ideal of R's ambient ring (containing the relations). `via`
/// supplies the group-backed inclusion needed for differential powers of a
/// singular R.
template <class Field>
Ideal<Field> family_ideal(const Assignment& A, const RingPresentation<Field>& R, std::uint64_t n,
                          const FiniteMap<Field>* via = nullptr) {
  validate_index(A, R.ambient->characteristic(), n);
  switch (A.kind) {
    case AssignmentKind::powers: return R.lift(ideal_power(R.maximal_ideal(), static_cast<unsigned>(n)));
    case AssignmentKind::frobenius_powers: return R.lift(bracket_power(R.maximal_ideal(), n));
    case AssignmentKind::differential_powers:
      if (R.is_regular()) return ideal_power(R.maximal_ideal(), static_cast<unsigned>(n));
      if (!via) fail(ErrorCode::unsupported_ring, "differential powers of a singular ring need a group-backed inclusion");
      if (!via->source.ambient->same_as(*R.ambient))
        fail(ErrorCode::unsupported_ring, "inclusion does not start at this ring");
      return differential_power_contracted(*via, static_cast<unsigned>(n));
    case AssignmentKind::splitting_ideals: return splitting_ideal(R, n);
    case AssignmentKind::custom: {
      ParamBindings params{{"n", static_cast<long long>(n)}};
      std::vector<Polynomial<Field>> gens;
      for (const auto& t : A.templates) gens.push_back(parse_polynomial<Field>(t, R.ambient, params));
      return R.lift(Ideal<Field>(R.ambient, std::move(gens)));
    }
  }
  fail(ErrorCode::invalid_argument, "unknown assignment");
}

/// Lazily filled index -> ideal table; entries are checked to be m-primary.
template <class Field>
class FamilyTable {
 public:
  FamilyTable(Assignment A, RingPresentation<Field> R, const FiniteMap<Field>* via = nullptr)
      : A_(std::move(A)), R_(std::move(R)), via_(via) {}

  const Assignment& assignment() const { return A_; }
  const RingPresentation<Field>& ring() const { return R_; }

  Ideal<Field> at(std::uint64_t n) {
    {
      std::lock_guard<std::mutex> lock(mu_);
      if (auto it = entries_.find(n); it != entries_.end()) return it->second;
    }
    Ideal<Field> I = family_ideal(A_, R_, n, via_);
    if (!is_m_primary(I))
      fail(ErrorCode::infinite_colength, std::string(to_string(A_.kind)) + " entry at index " + std::to_string(n) +
                                             " is not m-primary");
    std::lock_guard<std::mutex> lock(mu_);
    return entries_.emplace(n, std::move(I)).first->second;
  }

 private:
  Assignment A_;
  RingPresentation<Field> R_;
  const FiniteMap<Field>* via_;
  std::mutex mu_;
  std::map<std::uint64_t, Ideal<Field>> entries_;
};

struct BoundedRow {
  std::uint64_t n = 0;
  std::uint64_t exponent = 0;          // ceil(C n)
  bool holds = false;                  // m^exponent ⊆ A(R)_n
  std::uint64_t minimal_exponent = 0;  // smallest N with m^N ⊆ A(R)_n
};

struct BoundedReport {
  mpq_class C;
  std::vector<BoundedRow> rows;
  bool all_hold() const {
    return std::all_of(rows.begin(), rows.end(), [](const BoundedRow& r) { return r.holds; });
  }
};

template <class Field>
using IdealProvider = std::function<Ideal<Field>(std::uint64_t)>;

template <class Field>
BoundedReport check_bounded(const IdealProvider<Field>& ideal_at, const mpq_class& C,
                            const std::vector<std::uint64_t>& indices) {
  if (C <= 0) fail(ErrorCode::invalid_argument, "bound constant must be positive");
  BoundedReport rep{C, {}};
  for (auto n : indices) {
    Ideal<Field> In = ideal_at(n);
    mpq_class cn = C * mpq_class(mpz_class(std::to_string(n)));
    mpz_class ceil_cn;
    mpz_cdiv_q(ceil_cn.get_mpz_t(), cn.get_num_mpz_t(), cn.get_den_mpz_t());
    BoundedRow row;
    row.n = n;
    row.exponent = ceil_cn.get_ui();
    row.minimal_exponent = truncation_bound(In);
    row.holds = row.minimal_exponent <= row.exponent;
    rep.rows.push_back(row);
  }
  return rep;
}

/// m^{ceil(C n)} ⊆ A(R)_n per index, with the smallest exponent that works.
/// Prime-power families use the index q itself as n.
template <class Field>
BoundedReport check_bounded(const Assignment& A, const RingPresentation<Field>& R, const mpq_class& C,
                            const std::vector<std::uint64_t>& indices, const FiniteMap<Field>* via = nullptr) {
  IdealProvider<Field> at = [&](std::uint64_t n) { return family_ideal(A, R, n, via); };
  return check_bounded(at, C, indices);
}

/// Linear substitution x_i -> images[i] of a presentation's ambient ring.
template <class Field>
struct LinearAutomorphism {
  std::vector<Polynomial<Field>> images;
  std::string label;
};

template <class Field>
void validate_automorphism(const RingPresentation<Field>& R, const LinearAutomorphism<Field>& phi) {
  const std::size_t n = R.nvars();
  if (phi.images.size() != n) fail(ErrorCode::invalid_automorphism, "automorphism needs one image per variable");
  Matrix<Field> M(n, std::vector<typename Field::value_type>(n, R.ambient->field().zero()));
  for (std::size_t i = 0; i < n; ++i) {
    require_same_ring(phi.images[i].ring(), *R.ambient);
    for (const auto& t : phi.images[i].terms()) {
      if (t.mono.degree() != 1) fail(ErrorCode::invalid_automorphism, "automorphism must be linear");
      for (std::size_t j = 0; j < n; ++j)
        if (t.mono[j]) M[i][j] = t.coeff;
    }
  }
  if (matrix_rank(R.ambient->field(), M) != n) fail(ErrorCode::invalid_automorphism, "substitution is not invertible");
  for (const auto& rel : R.relations.generators())
    if (!R.relations.contains(substitute(rel, std::span<const Polynomial<Field>>(phi.images), R.ambient)))
      fail(ErrorCode::invalid_automorphism, "substitution does not preserve the relation " + rel.to_string());
}

struct CharacteristicCell {
  std::uint64_t n = 0;
  std::string automorphism;
  bool stable = false;
  std::string witness;  // generator whose image leaves the ideal
  std::string witness_image;
};

struct CharacteristicReport {
  std::vector<CharacteristicCell> cells;
  bool all_stable() const {
    return std::all_of(cells.begin(), cells.end(), [](const CharacteristicCell& c) { return c.stable; });
  }
};

template <class Field>
CharacteristicReport check_characteristic(const RingPresentation<Field>& R, const IdealProvider<Field>& ideal_at,
                                          const std::vector<LinearAutomorphism<Field>>& phis,
                                          const std::vector<std::uint64_t>& indices) {
  for (const auto& phi : phis) validate_automorphism(R, phi);
  CharacteristicReport rep;
  for (auto n : indices) {
    Ideal<Field> In = ideal_at(n);
    for (const auto& phi : phis) {
      CharacteristicCell cell{n, phi.label, true, "", ""};
      for (const auto& g : In.generators()) {
        auto img = substitute(g, std::span<const Polynomial<Field>>(phi.images), R.ambient);
        if (!In.contains(img)) {
          cell.stable = false;
          cell.witness = g.to_string();
          cell.witness_image = img.to_string();
          break;
        }
      }
      rep.cells.push_back(std::move(cell));
    }
  }
  return rep;
}

template <class Field>
CharacteristicReport check_characteristic(const Assignment& A, const RingPresentation<Field>& R,
                                          const std::vector<LinearAutomorphism<Field>>& phis,
                                          const std::vector<std::uint64_t>& indices,
                                          const FiniteMap<Field>* via = nullptr) {
  IdealProvider<Field> at = [&](std::uint64_t n) { return family_ideal(A, R, n, via); };
  return check_characteristic(R, at, phis, indices);
}

struct IntersectionRow {
  std::uint64_t n = 0;
  bool equal = false;
  std::string witness;  // element of the contraction outside A(R)_n, or the reverse
};

struct IntersectionReport {
  std::vector<IntersectionRow> rows;
  bool all_equal() const {
    return std::all_of(rows.begin(), rows.end(), [](const IntersectionRow& r) { return r.equal; });
  }
};

template <class Field>
IntersectionReport check_intersection(const FiniteMap<Field>& map, const IdealProvider<Field>& source_at,
                                      const IdealProvider<Field>& target_at,
                                      const std::vector<std::uint64_t>& indices) {
  IntersectionReport rep;
  for (auto n : indices) {
    Ideal<Field> src = source_at(n);
    Ideal<Field> con = contract_ideal(map, target_at(n));
    IntersectionRow row{n, true, ""};
    for (const auto& g : con.generators())
      if (!src.contains(g)) {
        row.equal = false;
        row.witness = g.to_string() + " lies in the contraction but not in A(R)_" + std::to_string(n);
        break;
      }
    if (row.equal)
      for (const auto& g : src.generators())
        if (!con.contains(g)) {
          row.equal = false;
          row.witness = g.to_string() + " lies in A(R)_" + std::to_string(n) + " but not in the contraction";
          break;
        }
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

/// A(R)_n against φ^{-1}(A(S)_n) for each index.
template <class Field>
IntersectionReport check_intersection(const Assignment& A, const FiniteMap<Field>& map,
                                      const std::vector<std::uint64_t>& indices) {
  IdealProvider<Field> src = [&](std::uint64_t n) { return family_ideal(A, map.source, n, &map); };
  IdealProvider<Field> tgt = [&](std::uint64_t n) { return family_ideal(A, map.target, n); };
  return check_intersection(map, src, tgt, indices);
}

}  // namespace natmult
