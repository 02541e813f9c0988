#pragma once

#include <algorithm>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "natmult/polynomial.hpp"

namespace natmult {

/// Resource guard for Buchberger runs. Exceeding a cap raises
/// resource-exhausted instead of returning a partial answer.
struct GroebnerOptions {
  std::size_t max_basis_size = 100000;
  std::uint64_t max_reduction_steps = 2'000'000'000ULL;
};

namespace detail {

template <class Field>
int compare_polys(const Polynomial<Field>& a, const Polynomial<Field>& b) {
  const auto& ring = a.ring();
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = ring.compare(a.terms()[i].mono, b.terms()[i].mono);
    if (c) return c;
    mpq_class ca = a.field().to_rational(a.terms()[i].coeff), cb = b.field().to_rational(b.terms()[i].coeff);
    if (ca != cb) return ca < cb ? -1 : 1;
  }
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

/// Deterministic order: by leading monomial, then by the full term list.
template <class Field>
void sort_polys(std::vector<Polynomial<Field>>& v) {
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
    if (a.is_zero() || b.is_zero()) return a.is_zero() && !b.is_zero();
    return compare_polys(a, b) < 0;
  });
}

/// Divisor lookup over a list of monic polynomials with divmask prefiltering.
template <class Field>
class DivisorTable {
 public:
  void add(const Polynomial<Field>* p) {
    polys_.push_back(p);
    masks_.push_back(p->leading_monomial().divmask());
  }
  void clear() {
    polys_.clear();
    masks_.clear();
  }
  const Polynomial<Field>* find(const Monomial& m) const {
    std::uint32_t mm = m.divmask();
    for (std::size_t i = 0; i < polys_.size(); ++i)
      if ((masks_[i] & ~mm) == 0 && polys_[i]->leading_monomial().divides(m)) return polys_[i];
    return nullptr;
  }
  std::size_t size() const { return polys_.size(); }

 private:
  std::vector<const Polynomial<Field>*> polys_;
  std::vector<std::uint32_t> masks_;
};

/// Reduces f by the table. `full` also reduces tail terms.
template <class Field>
Polynomial<Field> reduce(const Polynomial<Field>& f, const DivisorTable<Field>& table, bool full,
                         std::uint64_t* steps = nullptr, std::uint64_t step_cap = ~0ULL) {
  using Term = typename Polynomial<Field>::Term;
  const auto& ring = f.ring();
  const auto& k = f.field();
  std::vector<Term> p(f.terms()), tmp, out;
  std::size_t head = 0;
  while (head < p.size()) {
    const Term& lt = p[head];
    const Polynomial<Field>* g = table.find(lt.mono);
    if (!g) {
      if (!full) break;
      out.push_back(lt);
      ++head;
      continue;
    }
    if (steps && ++*steps > step_cap) fail(ErrorCode::resource_exhausted, "reduction step cap exceeded");
    const Monomial shift = lt.mono / g->leading_monomial();
    const auto c = k.neg(k.div(lt.coeff, g->leading_coeff()));
    const auto& gt = g->terms();
    tmp.clear();
    tmp.reserve(p.size() - head + gt.size());
    std::size_t i = head + 1, j = 1;
    while (i < p.size() && j < gt.size()) {
      Monomial bm = gt[j].mono * shift;
      int cmp = ring.compare(p[i].mono, bm);
      if (cmp > 0) {
        tmp.push_back(std::move(p[i++]));
      } else if (cmp < 0) {
        tmp.push_back({bm, k.mul(gt[j++].coeff, c)});
      } else {
        auto s = k.add(p[i].coeff, k.mul(gt[j].coeff, c));
        if (!k.is_zero(s)) tmp.push_back({bm, std::move(s)});
        ++i;
        ++j;
      }
    }
    for (; i < p.size(); ++i) tmp.push_back(std::move(p[i]));
    for (; j < gt.size(); ++j) tmp.push_back({gt[j].mono * shift, k.mul(gt[j].coeff, c)});
    std::swap(p, tmp);
    head = 0;
  }
  if (full) {
    for (std::size_t i = head; i < p.size(); ++i) out.push_back(std::move(p[i]));
  } else {
    out.assign(std::make_move_iterator(p.begin() + static_cast<std::ptrdiff_t>(head)),
               std::make_move_iterator(p.end()));
  }
  return Polynomial<Field>::from_sorted_terms(f.ring_ptr(), std::move(out));
}

}  // namespace detail

/// Buchberger's algorithm with sugar-degree pair selection and the
/// Gebauer-Moeller criteria. Returns the reduced Groebner basis, monic,
/// sorted ascending by leading monomial.
template <class Field>
std::vector<Polynomial<Field>> buchberger(std::vector<Polynomial<Field>> gens, const GroebnerOptions& opts = {}) {
  using Poly = Polynomial<Field>;
  if (gens.empty()) return {};
  const auto ring_ptr = gens.front().ring_ptr();
  const auto& ring = *ring_ptr;
  for (const auto& g : gens) require_same_ring(g.ring(), ring);

  std::vector<Poly> input;
  for (auto& g : gens)
    if (!g.is_zero()) input.push_back(g.monic());
  for (const auto& g : input)
    if (g.is_constant()) return {Poly::constant(ring_ptr, 1)};
  detail::sort_polys(input);

  struct Pair {
    std::size_t i, j;
    Monomial lcm;
    int sugar;
  };
  std::vector<Poly> basis;
  std::vector<int> sugar;
  std::vector<bool> active;
  std::vector<Pair> pairs;
  std::uint64_t steps = 0;

  auto update = [&](Poly h, int h_sugar) {
    const std::size_t hi = basis.size();
    const Monomial H = h.leading_monomial();
    std::vector<Pair> cand;
    for (std::size_t g = 0; g < hi; ++g)
      if (active[g]) {
        const Monomial& G = basis[g].leading_monomial();
        Monomial l = ring.lcm(H, G);
        int s = std::max(h_sugar + (l.degree() - H.degree()), sugar[g] + (l.degree() - G.degree()));
        cand.push_back({g, hi, l, s});
      }
    // Chain criterion among the new pairs.
    std::vector<Pair> kept;
    for (std::size_t a = 0; a < cand.size(); ++a) {
      const Monomial& G = basis[cand[a].i].leading_monomial();
      bool keep = H.coprime(G);
      if (!keep) {
        keep = true;
        for (std::size_t b = a + 1; b < cand.size() && keep; ++b)
          if (cand[b].lcm.divides(cand[a].lcm)) keep = false;
        for (std::size_t b = 0; b < kept.size() && keep; ++b)
          if (kept[b].lcm.divides(cand[a].lcm)) keep = false;
      }
      if (keep) kept.push_back(cand[a]);
    }
    // Product criterion.
    std::vector<Pair> fresh;
    for (auto& p : kept)
      if (!H.coprime(basis[p.i].leading_monomial())) fresh.push_back(p);
    // Old pairs made redundant by h.
    std::vector<Pair> old;
    old.reserve(pairs.size());
    for (auto& p : pairs) {
      bool drop = H.divides(p.lcm) &&
                  !(ring.lcm(basis[p.i].leading_monomial(), H) == p.lcm) &&
                  !(ring.lcm(basis[p.j].leading_monomial(), H) == p.lcm);
      if (!drop) old.push_back(std::move(p));
    }
    pairs = std::move(old);
    pairs.insert(pairs.end(), fresh.begin(), fresh.end());
    for (std::size_t g = 0; g < hi; ++g)
      if (active[g] && H.divides(basis[g].leading_monomial())) active[g] = false;
    basis.push_back(std::move(h));
    sugar.push_back(h_sugar);
    active.push_back(true);
    if (basis.size() > opts.max_basis_size) fail(ErrorCode::resource_exhausted, "Groebner basis size cap exceeded");
  };

  detail::DivisorTable<Field> table;
  auto rebuild_table = [&] {
    table.clear();
    for (std::size_t g = 0; g < basis.size(); ++g)
      if (active[g]) table.add(&basis[g]);
  };

  for (auto& g : input) {
    rebuild_table();
    Poly r = detail::reduce(g, table, true, &steps, opts.max_reduction_steps);
    if (r.is_zero()) continue;
    r = r.monic();
    if (r.is_constant()) return {Poly::constant(ring_ptr, 1)};
    int s = r.total_degree();
    update(std::move(r), s);
  }

  while (!pairs.empty()) {
    std::size_t best = 0;
    for (std::size_t a = 1; a < pairs.size(); ++a) {
      const Pair& p = pairs[a];
      const Pair& q = pairs[best];
      if (p.sugar != q.sugar) {
        if (p.sugar < q.sugar) best = a;
        continue;
      }
      int c = ring.compare(p.lcm, q.lcm);
      if (c < 0 || (c == 0 && (p.j < q.j || (p.j == q.j && p.i < q.i)))) best = a;
    }
    Pair p = pairs[best];
    pairs[best] = std::move(pairs.back());
    pairs.pop_back();

    const Poly& gi = basis[p.i];
    const Poly& gj = basis[p.j];
    Poly s = gi.mul_term(p.lcm / gi.leading_monomial(), ring.field().one())
                 .sub_mul(ring.field().one(), p.lcm / gj.leading_monomial(), gj);
    rebuild_table();
    Poly r = detail::reduce(s, table, true, &steps, opts.max_reduction_steps);
    if (r.is_zero()) continue;
    r = r.monic();
    if (r.is_constant()) return {Poly::constant(ring_ptr, 1)};
    update(std::move(r), p.sugar);
  }

  // Minimal basis, then interreduce tails.
  std::vector<Poly> minimal;
  for (std::size_t g = 0; g < basis.size(); ++g) {
    if (!active[g]) continue;
    bool redundant = false;
    for (std::size_t h = 0; h < basis.size() && !redundant; ++h)
      if (h != g && active[h] && basis[h].leading_monomial().divides(basis[g].leading_monomial()) &&
          !(basis[h].leading_monomial() == basis[g].leading_monomial() && h > g))
        redundant = true;
    if (!redundant) minimal.push_back(basis[g]);
  }
  std::vector<Poly> reduced;
  for (std::size_t g = 0; g < minimal.size(); ++g) {
    table.clear();
    for (std::size_t h = 0; h < minimal.size(); ++h)
      if (h != g) table.add(&minimal[h]);
    const auto& lt = minimal[g].terms().front();
    Poly tail = minimal[g] - Poly::term(ring_ptr, lt.mono, lt.coeff);
    Poly rt = detail::reduce(tail, table, true, &steps, opts.max_reduction_steps);
    reduced.push_back((Poly::term(ring_ptr, lt.mono, lt.coeff) + rt).monic());
  }
  std::sort(reduced.begin(), reduced.end(),
            [&](const Poly& a, const Poly& b) { return ring.compare(a.leading_monomial(), b.leading_monomial()) < 0; });
  return reduced;
}

/// Finitely generated ideal with a lazily computed, write-once reduced Groebner basis.
template <class Field>
class Ideal {
 public:
  using Poly = Polynomial<Field>;

  Ideal() = default;
  Ideal(RingPtr<Field> ring, std::vector<Poly> gens, GroebnerOptions opts = {})
      : ring_(std::move(ring)), gens_(), cache_(std::make_shared<Cache>()), opts_(opts) {
    for (auto& g : gens) {
      require_same_ring(g.ring(), *ring_);
      if (!g.is_zero()) gens_.push_back(std::move(g));
    }
  }

  /// Adopts an already reduced Groebner basis (sorted ascending by leading monomial).
  static Ideal from_reduced_basis(RingPtr<Field> ring, std::vector<Poly> basis) {
    Ideal I(ring, basis);
    std::call_once(I.cache_->once, [&] { I.cache_->basis = std::move(basis); });
    return I;
  }

  const RingPtr<Field>& ring_ptr() const { return ring_; }
  const PolyRing<Field>& ring() const { return *ring_; }
  const std::vector<Poly>& generators() const { return gens_; }
  const GroebnerOptions& options() const { return opts_; }

  const std::vector<Poly>& groebner_basis() const {
    std::call_once(cache_->once, [&] { cache_->basis = buchberger(gens_, opts_); });
    return cache_->basis;
  }

  std::vector<Monomial> leading_monomials() const {
    std::vector<Monomial> out;
    for (const auto& g : groebner_basis()) out.push_back(g.leading_monomial());
    return out;
  }

  Poly normal_form(const Poly& f) const {
    require_same_ring(f.ring(), *ring_);
    detail::DivisorTable<Field> table;
    for (const auto& g : groebner_basis()) table.add(&g);
    return detail::reduce(f, table, true);
  }

  bool contains(const Poly& f) const { return normal_form(f).is_zero(); }
  bool contains(const Ideal& other) const {
    for (const auto& g : other.generators())
      if (!contains(g)) return false;
    return true;
  }
  bool equals(const Ideal& other) const { return contains(other) && other.contains(*this); }

  bool is_zero() const { return gens_.empty(); }
  bool is_unit() const {
    const auto& gb = groebner_basis();
    return gb.size() == 1 && gb[0].is_constant();
  }

  std::string to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < gens_.size(); ++i) s += (i ? ", " : "") + gens_[i].to_string();
    return s + ")";
  }

 private:
  struct Cache {
    std::once_flag once;
    std::vector<Poly> basis;
  };

  RingPtr<Field> ring_;
  std::vector<Poly> gens_;
  std::shared_ptr<Cache> cache_;
  GroebnerOptions opts_;
};

template <class Field>
Polynomial<Field> normal_form(const Polynomial<Field>& f, const Ideal<Field>& I) {
  return I.normal_form(f);
}

/// Exact quotient f / g; fails unless g divides f.
template <class Field>
Polynomial<Field> divide_exact(const Polynomial<Field>& f, const Polynomial<Field>& g) {
  require_same_ring(f.ring(), g.ring());
  if (g.is_zero()) fail(ErrorCode::division_by_zero, "division by the zero polynomial");
  const auto& k = f.field();
  Polynomial<Field> rem = f;
  std::vector<typename Polynomial<Field>::Term> quot;
  while (!rem.is_zero()) {
    if (!g.leading_monomial().divides(rem.leading_monomial()))
      fail(ErrorCode::invalid_argument, "polynomial division is not exact");
    Monomial m = rem.leading_monomial() / g.leading_monomial();
    auto c = k.div(rem.leading_coeff(), g.leading_coeff());
    quot.push_back({m, c});
    rem = rem.sub_mul(c, m, g);
  }
  return Polynomial<Field>::from_terms(f.ring_ptr(), std::move(quot));
}

// ---------------------------------------------------------------------------
// Ideal arithmetic.

template <class Field>
Ideal<Field> ideal_sum(const Ideal<Field>& I, const Ideal<Field>& J) {
  require_same_ring(I.ring(), J.ring());
  auto gens = I.generators();
  gens.insert(gens.end(), J.generators().begin(), J.generators().end());
  return Ideal<Field>(I.ring_ptr(), std::move(gens), I.options());
}

namespace detail {
template <class Field>
std::vector<Polynomial<Field>> dedupe(std::vector<Polynomial<Field>> v) {
  for (auto& p : v) p = p.monic();
  sort_polys(v);
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}
}  // namespace detail

template <class Field>
Ideal<Field> ideal_product(const Ideal<Field>& I, const Ideal<Field>& J) {
  require_same_ring(I.ring(), J.ring());
  std::vector<Polynomial<Field>> gens;
  for (const auto& f : I.generators())
    for (const auto& g : J.generators()) gens.push_back(f * g);
  return Ideal<Field>(I.ring_ptr(), detail::dedupe(std::move(gens)), I.options());
}

/// I^n, generated by all degree-n products of generators (taken as multisets).
template <class Field>
Ideal<Field> ideal_power(const Ideal<Field>& I, unsigned n) {
  using Poly = Polynomial<Field>;
  if (n == 0) return Ideal<Field>(I.ring_ptr(), {Poly::constant(I.ring_ptr(), 1)}, I.options());
  const auto& g = I.generators();
  // level[i] = products of degree d whose largest generator index is exactly i.
  std::vector<std::vector<Poly>> level(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) level[i] = {g[i]};
  for (unsigned d = 1; d < n; ++d) {
    std::vector<std::vector<Poly>> next(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = 0; j <= i; ++j)
        for (const auto& p : level[j]) next[i].push_back(p * g[i]);
    level = std::move(next);
  }
  std::vector<Poly> gens;
  for (auto& l : level) gens.insert(gens.end(), l.begin(), l.end());
  return Ideal<Field>(I.ring_ptr(), detail::dedupe(std::move(gens)), I.options());
}

inline bool is_power_of(std::uint64_t q, std::uint64_t p) {
  if (p < 2 || q < p) return false;
  while (q % p == 0) q /= p;
  return q == 1;
}

/// Frobenius power I^[q] = (g^q : g a generator), q a power of the characteristic.
template <class Field>
Ideal<Field> bracket_power(const Ideal<Field>& I, std::uint64_t q) {
  const auto p = I.ring().characteristic();
  if (p == 0) fail(ErrorCode::invalid_characteristic, "Frobenius powers need positive characteristic");
  if (!is_power_of(q, p))
    fail(ErrorCode::invalid_characteristic, std::to_string(q) + " is not a power of " + std::to_string(p));
  std::vector<Polynomial<Field>> gens;
  for (const auto& g : I.generators()) gens.push_back(g.pow(static_cast<unsigned>(q)));
  return Ideal<Field>(I.ring_ptr(), std::move(gens), I.options());
}

enum class IdealOp { sum, product, power, bracket_power };

template <class Field>
Ideal<Field> ideal_combine(const Ideal<Field>& I, const Ideal<Field>* J, IdealOp op, std::uint64_t exponent = 0) {
  switch (op) {
    case IdealOp::sum:
      if (!J) fail(ErrorCode::invalid_argument, "sum needs two ideals");
      return ideal_sum(I, *J);
    case IdealOp::product:
      if (!J) fail(ErrorCode::invalid_argument, "product needs two ideals");
      return ideal_product(I, *J);
    case IdealOp::power: return ideal_power(I, static_cast<unsigned>(exponent));
    case IdealOp::bracket_power: return bracket_power(I, exponent);
  }
  fail(ErrorCode::invalid_argument, "unknown ideal operation");
}

/// Order inherited by a ring of remaining variables after elimination.
inline MonomialOrder restricted_order(const MonomialOrder& ord, const std::vector<std::size_t>& kept) {
  switch (ord.kind) {
    case MonomialOrder::Kind::lex:
    case MonomialOrder::Kind::grlex:
    case MonomialOrder::Kind::grevlex: return ord;
    case MonomialOrder::Kind::weighted: {
      std::vector<int> w;
      for (auto i : kept) w.push_back(ord.weights[i]);
      return MonomialOrder::weighted_order(std::move(w));
    }
    case MonomialOrder::Kind::block_elimination: return MonomialOrder::grevlex();
  }
  return MonomialOrder::grevlex();
}

/// I ∩ k[remaining variables], via a block elimination order.
template <class Field>
Ideal<Field> eliminate(const Ideal<Field>& I, const std::vector<std::string>& block) {
  const auto& ring = I.ring();
  std::vector<bool> elim(ring.nvars(), false);
  for (const auto& name : block) {
    auto i = ring.index_of(name);
    if (!i) fail(ErrorCode::invalid_argument, "cannot eliminate unknown variable " + name);
    elim[*i] = true;
  }
  std::vector<std::size_t> to_work(ring.nvars()), kept;
  std::vector<std::string> names;
  std::size_t k = 0;
  for (std::size_t i = 0; i < ring.nvars(); ++i)
    if (elim[i]) {
      to_work[i] = names.size();
      names.push_back(ring.names()[i]);
      ++k;
    }
  for (std::size_t i = 0; i < ring.nvars(); ++i)
    if (!elim[i]) {
      to_work[i] = names.size();
      names.push_back(ring.names()[i]);
      kept.push_back(i);
    }
  std::vector<std::string> kept_names;
  for (auto i : kept) kept_names.push_back(ring.names()[i]);
  auto small = PolyRing<Field>::make(ring.field(), kept_names, restricted_order(ring.order(), kept));
  if (k == 0) {
    std::vector<std::size_t> id(ring.nvars());
    std::iota(id.begin(), id.end(), std::size_t{0});
    std::vector<Polynomial<Field>> gens;
    for (const auto& g : I.generators()) gens.push_back(g.remap(small, id));
    return Ideal<Field>(small, std::move(gens), I.options());
  }
  auto work = PolyRing<Field>::make(ring.field(), names, MonomialOrder::elimination(k));
  std::vector<Polynomial<Field>> gens;
  for (const auto& g : I.generators()) gens.push_back(g.remap(work, to_work));
  auto gb = buchberger(gens, I.options());
  std::vector<std::size_t> back(names.size(), kMaxVariables + 1);
  for (std::size_t j = 0; j < kept.size(); ++j) back[k + j] = j;
  std::vector<Polynomial<Field>> out;
  for (const auto& g : gb) {
    bool free = true;
    for (std::size_t v = 0; v < k && free; ++v)
      if (g.uses_variable(v)) free = false;
    if (free) out.push_back(g.remap(small, back));
  }
  return Ideal<Field>(small, std::move(out), I.options());
}

/// I ∩ J by eliminating t from t*I + (1 - t)*J.
template <class Field>
Ideal<Field> intersect(const Ideal<Field>& I, const Ideal<Field>& J) {
  using Poly = Polynomial<Field>;
  require_same_ring(I.ring(), J.ring());
  if (I.is_zero() || J.is_zero()) return Ideal<Field>(I.ring_ptr(), {}, I.options());
  const auto& ring = I.ring();
  std::vector<std::string> names{"_t"};
  for (const auto& n : ring.names()) names.push_back(n == "_t" ? "_t_" : n);
  auto work = PolyRing<Field>::make(ring.field(), names, MonomialOrder::elimination(1));
  std::vector<std::size_t> up(ring.nvars());
  std::iota(up.begin(), up.end(), std::size_t{1});
  Poly t = Poly::variable(work, 0);
  Poly one_minus_t = Poly::constant(work, 1) - t;
  std::vector<Poly> gens;
  for (const auto& f : I.generators()) gens.push_back(t * f.remap(work, up));
  for (const auto& g : J.generators()) gens.push_back(one_minus_t * g.remap(work, up));
  auto gb = buchberger(gens, I.options());
  std::vector<std::size_t> down(work->nvars(), kMaxVariables + 1);
  for (std::size_t i = 0; i < ring.nvars(); ++i) down[i + 1] = i;
  std::vector<Poly> out;
  for (const auto& g : gb)
    if (!g.uses_variable(0)) out.push_back(g.remap(I.ring_ptr(), down));
  return Ideal<Field>(I.ring_ptr(), std::move(out), I.options());
}

/// I : (f) = (I ∩ (f)) / f.
template <class Field>
Ideal<Field> colon(const Ideal<Field>& I, const Polynomial<Field>& f) {
  using Poly = Polynomial<Field>;
  require_same_ring(I.ring(), f.ring());
  if (f.is_zero()) fail(ErrorCode::invalid_argument, "colon by the zero ideal");
  if (f.is_constant() || I.is_zero()) return I;
  if (I.contains(f)) return Ideal<Field>(I.ring_ptr(), {Poly::constant(I.ring_ptr(), 1)}, I.options());
  Ideal<Field> F(I.ring_ptr(), {f}, I.options());
  Ideal<Field> meet = intersect(I, F);
  std::vector<Poly> gens;
  for (const auto& g : meet.generators()) gens.push_back(divide_exact(g, f));
  return Ideal<Field>(I.ring_ptr(), std::move(gens), I.options());
}

/// I : J = ∩_j (I : f_j).
template <class Field>
Ideal<Field> colon(const Ideal<Field>& I, const Ideal<Field>& J) {
  require_same_ring(I.ring(), J.ring());
  if (J.is_zero()) fail(ErrorCode::invalid_argument, "colon by the zero ideal");
  std::optional<Ideal<Field>> acc;
  for (const auto& f : J.generators()) {
    Ideal<Field> part = colon(I, f);
    acc = acc ? intersect(*acc, part) : part;
  }
  return *acc;
}

}  // namespace natmult
