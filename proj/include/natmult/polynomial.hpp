#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "natmult/field.hpp"
#include "natmult/monomial.hpp"

namespace natmult {

/// Ambient polynomial ring: coefficient field, variable names, monomial order.
template <class Field>
class PolyRing {
 public:
  using field_type = Field;

  PolyRing(Field field, std::vector<std::string> names, MonomialOrder order = MonomialOrder::grevlex())
      : field_(std::move(field)), names_(std::move(names)), order_(std::move(order)) {
    if (names_.size() > kMaxVariables) fail(ErrorCode::invalid_argument, "at most 16 variables are supported");
    std::set<std::string> seen(names_.begin(), names_.end());
    if (seen.size() != names_.size()) fail(ErrorCode::invalid_argument, "variable names must be distinct");
    if (order_.kind == MonomialOrder::Kind::weighted) {
      if (order_.weights.size() != names_.size()) fail(ErrorCode::invalid_argument, "weight vector length mismatch");
      for (int w : order_.weights)
        if (w <= 0) fail(ErrorCode::invalid_argument, "weights must be positive");
    }
    if (order_.kind == MonomialOrder::Kind::block_elimination && order_.block > names_.size())
      fail(ErrorCode::invalid_argument, "elimination block larger than the variable set");
  }

  static std::shared_ptr<const PolyRing> make(Field field, std::vector<std::string> names,
                                              MonomialOrder order = MonomialOrder::grevlex()) {
    return std::make_shared<const PolyRing>(std::move(field), std::move(names), std::move(order));
  }

  const Field& field() const { return field_; }
  std::uint64_t characteristic() const { return field_.characteristic(); }
  std::size_t nvars() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const MonomialOrder& order() const { return order_; }
  std::span<const int> weights() const { return order_.weights; }

  std::optional<std::size_t> index_of(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return i;
    return std::nullopt;
  }

  int compare(const Monomial& u, const Monomial& v) const { return compare_monomials(u, v, order_); }

  Monomial monomial(std::span<const unsigned> exps) const {
    if (exps.size() != nvars()) fail(ErrorCode::incompatible_ring, "exponent vector length mismatch");
    return Monomial(exps, weights());
  }
  Monomial monomial(std::initializer_list<unsigned> exps) const {
    return monomial(std::span<const unsigned>(exps.begin(), exps.size()));
  }
  Monomial one() const {
    std::vector<unsigned> e(nvars(), 0);
    return monomial(e);
  }
  Monomial variable(std::size_t i, unsigned power = 1) const {
    std::vector<unsigned> e(nvars(), 0);
    e.at(i) = power;
    return monomial(e);
  }
  Monomial lcm(const Monomial& a, const Monomial& b) const { return Monomial::lcm(a, b, weights()); }

  bool same_as(const PolyRing& o) const {
    return this == &o || (field_ == o.field_ && names_ == o.names_ && order_ == o.order_);
  }

  std::string to_string(const Monomial& m) const {
    std::string s;
    for (std::size_t i = 0; i < nvars(); ++i) {
      if (m[i] == 0) continue;
      if (!s.empty()) s += "*";
      s += names_[i];
      if (m[i] > 1) s += "^" + std::to_string(m[i]);
    }
    return s.empty() ? "1" : s;
  }

 private:
  Field field_;
  std::vector<std::string> names_;
  MonomialOrder order_;
};

template <class Field>
using RingPtr = std::shared_ptr<const PolyRing<Field>>;

template <class Field>
void require_same_ring(const PolyRing<Field>& a, const PolyRing<Field>& b) {
  if (a.same_as(b)) return;
  if (a.characteristic() != b.characteristic()) require_same_field(a.field(), b.field());
  fail(ErrorCode::incompatible_ring, "operands live in different polynomial rings");
}

/// Sparse polynomial: terms strictly descending in the ring order, no zero coefficients.
template <class Field>
class Polynomial {
 public:
  using coeff_type = typename Field::value_type;
  struct Term {
    Monomial mono;
    coeff_type coeff;
  };

  Polynomial() = default;
  explicit Polynomial(RingPtr<Field> ring) : ring_(std::move(ring)) {}

  static Polynomial constant(RingPtr<Field> ring, const coeff_type& c) {
    Polynomial p(ring);
    if (!ring->field().is_zero(c)) p.terms_.push_back({ring->one(), c});
    return p;
  }
  static Polynomial constant(RingPtr<Field> ring, long long c) { return constant(ring, ring->field().from_int(c)); }
  static Polynomial constant(RingPtr<Field> ring, int c) { return constant(std::move(ring), static_cast<long long>(c)); }
  static Polynomial term(RingPtr<Field> ring, const Monomial& m, const coeff_type& c) {
    Polynomial p(ring);
    if (!ring->field().is_zero(c)) p.terms_.push_back({m, c});
    return p;
  }
  static Polynomial monomial(RingPtr<Field> ring, const Monomial& m) { return term(ring, m, ring->field().one()); }
  static Polynomial variable(RingPtr<Field> ring, std::size_t i) { return monomial(ring, ring->variable(i)); }

  /// Builds from arbitrary (unsorted, possibly repeated) terms.
  static Polynomial from_terms(RingPtr<Field> ring, std::vector<Term> terms) {
    Polynomial p(ring);
    const auto& k = ring->field();
    std::sort(terms.begin(), terms.end(),
              [&](const Term& a, const Term& b) { return ring->compare(a.mono, b.mono) > 0; });
    for (auto& t : terms) {
      if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
        p.terms_.back().coeff = k.add(p.terms_.back().coeff, t.coeff);
        if (k.is_zero(p.terms_.back().coeff)) p.terms_.pop_back();
      } else if (!k.is_zero(t.coeff)) {
        p.terms_.push_back(std::move(t));
      }
    }
    return p;
  }

  /// Trusted constructor: terms already strictly descending and zero-free.
  static Polynomial from_sorted_terms(RingPtr<Field> ring, std::vector<Term> terms) {
    Polynomial p(std::move(ring));
    p.terms_ = std::move(terms);
    return p;
  }

  const RingPtr<Field>& ring_ptr() const { return ring_; }
  const PolyRing<Field>& ring() const { return *ring_; }
  const Field& field() const { return ring_->field(); }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one()); }

  const Monomial& leading_monomial() const { return terms_.front().mono; }
  const coeff_type& leading_coeff() const { return terms_.front().coeff; }

  int total_degree() const {
    int d = -1;
    for (const auto& t : terms_) d = std::max(d, t.mono.degree());
    return d;
  }
  /// Lowest total degree of a term (the order at the origin); -1 for zero.
  int low_degree() const {
    if (terms_.empty()) return -1;
    int d = terms_.front().mono.degree();
    for (const auto& t : terms_) d = std::min(d, t.mono.degree());
    return d;
  }
  bool uses_variable(std::size_t i) const {
    for (const auto& t : terms_)
      if (t.mono[i]) return true;
    return false;
  }
  coeff_type constant_coeff() const {
    if (!terms_.empty() && terms_.back().mono.is_one()) return terms_.back().coeff;
    return field().zero();
  }
  coeff_type coeff_of(const Monomial& m) const {
    for (const auto& t : terms_)
      if (t.mono == m) return t.coeff;
    return field().zero();
  }

  Polynomial monic() const {
    if (is_zero() || field().is_one(leading_coeff())) return *this;
    return scale(field().inv(leading_coeff()));
  }

  Polynomial scale(const coeff_type& c) const {
    Polynomial r(ring_);
    if (field().is_zero(c)) return r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back({t.mono, field().mul(t.coeff, c)});
    return r;
  }

  Polynomial mul_term(const Monomial& m, const coeff_type& c) const {
    Polynomial r(ring_);
    if (field().is_zero(c)) return r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back({t.mono * m, field().mul(t.coeff, c)});
    return r;
  }

  /// this - c*m*g in one merge pass.
  Polynomial sub_mul(const coeff_type& c, const Monomial& m, const Polynomial& g) const {
    return merge(*this, g, m, field().neg(c));
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    check(a, b);
    return merge(a, b, b.ring_->one(), a.field().one());
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    check(a, b);
    return merge(a, b, b.ring_->one(), a.field().neg(a.field().one()));
  }
  Polynomial operator-() const { return scale(field().neg(field().one())); }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    check(a, b);
    if (a.is_zero() || b.is_zero()) return Polynomial(a.ring_);
    const Polynomial& big = a.size() >= b.size() ? a : b;
    const Polynomial& small = a.size() >= b.size() ? b : a;
    if (small.size() == 1) return big.mul_term(small.terms_[0].mono, small.terms_[0].coeff);
    std::vector<Term> prod;
    prod.reserve(a.size() * b.size());
    const auto& k = a.field();
    for (const auto& s : small.terms_)
      for (const auto& t : big.terms_) prod.push_back({s.mono * t.mono, k.mul(s.coeff, t.coeff)});
    return from_terms(a.ring_, std::move(prod));
  }

  Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
  Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  Polynomial pow(unsigned e) const {
    Polynomial result = constant(ring_, 1);
    Polynomial base = *this;
    while (e) {
      if (e & 1u) result = result * base;
      e >>= 1;
      if (e) base = base * base;
    }
    return result;
  }

  /// Moves the polynomial into `target`, sending variable i to variable index_map[i].
  Polynomial remap(RingPtr<Field> target, std::span<const std::size_t> index_map) const {
    std::vector<Term> out;
    out.reserve(terms_.size());
    std::vector<unsigned> e(target->nvars());
    for (const auto& t : terms_) {
      std::fill(e.begin(), e.end(), 0u);
      for (std::size_t i = 0; i < ring_->nvars(); ++i) {
        if (t.mono[i] == 0) continue;
        if (index_map[i] >= target->nvars())
          fail(ErrorCode::incompatible_ring, "variable " + ring_->names()[i] + " has no image in the target ring");
        e[index_map[i]] += t.mono[i];
      }
      out.push_back({target->monomial(e), t.coeff});
    }
    return from_terms(std::move(target), std::move(out));
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    if (!a.ring_->same_as(*b.ring_) || a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!(a.terms_[i].mono == b.terms_[i].mono) || !a.field().equal(a.terms_[i].coeff, b.terms_[i].coeff))
        return false;
    return true;
  }

  std::string to_string() const {
    if (is_zero()) return "0";
    std::string s;
    const auto& k = field();
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      mpq_class c = k.to_rational(terms_[i].coeff);
      bool neg = sgn(c) < 0;
      if (neg) c = -c;
      if (i == 0) s += neg ? "-" : "";
      else s += neg ? " - " : " + ";
      bool unit = c == 1;
      if (terms_[i].mono.is_one()) s += c.get_str();
      else s += (unit ? "" : c.get_str() + "*") + ring_->to_string(terms_[i].mono);
    }
    return s;
  }

 private:
  static void check(const Polynomial& a, const Polynomial& b) { require_same_ring(*a.ring_, *b.ring_); }

  // a + c*m*b, merged in descending order.
  static Polynomial merge(const Polynomial& a, const Polynomial& b, const Monomial& m, const coeff_type& c) {
    Polynomial r(a.ring_);
    const auto& k = a.field();
    const auto& ring = *a.ring_;
    r.terms_.reserve(a.size() + b.size());
    const bool shift = !m.is_one();
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
      Monomial bm = shift ? b.terms_[j].mono * m : b.terms_[j].mono;
      int cmp = ring.compare(a.terms_[i].mono, bm);
      if (cmp > 0) {
        r.terms_.push_back(a.terms_[i++]);
      } else if (cmp < 0) {
        r.terms_.push_back({bm, k.mul(b.terms_[j++].coeff, c)});
      } else {
        coeff_type s = k.add(a.terms_[i].coeff, k.mul(b.terms_[j].coeff, c));
        if (!k.is_zero(s)) r.terms_.push_back({bm, std::move(s)});
        ++i;
        ++j;
      }
    }
    for (; i < a.size(); ++i) r.terms_.push_back(a.terms_[i]);
    for (; j < b.size(); ++j)
      r.terms_.push_back({shift ? b.terms_[j].mono * m : b.terms_[j].mono, k.mul(b.terms_[j].coeff, c)});
    return r;
  }

  RingPtr<Field> ring_;
  std::vector<Term> terms_;
};

/// Ring homomorphism evaluation: replaces variable i of f's ring by images[i].
template <class Field>
Polynomial<Field> substitute(const Polynomial<Field>& f, std::span<const Polynomial<Field>> images,
                             RingPtr<Field> target) {
  if (images.size() != f.ring().nvars())
    fail(ErrorCode::incompatible_ring, "substitution needs one image per source variable");
  for (const auto& g : images) require_same_ring(g.ring(), *target);
  const std::size_t n = images.size();
  // Power caches per variable keep repeated exponents cheap.
  std::vector<std::vector<Polynomial<Field>>> powers(n);
  auto power = [&](std::size_t i, unsigned e) -> const Polynomial<Field>& {
    auto& cache = powers[i];
    if (cache.empty()) cache.push_back(Polynomial<Field>::constant(target, 1));
    while (cache.size() <= e) cache.push_back(cache.back() * images[i]);
    return cache[e];
  };
  std::vector<typename Polynomial<Field>::Term> acc;
  for (const auto& t : f.terms()) {
    Polynomial<Field> prod = Polynomial<Field>::constant(target, t.coeff);
    for (std::size_t i = 0; i < n && !prod.is_zero(); ++i)
      if (t.mono[i]) prod = prod * power(i, t.mono[i]);
    acc.insert(acc.end(), prod.terms().begin(), prod.terms().end());
  }
  return Polynomial<Field>::from_terms(target, std::move(acc));
}

template <class Field>
Polynomial<Field> substitute(const Polynomial<Field>& f, const std::vector<Polynomial<Field>>& images) {
  if (images.empty()) {
    if (f.ring().nvars() != 0) fail(ErrorCode::incompatible_ring, "substitution needs one image per source variable");
    return f;
  }
  return substitute(f, std::span<const Polynomial<Field>>(images), images.front().ring_ptr());
}

}  // namespace natmult
