#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "natmult/error.hpp"

namespace natmult {

inline constexpr std::size_t kMaxVariables = 16;

/// Exponent vector with its total and weighted degree cached.
class Monomial {
 public:
  using exponent_type = std::uint16_t;

  Monomial() = default;
  explicit Monomial(std::size_t nvars) : nvars_(static_cast<std::uint8_t>(nvars)) {
    if (nvars > kMaxVariables) fail(ErrorCode::invalid_argument, "too many variables");
  }
  Monomial(std::span<const unsigned> exps, std::span<const int> weights) : Monomial(exps.size()) {
    for (std::size_t i = 0; i < exps.size(); ++i) {
      if (exps[i] > 0xFFFFu) fail(ErrorCode::resource_exhausted, "exponent overflow");
      exp_[i] = static_cast<exponent_type>(exps[i]);
      degree_ += static_cast<int>(exps[i]);
      weighted_ += static_cast<int>(exps[i]) * (weights.empty() ? 1 : weights[i]);
    }
  }

  std::size_t size() const { return nvars_; }
  unsigned operator[](std::size_t i) const { return exp_[i]; }
  /// Total degree.
  int degree() const { return degree_; }
  /// Degree under the ring's weight vector (all ones unless a weighted order is active).
  int weighted_degree() const { return weighted_; }

  bool is_one() const { return degree_ == 0; }

  std::uint32_t divmask() const {
    std::uint32_t m = 0;
    for (std::size_t i = 0; i < nvars_; ++i)
      if (exp_[i]) m |= 1u << i;
    return m;
  }

  bool divides(const Monomial& o) const {
    for (std::size_t i = 0; i < nvars_; ++i)
      if (exp_[i] > o.exp_[i]) return false;
    return true;
  }

  bool coprime(const Monomial& o) const {
    for (std::size_t i = 0; i < nvars_; ++i)
      if (exp_[i] && o.exp_[i]) return false;
    return true;
  }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial r = a;
    for (std::size_t i = 0; i < a.nvars_; ++i) {
      unsigned e = unsigned(a.exp_[i]) + b.exp_[i];
      if (e > 0xFFFFu) fail(ErrorCode::resource_exhausted, "exponent overflow");
      r.exp_[i] = static_cast<exponent_type>(e);
    }
    r.degree_ = a.degree_ + b.degree_;
    r.weighted_ = a.weighted_ + b.weighted_;
    return r;
  }

  /// Exact quotient; requires b | a.
  friend Monomial operator/(const Monomial& a, const Monomial& b) {
    Monomial r = a;
    for (std::size_t i = 0; i < a.nvars_; ++i) r.exp_[i] = static_cast<exponent_type>(a.exp_[i] - b.exp_[i]);
    r.degree_ = a.degree_ - b.degree_;
    r.weighted_ = a.weighted_ - b.weighted_;
    return r;
  }

  /// lcm(a, b); weights are needed to keep the weighted degree exact.
  static Monomial lcm(const Monomial& a, const Monomial& b, std::span<const int> weights) {
    Monomial r = a;
    r.degree_ = 0;
    r.weighted_ = 0;
    for (std::size_t i = 0; i < a.nvars_; ++i) {
      r.exp_[i] = std::max(a.exp_[i], b.exp_[i]);
      r.degree_ += r.exp_[i];
      r.weighted_ += r.exp_[i] * (weights.empty() ? 1 : weights[i]);
    }
    return r;
  }

  std::vector<unsigned> exponents() const { return {exp_.begin(), exp_.begin() + nvars_}; }

  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.nvars_ == b.nvars_ && a.exp_ == b.exp_;
  }

  std::size_t hash() const {
    std::size_t h = 1469598103934665603ULL;
    for (std::size_t i = 0; i < nvars_; ++i) h = (h ^ exp_[i]) * 1099511628211ULL;
    return h;
  }

 private:
  std::array<exponent_type, kMaxVariables> exp_{};
  std::int32_t degree_ = 0;
  std::int32_t weighted_ = 0;
  std::uint8_t nvars_ = 0;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

/// Monomial orders. Variables are ranked in declaration order: the first
/// declared variable is the largest.
struct MonomialOrder {
  enum class Kind { lex, grlex, grevlex, block_elimination, weighted };

  Kind kind = Kind::grevlex;
  std::size_t block = 0;     // block_elimination: size of the eliminated leading block
  std::vector<int> weights;  // weighted: one positive weight per variable

  static MonomialOrder lex() { return {Kind::lex, 0, {}}; }
  static MonomialOrder grlex() { return {Kind::grlex, 0, {}}; }
  static MonomialOrder grevlex() { return {Kind::grevlex, 0, {}}; }
  static MonomialOrder elimination(std::size_t k) { return {Kind::block_elimination, k, {}}; }
  static MonomialOrder weighted_order(std::vector<int> w) { return {Kind::weighted, 0, std::move(w)}; }

  friend bool operator==(const MonomialOrder&, const MonomialOrder&) = default;

  std::string name() const {
    switch (kind) {
      case Kind::lex: return "lex";
      case Kind::grlex: return "grlex";
      case Kind::grevlex: return "grevlex";
      case Kind::block_elimination: return "elim(" + std::to_string(block) + ")";
      case Kind::weighted: {
        std::string s = "weighted(";
        for (std::size_t i = 0; i < weights.size(); ++i) s += (i ? "," : "") + std::to_string(weights[i]);
        return s + ")";
      }
    }
    return "?";
  }
};

namespace detail {

inline int cmp_lex(const Monomial& u, const Monomial& v, std::size_t lo, std::size_t hi) {
  for (std::size_t i = lo; i < hi; ++i)
    if (u[i] != v[i]) return u[i] > v[i] ? 1 : -1;
  return 0;
}

inline int cmp_grevlex(const Monomial& u, const Monomial& v, std::size_t lo, std::size_t hi) {
  int du = 0, dv = 0;
  for (std::size_t i = lo; i < hi; ++i) {
    du += u[i];
    dv += v[i];
  }
  if (du != dv) return du > dv ? 1 : -1;
  for (std::size_t i = hi; i-- > lo;)
    if (u[i] != v[i]) return u[i] < v[i] ? 1 : -1;
  return 0;
}

}  // namespace detail

/// Three-way comparison: 1 if u > v, -1 if u < v, 0 if equal.
inline int compare_monomials(const Monomial& u, const Monomial& v, const MonomialOrder& ord) {
  if (u.size() != v.size()) fail(ErrorCode::incompatible_ring, "monomials over different variable counts");
  const std::size_t n = u.size();
  switch (ord.kind) {
    case MonomialOrder::Kind::lex: return detail::cmp_lex(u, v, 0, n);
    case MonomialOrder::Kind::grlex:
      if (u.degree() != v.degree()) return u.degree() > v.degree() ? 1 : -1;
      return detail::cmp_lex(u, v, 0, n);
    case MonomialOrder::Kind::grevlex:
      if (u.degree() != v.degree()) return u.degree() > v.degree() ? 1 : -1;
      return detail::cmp_grevlex(u, v, 0, n);
    case MonomialOrder::Kind::block_elimination: {
      int c = detail::cmp_grevlex(u, v, 0, ord.block);
      return c != 0 ? c : detail::cmp_grevlex(u, v, ord.block, n);
    }
    case MonomialOrder::Kind::weighted:
      if (u.weighted_degree() != v.weighted_degree()) return u.weighted_degree() > v.weighted_degree() ? 1 : -1;
      if (u.degree() != v.degree()) return u.degree() > v.degree() ? 1 : -1;
      return detail::cmp_grevlex(u, v, 0, n);
  }
  return 0;
}

}  // namespace natmult
