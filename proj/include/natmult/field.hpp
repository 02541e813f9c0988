#pragma once

// Coefficient fields. Every engine template is parameterized on one of these;
// values are plain data and the field object carries the arithmetic.

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "natmult/error.hpp"

namespace natmult {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// F_p for a prime p < 2^31, residues stored canonically in [0, p).
class PrimeField {
 public:
  using value_type = std::uint64_t;

  explicit PrimeField(std::uint64_t p) : p_(p) {
    if (p >= (1ULL << 31) || !is_prime(p))
      fail(ErrorCode::invalid_characteristic, "characteristic " + std::to_string(p) + " is not a word-size prime");
  }

  std::uint64_t characteristic() const { return p_; }

  value_type zero() const { return 0; }
  value_type one() const { return 1; }

  value_type from_int(long long v) const {
    long long r = v % static_cast<long long>(p_);
    return static_cast<value_type>(r < 0 ? r + static_cast<long long>(p_) : r);
  }
  value_type from_mpz(const mpz_class& v) const {
    mpz_class r = v % static_cast<unsigned long>(p_);
    if (r < 0) r += static_cast<unsigned long>(p_);
    return r.get_ui();
  }
  value_type from_rational(const mpq_class& q) const {
    value_type den = from_mpz(q.get_den());
    if (den == 0) fail(ErrorCode::division_by_zero, "denominator " + q.get_den().get_str() + " vanishes mod " + std::to_string(p_));
    return mul(from_mpz(q.get_num()), inv(den));
  }

  bool is_zero(value_type a) const { return a == 0; }
  bool is_one(value_type a) const { return a == 1; }
  bool equal(value_type a, value_type b) const { return a == b; }

  value_type add(value_type a, value_type b) const {
    value_type s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  value_type sub(value_type a, value_type b) const { return a >= b ? a - b : a + p_ - b; }
  value_type neg(value_type a) const { return a == 0 ? 0 : p_ - a; }
  value_type mul(value_type a, value_type b) const { return (a * b) % p_; }

  value_type inv(value_type a) const {
    if (a == 0) fail(ErrorCode::division_by_zero, "inverse of 0 in F_" + std::to_string(p_));
    long long t = 0, new_t = 1;
    long long r = static_cast<long long>(p_), new_r = static_cast<long long>(a);
    while (new_r != 0) {
      long long q = r / new_r;
      long long tmp = t - q * new_t;
      t = new_t;
      new_t = tmp;
      tmp = r - q * new_r;
      r = new_r;
      new_r = tmp;
    }
    return from_int(t);
  }
  value_type div(value_type a, value_type b) const { return mul(a, inv(b)); }

  /// Symmetric lift in (-p/2, p/2], used for display and exact export.
  mpq_class to_rational(value_type a) const {
    if (a > p_ / 2) return mpq_class(-static_cast<long>(p_ - a));
    return mpq_class(static_cast<long>(a));
  }
  std::string to_string(value_type a) const { return to_rational(a).get_str(); }

  bool operator==(const PrimeField& o) const { return p_ == o.p_; }

 private:
  std::uint64_t p_;
};

/// The rationals with arbitrary-precision numerators and denominators.
class RationalField {
 public:
  using value_type = mpq_class;

  std::uint64_t characteristic() const { return 0; }

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_int(long long v) const { return mpq_class(mpz_class(std::to_string(v))); }
  value_type from_mpz(const mpz_class& v) const { return mpq_class(v); }
  value_type from_rational(const mpq_class& q) const {
    mpq_class r = q;
    r.canonicalize();
    return r;
  }

  bool is_zero(const value_type& a) const { return sgn(a) == 0; }
  bool is_one(const value_type& a) const { return a == 1; }
  bool equal(const value_type& a, const value_type& b) const { return a == b; }

  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type sub(const value_type& a, const value_type& b) const { return a - b; }
  value_type neg(const value_type& a) const { return -a; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  value_type inv(const value_type& a) const {
    if (sgn(a) == 0) fail(ErrorCode::division_by_zero, "inverse of 0 in Q");
    return 1 / a;
  }
  value_type div(const value_type& a, const value_type& b) const { return mul(a, inv(b)); }

  mpq_class to_rational(const value_type& a) const { return a; }
  std::string to_string(const value_type& a) const { return a.get_str(); }

  bool operator==(const RationalField&) const { return true; }
};

/// a^{-1}, with a * result == 1 exactly.
template <class Field>
typename Field::value_type field_inverse(const Field& k, const typename Field::value_type& a) {
  return k.inv(a);
}

/// Coefficients from fields of different characteristic never mix.
template <class Field>
void require_same_field(const Field& a, const Field& b) {
  if (!(a == b))
    fail(ErrorCode::incompatible_coefficient, "characteristic " + std::to_string(a.characteristic()) + " vs " +
                                                  std::to_string(b.characteristic()));
}

}  // namespace natmult
