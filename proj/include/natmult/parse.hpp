#pragma once

// Text syntax for polynomials: `^` for powers, `*` optional between factors,
// integer or `n/d` coefficients. Exponents may be integer expressions in named
// parameters, e.g. `x^(2n+1) - y^(2n)` with n bound by the caller.

#include <cctype>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "natmult/polynomial.hpp"

namespace natmult {

using ParamBindings = std::map<std::string, long long>;

namespace detail {

template <class Field>
class PolyParser {
 public:
  using Poly = Polynomial<Field>;

  PolyParser(std::string_view text, RingPtr<Field> ring, const ParamBindings& params)
      : s_(text), ring_(std::move(ring)), params_(params) {}

  Poly parse_all() {
    Poly p = expr();
    skip_ws();
    if (pos_ != s_.size()) error("unexpected '" + std::string(1, s_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void error(const std::string& msg) const {
    fail(ErrorCode::parse_error, msg + " at column " + std::to_string(pos_ + 1) + " in '" + std::string(s_) + "'");
  }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip_ws();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  bool accept(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }

  Poly expr() {
    skip_ws();
    bool neg = false;
    if (accept('-')) neg = true;
    else accept('+');
    Poly acc = term();
    if (neg) acc = -acc;
    for (;;) {
      if (accept('+')) acc = acc + term();
      else if (accept('-')) acc = acc - term();
      else return acc;
    }
  }

  bool starts_factor() {
    skip_ws();
    if (pos_ >= s_.size()) return false;
    char c = s_[pos_];
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '(';
  }

  Poly term() {
    Poly acc = power();
    for (;;) {
      if (accept('*')) acc = acc * power();
      else if (starts_factor()) acc = acc * power();  // implicit multiplication
      else return acc;
    }
  }

  Poly power() {
    Poly base = atom();
    if (accept('^')) {
      long long e = exponent();
      if (e < 0) error("negative exponent");
      base = base.pow(static_cast<unsigned>(e));
    }
    return base;
  }

  Poly atom() {
    skip_ws();
    if (pos_ >= s_.size()) error("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Poly p = expr();
      if (!accept(')')) error("expected ')'");
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mpz_class num(digits());
      mpz_class den = 1;
      if (peek('/')) {
        ++pos_;
        skip_ws();
        if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) error("expected denominator");
        den = mpz_class(digits());
        if (den == 0) fail(ErrorCode::division_by_zero, "zero denominator in '" + std::string(s_) + "'");
      }
      mpq_class q(num, den);
      q.canonicalize();
      return Poly::constant(ring_, ring_->field().from_rational(q));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    error("unexpected '" + std::string(1, c) + "'");
  }

  std::string digits() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  Poly identifier() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    std::string name(s_.substr(start, pos_ - start));
    if (auto i = ring_->index_of(name)) return Poly::variable(ring_, *i);
    if (auto it = params_.find(name); it != params_.end()) return Poly::constant(ring_, it->second);
    // Juxtaposed variable names such as `xy`.
    std::vector<std::size_t> split;
    if (split_names(name, 0, split)) {
      Poly p = Poly::constant(ring_, 1);
      for (auto i : split) p = p * Poly::variable(ring_, i);
      return p;
    }
    pos_ = start;
    error("unknown identifier '" + name + "'");
  }

  bool split_names(const std::string& name, std::size_t at, std::vector<std::size_t>& out) const {
    if (at == name.size()) return true;
    for (std::size_t len = name.size() - at; len > 0; --len) {
      if (auto i = ring_->index_of(name.substr(at, len))) {
        out.push_back(*i);
        if (split_names(name, at + len, out)) return true;
        out.pop_back();
      }
    }
    return false;
  }

  // Integer exponent: a literal, a parameter, or a parenthesized integer expression.
  long long exponent() {
    skip_ws();
    if (accept('(')) {
      long long v = int_expr();
      if (!accept(')')) error("expected ')' in exponent");
      return v;
    }
    if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) return std::stoll(digits());
    if (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) return int_atom();
    error("expected exponent");
  }

  long long int_expr() {
    skip_ws();
    long long sign = 1;
    if (accept('-')) sign = -1;
    else accept('+');
    long long v = sign * int_term();
    for (;;) {
      if (accept('+')) v += int_term();
      else if (accept('-')) v -= int_term();
      else return v;
    }
  }
  long long int_term() {
    long long v = int_atom();
    for (;;) {
      if (accept('*')) v *= int_atom();
      else if (starts_factor()) v *= int_atom();
      else return v;
    }
  }
  long long int_atom() {
    skip_ws();
    if (accept('(')) {
      long long v = int_expr();
      if (!accept(')')) error("expected ')'");
      return v;
    }
    if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) return std::stoll(digits());
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    std::string name(s_.substr(start, pos_ - start));
    auto it = params_.find(name);
    if (it == params_.end()) {
      pos_ = start;
      error("unbound exponent parameter '" + name + "'");
    }
    return it->second;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  RingPtr<Field> ring_;
  const ParamBindings& params_;
};

}  // namespace detail

template <class Field>
Polynomial<Field> parse_polynomial(std::string_view text, RingPtr<Field> ring, const ParamBindings& params = {}) {
  return detail::PolyParser<Field>(text, std::move(ring), params).parse_all();
}

/// Splits a comma-separated generator list at top-level commas.
inline std::vector<std::string> split_top_level(std::string_view text, char sep = ',') {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : text) {
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (c == sep && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  std::vector<std::string> trimmed;
  for (auto& s : out) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) continue;
    auto e = s.find_last_not_of(" \t\r\n");
    trimmed.push_back(s.substr(b, e - b + 1));
  }
  return trimmed;
}

template <class Field>
std::vector<Polynomial<Field>> parse_polynomials(std::string_view text, const RingPtr<Field>& ring,
                                                 const ParamBindings& params = {}) {
  std::vector<Polynomial<Field>> out;
  for (const auto& piece : split_top_level(text)) out.push_back(parse_polynomial<Field>(piece, ring, params));
  return out;
}

}  // namespace natmult
