#pragma once

// The two worked examples of the transformation rule, as generated scenario
// files. Every check is an ordinary scenario expectation.
//
// Veronese: R = k[x^2, xy, y^2] in S = k[x, y] with the family
//   J_n = (x^(2n+1) - y^(2n), y^(4n), x^(2n-1) y^(2n)).
// Cubic cover: R = k[a, b, x^3 + x^2 a + x b] in S = k[a, b, x] with powers
//   of the maximal ideal.

#include "natmult/scenario.hpp"

namespace natmult {

namespace detail {

inline std::string yaml_list(const std::vector<std::string>& items, bool quote = false) {
  std::string s = "[";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) s += ", ";
    s += quote ? "\"" + items[i] + "\"" : items[i];
  }
  return s + "]";
}

template <class T>
std::string yaml_numbers(const std::vector<T>& v) {
  std::vector<std::string> s;
  for (auto x : v) s.push_back(std::to_string(x));
  return yaml_list(s);
}

inline std::string pw(const std::string& var, unsigned e) {
  if (e == 0) return "1";
  return e == 1 ? var : var + "^" + std::to_string(e);
}

}  // namespace detail

/// Veronese example over characteristic p (0 for the rationals), n = 1..n_max.
inline std::string example_2_scenario(std::uint64_t p, unsigned n_max = 6) {
  using detail::pw;
  std::ostringstream y;
  y << "name: veronese-example-char-" << p << "\n";
  y << "char: " << p << "\n";
  y << "blocks:\n";
  y << "  - ring: {name: S, vars: [x, y], expect: {dimension: 2, regular: true}}\n";
  y << "  - automorphism: {name: swap, ring: S, images: [y, x]}\n";
  y << "  - group: {name: G, ring: S, matrices: [[[-1, 0], [0, -1]]], expect: {order: 2, etale: true}}\n";
  y << "  - map: {name: V, group: G, source: R, names: [a, b, c], expect: {rank: 2, etale: true, relations: "
       "[\"a*c - b^2\"]}}\n";
  y << "  - custom_family:\n";
  y << "      name: J\n";
  y << "      ring: S\n";
  y << "      generators: [\"x^(2n+1) - y^(2n)\", \"y^(4n)\", \"x^(2n-1)*y^(2n)\"]\n";
  y << "      indices: 1.." << n_max << "\n";
  for (unsigned n = 1; n <= n_max; ++n) {
    std::vector<std::string> gb{pw("x", 2 * n + 1) + " - " + pw("y", 2 * n), pw("y", 4 * n),
                                pw("x", 2 * n - 1) + "*" + pw("y", 2 * n)};
    y << "  - ideal: {name: J" << n << ", ring: S, generators: " << detail::yaml_list(gb, true) << "}\n";
    y << "  - compute: {name: basis-J" << n << ", op: gb, ideal: J" << n << ", expect: {basis: "
      << detail::yaml_list(gb, true) << "}}\n";
    y << "  - compute: {name: length-J" << n << ", op: colength, ideal: J" << n << ", oracle: true, expect: {value: "
      << 8 * n * n << "}}\n";
    if (n <= 4) {
      std::vector<std::string> c{pw("a", 2 * n), pw("b", 2 * n), pw("b", 2 * n - 1) + "*c", pw("c", 2 * n)};
      y << "  - compute: {name: contraction-J" << n << ", op: contract, map: V, ideal: J" << n
        << ", expect: {generators: " << detail::yaml_list(c, true) << "}}\n";
    }
  }
  std::vector<std::uint64_t> target, source;
  const std::uint64_t known_source[] = {5, 22, 51, 92, 145, 210};
  for (unsigned n = 1; n <= n_max; ++n) target.push_back(8ULL * n * n);
  for (unsigned n = 1; n <= std::min(n_max, 6u); ++n) source.push_back(known_source[n - 1]);
  y << "  - compute: {name: target-volume, op: volume, family: J, ring: S, expect: {lengths: "
    << detail::yaml_numbers(target) << ", last: 8}}\n";
  y << "  - compute:\n";
  y << "      name: source-volume\n";
  y << "      op: volume\n";
  y << "      family: J\n";
  y << "      map: V\n";
  y << "      expect:\n";
  if (n_max <= 6) y << "        lengths: " << detail::yaml_numbers(source) << "\n";
  y << "        normalized_between: [5, 6]\n";
  y << "        nondecreasing: true\n";
  y << "  - check:\n";
  y << "      name: swap-stability\n";
  y << "      family: J\n";
  y << "      ring: S\n";
  y << "      characteristic: [swap]\n";
  y << "      expect: {characteristic: false, characteristic_witness: \"x^3 - y^2 -> y^3 - x^2\"}\n";
  y << "  - transform:\n";
  y << "      name: rule\n";
  y << "      map: V\n";
  y << "      family: J\n";
  y << "      automorphisms: [swap]\n";
  y << "      expect: {conclusion: violates-rule, characteristic: fail, final_ratio_near: [3/2, 0.15]}\n";
  y << "output: {csv_step: source-volume}\n";
  return y.str();
}

/// Cubic cover example over characteristic p (0 for the rationals), n = 1..n_max.
inline std::string example_1_scenario(std::uint64_t p, unsigned n_max = 12) {
  std::ostringstream y;
  std::vector<std::uint64_t> target;
  for (std::uint64_t n = 1; n <= n_max; ++n) target.push_back((n + 2) * (n + 1) * n / 6);
  y << "name: cubic-cover-example-char-" << p << "\n";
  y << "char: " << p << "\n";
  y << "blocks:\n";
  // Weight 2 on x makes x^3 the leading term of the cubic.
  y << "  - ring: {name: S, vars: [a, b, x], order: {weighted: [1, 1, 2]}}\n";
  y << "  - map:\n";
  y << "      name: E\n";
  y << "      target: S\n";
  y << "      images: [a, b, \"x^3 + x^2*a + x*b\"]\n";
  y << "      source_vars: [u, v, w]\n";
  y << "      source: R\n";
  y << "      rank: 3\n";
  y << "      expect: {relations: [], module_finite: true, rank: 3, etale: false}\n";
  y << "  - assignment: {name: contracted-powers, kind: powers, contracted: true}\n";
  y << "  - compute:\n";
  y << "      name: target-volume\n";
  y << "      op: volume\n";
  y << "      family: powers\n";
  y << "      ring: S\n";
  y << "      indices: 1.." << n_max << "\n";
  y << "      expect: {lengths: " << detail::yaml_numbers(target) << ", last_near: [1/6, 0.10]}\n";
  y << "  - compute:\n";
  y << "      name: source-volume\n";
  y << "      op: volume\n";
  y << "      family: contracted-powers\n";
  y << "      map: E\n";
  y << "      indices: 1.." << n_max << "\n";
  y << "      expect:\n";
  if (n_max >= 3) y << "        length_at: {3: 7}\n";
  y << "        last_near: [1/12, 0.15]\n";
  y << "  - compute: {name: rank, op: rank_estimate, map: E, indices: [" << n_max
    << "], expect: {estimate_near: [3, 0.10]}}\n";
  y << "  - transform:\n";
  y << "      name: rule\n";
  y << "      map: E\n";
  y << "      family: contracted-powers\n";
  y << "      indices: 2.." << std::max(2u, std::min(n_max, 8u)) << "\n";
  y << "      expect: {conclusion: violates-rule, etale: fail}\n";
  y << "output: {csv_step: source-volume}\n";
  return y.str();
}

inline RunRecord reproduce_example_2(std::uint64_t p = 5, unsigned n_max = 6, const RunOptions& opts = {}) {
  return run_scenario(parse_scenario(example_2_scenario(p, n_max), "veronese-example"), opts);
}

inline RunRecord reproduce_example_1(std::uint64_t p = 5, unsigned n_max = 12, const RunOptions& opts = {}) {
  return run_scenario(parse_scenario(example_1_scenario(p, n_max), "cubic-cover-example"), opts);
}

}  // namespace natmult
