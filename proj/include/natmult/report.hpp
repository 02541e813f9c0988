#pragma once

// JSON and CSV rendering of results. Exact quantities are never floats:
// integers stay integers, rationals are "p/q" strings, and normalized values
// are decimal strings with a fixed number of digits.

#include <json.hpp>
#include <sstream>

#include "natmult/multiplicity.hpp"

namespace natmult {

using Json = nlohmann::json;

inline std::string rational_string(const mpq_class& q) {
  mpq_class c = q;
  c.canonicalize();
  return c.get_str();
}

/// Round-half-away-from-zero decimal expansion with `digits` places.
inline std::string decimal_string(const mpq_class& q, int digits = 6) {
  mpz_class scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  mpq_class scaled = q * scale;
  mpz_class num = scaled.get_num(), den = scaled.get_den();
  bool neg = num < 0;
  if (neg) num = -num;
  mpz_class r = (2 * num + den) / (2 * den);
  std::string s = r.get_str();
  if (digits > 0) {
    if (s.size() <= static_cast<std::size_t>(digits)) s.insert(0, static_cast<std::size_t>(digits) + 1 - s.size(), '0');
    s.insert(s.size() - static_cast<std::size_t>(digits), ".");
  }
  return (neg && r != 0 ? "-" : "") + s;
}

/// Parses "p/q", an integer, or a finite decimal such as "0.05".
inline mpq_class parse_rational(const std::string& text) {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) fail(ErrorCode::parse_error, "empty rational");
  try {
    auto dot = t.find('.');
    if (dot != std::string::npos) {
      std::string digits = t.substr(0, dot) + t.substr(dot + 1);
      mpz_class den = 1;
      for (std::size_t i = dot + 1; i < t.size(); ++i) den *= 10;
      mpq_class q(mpz_class(digits), den);
      q.canonicalize();
      return q;
    }
    mpq_class q(t);
    if (q.get_den() == 0) fail(ErrorCode::parse_error, "zero denominator in '" + text + "'");
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    fail(ErrorCode::parse_error, "not a rational number: '" + text + "'");
  }
}

inline Json exact_integer(const mpz_class& z) {
  if (z >= 0 && z.fits_ulong_p()) return Json(static_cast<std::uint64_t>(z.get_ui()));
  return Json(z.get_str());
}

template <class Field>
Json polys_json(const std::vector<Polynomial<Field>>& ps) {
  Json a = Json::array();
  for (const auto& p : ps) a.push_back(p.to_string());
  return a;
}

inline Json to_json(const VolumeSeries& s) {
  Json rows = Json::array();
  for (const auto& r : s.rows)
    rows.push_back({{"n", r.n},
                    {"length", r.length},
                    {"normalized", decimal_string(r.normalized)},
                    {"normalized_exact", rational_string(r.normalized)},
                    {"cross_check", r.cross_check}});
  return {{"assignment", s.family},
          {"d", s.dimension},
          {"normalization", to_string(s.normalization)},
          {"rows", rows}};
}

inline Json to_json(const MultiplicityEstimate& m) {
  Json j = to_json(m.series);
  j["kind"] = to_string(m.kind);
  j["estimate"] = rational_string(m.estimate);
  j["estimate_decimal"] = decimal_string(m.estimate);
  if (m.bounds)
    j["bounds"] = {{"label", m.bounds->label},
                   {"lower", rational_string(m.bounds->lower)},
                   {"upper", rational_string(m.bounds->upper)},
                   {"last", rational_string(m.bounds->last)}};
  if (m.fit) {
    // Advisory only; rounded so output stays stable across platforms.
    mpq_class lead(m.fit->leading), sub(m.fit->subleading);
    j["advisory_fit"] = {{"leading", decimal_string(lead, 4)}, {"subleading", decimal_string(sub, 4)}};
  }
  return j;
}

inline Json to_json(const AuditEntry& e) { return {{"verdict", to_string(e.verdict)}, {"detail", e.detail}}; }

inline Json to_json(const TransformReport& r) {
  Json lhs = Json::array(), rhs = Json::array(), ratios = Json::array(), idx = Json::array();
  for (const auto& row : r.rows) {
    idx.push_back(row.n);
    lhs.push_back(exact_integer(row.lhs));
    rhs.push_back(exact_integer(row.rhs));
    ratios.push_back(rational_string(row.ratio));
  }
  return {{"assignment", r.assignment},
          {"d", r.source.dimension},
          {"source", to_json(r.source)},
          {"target", to_json(r.target)},
          {"rule",
           {{"rank", r.rank},
            {"residue_degree", r.residue_degree},
            {"indices", idx},
            {"lhs", lhs},
            {"rhs", rhs},
            {"ratios", ratios},
            {"final_ratio", decimal_string(r.rows.back().ratio)},
            {"tolerance", decimal_string(mpq_class(r.tolerance), 4)},
            {"margin", decimal_string(mpq_class(r.margin), 4)},
            {"audit",
             {{"bounded", to_json(r.audit.bounded)},
              {"characteristic", to_json(r.audit.characteristic)},
              {"intersection", to_json(r.audit.intersection)},
              {"etale_codim_one", to_json(r.audit.etale)}}},
            {"conclusion", to_string(r.conclusion)}}}};
}

inline Json to_json(const BoundedReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"n", row.n}, {"exponent", row.exponent}, {"holds", row.holds}, {"minimal_exponent", row.minimal_exponent}});
  return {{"C", rational_string(r.C)}, {"rows", rows}, {"holds", r.all_hold()}};
}

inline Json to_json(const CharacteristicReport& r) {
  Json cells = Json::array();
  for (const auto& c : r.cells) {
    Json j{{"n", c.n}, {"automorphism", c.automorphism}, {"stable", c.stable}};
    if (!c.stable) j["witness"] = {{"generator", c.witness}, {"image", c.witness_image}};
    cells.push_back(j);
  }
  return {{"cells", cells}, {"stable", r.all_stable()}};
}

inline Json to_json(const IntersectionReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json j{{"n", row.n}, {"equal", row.equal}};
    if (!row.equal) j["witness"] = row.witness;
    rows.push_back(j);
  }
  return {{"rows", rows}, {"equal", r.all_equal()}};
}

inline std::string to_csv(const VolumeSeries& s) {
  std::ostringstream os;
  os << "n,length\n";
  for (const auto& r : s.rows) os << r.n << ',' << r.length << '\n';
  return os.str();
}

inline std::string to_csv(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& rows) {
  std::ostringstream os;
  os << "n,length\n";
  for (const auto& [n, l] : rows) os << n << ',' << l << '\n';
  return os.str();
}

}  // namespace natmult
