#pragma once

// Volume tables, multiplicity estimates, and the transformation-rule check
// with its hypothesis audit. All verdicts are finite-stage.

#include <cmath>

#include "natmult/assignments.hpp"

namespace natmult {

enum class Normalization { raw, factorial };

inline const char* to_string(Normalization n) { return n == Normalization::raw ? "raw" : "factorial"; }

struct VolumeRow {
  std::uint64_t n = 0;
  std::uint64_t length = 0;
  mpq_class normalized;     // length / n^d, times d! for factorial normalization
  std::string cross_check;  // independent method that reproduced `length`, or "skipped"
};

struct VolumeSeries {
  std::string family;
  int dimension = 0;
  Normalization normalization = Normalization::raw;
  std::vector<VolumeRow> rows;
};

struct SeriesOptions {
  std::uint64_t oracle_limit = 20000;       // max columns of a Macaulay matrix
  std::uint64_t ideal_limit = 20000;        // max q^nvars for building a splitting ideal
  std::uint64_t contraction_limit = 400;    // max target length for a contraction cross-check
};

inline mpq_class normalized_value(std::uint64_t length, std::uint64_t n, int d, Normalization norm) {
  mpz_class den = 1, num(std::to_string(length));
  for (int i = 0; i < d; ++i) den *= mpz_class(std::to_string(n));
  if (norm == Normalization::factorial)
    for (int i = 2; i <= d; ++i) num *= i;
  mpq_class v(num, den);
  v.canonicalize();
  return v;
}

namespace detail {

inline std::vector<std::uint64_t> sorted_indices(std::vector<std::uint64_t> idx) {
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  if (idx.empty()) fail(ErrorCode::invalid_argument, "no indices");
  return idx;
}

/// Macaulay-matrix colength when the matrix stays under `limit` columns.
template <class Field>
std::optional<std::uint64_t> oracle_length(const Ideal<Field>& I, std::uint64_t limit) {
  int delta = 0;
  for (const auto& g : I.generators()) delta = std::max(delta, g.total_degree());
  const std::uint64_t D = truncation_bound(I) + static_cast<std::uint64_t>(delta);
  const std::size_t n = I.ring().nvars();
  double cols = 1;  // C(D + n, n)
  for (std::size_t i = 1; i <= n; ++i) cols = cols * static_cast<double>(D + i) / static_cast<double>(i);
  if (cols > static_cast<double>(limit)) return std::nullopt;
  try {
    return colength_oracle(I).value;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::inconclusive) return std::nullopt;
    throw;
  }
}

inline void agree(std::uint64_t a, std::uint64_t b, std::uint64_t n, const std::string& what) {
  if (a != b)
    fail(ErrorCode::cross_check_failed, what + " at index " + std::to_string(n) + ": " + std::to_string(a) + " vs " +
                                            std::to_string(b));
}

}  // namespace detail

/// ℓ(R / A(R)_n) over the indices, each value reproduced by an independent
/// method where affordable.
template <class Field>
VolumeSeries volume_table(FamilyTable<Field>& table, const std::vector<std::uint64_t>& indices,
                          Normalization norm = Normalization::raw, const SeriesOptions& opts = {}) {
  const auto& A = table.assignment();
  const auto& R = table.ring();
  VolumeSeries s{A.label, R.dimension, norm, {}};
  for (auto n : detail::sorted_indices(indices)) {
    VolumeRow row;
    row.n = n;
    row.cross_check = "skipped";
    if (A.kind == AssignmentKind::splitting_ideals) {
      row.length = splitting_number(R, n);
      double size = std::pow(static_cast<double>(n), static_cast<double>(R.nvars()));
      if (size <= static_cast<double>(opts.ideal_limit)) {
        detail::agree(row.length, colength(table.at(n)).value, n, "splitting number vs ideal colength");
        row.cross_check = "groebner_count";
      }
    } else {
      Ideal<Field> I = table.at(n);
      row.length = colength(I).value;
      if (auto o = detail::oracle_length(I, opts.oracle_limit)) {
        detail::agree(row.length, *o, n, "Groebner count vs Macaulay oracle");
        row.cross_check = "macaulay_matrix";
      }
    }
    row.normalized = normalized_value(row.length, n, s.dimension, norm);
    s.rows.push_back(std::move(row));
  }
  return s;
}

template <class Field>
VolumeSeries volume_table(const Assignment& A, const RingPresentation<Field>& R,
                          const std::vector<std::uint64_t>& indices, Normalization norm = Normalization::raw,
                          const FiniteMap<Field>* via = nullptr, const SeriesOptions& opts = {}) {
  FamilyTable<Field> table(A, R, via);
  return volume_table(table, indices, norm, opts);
}

/// ℓ(R / φ^{-1}(J_n)) for a family J on the target, by image span, checked
/// against the colength of the contraction while the target length is small.
template <class Field>
VolumeSeries contracted_volume_table(const FiniteMap<Field>& map, FamilyTable<Field>& target_family,
                                     const std::vector<std::uint64_t>& indices,
                                     Normalization norm = Normalization::raw, const SeriesOptions& opts = {}) {
  VolumeSeries s{target_family.assignment().label + " (contracted)", map.source.dimension, norm, {}};
  for (auto n : detail::sorted_indices(indices)) {
    Ideal<Field> J = target_family.at(n);
    VolumeRow row;
    row.n = n;
    row.length = image_span_colength(map, J);
    row.cross_check = "skipped";
    if (colength(J).value <= opts.contraction_limit) {
      detail::agree(row.length, colength(contract_ideal(map, J)).value, n, "image span vs contraction colength");
      row.cross_check = "groebner_count";
    }
    row.normalized = normalized_value(row.length, n, s.dimension, norm);
    s.rows.push_back(std::move(row));
  }
  return s;
}

struct VolBounds {
  mpq_class lower;  // min over the top half of rows
  mpq_class upper;  // max over the top half of rows
  mpq_class last;
  std::string label = "finite-stage bounds";
};

inline VolBounds vol_bounds(const VolumeSeries& s) {
  if (s.rows.size() < 3) fail(ErrorCode::invalid_argument, "volume bounds need at least 3 rows");
  VolBounds b;
  b.last = s.rows.back().normalized;
  b.lower = b.upper = b.last;
  for (std::size_t i = s.rows.size() / 2; i < s.rows.size(); ++i) {
    b.lower = std::min(b.lower, s.rows[i].normalized);
    b.upper = std::max(b.upper, s.rows[i].normalized);
  }
  return b;
}

/// Least-squares fit of length against n^d and n^{d-1}. Advisory only.
struct LinearFit {
  double leading = 0;     // coefficient of n^d
  double subleading = 0;  // coefficient of n^{d-1}
};

inline std::optional<LinearFit> advisory_fit(const VolumeSeries& s) {
  if (s.rows.size() < 2) return std::nullopt;
  double a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0;
  for (const auto& r : s.rows) {
    double u = std::pow(static_cast<double>(r.n), s.dimension);
    double v = std::pow(static_cast<double>(r.n), s.dimension - 1);
    double y = static_cast<double>(r.length);
    a11 += u * u;
    a12 += u * v;
    a22 += v * v;
    b1 += u * y;
    b2 += v * y;
  }
  double det = a11 * a22 - a12 * a12;
  if (std::abs(det) < 1e-12) return std::nullopt;
  return LinearFit{(b1 * a22 - b2 * a12) / det, (a11 * b2 - a12 * b1) / det};
}

enum class MultiplicityKind { hilbert_samuel, hilbert_kunz, f_signature, differential_signature };

inline const char* to_string(MultiplicityKind k) {
  switch (k) {
    case MultiplicityKind::hilbert_samuel: return "hilbert_samuel";
    case MultiplicityKind::hilbert_kunz: return "hilbert_kunz";
    case MultiplicityKind::f_signature: return "f_signature";
    case MultiplicityKind::differential_signature: return "differential_signature";
  }
  return "?";
}

inline MultiplicityKind multiplicity_kind_from_string(const std::string& s) {
  for (auto k : {MultiplicityKind::hilbert_samuel, MultiplicityKind::hilbert_kunz, MultiplicityKind::f_signature,
                 MultiplicityKind::differential_signature})
    if (s == to_string(k)) return k;
  fail(ErrorCode::invalid_argument, "unknown multiplicity '" + s + "'");
}

struct MultiplicityEstimate {
  MultiplicityKind kind = MultiplicityKind::hilbert_samuel;
  VolumeSeries series;
  mpq_class estimate;  // normalized value at the largest index
  std::optional<VolBounds> bounds;
  std::optional<LinearFit> fit;
};

/// Finite-stage estimate of e, e_HK, s or d^s. `via` is the group-backed
/// inclusion needed for the differential signature of a singular ring.
template <class Field>
MultiplicityEstimate multiplicity(MultiplicityKind kind, const RingPresentation<Field>& R,
                                  const std::vector<std::uint64_t>& indices, const FiniteMap<Field>* via = nullptr,
                                  const SeriesOptions& opts = {}) {
  MultiplicityEstimate m;
  m.kind = kind;
  switch (kind) {
    case MultiplicityKind::hilbert_samuel:
      m.series = volume_table(Assignment::of(AssignmentKind::powers), R, indices, Normalization::factorial, via, opts);
      break;
    case MultiplicityKind::hilbert_kunz:
      m.series = volume_table(Assignment::of(AssignmentKind::frobenius_powers), R, indices, Normalization::raw, via, opts);
      break;
    case MultiplicityKind::f_signature:
      m.series = volume_table(Assignment::of(AssignmentKind::splitting_ideals), R, indices, Normalization::raw, via, opts);
      break;
    case MultiplicityKind::differential_signature: {
      auto DP = Assignment::of(AssignmentKind::differential_powers);
      m.series = volume_table(DP, R, indices, Normalization::factorial, via, opts);
      if (via && !R.is_regular()) {
        // Second route: the image span of the target power.
        for (auto& row : m.series.rows) {
          auto span = image_span_colength(*via, ideal_power(via->target.maximal_ideal(), static_cast<unsigned>(row.n)));
          detail::agree(row.length, span, row.n, "differential power colength vs image span");
          row.cross_check = "image_span";
        }
      }
      break;
    }
  }
  m.estimate = m.series.rows.back().normalized;
  if (m.series.rows.size() >= 3) m.bounds = vol_bounds(m.series);
  m.fit = advisory_fit(m.series);
  return m;
}

enum class Verdict { pass, fail, not_checked, asserted_true, asserted_false };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::not_checked: return "not checked";
    case Verdict::asserted_true: return "asserted";
    case Verdict::asserted_false: return "asserted false";
  }
  return "?";
}

struct AuditEntry {
  Verdict verdict = Verdict::not_checked;
  std::string detail;
  bool failed() const { return verdict == Verdict::fail || verdict == Verdict::asserted_false; }
};

struct HypothesisAudit {
  AuditEntry bounded, characteristic, intersection, etale;
  bool any_failed() const {
    return bounded.failed() || characteristic.failed() || intersection.failed() || etale.failed();
  }
};

enum class Conclusion { consistent, violates, inconclusive };

inline const char* to_string(Conclusion c) {
  switch (c) {
    case Conclusion::consistent: return "consistent-with-rule";
    case Conclusion::violates: return "violates-rule";
    case Conclusion::inconclusive: return "inconclusive";
  }
  return "?";
}

struct TransformRow {
  std::uint64_t n = 0;
  mpz_class lhs;  // [S:R] ℓ_R
  mpz_class rhs;  // [l:k] ℓ_S
  mpq_class ratio;
};

struct TransformReport {
  std::string assignment;
  std::uint64_t rank = 0;
  std::uint64_t residue_degree = 1;
  VolumeSeries source, target;
  std::vector<TransformRow> rows;
  HypothesisAudit audit;
  Conclusion conclusion = Conclusion::inconclusive;
  double tolerance = 0.05;
  double margin = 0.05;
};

template <class Field>
struct TransformOptions {
  double tolerance = 0.05;  // relative distance of the final ratio from 1
  double margin = 0.05;     // top-half ratios must stay this far from 1 to call a violation
  std::optional<mpq_class> bound_constant;
  std::vector<LinearAutomorphism<Field>> source_automorphisms;
  std::vector<LinearAutomorphism<Field>> target_automorphisms;
  std::optional<bool> etale_asserted;
  std::size_t intersection_indices = 2;  // smallest indices checked for the intersection property
  SeriesOptions series;
};

/// Default C for the boundedness audit: 1 for ordinary and differential
/// powers, the embedding dimension for prime-power families (since
/// m^{e(q-1)+1} ⊆ m^[q]), and embedding dimension times the largest
/// template degree at n = 1 for custom families.
template <class Field>
mpq_class default_bound_constant(const Assignment& A, const RingPresentation<Field>& R) {
  switch (A.kind) {
    case AssignmentKind::powers:
    case AssignmentKind::differential_powers: return 1;
    case AssignmentKind::frobenius_powers:
    case AssignmentKind::splitting_ideals: return static_cast<long>(R.nvars());
    case AssignmentKind::custom: {
      int deg = 1;
      ParamBindings one{{"n", 1}};
      for (const auto& t : A.templates) deg = std::max(deg, parse_polynomial<Field>(t, R.ambient, one).total_degree());
      return static_cast<long>(R.nvars()) * deg;
    }
  }
  return 1;
}

namespace detail {

inline AuditEntry bounded_entry(const BoundedReport& rep, const std::string& side) {
  AuditEntry e{Verdict::pass, side + ": C=" + rep.C.get_str()};
  for (const auto& r : rep.rows)
    if (!r.holds) {
      e.verdict = Verdict::fail;
      e.detail += "; index " + std::to_string(r.n) + " needs exponent " + std::to_string(r.minimal_exponent) + " > " +
                  std::to_string(r.exponent);
      return e;
    }
  return e;
}

inline AuditEntry characteristic_entry(const CharacteristicReport& rep, const std::string& side) {
  for (const auto& c : rep.cells)
    if (!c.stable)
      return {Verdict::fail, side + " index " + std::to_string(c.n) + ", " + c.automorphism + ": " + c.witness +
                                 " -> " + c.witness_image + " not in the ideal"};
  return {Verdict::pass, side + ": " + std::to_string(rep.cells.size()) + " cells stable"};
}

}  // namespace detail

/// Compares [S:R] ℓ_R(R/A(R)_n) with [l:k] ℓ_S(S/A(S)_n) index by index and
/// audits the hypotheses of the transformation rule.
template <class Field>
TransformReport transformation_check(const FiniteMap<Field>& map, const Assignment& A,
                                     const std::vector<std::uint64_t>& indices,
                                     const TransformOptions<Field>& opts = {}) {
  using Provider = IdealProvider<Field>;
  auto rank = map.resolved_rank();
  if (!rank) fail(ErrorCode::invalid_argument, "rank [S:R] is not resolved; declare it or use a group-backed map");
  const auto idx = detail::sorted_indices(indices);

  TransformReport rep;
  rep.assignment = A.label;
  rep.rank = *rank;
  rep.residue_degree = map.residue_degree;
  rep.tolerance = opts.tolerance;
  rep.margin = opts.margin;

  FamilyTable<Field> target(A, map.target);
  FamilyTable<Field> source(A, map.source, &map);
  Provider target_at = [&](std::uint64_t n) { return target.at(n); };
  Provider source_at;
  if (A.contracted) {
    std::map<std::uint64_t, Ideal<Field>> cache;
    source_at = [&map, &target, cache](std::uint64_t n) mutable {
      auto it = cache.find(n);
      if (it == cache.end()) it = cache.emplace(n, contract_ideal(map, target.at(n))).first;
      return it->second;
    };
  } else {
    source_at = [&](std::uint64_t n) { return source.at(n); };
  }

  rep.target = volume_table(target, idx, Normalization::raw, opts.series);
  rep.source = A.contracted ? contracted_volume_table(map, target, idx, Normalization::raw, opts.series)
                            : volume_table(source, idx, Normalization::raw, opts.series);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    TransformRow row;
    row.n = idx[i];
    row.lhs = mpz_class(std::to_string(rep.rank)) * mpz_class(std::to_string(rep.source.rows[i].length));
    row.rhs = mpz_class(std::to_string(rep.residue_degree)) * mpz_class(std::to_string(rep.target.rows[i].length));
    row.ratio = mpq_class(row.lhs, row.rhs);
    row.ratio.canonicalize();
    rep.rows.push_back(std::move(row));
  }

  // Boundedness on each side where the family is computed directly.
  {
    auto Ct = opts.bound_constant.value_or(default_bound_constant(A, map.target));
    rep.audit.bounded = detail::bounded_entry(check_bounded(target_at, Ct, idx), "target");
    if (!A.contracted && !rep.audit.bounded.failed()) {
      auto Cs = opts.bound_constant.value_or(default_bound_constant(A, map.source));
      auto src = detail::bounded_entry(check_bounded(source_at, Cs, idx), "source");
      rep.audit.bounded.detail += "; " + src.detail;
      if (src.failed()) rep.audit.bounded.verdict = Verdict::fail;
    } else if (A.contracted) {
      rep.audit.bounded.detail += "; source follows by contraction";
    }
  }

  if (!opts.target_automorphisms.empty() || (!opts.source_automorphisms.empty() && !A.contracted)) {
    rep.audit.characteristic = {Verdict::pass, ""};
    if (!opts.target_automorphisms.empty())
      rep.audit.characteristic =
          detail::characteristic_entry(check_characteristic(map.target, target_at, opts.target_automorphisms, idx), "target");
    if (!rep.audit.characteristic.failed() && !opts.source_automorphisms.empty() && !A.contracted) {
      auto e = detail::characteristic_entry(check_characteristic(map.source, source_at, opts.source_automorphisms, idx),
                                            "source");
      if (e.failed() || rep.audit.characteristic.detail.empty()) rep.audit.characteristic = e;
      else rep.audit.characteristic.detail += "; " + e.detail;
    }
  }

  if (A.contracted) {
    rep.audit.intersection = {Verdict::pass, "source ideals are contractions by construction"};
  } else {
    std::vector<std::uint64_t> first(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(
                                                                    std::min(opts.intersection_indices, idx.size())));
    auto ir = check_intersection(map, source_at, target_at, first);
    rep.audit.intersection = {Verdict::pass, "checked at " + std::to_string(first.size()) + " indices"};
    for (const auto& r : ir.rows)
      if (!r.equal) {
        rep.audit.intersection = {Verdict::fail, "index " + std::to_string(r.n) + ": " + r.witness};
        break;
      }
  }

  if (auto e = decide_etale_in_codim_one(map)) {
    rep.audit.etale = {*e ? Verdict::pass : Verdict::fail,
                       map.action ? (*e ? "no pseudo-reflections" : "group contains a pseudo-reflection")
                                  : (*e ? "Jacobian is a unit" : "Jacobian vanishes at the origin")};
  } else if (opts.etale_asserted) {
    rep.audit.etale = {*opts.etale_asserted ? Verdict::asserted_true : Verdict::asserted_false, "asserted by caller"};
  }

  auto off = [](const mpq_class& r) { return std::abs(r.get_d() - 1.0); };
  const bool final_ok = off(rep.rows.back().ratio) <= opts.tolerance;
  bool away = true;
  for (std::size_t i = rep.rows.size() / 2; i < rep.rows.size(); ++i)
    if (off(rep.rows[i].ratio) <= opts.margin) away = false;
  if (final_ok && !rep.audit.any_failed()) rep.conclusion = Conclusion::consistent;
  else if (away && rep.audit.any_failed()) rep.conclusion = Conclusion::violates;
  else rep.conclusion = Conclusion::inconclusive;
  return rep;
}

struct Pi1Bound {
  std::optional<std::uint64_t> bound;  // nullopt: no bound
  std::string caveat;
};

/// floor(1/s) as a bound on the order of the local etale fundamental group.
inline Pi1Bound pi1_bound(const mpq_class& s) {
  if (s <= 0) return {std::nullopt, "no bound: signature is not positive"};
  mpq_class inv = 1 / s;
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), inv.get_num_mpz_t(), inv.get_den_mpz_t());
  return {fl.get_ui(), "bound valid only for rings meeting the fundamental group bound hypotheses"};
}

}  // namespace natmult
