#pragma once

// Scenario files: a YAML document with an ordered list of blocks (rings,
// groups, maps, ideals, families, computations, checks, transformation
// checks), executed in declaration order into a RunRecord.
//
//   name: veronese
//   char: 3
//   blocks:
//     - ring: {name: S, vars: [x, y]}
//     - group: {name: G, ring: S, matrices: [[[-1, 0], [0, -1]]]}
//     - map: {name: V, group: G, source: R}
//     - transform: {map: V, family: splitting_ideals, indices: [3, 9, 27],
//                   expect: {conclusion: consistent-with-rule}}

#include <yaml-cpp/yaml.h>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>

#include "natmult/natmult.hpp"
#include "natmult/report.hpp"

#ifndef NATMULT_VERSION
#define NATMULT_VERSION "0.1.0"
#endif

namespace natmult {

inline const char* version() { return NATMULT_VERSION; }

struct ScenarioBlock {
  std::string kind;
  std::string name;
  YAML::Node body;
  YAML::Mark mark;
};

struct ScenarioOutput {
  std::string json;
  std::string csv;
  std::string csv_step;
};

struct Scenario {
  std::string origin = "<scenario>";
  std::string text;
  std::string name;
  std::optional<std::uint64_t> characteristic;
  double tolerance = 0.05;
  std::vector<ScenarioBlock> blocks;
  ScenarioOutput output;
};

namespace detail {

[[noreturn]] inline void scenario_error(const std::string& origin, const YAML::Mark& m, const std::string& msg) {
  if (m.line < 0) fail(ErrorCode::parse_error, origin + ": " + msg);
  fail(ErrorCode::parse_error,
       origin + ":" + std::to_string(m.line + 1) + ":" + std::to_string(m.column + 1) + ": " + msg);
}

inline const std::map<std::string, std::set<std::string>>& block_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"ring", {"name", "char", "vars", "order", "relations", "dimension", "expect"}},
      {"group", {"name", "ring", "matrices", "max_order", "expect"}},
      {"map",
       {"name", "group", "source", "target", "images", "rank", "residue_degree", "source_vars", "names", "expect"}},
      {"ideal", {"name", "ring", "generators"}},
      {"custom_family", {"name", "ring", "generators", "label", "indices"}},
      {"assignment", {"name", "kind", "indices", "contracted"}},
      {"automorphism", {"name", "ring", "images"}},
      {"compute",
       {"name", "op", "ideal", "other", "eliminate", "poly", "map", "ring", "family", "indices", "kind", "q", "oracle",
        "normalization", "probe", "signature", "expect"}},
      {"check", {"name", "family", "ring", "map", "indices", "bounded", "characteristic", "intersection", "expect"}},
      {"transform",
       {"name", "map", "family", "indices", "tolerance", "margin", "bound_constant", "automorphisms",
        "source_automorphisms", "etale", "intersection_indices", "expect"}},
  };
  return keys;
}

inline bool defines_name(const std::string& kind) {
  return kind == "ring" || kind == "group" || kind == "map" || kind == "ideal" || kind == "custom_family" ||
         kind == "assignment" || kind == "automorphism";
}

inline bool is_builtin_family(const std::string& s) {
  for (auto k : {AssignmentKind::powers, AssignmentKind::frobenius_powers, AssignmentKind::differential_powers,
                 AssignmentKind::splitting_ideals})
    if (s == to_string(k)) return true;
  return false;
}

/// Checks that every reference names an earlier block of the right kind.
inline void validate_references(const Scenario& sc) {
  std::map<std::string, std::string> defined;  // name -> kind
  auto expect_ref = [&](const ScenarioBlock& b, const std::string& key, std::set<std::string> kinds) {
    if (!b.body[key]) return;
    auto check = [&](const YAML::Node& v) {
      const std::string ref = v.as<std::string>();
      if (kinds.count("family") && is_builtin_family(ref)) return;
      auto it = defined.find(ref);
      if (it == defined.end()) scenario_error(sc.origin, v.Mark(), "'" + ref + "' is not defined before use");
      std::string want = it->second;
      if (kinds.count("family") && (want == "assignment" || want == "custom_family")) return;
      if (!kinds.count(want))
        scenario_error(sc.origin, v.Mark(), "'" + ref + "' is a " + want + ", expected " + *kinds.begin());
    };
    if (b.body[key].IsSequence())
      for (const auto& v : b.body[key]) check(v);
    else if (b.body[key].IsScalar())
      check(b.body[key]);
  };
  for (const auto& b : sc.blocks) {
    if (b.kind == "map") {
      expect_ref(b, "group", {"group"});
      expect_ref(b, "target", {"ring"});
      if (!b.body["group"] && !b.body["source_vars"]) expect_ref(b, "source", {"ring"});
    } else {
      expect_ref(b, "ring", {"ring"});
    }
    expect_ref(b, "map", {"map"});
    expect_ref(b, "ideal", {"ideal"});
    expect_ref(b, "probe", {"ideal"});
    expect_ref(b, "other", {"ideal"});
    expect_ref(b, "family", {"family"});
    expect_ref(b, "automorphisms", {"automorphism"});
    expect_ref(b, "source_automorphisms", {"automorphism"});
    if (b.kind == "check") expect_ref(b, "characteristic", {"automorphism"});
    if (defines_name(b.kind)) {
      if (defined.count(b.name)) scenario_error(sc.origin, b.mark, "name '" + b.name + "' defined twice");
      defined[b.name] = b.kind;
    }
    if (b.kind == "map" && (b.body["group"] || b.body["source_vars"])) {
      std::string src = b.body["source"] ? b.body["source"].as<std::string>() : b.name + "_source";
      if (defined.count(src)) scenario_error(sc.origin, b.mark, "name '" + src + "' defined twice");
      defined[src] = "ring";
    }
  }
}

}  // namespace detail

inline Scenario parse_scenario(const std::string& text, const std::string& origin = "<scenario>") {
  Scenario sc;
  sc.origin = origin;
  sc.text = text;
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    detail::scenario_error(origin, e.mark, e.msg);
  }
  if (!root || root.IsNull()) return sc;
  if (!root.IsMap()) detail::scenario_error(origin, root.Mark(), "scenario must be a mapping");
  try {
    for (const auto& kv : root) {
      const auto key = kv.first.as<std::string>();
      if (key == "name") {
        sc.name = kv.second.as<std::string>();
      } else if (key == "char") {
        sc.characteristic = kv.second.as<std::uint64_t>();
      } else if (key == "tolerance") {
        sc.tolerance = kv.second.as<double>();
      } else if (key == "output") {
        for (const auto& o : kv.second) {
          const auto ok = o.first.as<std::string>();
          if (ok == "json") sc.output.json = o.second.as<std::string>();
          else if (ok == "csv") sc.output.csv = o.second.as<std::string>();
          else if (ok == "csv_step") sc.output.csv_step = o.second.as<std::string>();
          else detail::scenario_error(origin, o.first.Mark(), "unknown output key '" + ok + "'");
        }
      } else if (key == "blocks") {
        if (kv.second.IsNull()) continue;
        if (!kv.second.IsSequence()) detail::scenario_error(origin, kv.second.Mark(), "blocks must be a list");
        std::size_t index = 0;
        for (const auto& item : kv.second) {
          ++index;
          if (!item.IsMap() || item.size() != 1)
            detail::scenario_error(origin, item.Mark(), "each block is a single-key mapping such as 'ring: {...}'");
          auto it = item.begin();
          ScenarioBlock b;
          b.kind = it->first.as<std::string>();
          b.body = it->second;
          b.mark = it->first.Mark();
          const auto& keys = detail::block_keys();
          auto allowed = keys.find(b.kind);
          if (allowed == keys.end()) detail::scenario_error(origin, b.mark, "unknown block kind '" + b.kind + "'");
          if (!b.body.IsMap()) detail::scenario_error(origin, b.body.Mark(), b.kind + " block body must be a mapping");
          for (const auto& f : b.body) {
            auto fk = f.first.as<std::string>();
            if (!allowed->second.count(fk))
              detail::scenario_error(origin, f.first.Mark(), "unknown key '" + fk + "' in " + b.kind + " block");
          }
          if (b.body["name"]) b.name = b.body["name"].as<std::string>();
          else if (detail::defines_name(b.kind)) detail::scenario_error(origin, b.mark, b.kind + " block needs a name");
          else b.name = b.kind + std::to_string(index);
          sc.blocks.push_back(std::move(b));
        }
      } else {
        detail::scenario_error(origin, kv.first.Mark(), "unknown top-level key '" + key + "'");
      }
    }
  } catch (const YAML::Exception& e) {
    detail::scenario_error(origin, e.mark, e.msg);
  }
  detail::validate_references(sc);
  return sc;
}

inline Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io_error, "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path.string());
}

/// 64-bit FNV-1a, hex encoded.
inline std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

inline std::string utc_timestamp() {
  auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

struct RunRecord {
  std::string scenario;
  std::string hash;
  std::string version = natmult::version();
  std::string timestamp;
  Json steps = Json::array();
  std::vector<std::string> failures;
  int exit_status = 0;
  bool from_cache = false;
  std::string csv;  // rows of the selected series, "n,length"
};

inline Json to_json(const RunRecord& r) {
  return {{"scenario", r.scenario},    {"hash", r.hash},         {"version", r.version},
          {"timestamp", r.timestamp},  {"steps", r.steps},       {"failures", r.failures},
          {"exit_status", r.exit_status}};
}

inline RunRecord record_from_json(const Json& j) {
  RunRecord r;
  r.scenario = j.at("scenario").get<std::string>();
  r.hash = j.at("hash").get<std::string>();
  r.version = j.at("version").get<std::string>();
  r.timestamp = j.at("timestamp").get<std::string>();
  r.steps = j.at("steps");
  r.failures = j.at("failures").get<std::vector<std::string>>();
  r.exit_status = j.at("exit_status").get<int>();
  return r;
}

struct RunOptions {
  std::optional<std::filesystem::path> cache_dir;  // nullopt disables the cache
  bool write_outputs = true;
};

/// Cache directory from NATMULT_CACHE_DIR, if set.
inline std::optional<std::filesystem::path> cache_dir_from_env() {
  if (const char* d = std::getenv("NATMULT_CACHE_DIR"); d && *d) return std::filesystem::path(d);
  return std::nullopt;
}

namespace detail {

struct StepOutcome {
  Json report = Json::object();
  Json expectations = Json::array();
  bool ok = true;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> rows;
};

inline void expect_equal(StepOutcome& out, const std::string& key, const Json& expected, const Json& actual) {
  bool ok = expected == actual;
  out.expectations.push_back({{"key", key}, {"expected", expected}, {"actual", actual}, {"ok", ok}});
  out.ok = out.ok && ok;
}

/// `pair` is [value, relative tolerance].
inline void expect_near(StepOutcome& out, const std::string& key, const YAML::Node& pair, const mpq_class& actual) {
  if (!pair.IsSequence() || pair.size() != 2)
    fail(ErrorCode::parse_error, key + " expects [value, relative tolerance]");
  mpq_class target = parse_rational(pair[0].as<std::string>());
  double tol = pair[1].as<double>();
  double rel = std::abs(mpq_class(actual - target).get_d()) / std::max(std::abs(target.get_d()), 1e-300);
  bool ok = rel <= tol;
  out.expectations.push_back({{"key", key},
                              {"expected", rational_string(target) + " +/- " + decimal_string(mpq_class(tol), 4)},
                              {"actual", decimal_string(actual)},
                              {"ok", ok}});
  out.ok = out.ok && ok;
}

inline std::vector<std::uint64_t> index_list(const YAML::Node& n) {
  std::vector<std::uint64_t> v;
  if (!n) return v;
  if (n.IsSequence()) {
    for (const auto& x : n) v.push_back(x.as<std::uint64_t>());
  } else {
    // "a..b" range
    auto s = n.as<std::string>();
    auto dots = s.find("..");
    if (dots == std::string::npos) fail(ErrorCode::parse_error, "indices must be a list or 'a..b'");
    auto lo = std::stoull(s.substr(0, dots)), hi = std::stoull(s.substr(dots + 2));
    for (auto i = lo; i <= hi; ++i) v.push_back(i);
  }
  return v;
}

inline MonomialOrder parse_order(const YAML::Node& n) {
  if (!n) return MonomialOrder::grevlex();
  if (n.IsScalar()) {
    auto s = n.as<std::string>();
    if (s == "grevlex") return MonomialOrder::grevlex();
    if (s == "lex") return MonomialOrder::lex();
    if (s == "grlex") return MonomialOrder::grlex();
    fail(ErrorCode::parse_error, "unknown order '" + s + "'");
  }
  if (n["elimination"]) return MonomialOrder::elimination(n["elimination"].as<std::size_t>());
  if (n["weighted"]) return MonomialOrder::weighted_order(n["weighted"].as<std::vector<int>>());
  fail(ErrorCode::parse_error, "unknown order");
}

template <class Field>
class ScenarioRunner {
 public:
  using Poly = Polynomial<Field>;

  ScenarioRunner(const Scenario& sc, Field field) : sc_(sc), field_(std::move(field)) {}

  StepOutcome run_block(const ScenarioBlock& b) {
    StepOutcome out;
    const auto& n = b.body;
    if (b.kind == "ring") ring_block(b, out);
    else if (b.kind == "group") group_block(b, out);
    else if (b.kind == "map") map_block(b, out);
    else if (b.kind == "ideal") {
      const auto& R = ring(n["ring"]);
      ideals_.emplace(b.name, R.lift(Ideal<Field>(R.ambient, polys(R, n["generators"]))));
      out.report = {{"generators", polys_json(ideals_.at(b.name).generators())}};
    } else if (b.kind == "custom_family") {
      Assignment A = Assignment::custom(n["generators"].as<std::vector<std::string>>(),
                                        n["label"] ? n["label"].as<std::string>() : b.name);
      families_[b.name] = {A, n["ring"].as<std::string>(), index_list(n["indices"])};
      out.report = {{"templates", A.templates}};
    } else if (b.kind == "assignment") {
      auto kind = assignment_kind_from_string(n["kind"].as<std::string>());
      if (kind == AssignmentKind::custom) fail(ErrorCode::parse_error, "use a custom_family block for custom families");
      bool contracted = n["contracted"] && n["contracted"].as<bool>();
      Assignment A = contracted ? Assignment::contraction_of(kind) : Assignment::of(kind);
      families_[b.name] = {A, "", index_list(n["indices"])};
      out.report = {{"kind", to_string(kind)}, {"contracted", contracted}};
    } else if (b.kind == "automorphism") {
      const auto& R = ring(n["ring"]);
      autos_.emplace(b.name, LinearAutomorphism<Field>{polys(R, n["images"]), b.name});
      out.report = {{"images", n["images"].as<std::vector<std::string>>()}};
    } else if (b.kind == "compute") compute_block(b, out);
    else if (b.kind == "check") check_block(b, out);
    else if (b.kind == "transform") transform_block(b, out);
    return out;
  }

 private:
  struct FamilyRef {
    Assignment assignment;
    std::string ring;  // custom families: ring holding the templates
    std::vector<std::uint64_t> indices;
  };

  const Scenario& sc_;
  Field field_;
  std::map<std::string, RingPresentation<Field>> rings_;
  std::map<std::string, std::shared_ptr<const GroupAction<Field>>> groups_;
  std::map<std::string, FiniteMap<Field>> maps_;
  std::map<std::string, Ideal<Field>> ideals_;
  std::map<std::string, FamilyRef> families_;
  std::map<std::string, LinearAutomorphism<Field>> autos_;

  const RingPresentation<Field>& ring(const YAML::Node& n) {
    if (!n) fail(ErrorCode::parse_error, "missing ring reference");
    return rings_.at(n.as<std::string>());
  }
  const FiniteMap<Field>& map(const YAML::Node& n) {
    if (!n) fail(ErrorCode::parse_error, "missing map reference");
    return maps_.at(n.as<std::string>());
  }
  const Ideal<Field>& ideal(const YAML::Node& n) {
    if (!n) fail(ErrorCode::parse_error, "missing ideal reference");
    return ideals_.at(n.as<std::string>());
  }
  std::vector<Poly> polys(const RingPresentation<Field>& R, const YAML::Node& n) {
    std::vector<Poly> out;
    if (!n) return out;
    for (const auto& s : n) out.push_back(parse_polynomial<Field>(s.as<std::string>(), R.ambient));
    return out;
  }
  std::vector<LinearAutomorphism<Field>> automorphisms(const YAML::Node& n) {
    std::vector<LinearAutomorphism<Field>> out;
    if (!n) return out;
    for (const auto& s : n) out.push_back(autos_.at(s.as<std::string>()));
    return out;
  }
  FamilyRef family(const YAML::Node& n) {
    if (!n) fail(ErrorCode::parse_error, "missing family reference");
    auto s = n.as<std::string>();
    if (auto it = families_.find(s); it != families_.end()) return it->second;
    return {Assignment::of(assignment_kind_from_string(s)), "", {}};
  }
  std::vector<std::uint64_t> indices_for(const YAML::Node& body, const FamilyRef& f) {
    auto v = index_list(body["indices"]);
    if (v.empty()) v = f.indices;
    if (v.empty()) fail(ErrorCode::parse_error, "no indices given");
    return v;
  }

  void ring_block(const ScenarioBlock& b, StepOutcome& out) {
    const auto& n = b.body;
    if (n["char"] && n["char"].as<std::uint64_t>() != field_.characteristic())
      fail(ErrorCode::incompatible_coefficient, "ring '" + b.name + "' has characteristic " +
                                                    n["char"].as<std::string>() + " but the scenario uses " +
                                                    std::to_string(field_.characteristic()));
    auto ambient = PolyRing<Field>::make(field_, n["vars"].as<std::vector<std::string>>(), parse_order(n["order"]));
    std::vector<Poly> rels;
    if (n["relations"])
      for (const auto& s : n["relations"]) rels.push_back(parse_polynomial<Field>(s.as<std::string>(), ambient));
    std::optional<int> dim;
    if (n["dimension"]) dim = n["dimension"].as<int>();
    auto R = RingPresentation<Field>::make(ambient, rels, dim);
    out.report = {{"vars", ambient->names()},
                  {"relations", polys_json(R.relations.generators())},
                  {"dimension", R.dimension},
                  {"regular", R.is_regular()}};
    if (const auto& e = n["expect"]) {
      if (e["dimension"]) expect_equal(out, "dimension", e["dimension"].as<int>(), R.dimension);
      if (e["regular"]) expect_equal(out, "regular", e["regular"].as<bool>(), R.is_regular());
    }
    rings_.emplace(b.name, std::move(R));
  }

  void group_block(const ScenarioBlock& b, StepOutcome& out) {
    const auto& n = b.body;
    const auto& R = ring(n["ring"]);
    if (!R.is_regular()) fail(ErrorCode::unsupported_ring, "group actions need a polynomial ring");
    std::vector<Matrix<Field>> mats;
    for (const auto& m : n["matrices"]) {
      Matrix<Field> M;
      for (const auto& row : m) {
        std::vector<typename Field::value_type> r;
        for (const auto& x : row) {
          mpq_class q = parse_rational(x.as<std::string>());
          r.push_back(field_.div(field_.from_mpz(q.get_num()), field_.from_mpz(q.get_den())));
        }
        M.push_back(std::move(r));
      }
      mats.push_back(std::move(M));
    }
    std::size_t cap = n["max_order"] ? n["max_order"].as<std::size_t>() : 4096;
    auto G = std::make_shared<GroupAction<Field>>(R.ambient, mats, cap);
    out.report = {{"order", G->order()}, {"etale_codim_one", is_etale_in_codim_one(*G)}};
    if (const auto& e = n["expect"]) {
      if (e["order"]) expect_equal(out, "order", e["order"].as<std::uint64_t>(), G->order());
      if (e["etale"]) expect_equal(out, "etale", e["etale"].as<bool>(), is_etale_in_codim_one(*G));
    }
    groups_.emplace(b.name, std::move(G));
  }

  void map_block(const ScenarioBlock& b, StepOutcome& out) {
    const auto& n = b.body;
    std::optional<FiniteMap<Field>> m;
    if (n["group"]) {
      std::vector<std::string> names;
      if (n["names"]) names = n["names"].as<std::vector<std::string>>();
      auto inv = invariant_ring(groups_.at(n["group"].as<std::string>()), std::nullopt, names);
      std::string src = n["source"] ? n["source"].as<std::string>() : b.name + "_source";
      rings_.emplace(src, inv.presentation);
      m = inv.map;
      out.report["invariants"] = polys_json(inv.invariants);
      out.report["source"] = src;
    } else {
      const auto& T = ring(n["target"]);
      auto imgs = polys(T, n["images"]);
      std::optional<std::uint64_t> rank;
      if (n["rank"]) rank = n["rank"].as<std::uint64_t>();
      std::uint64_t residue = n["residue_degree"] ? n["residue_degree"].as<std::uint64_t>() : 1;
      if (n["source_vars"]) {
        auto src = kernel_presentation(imgs, n["source_vars"].as<std::vector<std::string>>(), T);
        std::string sname = n["source"] ? n["source"].as<std::string>() : b.name + "_source";
        rings_.emplace(sname, src);
        m = FiniteMap<Field>::make(src, T, imgs, rank, residue);
        out.report["source"] = sname;
      } else {
        m = FiniteMap<Field>::make(ring(n["source"]), T, imgs, rank, residue);
      }
    }
    out.report["relations"] = polys_json(m->source.relations.generators());
    out.report["module_finite"] = m->module_finite;
    if (auto r = m->resolved_rank()) out.report["rank"] = *r;
    auto et = decide_etale_in_codim_one(*m);
    out.report["etale_codim_one"] = et ? Json(*et) : Json("undecided");
    if (const auto& e = n["expect"]) {
      if (e["rank"]) expect_equal(out, "rank", e["rank"].as<std::uint64_t>(), m->resolved_rank().value_or(0));
      if (e["etale"]) expect_equal(out, "etale", e["etale"].as<bool>(), et ? Json(*et) : Json("undecided"));
      if (e["module_finite"]) expect_equal(out, "module_finite", e["module_finite"].as<bool>(), m->module_finite);
      if (e["relations"]) {
        Ideal<Field> want(m->source.ambient, polys(m->source, e["relations"]));
        expect_equal(out, "relations", true, want.equals(m->source.relations));
      }
    }
    maps_.emplace(b.name, std::move(*m));
  }

  void series_expectations(StepOutcome& out, const YAML::Node& e, const VolumeSeries& s) {
    if (!e) return;
    if (e["lengths"]) {
      Json got = Json::array();
      for (const auto& r : s.rows) got.push_back(r.length);
      expect_equal(out, "lengths", Json(e["lengths"].as<std::vector<std::uint64_t>>()), got);
    }
    if (e["length_at"])
      for (const auto& kv : e["length_at"]) {
        auto idx = kv.first.as<std::uint64_t>();
        Json got = "absent";
        for (const auto& r : s.rows)
          if (r.n == idx) got = r.length;
        expect_equal(out, "length_at " + std::to_string(idx), kv.second.as<std::uint64_t>(), got);
      }
    if (e["last"])
      expect_equal(out, "last", rational_string(parse_rational(e["last"].as<std::string>())),
                   rational_string(s.rows.back().normalized));
    if (e["last_near"]) expect_near(out, "last_near", e["last_near"], s.rows.back().normalized);
    if (e["normalized_between"]) {
      const auto& band = e["normalized_between"];
      mpq_class lo = parse_rational(band[0].as<std::string>()), hi = parse_rational(band[1].as<std::string>());
      bool ok = true;
      for (const auto& r : s.rows) ok = ok && lo <= r.normalized && r.normalized <= hi;
      expect_equal(out, "normalized_between " + rational_string(lo) + " " + rational_string(hi), true, ok);
    }
    if (e["nondecreasing"]) {
      bool ok = true;
      for (std::size_t i = 1; i < s.rows.size(); ++i) ok = ok && s.rows[i - 1].normalized <= s.rows[i].normalized;
      expect_equal(out, "nondecreasing", e["nondecreasing"].as<bool>(), ok);
    }
  }

  void keep_rows(StepOutcome& out, const VolumeSeries& s) {
    for (const auto& r : s.rows) out.rows.emplace_back(r.n, r.length);
  }

  void compute_block(const ScenarioBlock& b, StepOutcome& out) {
    const auto& n = b.body;
    const auto op = n["op"].as<std::string>();
    const auto& e = n["expect"];
    out.report["op"] = op;
    if (op == "gb") {
      const auto& I = ideal(n["ideal"]);
      out.report["basis"] = polys_json(I.groebner_basis());
      if (e && e["basis"]) {
        // Reduced bases are monic; compare as sets of monic polynomials.
        auto sorted_strings = [](std::vector<Poly> ps) {
          std::vector<std::string> out;
          for (auto& g : ps) out.push_back(g.monic().to_string());
          std::sort(out.begin(), out.end());
          return out;
        };
        expect_equal(out, "basis", sorted_strings(polys_in(I.ring_ptr(), e["basis"])),
                     sorted_strings(I.groebner_basis()));
      }
    } else if (op == "nf") {
      const auto& I = ideal(n["ideal"]);
      auto f = parse_polynomial<Field>(n["poly"].as<std::string>(), I.ring_ptr());
      auto r = I.normal_form(f);
      out.report["normal_form"] = r.to_string();
      if (e && e["normal_form"])
        expect_equal(out, "normal_form", parse_polynomial<Field>(e["normal_form"].as<std::string>(), I.ring_ptr()).to_string(),
                     r.to_string());
    } else if (op == "colength") {
      const auto& I = ideal(n["ideal"]);
      auto c = colength(I);
      out.report["value"] = c.value;
      out.report["method"] = to_string(c.method);
      if (n["oracle"] && n["oracle"].as<bool>()) {
        auto o = colength_oracle(I);
        out.report["oracle"] = {{"value", o.value}, {"method", to_string(o.method)}};
        expect_equal(out, "oracle_agrees", true, o.value == c.value);
      }
      if (e && e["value"]) expect_equal(out, "value", e["value"].as<std::uint64_t>(), c.value);
    } else if (op == "intersect" || op == "colon" || op == "eliminate") {
      const auto& I = ideal(n["ideal"]);
      Ideal<Field> r = op == "intersect" ? intersect(I, ideal(n["other"]))
                       : op == "colon"   ? colon(I, ideal(n["other"]))
                                         : eliminate(I, n["eliminate"].as<std::vector<std::string>>());
      out.report["ring"] = r.ring().names();
      out.report["generators"] = polys_json(r.groebner_basis());
      if (e && e["generators"]) {
        Ideal<Field> want(r.ring_ptr(), polys_in(r.ring_ptr(), e["generators"]));
        expect_equal(out, "generators", true, want.equals(r));
      }
    } else if (op == "truncation_bound") {
      auto t = truncation_bound(ideal(n["ideal"]));
      out.report["value"] = t;
      if (e && e["value"]) expect_equal(out, "value", e["value"].as<unsigned>(), t);
    } else if (op == "contract") {
      const auto& m = map(n["map"]);
      auto C = contract_ideal(m, ideal(n["ideal"]));
      out.report["generators"] = polys_json(C.groebner_basis());
      out.report["colength"] = colength(C).value;
      if (e && e["generators"]) {
        Ideal<Field> want(m.source.ambient, polys(m.source, e["generators"]));
        expect_equal(out, "generators", true, m.source.lift(want).equals(C));
      }
      if (e && e["colength"]) expect_equal(out, "colength", e["colength"].as<std::uint64_t>(), colength(C).value);
    } else if (op == "image_span") {
      auto v = image_span_colength(map(n["map"]), ideal(n["ideal"]));
      out.report["value"] = v;
      if (e && e["value"]) expect_equal(out, "value", e["value"].as<std::uint64_t>(), v);
    } else if (op == "trace_ideal") {
      const auto& m = map(n["map"]);
      if (!m.action) fail(ErrorCode::unsupported_ring, "trace ideals need a group-backed map");
      std::vector<std::pair<std::uint64_t, Ideal<Field>>> targets;
      if (n["family"]) {
        auto f = family(n["family"]);
        for (auto i : indices_for(n, f)) targets.emplace_back(i, family_ideal(f.assignment, m.target, i));
      } else {
        targets.emplace_back(0, ideal(n["ideal"]));
      }
      bool all = true;
      Json rows = Json::array();
      for (const auto& [i, J] : targets) {
        auto T = trace_ideal(*m.action, m, J);
        bool eq = T.equals(contract_ideal(m, J));
        all = all && eq;
        Json row{{"generators", polys_json(T.groebner_basis())}, {"equals_contraction", eq}};
        if (n["family"]) row["n"] = i;
        rows.push_back(row);
      }
      out.report["rows"] = rows;
      out.report["equals_contraction"] = all;
      if (e && e["equals_contraction"]) expect_equal(out, "equals_contraction", e["equals_contraction"].as<bool>(), all);
    } else if (op == "splitting_number") {
      auto q = n["q"].as<std::uint64_t>();
      auto a = splitting_number(ring(n["ring"]), q);
      out.report["value"] = a;
      if (e && e["value"]) expect_equal(out, "value", e["value"].as<std::uint64_t>(), a);
    } else if (op == "volume") {
      auto f = family(n["family"]);
      auto idx = indices_for(n, f);
      auto norm = n["normalization"] && n["normalization"].as<std::string>() == "factorial" ? Normalization::factorial
                                                                                            : Normalization::raw;
      VolumeSeries s;
      if (n["map"]) {
        const auto& m = map(n["map"]);
        if (f.assignment.contracted) {
          FamilyTable<Field> t(f.assignment, m.target);
          s = contracted_volume_table(m, t, idx, norm);
        } else {
          s = volume_table(f.assignment, m.source, idx, norm, &m);
        }
      } else {
        const auto& R = n["ring"] ? ring(n["ring"]) : rings_.at(f.ring);
        s = volume_table(f.assignment, R, idx, norm);
      }
      out.report["series"] = to_json(s);
      if (s.rows.size() >= 3) {
        auto vb = vol_bounds(s);
        out.report["bounds"] = {{"label", vb.label},
                                {"lower", rational_string(vb.lower)},
                                {"upper", rational_string(vb.upper)},
                                {"last", rational_string(vb.last)}};
      }
      series_expectations(out, e, s);
      keep_rows(out, s);
    } else if (op == "multiplicity" || op == "signature") {
      auto kind = multiplicity_kind_from_string(n["kind"].as<std::string>());
      const FiniteMap<Field>* via = n["map"] ? &map(n["map"]) : nullptr;
      const auto& R = n["ring"] ? ring(n["ring"]) : (via ? via->source : ring(n["ring"]));
      auto m = multiplicity(kind, R, index_list(n["indices"]), via);
      out.report["multiplicity"] = to_json(m);
      series_expectations(out, e, m.series);
      if (e && e["estimate"])
        expect_equal(out, "estimate", rational_string(parse_rational(e["estimate"].as<std::string>())),
                     rational_string(m.estimate));
      if (e && e["estimate_near"]) expect_near(out, "estimate_near", e["estimate_near"], m.estimate);
      keep_rows(out, m.series);
    } else if (op == "rank_estimate") {
      const auto& m = map(n["map"]);
      Ideal<Field> probe = n["probe"] ? ideal(n["probe"]) : m.source.maximal_ideal();
      std::vector<unsigned> idx;
      for (auto i : index_list(n["indices"])) idx.push_back(static_cast<unsigned>(i));
      auto r = rank_estimate(m, probe, idx);
      Json rows = Json::array();
      for (const auto& [k, t, s] : r.rows) rows.push_back({{"n", k}, {"target_length", t}, {"source_length", s}});
      out.report["rows"] = rows;
      out.report["estimate"] = rational_string(r.estimate);
      if (e && e["estimate_near"]) expect_near(out, "estimate_near", e["estimate_near"], r.estimate);
    } else if (op == "pi1_bound") {
      auto s = parse_rational(n["signature"].as<std::string>());
      auto p = pi1_bound(s);
      Json v = p.bound ? Json(*p.bound) : Json("no bound");
      out.report["bound"] = v;
      out.report["caveat"] = p.caveat;
      if (e && e["bound"]) expect_equal(out, "bound", e["bound"].IsScalar() && e["bound"].as<std::string>() == "none"
                                                          ? Json("no bound")
                                                          : Json(e["bound"].as<std::uint64_t>()),
                                        v);
    } else {
      fail(ErrorCode::parse_error, "unknown compute op '" + op + "'");
    }
  }

  std::vector<Poly> polys_in(const RingPtr<Field>& R, const YAML::Node& n) {
    std::vector<Poly> out;
    for (const auto& s : n) out.push_back(parse_polynomial<Field>(s.as<std::string>(), R));
    return out;
  }

  void check_block(const ScenarioBlock& b, StepOutcome& out) {
    const auto& n = b.body;
    auto f = family(n["family"]);
    auto idx = indices_for(n, f);
    const FiniteMap<Field>* via = n["map"] ? &map(n["map"]) : nullptr;
    const RingPresentation<Field>& R =
        n["ring"] ? ring(n["ring"]) : (!f.ring.empty() ? rings_.at(f.ring) : (via ? via->source : ring(n["ring"])));
    const auto& e = n["expect"];
    if (n["bounded"]) {
      auto rep = check_bounded(f.assignment, R, parse_rational(n["bounded"].as<std::string>()), idx, via);
      out.report["bounded"] = to_json(rep);
      if (e && e["bounded"]) expect_equal(out, "bounded", e["bounded"].as<bool>(), rep.all_hold());
    }
    if (n["characteristic"]) {
      auto rep = check_characteristic(f.assignment, R, automorphisms(n["characteristic"]), idx, via);
      out.report["characteristic"] = to_json(rep);
      if (e && e["characteristic"]) expect_equal(out, "characteristic", e["characteristic"].as<bool>(), rep.all_stable());
      if (e && e["characteristic_witness"]) {
        std::string got = "none";
        for (const auto& c : rep.cells)
          if (!c.stable) {
            got = c.witness + " -> " + c.witness_image;
            break;
          }
        expect_equal(out, "characteristic_witness", e["characteristic_witness"].as<std::string>(), got);
      }
    }
    if (n["intersection"] && n["intersection"].as<bool>()) {
      if (!via) fail(ErrorCode::parse_error, "intersection check needs a map");
      auto rep = check_intersection(f.assignment, *via, idx);
      out.report["intersection"] = to_json(rep);
      if (e && e["intersection"]) expect_equal(out, "intersection", e["intersection"].as<bool>(), rep.all_equal());
      if (e && e["intersection_fails_at"]) {
        Json got = Json::array();
        for (const auto& r : rep.rows)
          if (!r.equal) got.push_back(r.n);
        expect_equal(out, "intersection_fails_at", Json(e["intersection_fails_at"].as<std::vector<std::uint64_t>>()), got);
      }
    }
  }

  void transform_block(const ScenarioBlock& b, StepOutcome& out) {
    const auto& n = b.body;
    const auto& m = map(n["map"]);
    auto f = family(n["family"]);
    auto idx = indices_for(n, f);
    TransformOptions<Field> opts;
    opts.tolerance = n["tolerance"] ? n["tolerance"].as<double>() : sc_.tolerance;
    if (n["margin"]) opts.margin = n["margin"].as<double>();
    if (n["bound_constant"]) opts.bound_constant = parse_rational(n["bound_constant"].as<std::string>());
    opts.target_automorphisms = automorphisms(n["automorphisms"]);
    opts.source_automorphisms = automorphisms(n["source_automorphisms"]);
    if (n["etale"]) opts.etale_asserted = n["etale"].as<bool>();
    if (n["intersection_indices"]) opts.intersection_indices = n["intersection_indices"].as<std::size_t>();
    auto rep = transformation_check(m, f.assignment, idx, opts);
    out.report["transform"] = to_json(rep);
    if (const auto& e = n["expect"]) {
      if (e["conclusion"]) expect_equal(out, "conclusion", e["conclusion"].as<std::string>(), to_string(rep.conclusion));
      if (e["final_ratio_near"]) expect_near(out, "final_ratio_near", e["final_ratio_near"], rep.rows.back().ratio);
      for (const char* h : {"bounded", "characteristic", "intersection", "etale"}) {
        if (!e[h]) continue;
        const AuditEntry& a = std::string(h) == "bounded"          ? rep.audit.bounded
                              : std::string(h) == "characteristic" ? rep.audit.characteristic
                              : std::string(h) == "intersection"   ? rep.audit.intersection
                                                                   : rep.audit.etale;
        expect_equal(out, std::string("audit.") + h, e[h].as<std::string>(), to_string(a.verdict));
      }
      if (e["source_lengths"]) {
        Json got = Json::array();
        for (const auto& r : rep.source.rows) got.push_back(r.length);
        expect_equal(out, "source_lengths", Json(e["source_lengths"].as<std::vector<std::uint64_t>>()), got);
      }
      if (e["target_lengths"]) {
        Json got = Json::array();
        for (const auto& r : rep.target.rows) got.push_back(r.length);
        expect_equal(out, "target_lengths", Json(e["target_lengths"].as<std::vector<std::uint64_t>>()), got);
      }
    }
    keep_rows(out, rep.target);
  }
};

template <class Field>
void execute(const Scenario& sc, Field field, RunRecord& rec) {
  ScenarioRunner<Field> runner(sc, std::move(field));
  std::vector<std::pair<std::uint64_t, std::uint64_t>> csv_rows;
  for (const auto& b : sc.blocks) {
    Json step{{"kind", b.kind}, {"name", b.name}, {"line", b.mark.line + 1}};
    std::optional<std::string> expected_error;
    if (b.body["expect"] && b.body["expect"]["error"]) expected_error = b.body["expect"]["error"].as<std::string>();
    try {
      StepOutcome out = runner.run_block(b);
      step["report"] = out.report;
      if (!out.expectations.empty()) step["expectations"] = out.expectations;
      if (expected_error) {
        out.ok = false;
        step["expectations"].push_back(
            {{"key", "error"}, {"expected", *expected_error}, {"actual", "none"}, {"ok", false}});
      }
      step["ok"] = out.ok;
      if (!out.ok) {
        rec.failures.push_back(b.name + ": expectation failed");
        rec.exit_status = std::max(rec.exit_status, 1);
      }
      if (!out.rows.empty() && (sc.output.csv_step.empty() || sc.output.csv_step == b.name)) csv_rows = out.rows;
    } catch (const Error& err) {
      if (expected_error == to_string(err.code())) {
        step["ok"] = true;
        step["error"] = {{"code", to_string(err.code())}, {"message", err.what()}};
        step["expectations"] = Json::array(
            {{{"key", "error"}, {"expected", to_string(err.code())}, {"actual", to_string(err.code())}, {"ok", true}}});
        rec.steps.push_back(step);
        continue;
      }
      step["ok"] = false;
      step["error"] = {{"code", to_string(err.code())}, {"message", err.what()}};
      rec.steps.push_back(step);
      rec.failures.push_back(b.name + ": " + err.what());
      rec.exit_status = err.code() == ErrorCode::resource_exhausted ? 3 : 2;
      return;
    } catch (const YAML::Exception& err) {
      step["ok"] = false;
      rec.steps.push_back(step);
      rec.failures.push_back(b.name + ": " + err.what());
      rec.exit_status = 2;
      return;
    } catch (const std::out_of_range& err) {
      step["ok"] = false;
      rec.steps.push_back(step);
      rec.failures.push_back(b.name + ": undefined reference");
      rec.exit_status = 2;
      return;
    }
    rec.steps.push_back(step);
  }
  if (!csv_rows.empty()) rec.csv = to_csv(csv_rows);
}

inline void write_file(const std::filesystem::path& p, const std::string& data) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) fail(ErrorCode::io_error, "cannot write " + p.string());
  out << data;
}

}  // namespace detail

/// Bit-stable JSON: sorted keys, two-space indent, trailing newline.
inline std::string export_json(const Json& j) { return j.dump(2) + "\n"; }

inline RunRecord run_scenario(const Scenario& sc, const RunOptions& opts = {}) {
  RunRecord rec;
  rec.scenario = sc.name.empty() ? sc.origin : sc.name;
  rec.hash = fnv1a_hex(std::string(natmult::version()) + "\n" + sc.text);
  std::optional<std::filesystem::path> cache_file;
  if (opts.cache_dir) cache_file = *opts.cache_dir / (rec.hash + ".json");
  if (cache_file && std::filesystem::exists(*cache_file)) {
    std::ifstream in(*cache_file);
    rec = record_from_json(Json::parse(in));
    rec.from_cache = true;
    std::ifstream csv(cache_file->string() + ".csv");
    if (csv) {
      std::stringstream ss;
      ss << csv.rdbuf();
      rec.csv = ss.str();
    }
  } else {
    rec.timestamp = utc_timestamp();
    std::uint64_t p = sc.characteristic.value_or(0);
    if (!sc.characteristic)
      for (const auto& b : sc.blocks)
        if (b.kind == "ring" && b.body["char"]) {
          p = b.body["char"].as<std::uint64_t>();
          break;
        }
    if (p == 0) detail::execute(sc, RationalField{}, rec);
    else detail::execute(sc, PrimeField(p), rec);
    if (cache_file && rec.exit_status != 3) {
      detail::write_file(*cache_file, export_json(to_json(rec)));
      if (!rec.csv.empty()) detail::write_file(cache_file->string() + ".csv", rec.csv);
    }
  }
  if (opts.write_outputs) {
    if (!sc.output.json.empty()) detail::write_file(sc.output.json, export_json(to_json(rec)));
    if (!sc.output.csv.empty()) detail::write_file(sc.output.csv, rec.csv.empty() ? "n,length\n" : rec.csv);
  }
  return rec;
}

}  // namespace natmult
