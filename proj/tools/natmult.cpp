// natmult: run scenario files, reproduce the worked examples, and expose the
// individual computations as one-shot commands. One-shot commands build a
// scenario document and run it, so they share every code path with `run`.

#include <CLI11.hpp>

#include <iostream>

#include "natmult/examples.hpp"
#include "natmult/natmult.hpp"
#include "natmult/scenario.hpp"

namespace {

using natmult::Json;

struct RingArgs {
  std::uint64_t characteristic = 0;
  std::string vars;
  std::string order = "grevlex";
  std::vector<std::string> relations;
};

std::vector<std::string> split_names(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<std::uint64_t> parse_indices(const std::string& s) {
  std::vector<std::uint64_t> out;
  if (auto dots = s.find(".."); dots != std::string::npos) {
    auto lo = std::stoull(s.substr(0, dots)), hi = std::stoull(s.substr(dots + 2));
    for (auto i = lo; i <= hi; ++i) out.push_back(i);
    return out;
  }
  for (const auto& t : split_names(s)) out.push_back(std::stoull(t));
  return out;
}

void add_ring_options(CLI::App* cmd, RingArgs& r) {
  cmd->add_option("--char", r.characteristic, "Characteristic, 0 for the rationals")->default_val(0);
  cmd->add_option("--vars", r.vars, "Comma-separated variable names")->required();
  cmd->add_option("--order", r.order, "Monomial order: grevlex, lex or grlex")->default_val("grevlex");
  cmd->add_option("--relation", r.relations, "Defining relation of the ring (repeatable)");
}

/// Builds a scenario document block by block.
class ScenarioBuilder {
 public:
  explicit ScenarioBuilder(std::uint64_t p) { root_["char"] = p; }

  void add(const std::string& kind, const YAML::Node& body) {
    YAML::Node b;
    b[kind] = body;
    root_["blocks"].push_back(b);
  }

  void ring(const std::string& name, const RingArgs& r) {
    YAML::Node b;
    b["name"] = name;
    b["vars"] = split_names(r.vars);
    b["order"] = r.order;
    if (!r.relations.empty()) b["relations"] = r.relations;
    add("ring", b);
  }

  void ideal(const std::string& name, const std::string& ring, const std::vector<std::string>& gens) {
    YAML::Node b;
    b["name"] = name;
    b["ring"] = ring;
    b["generators"] = gens;
    add("ideal", b);
  }

  std::string text() const {
    YAML::Emitter out;
    out << root_;
    return out.c_str();
  }

 private:
  YAML::Node root_;
};

YAML::Node index_node(const std::string& s) {
  YAML::Node n;
  for (auto i : parse_indices(s)) n.push_back(i);
  return n;
}

/// Group matrices given as JSON, e.g. [[[-1,0],[0,-1]]]; entries may be "p/q" strings.
YAML::Node matrices_node(const std::string& json) {
  YAML::Node out;
  for (const auto& m : Json::parse(json)) {
    YAML::Node mat;
    for (const auto& row : m) {
      YAML::Node r;
      for (const auto& x : row) r.push_back(x.is_string() ? x.get<std::string>() : x.dump());
      mat.push_back(r);
    }
    out.push_back(mat);
  }
  return out;
}

void print_steps(const natmult::RunRecord& rec, bool all_json) {
  for (const auto& s : rec.steps) {
    if (all_json) continue;
    std::cout << (s.value("ok", false) ? "ok    " : "FAIL  ") << s["kind"].get<std::string>() << ' '
              << s["name"].get<std::string>() << '\n';
    if (s.contains("expectations"))
      for (const auto& e : s["expectations"])
        if (!e["ok"].get<bool>())
          std::cout << "      " << e["key"].get<std::string>() << ": expected " << e["expected"].dump() << ", got "
                    << e["actual"].dump() << '\n';
  }
  if (all_json) std::cout << natmult::export_json(natmult::to_json(rec));
  for (const auto& f : rec.failures) std::cerr << "failure: " << f << '\n';
}

/// Runs a generated one-shot scenario and prints the report of its last step.
int run_one_shot(const ScenarioBuilder& b) {
  auto sc = natmult::parse_scenario(b.text(), "<command line>");
  auto rec = natmult::run_scenario(sc, {std::nullopt, false});
  if (!rec.steps.empty()) {
    const auto& last = rec.steps.back();
    if (last.contains("report")) std::cout << natmult::export_json(last["report"]);
    if (last.contains("expectations"))
      for (const auto& e : last["expectations"])
        if (!e["ok"].get<bool>())
          std::cerr << "expectation " << e["key"].get<std::string>() << ": expected " << e["expected"].dump()
                    << ", got " << e["actual"].dump() << '\n';
  }
  for (const auto& f : rec.failures) std::cerr << "failure: " << f << '\n';
  return rec.exit_status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Asymptotic colengths, multiplicities and the transformation rule for families of ideals"};
  app.set_version_flag("--version", std::string(natmult::version()));
  app.require_subcommand(1);

  // run
  std::string scenario_path, json_out, csv_out;
  bool no_cache = false, print_json = false;
  auto* run = app.add_subcommand("run", "Run a scenario file");
  run->add_option("scenario", scenario_path, "Scenario file (YAML)")->required();
  run->add_flag("--no-cache", no_cache, "Ignore and do not write the result cache");
  run->add_option("--json", json_out, "Write the run record to this path");
  run->add_option("--csv", csv_out, "Write the selected series to this path");
  run->add_flag("--print-json", print_json, "Print the full run record instead of a summary");

  // paper-examples
  unsigned n_max = 0;
  std::vector<std::uint64_t> chars;
  int which = 0;
  auto* examples = app.add_subcommand("paper-examples", "Reproduce the Veronese and cubic-cover examples");
  examples->add_option("--n-max", n_max, "Largest index (default 6 for the Veronese, 12 for the cubic cover)");
  examples->add_option("--char", chars, "Characteristic to run (repeatable; default 5 and 0)");
  examples->add_option("--example", which, "1 for the cubic cover, 2 for the Veronese, 0 for both")->default_val(0);
  examples->add_flag("--no-cache", no_cache, "Ignore and do not write the result cache");
  examples->add_flag("--print-json", print_json, "Print the full run records");

  // gb, colength, nf
  RingArgs ring;
  std::vector<std::string> gens, other;
  std::string poly;
  bool oracle = false;
  std::optional<std::uint64_t> expect_value;
  auto* gb = app.add_subcommand("gb", "Reduced Groebner basis");
  add_ring_options(gb, ring);
  gb->add_option("generators", gens, "Ideal generators")->required();

  auto* col = app.add_subcommand("colength", "Colength of an m-primary ideal");
  add_ring_options(col, ring);
  col->add_option("generators", gens, "Ideal generators")->required();
  col->add_flag("--oracle", oracle, "Cross-check with the Macaulay-matrix oracle");
  col->add_option("--expect", expect_value, "Expected colength; exit 1 on mismatch");

  auto* nf = app.add_subcommand("nf", "Normal form modulo an ideal");
  add_ring_options(nf, ring);
  nf->add_option("poly", poly, "Polynomial to reduce")->required();
  nf->add_option("--ideal", gens, "Ideal generator (repeatable)")->required();

  auto* inter = app.add_subcommand("intersect", "Intersection of two ideals");
  add_ring_options(inter, ring);
  inter->add_option("--ideal", gens, "Generator of the first ideal (repeatable)")->required();
  inter->add_option("--other", other, "Generator of the second ideal (repeatable)")->required();

  auto* col_q = app.add_subcommand("colon", "Colon ideal I : J");
  add_ring_options(col_q, ring);
  col_q->add_option("--ideal", gens, "Generator of I (repeatable)")->required();
  col_q->add_option("--other", other, "Generator of J (repeatable)")->required();

  std::string drop;
  auto* elim = app.add_subcommand("eliminate", "Intersection with the subring of the remaining variables");
  add_ring_options(elim, ring);
  elim->add_option("--ideal", gens, "Ideal generator (repeatable)")->required();
  elim->add_option("--drop", drop, "Comma-separated variables to eliminate")->required();

  // Maps: either a linear group action on the polynomial ring, or explicit images.
  std::string group, source_vars, indices, family = "powers", kind, normalization = "raw";
  std::vector<std::string> images, templates;
  std::optional<std::uint64_t> rank;
  std::optional<double> tolerance;
  auto add_map_options = [&](CLI::App* cmd) {
    cmd->add_option("--group", group, "Group generators as JSON matrices, e.g. [[[-1,0],[0,-1]]]");
    cmd->add_option("--image", images, "Image of a source variable (repeatable)");
    cmd->add_option("--source-vars", source_vars, "Comma-separated source variable names");
    cmd->add_option("--rank", rank, "Generic rank [S:R] of the map");
  };

  auto* contract = app.add_subcommand("contract", "Contraction of a target ideal to the source");
  add_ring_options(contract, ring);
  add_map_options(contract);
  contract->add_option("--ideal", gens, "Target ideal generator (repeatable)")->required();

  auto* sig = app.add_subcommand("signature", "Finite-stage multiplicity or signature estimate");
  add_ring_options(sig, ring);
  add_map_options(sig);
  sig->add_option("--kind", kind, "hilbert_samuel, hilbert_kunz, f_signature or differential_signature")->required();
  sig->add_option("--indices", indices, "Indices, as a..b or a comma list")->required();

  auto* vol = app.add_subcommand("volume", "Colength table of a family of ideals");
  add_ring_options(vol, ring);
  add_map_options(vol);
  vol->add_option("--family", family, "powers, frobenius_powers, differential_powers or splitting_ideals");
  vol->add_option("--template", templates, "Generator template in n for a custom family (repeatable)");
  vol->add_option("--indices", indices, "Indices, as a..b or a comma list")->required();
  vol->add_option("--normalization", normalization, "raw or factorial")->default_val("raw");

  std::vector<std::string> swaps;
  auto* tc = app.add_subcommand("transform-check", "Test the transformation rule along a finite map");
  add_ring_options(tc, ring);
  add_map_options(tc);
  tc->add_option("--family", family, "Family name, or 'custom' with --template");
  tc->add_option("--template", templates, "Generator template in n for a custom family (repeatable)");
  tc->add_option("--indices", indices, "Indices, as a..b or a comma list")->required();
  tc->add_option("--tolerance", tolerance, "Relative tolerance on the final ratio");
  tc->add_option("--automorphism", swaps, "Target automorphism as comma-separated variable images (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (run->parsed()) {
      auto sc = natmult::load_scenario(scenario_path);
      if (!json_out.empty()) sc.output.json = json_out;
      if (!csv_out.empty()) sc.output.csv = csv_out;
      natmult::RunOptions opts;
      if (!no_cache) opts.cache_dir = natmult::cache_dir_from_env();
      auto rec = natmult::run_scenario(sc, opts);
      print_steps(rec, print_json);
      return rec.exit_status;
    }
    if (examples->parsed()) {
      if (chars.empty()) chars = {5, 0};
      natmult::RunOptions opts;
      if (!no_cache) opts.cache_dir = natmult::cache_dir_from_env();
      int status = 0;
      for (auto p : chars) {
        if (which == 0 || which == 2) {
          auto rec = natmult::reproduce_example_2(p, n_max ? n_max : 6, opts);
          if (!print_json) std::cout << "== " << rec.scenario << '\n';
          print_steps(rec, print_json);
          status = std::max(status, rec.exit_status);
        }
        if (which == 0 || which == 1) {
          auto rec = natmult::reproduce_example_1(p, n_max ? n_max : 12, opts);
          if (!print_json) std::cout << "== " << rec.scenario << '\n';
          print_steps(rec, print_json);
          status = std::max(status, rec.exit_status);
        }
      }
      return status;
    }

    ScenarioBuilder b(ring.characteristic);
    b.ring("S", ring);
    auto map_block = [&]() {
      YAML::Node m;
      m["name"] = "phi";
      if (!group.empty()) {
        YAML::Node g;
        g["name"] = "G";
        g["ring"] = "S";
        g["matrices"] = matrices_node(group);
        b.add("group", g);
        m["group"] = "G";
      } else {
        if (images.empty()) throw CLI::ValidationError("--image", "give --group or --image");
        m["target"] = "S";
        m["images"] = images;
        std::vector<std::string> names = source_vars.empty() ? natmult::default_source_names(images.size(), split_names(ring.vars))
                                                             : split_names(source_vars);
        m["source_vars"] = names;
        if (rank) m["rank"] = *rank;
      }
      m["source"] = "R";
      b.add("map", m);
    };
    auto family_ref = [&]() -> std::string {
      if (templates.empty()) return family;
      YAML::Node f;
      f["name"] = "custom";
      f["ring"] = "S";
      f["generators"] = templates;
      b.add("custom_family", f);
      return "custom";
    };
    YAML::Node c;
    if (gb->parsed() || col->parsed() || nf->parsed()) {
      b.ideal("I", "S", gens);
      c["ideal"] = "I";
      if (gb->parsed()) c["op"] = "gb";
      if (nf->parsed()) {
        c["op"] = "nf";
        c["poly"] = poly;
      }
      if (col->parsed()) {
        c["op"] = "colength";
        c["oracle"] = oracle;
        if (expect_value) c["expect"]["value"] = *expect_value;
      }
    } else if (inter->parsed() || col_q->parsed() || elim->parsed()) {
      b.ideal("I", "S", gens);
      c["ideal"] = "I";
      c["op"] = inter->parsed() ? "intersect" : col_q->parsed() ? "colon" : "eliminate";
      if (elim->parsed()) {
        c["eliminate"] = split_names(drop);
      } else {
        b.ideal("J", "S", other);
        c["other"] = "J";
      }
    } else if (contract->parsed()) {
      map_block();
      b.ideal("I", "S", gens);
      c["op"] = "contract";
      c["map"] = "phi";
      c["ideal"] = "I";
    } else if (sig->parsed()) {
      c["op"] = "signature";
      c["kind"] = kind;
      c["indices"] = index_node(indices);
      if (!group.empty() || !images.empty()) {
        map_block();
        c["map"] = "phi";
        c["ring"] = "R";
      } else {
        c["ring"] = "S";
      }
    } else if (vol->parsed()) {
      c["op"] = "volume";
      c["family"] = family_ref();
      c["indices"] = index_node(indices);
      c["normalization"] = normalization;
      if (!group.empty() || !images.empty()) {
        map_block();
        c["map"] = "phi";
      } else {
        c["ring"] = "S";
      }
    } else if (tc->parsed()) {
      map_block();
      YAML::Node t;
      t["map"] = "phi";
      t["family"] = family_ref();
      t["indices"] = index_node(indices);
      if (tolerance) t["tolerance"] = *tolerance;
      for (std::size_t i = 0; i < swaps.size(); ++i) {
        YAML::Node a;
        a["name"] = "auto" + std::to_string(i + 1);
        a["ring"] = "S";
        a["images"] = split_names(swaps[i]);
        b.add("automorphism", a);
        t["automorphisms"].push_back("auto" + std::to_string(i + 1));
      }
      b.add("transform", t);
      return run_one_shot(b);
    }
    b.add("compute", c);
    return run_one_shot(b);
  } catch (const natmult::Error& e) {
    std::cerr << "natmult: " << e.what() << '\n';
    return e.code() == natmult::ErrorCode::resource_exhausted ? 3 : 2;
  } catch (const CLI::Error& e) {
    std::cerr << "natmult: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "natmult: " << e.what() << '\n';
    return 2;
  }
}
