#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "natmult/examples.hpp"

using namespace natmult;
namespace fs = std::filesystem;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_scenario(text, "t.yaml");
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::parse_error);
    return e.what();
  }
  return "";
}

RunRecord run_text(const std::string& text, const RunOptions& opts = {std::nullopt, false}) {
  return run_scenario(parse_scenario(text, "t.yaml"), opts);
}

const char* kColength = R"(name: c
char: 0
blocks:
  - ring: {name: S, vars: [x, y]}
  - ideal: {name: J, ring: S, generators: ["x^3", "y^4", "x*y^2"]}
  - compute: {name: length, op: colength, ideal: J, expect: {value: EXPECTED}}
)";

std::string colength_text(int expected) {
  std::string s = kColength;
  s.replace(s.find("EXPECTED"), 8, std::to_string(expected));
  return s;
}

std::string read(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("natmult-test-" + std::to_string(::getpid()) + "-" +
                                        std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST(ScenarioParse, UnknownKeyReportsLineAndColumn) {
  auto msg = error_of("blocks:\n  - ring: {name: S, vars: [x], colour: red}\n");
  EXPECT_NE(msg.find("t.yaml:2:"), std::string::npos) << msg;
  EXPECT_NE(msg.find("unknown key 'colour'"), std::string::npos) << msg;
  EXPECT_NE(error_of("name: a\nwidth: 3\n").find("t.yaml:2:1: unknown top-level key 'width'"), std::string::npos);
  EXPECT_NE(error_of("blocks:\n  - torus: {name: T}\n").find("unknown block kind 'torus'"), std::string::npos);
}

TEST(ScenarioParse, ReferencesMustBeDefinedFirst) {
  auto msg = error_of(
      "blocks:\n"
      "  - ideal: {name: J, ring: S, generators: [x]}\n"
      "  - ring: {name: S, vars: [x]}\n");
  EXPECT_NE(msg.find("t.yaml:2:"), std::string::npos) << msg;
  EXPECT_NE(msg.find("'S' is not defined before use"), std::string::npos) << msg;

  msg = error_of(
      "blocks:\n"
      "  - ring: {name: S, vars: [x]}\n"
      "  - ideal: {name: J, ring: S, generators: [x]}\n"
      "  - ideal: {name: K, ring: J, generators: [x]}\n");
  EXPECT_NE(msg.find("'J' is a ideal, expected ring"), std::string::npos) << msg;

  msg = error_of(
      "blocks:\n"
      "  - ring: {name: S, vars: [x]}\n"
      "  - ring: {name: S, vars: [y]}\n");
  EXPECT_NE(msg.find("defined twice"), std::string::npos) << msg;
}

TEST(ScenarioParse, MalformedYamlAndMissingNames) {
  auto msg = error_of("blocks:\n  - ring: {name: S, vars: [x\n");
  EXPECT_NE(msg.find("t.yaml:"), std::string::npos) << msg;
  EXPECT_NE(error_of("blocks:\n  - ring: {vars: [x]}\n").find("ring block needs a name"), std::string::npos);
  EXPECT_NE(error_of("blocks:\n  - {ring: {name: S}, ideal: {name: J}}\n").find("single-key mapping"),
            std::string::npos);
}

TEST(ScenarioRun, EmptyScenarioSucceedsWithEmptyReport) {
  auto rec = run_text("");
  EXPECT_EQ(rec.exit_status, 0);
  EXPECT_TRUE(rec.steps.empty());
  EXPECT_TRUE(rec.failures.empty());
  EXPECT_EQ(export_json(Json::object()), "{}\n");
}

TEST(ScenarioRun, ColengthExpectation) {
  auto pass = run_text(colength_text(8));
  EXPECT_EQ(pass.exit_status, 0);
  EXPECT_EQ(pass.steps.back()["report"]["value"], 8);

  auto miss = run_text(colength_text(9));
  EXPECT_EQ(miss.exit_status, 1);
  const auto& e = miss.steps.back()["expectations"][0];
  EXPECT_EQ(e["expected"], 9);
  EXPECT_EQ(e["actual"], 8);
  EXPECT_FALSE(e["ok"].get<bool>());
  ASSERT_EQ(miss.failures.size(), 1u);
  EXPECT_EQ(miss.failures[0], "length: expectation failed");
}

TEST(ScenarioRun, DeterministicModuloTimestamp) {
  auto text = example_2_scenario(5, 3);
  auto a = to_json(run_text(text)), b = to_json(run_text(text));
  a.erase("timestamp");
  b.erase("timestamp");
  EXPECT_EQ(export_json(a), export_json(b));
}

TEST(ScenarioRun, HashDependsOnTextAndVersion) {
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
  EXPECT_EQ(run_text(colength_text(8)).hash, run_text(colength_text(8)).hash);
  EXPECT_NE(run_text(colength_text(8)).hash, run_text(colength_text(9)).hash);
}

TEST(ScenarioRun, CacheReturnsStoredRecord) {
  TempDir dir;
  RunOptions opts{dir.path, false};
  auto first = run_text(colength_text(8), opts);
  EXPECT_FALSE(first.from_cache);
  EXPECT_TRUE(fs::exists(dir.path / (first.hash + ".json")));
  auto second = run_text(colength_text(8), opts);
  EXPECT_TRUE(second.from_cache);
  EXPECT_EQ(second.timestamp, first.timestamp);
  EXPECT_EQ(export_json(to_json(second)), export_json(to_json(first)));
}

TEST(ScenarioRun, WritesJsonAndCsv) {
  TempDir dir;
  std::string text =
      "char: 0\n"
      "blocks:\n"
      "  - ring: {name: S, vars: [x, y]}\n"
      "  - custom_family: {name: J, ring: S, generators: [\"x^(2n+1) - y^(2n)\", \"y^(4n)\", "
      "\"x^(2n-1)*y^(2n)\"]}\n"
      "  - compute: {name: table, op: volume, family: J, ring: S, indices: 1..4}\n"
      "output: {json: " +
      (dir.path / "out" / "run.json").string() + ", csv: " + (dir.path / "out" / "run.csv").string() + "}\n";
  auto rec = run_text(text, {std::nullopt, true});
  EXPECT_EQ(rec.exit_status, 0);
  EXPECT_EQ(read(dir.path / "out" / "run.csv"), "n,length\n1,8\n2,32\n3,72\n4,128\n");
  auto j = Json::parse(read(dir.path / "out" / "run.json"));
  EXPECT_EQ(j["steps"][2]["report"]["series"]["rows"][3]["length"], 128);
  EXPECT_EQ(j["steps"][2]["report"]["series"]["rows"][3]["normalized_exact"], "8");
}

TEST(ScenarioRun, ResourceExhaustionNamesTheStep) {
  auto rec = run_text(
      "char: 3\n"
      "blocks:\n"
      "  - ring: {name: Q, vars: [a, b, c], relations: [\"b^2 - a*c\"]}\n"
      "  - compute: {name: a729, op: splitting_number, ring: Q, q: 729}\n"
      "  - compute: {name: never, op: splitting_number, ring: Q, q: 3}\n");
  EXPECT_EQ(rec.exit_status, 3);
  ASSERT_EQ(rec.failures.size(), 1u);
  EXPECT_EQ(rec.failures[0].rfind("a729: resource-exhausted", 0), 0u) << rec.failures[0];
  EXPECT_EQ(rec.steps.size(), 2u);
}

TEST(ScenarioRun, ExpectedErrorsAndSemanticErrors) {
  auto rec = run_text(
      "char: 0\n"
      "blocks:\n"
      "  - ring: {name: S, vars: [x, y]}\n"
      "  - check: {family: splitting_ideals, ring: S, indices: [3], bounded: 1,"
      " expect: {error: invalid-characteristic}}\n");
  EXPECT_EQ(rec.exit_status, 0);
  EXPECT_EQ(rec.steps.back()["error"]["code"], "invalid-characteristic");

  rec = run_text(
      "char: 0\n"
      "blocks:\n"
      "  - ring: {name: S, vars: [x]}\n"
      "  - ideal: {name: J, ring: S, generators: [\"x +\"]}\n");
  EXPECT_EQ(rec.exit_status, 2);
}

TEST(Formatting, ExactValues) {
  EXPECT_EQ(rational_string(mpq_class(1, 12)), "1/12");
  EXPECT_EQ(rational_string(mpq_class(8)), "8");
  EXPECT_EQ(decimal_string(mpq_class(2, 3)), "0.666667");
  EXPECT_EQ(decimal_string(mpq_class(-1, 8), 2), "-0.13");
  EXPECT_EQ(decimal_string(mpq_class(1, 1000000000)), "0.000000");
  EXPECT_EQ(parse_rational("0.05"), mpq_class(1, 20));
  EXPECT_EQ(parse_rational("-3/6"), mpq_class(-1, 2));
  EXPECT_THROW(parse_rational("1/0"), Error);
  EXPECT_THROW(parse_rational("x"), Error);
}

TEST(Examples, VeroneseReproducesOverBothFields) {
  for (std::uint64_t p : {5, 0}) {
    auto rec = reproduce_example_2(p);
    EXPECT_EQ(rec.exit_status, 0) << p;
    for (const auto& f : rec.failures) ADD_FAILURE() << f;
  }
}

TEST(Examples, CubicCoverLengths) {
  auto rec = reproduce_example_1(5, 12);
  std::map<std::string, Json> by_name;
  for (const auto& s : rec.steps) by_name[s["name"]] = s;
  EXPECT_EQ(by_name["E"]["report"]["relations"], Json::array());
  EXPECT_EQ(by_name["E"]["report"]["etale_codim_one"], false);
  EXPECT_EQ(by_name["target-volume"]["report"]["series"]["rows"][11]["length"], 364);
  EXPECT_EQ(by_name["source-volume"]["report"]["series"]["rows"][2]["length"], 7);
  EXPECT_EQ(by_name["source-volume"]["report"]["series"]["rows"][11]["length"], 203);
  EXPECT_EQ(by_name["rank"]["report"]["estimate"], "3");
  EXPECT_TRUE(by_name["rule"]["ok"].get<bool>());
  EXPECT_EQ(by_name["rule"]["report"]["transform"]["rule"]["conclusion"], "violates-rule");
}

TEST(ScenarioFiles, ShippedScenariosHaveTheirStatus) {
  const std::map<std::string, int> expected{
      {"colength_expect_8.yaml", 0},     {"colength_expect_9.yaml", 1},
      {"empty.yaml", 0},                 {"quadric_f_signature.yaml", 0},
      {"veronese_differential_signature.yaml", 0},
      {"hypothesis_audits.yaml", 0},     {"order_three_action.yaml", 0},
      {"veronese_example.yaml", 0},
  };
  for (const auto& [file, status] : expected) {
    auto rec = run_scenario(load_scenario(fs::path(NATMULT_SOURCE_DIR) / "scenarios" / file), {std::nullopt, false});
    EXPECT_EQ(rec.exit_status, status) << file;
  }
  EXPECT_EQ(read(fs::path(NATMULT_SOURCE_DIR) / "scenarios" / "veronese_example.yaml")
                .substr(read(fs::path(NATMULT_SOURCE_DIR) / "scenarios" / "veronese_example.yaml").find('\n') + 1),
            example_2_scenario(5, 6));
}
