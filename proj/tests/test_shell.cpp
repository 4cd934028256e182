#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "jlm/shell/corpus.hpp"

using namespace jlm;

namespace {

std::string schema_pointer(const json& j) {
  try {
    problem_from_json(j);
  } catch (const SchemaError& e) {
    return e.pointer();
  }
  return "(accepted)";
}

json oscillator() {
  return json::parse(R"({
    "schema": 1, "name": "oscillator",
    "parameters": [{"name": "w", "value": 2.0}],
    "ode": {"F": "-w^2*x"},
    "expected": {
      "multipliers": ["1"],
      "lagrangians": [{"label": "L", "expr": "xdot^2/2 - w^2*x^2/2"}],
      "integrals": [{"label": "E", "expr": "xdot^2 + w^2*x^2"}]
    },
    "numeric": {"ic": [0, 1, 0], "t_end": 1, "h": 0.001}
  })");
}

std::filesystem::path temp_dir(const std::string& name) {
  auto d = std::filesystem::temp_directory_path() / ("jlm_test_" + name);
  std::filesystem::remove_all(d);
  std::filesystem::create_directories(d);
  return d;
}

int run_cli(const std::string& args) {
  int rc = std::system((std::string(JLM_CLI) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST(Schema, ReadsGoldensAndScenario) {
  Problem p = problem_from_json(oscillator());
  EXPECT_EQ(p.name, "oscillator");
  ASSERT_EQ(p.multipliers.size(), 1u);
  EXPECT_EQ(p.multipliers[0].label, "M1");
  ASSERT_TRUE(p.numeric);
  EXPECT_EQ(p.numeric->params.at("w"), 2.0L);
}

TEST(Schema, LienardPairBuildsF) {
  json j = {{"schema", 1}, {"name", "l"}, {"ode", {{"f", "3*x"}, {"g", "x^3"}}}};
  Problem p = problem_from_json(j);
  EXPECT_TRUE(is_zero(p.ode.F - parse("-3*x*xdot - x^3")).zero());
}

TEST(Schema, ErrorsPointAtTheOffendingField) {
  json j = oscillator();
  j["schema"] = 2;
  EXPECT_EQ(schema_pointer(j), "/schema");

  j = oscillator();
  j["ode"] = {{"F", "-x"}, {"f", "x"}, {"g", "x"}};
  EXPECT_EQ(schema_pointer(j), "/ode");

  j = oscillator();
  j["expected"]["integrals"][0]["expr"] = "x + y";
  EXPECT_EQ(schema_pointer(j), "/expected/integrals/0/expr");

  j = oscillator();
  j["bogus"] = 1;
  EXPECT_EQ(schema_pointer(j), "/bogus");

  j = oscillator();
  j["numeric"]["ic"] = {0, 1};
  EXPECT_EQ(schema_pointer(j), "/numeric/ic");

  j = oscillator();
  j["parameters"][0].erase("value");
  EXPECT_EQ(schema_pointer(j), "/numeric/params");
}

TEST(Derive, OscillatorReportPasses) {
  json r = derive(problem_from_json(oscillator()));
  EXPECT_EQ(r["summary"]["status"], "pass") << r["summary"].dump(2);
  EXPECT_TRUE(r["summary"]["failures"].empty());
  EXPECT_EQ(r, derive(problem_from_json(oscillator()))) << "reports must be deterministic";
}

TEST(Derive, WrongGoldenFails) {
  json j = oscillator();
  j["expected"]["integrals"][0]["expr"] = "xdot^2 + x^2";
  json r = derive(problem_from_json(j));
  EXPECT_EQ(r["summary"]["status"], "fail");
  EXPECT_FALSE(r["summary"]["failures"].empty());
}

TEST(Verify, GoldensOnly) {
  json r = verify_goldens(problem_from_json(oscillator()));
  EXPECT_EQ(r["status"], "pass");
  EXPECT_EQ(r["checks"].size(), 3u);
}

TEST(Numcheck, DriftTableForExpectedIntegrals) {
  json r = numcheck(problem_from_json(oscillator()));
  EXPECT_EQ(r["status"], "pass") << r.dump(2);
  ASSERT_EQ(r["drift"].size(), 1u);
  EXPECT_TRUE(r["drift"][0]["pass"].get<bool>());
}

TEST(Corpus, EmptyDirectoryExitsTwo) {
  auto d = temp_dir("empty");
  EXPECT_EQ(run_corpus(d).exit_code, 2);
}

TEST(Corpus, FailingProblemIsListed) {
  auto d = temp_dir("mixed");
  write_json(d / "a_ok.json", oscillator());
  json bad = oscillator();
  bad["name"] = "bad";
  bad["expected"]["lagrangians"][0]["expr"] = "xdot^2/2";
  write_json(d / "b_bad.json", bad);
  std::ofstream(d / "c_broken.json") << "{ not json";
  auto res = run_corpus(d, d / "out");
  EXPECT_EQ(res.exit_code, 1);
  EXPECT_EQ(res.summary["failing"], json::array({"b_bad.json", "c_broken.json"}));
  EXPECT_TRUE(std::filesystem::exists(d / "out" / "summary.json"));
  EXPECT_TRUE(std::filesystem::exists(d / "out" / "a_ok.report.json"));
}

TEST(Corpus, ShippedCorpusPasses) {
  auto res = run_corpus(JLM_CORPUS_DIR);
  EXPECT_EQ(res.exit_code, 0) << res.summary.dump(2);
  EXPECT_EQ(res.summary["problems"], 5);
}

TEST(Cli, ExitCodes) {
  auto d = temp_dir("cli");
  write_json(d / "ok.json", oscillator());
  json bad = oscillator();
  bad["expected"]["integrals"][0]["expr"] = "x";
  write_json(d / "bad.json", bad);
  std::ofstream(d / "broken.json") << R"({"schema": 1})";
  EXPECT_EQ(run_cli("verify " + (d / "ok.json").string()), 0);
  EXPECT_EQ(run_cli("numcheck " + (d / "ok.json").string()), 0);
  EXPECT_EQ(run_cli("derive " + (d / "ok.json").string() + " --out " + (d / "r.json").string()), 0);
  EXPECT_TRUE(std::filesystem::exists(d / "r.json"));
  EXPECT_EQ(run_cli("verify " + (d / "bad.json").string()), 1);
  EXPECT_EQ(run_cli("derive " + (d / "broken.json").string()), 2);
  EXPECT_EQ(run_cli("derive " + (d / "missing.json").string()), 2);
  EXPECT_EQ(run_cli("frobnicate"), 2);
  EXPECT_EQ(run_cli("corpus --dir " + temp_dir("cli_empty").string()), 2);
}
