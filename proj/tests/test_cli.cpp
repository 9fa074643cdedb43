#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "er2rel/cli.hpp"
#include "support/fixtures.hpp"

using er2rel::run_cli;
using nlohmann::ordered_json;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

CliRun run(const std::vector<std::string>& args, const std::string& stdin_text = "") {
  std::istringstream in(stdin_text);
  std::ostringstream out;
  std::ostringstream err;
  CliRun result;
  result.code = run_cli(args, in, out, err);
  result.out = out.str();
  result.err = err.str();
  return result;
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

/// Temp file that cleans up after itself.
struct ScratchFile {
  std::string path;
  explicit ScratchFile(const std::string& contents) {
    path = "er2rel_cli_test_input.er";
    std::ofstream file(path);
    file << contents;
  }
  ~ScratchFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("transform renders the worked example from stdin") {
  const CliRun r = run({"transform", "-"}, fixtures::one_to_one_source());
  CHECK(r.code == 0);
  CHECK(r.err.empty());
  CHECK(r.out == "E[Ke*, A1, A2, S_Ks→S.Ks?]\nS[Ks*, B1]\n");
}

TEST_CASE("transform reads a file path") {
  const ScratchFile file(fixtures::one_to_one_source());
  const CliRun r = run({"transform", file.path});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "E[Ke*"));
}

TEST_CASE("transform --format structured emits machine-readable JSON") {
  const CliRun r = run({"transform", "--format", "structured", "-"},
                       fixtures::one_to_one_source());
  REQUIRE(r.code == 0);
  const ordered_json doc = ordered_json::parse(r.out);
  REQUIRE(doc["relations"].size() == 2);
  CHECK(doc["relations"][0]["name"] == "E");
  CHECK(doc["relations"][0]["primary_key"][0] == "Ke");
  const auto& fk = doc["relations"][0]["foreign_keys"][0];
  CHECK(fk["column"] == "S_Ks");
  CHECK(fk["target_relation"] == "S");
  CHECK(fk["nullable"] == true);
  CHECK(doc["relationship_encodings"][0]["kind"] == "fk_in_relation");
  CHECK(doc["relationship_encodings"][0]["relation"] == "E");
}

TEST_CASE("parse diagnostics go to stderr with exit 1") {
  const CliRun r = run({"transform", "-"}, "entity E { key ; }\n");
  CHECK(r.code == 1);
  CHECK(r.out.empty());
  CHECK(contains(r.err, "<stdin>:1:"));
  CHECK(contains(r.err, "[syntax-error]"));
}

TEST_CASE("semantic diagnostics also exit 1") {
  const CliRun r = run({"analyze", "-"},
                       "entity E { key Ke; }\n"
                       "relationship R between E (min 0, max 1) and X (min 0, max 1);\n");
  CHECK(r.code == 1);
  CHECK(contains(r.err, "[unknown-entity]"));
}

TEST_CASE("missing input file exits 1") {
  const CliRun r = run({"transform", "no_such_file.er"});
  CHECK(r.code == 1);
  CHECK(contains(r.err, "cannot open"));
}

TEST_CASE("usage errors exit 1") {
  CHECK(run({}).code == 1);                                    // subcommand required
  CHECK(run({"transform", "--bogus"}).code == 1);              // unknown flag
  CHECK(run({"transform", "--format", "yaml"}).code == 1);     // bad enum
  CHECK(run({"verify", "--pool-size", "9", "-"}).code == 1);   // out of range
  CHECK(run({"verify", "--max-samples", "x", "-"}, fixtures::one_to_one_source()).code == 1);
  CHECK(run({"verify", "--max-samples", "1", "-"}, fixtures::one_to_one_source()).code == 1);
}

TEST_CASE("help prints usage and exits 0") {
  const CliRun top = run({"--help"});
  CHECK(top.code == 0);
  CHECK(contains(top.out, "transform"));
  CHECK(contains(top.out, "verify"));
  const CliRun sub = run({"verify", "--help"});
  CHECK(sub.code == 0);
  CHECK(contains(sub.out, "--pool-size"));
  CHECK(contains(sub.out, "--max-samples"));
}

TEST_CASE("analyze paper report covers the junction example") {
  const CliRun r = run({"analyze", "-"}, fixtures::many_to_many_source());
  REQUIRE(r.code == 0);
  CHECK(contains(r.out, "schema:\n"));
  CHECK(contains(r.out, "R[E_Ke*→E.Ke, S_Ks*→S.Ks]"));
  CHECK(contains(r.out, "R: many-to-many, encoded by junction relation R"));
  CHECK(contains(r.out, "left max = N: lower bound only, exceeds 1 (Case3Max)"));
  CHECK(contains(r.out, "right min = 0: not represented (Case3Min)"));
  CHECK(contains(r.out, "summary: 1 relationship, 0 exact, 2 lower bound only, 2 not represented"));
}

TEST_CASE("analyze paper report names the FK holder") {
  const CliRun r = run({"analyze", "-"}, fixtures::one_to_one_source());
  REQUIRE(r.code == 0);
  CHECK(contains(r.out, "R: one-to-one, encoded by foreign key S_Ks in E (total participation)"));
  CHECK(contains(r.out, "left max = 1: exact, value 1 (Case1A)"));
  CHECK(contains(r.out, "summary: 1 relationship, 1 exact, 0 lower bound only, 3 not represented"));
}

TEST_CASE("analyze --format structured") {
  const CliRun r = run({"analyze", "--format", "structured", "-"},
                       fixtures::many_to_many_source());
  REQUIRE(r.code == 0);
  const ordered_json doc = ordered_json::parse(r.out);
  const auto& rel = doc["relationships"][0];
  CHECK(rel["name"] == "R");
  CHECK(rel["classification"]["kind"] == "many-to-many");
  CHECK(rel["encoding"]["kind"] == "junction_relation");
  CHECK(rel["placement"].is_null());
  REQUIRE(rel["slots"].size() == 4);
  CHECK(rel["slots"][0]["slot"] == "left_min");
  CHECK(rel["slots"][0]["kind"] == "not_represented");
  CHECK(rel["slots"][0]["bound"].is_null());
  CHECK(rel["slots"][1]["declared"] == "N");
  CHECK(rel["slots"][1]["kind"] == "lower_bound_only");
  CHECK(rel["slots"][1]["bound"] == 1);
  CHECK(doc["summary"]["lower_bound_only"] == 2);
}

TEST_CASE("verify agrees end to end on the worked example") {
  const CliRun r = run({"verify", "--oracle", "both", "-"}, fixtures::one_to_one_source());
  CHECK(r.code == 0);
  CHECK(contains(r.out, "family: 76 members, 3 schema classes (sizes 21 19 36)"));
  CHECK(contains(r.out, "input falls in class 1 (21 members)"));
  CHECK(contains(r.out, "instances: 38 enumerated, 31 populated (pool size 2)"));
  CHECK(contains(r.out, "rule says exact, value 1; inverse image says exact, value 1 [agree]; "
                        "instances say exact, value 1 [agree]"));
  CHECK(contains(r.out, "overall: AGREE"));
}

TEST_CASE("verify can run a single oracle") {
  const CliRun inv = run({"verify", "--oracle", "inverse-image", "-"},
                         fixtures::many_to_many_source());
  CHECK(inv.code == 0);
  CHECK(contains(inv.out, "family:"));
  CHECK_FALSE(contains(inv.out, "instances:"));

  const CliRun ins = run({"verify", "--oracle", "instances", "-"},
                         fixtures::many_to_many_source());
  CHECK(ins.code == 0);
  CHECK_FALSE(contains(ins.out, "family:"));
  CHECK(contains(ins.out, "instances: 47 enumerated, 40 populated"));
}

TEST_CASE("verify exits 2 and prints witnesses on disagreement") {
  const CliRun r = run({"verify", "--pool-size", "1", "-"}, fixtures::one_to_one_source());
  CHECK(r.code == 2);
  CHECK(contains(r.out, "instances say exact, value 1 [DISAGREE]"));
  CHECK(contains(r.out, "instance witness:"));
  CHECK(contains(r.out, "agreement: NO"));
  CHECK(contains(r.out, "overall: DISAGREE"));

  const CliRun s = run({"verify", "--max-samples", "2", "-"}, fixtures::many_to_many_source());
  CHECK(s.code == 2);
  CHECK(contains(s.out, "family check failed:"));
  CHECK(contains(s.out, "inverse image says exact, value 2 [DISAGREE]"));
}

TEST_CASE("verify --format structured reports agreement flags") {
  const CliRun r = run({"verify", "--format", "structured", "-"},
                       fixtures::one_to_one_source());
  REQUIRE(r.code == 0);
  const ordered_json doc = ordered_json::parse(r.out);
  CHECK(doc["agrees"] == true);
  const auto& rel = doc["relationships"][0];
  CHECK(rel["family_size"] == 76);
  CHECK(rel["class_sizes"] == ordered_json({21, 19, 36}));
  CHECK(rel["input_class"] == 0);
  CHECK(rel["family_coherent"] == true);
  CHECK(rel["total_instances"] == 38);
  CHECK(rel["slots"][1]["analyzer"]["kind"] == "exact");
  CHECK(rel["slots"][1]["inverse_image"]["kind"] == "exact");
  CHECK(rel["slots"][1]["instances_agree"] == true);
}

TEST_CASE("multi-relationship input verifies every relationship") {
  const std::string source =
      "entity E { key Ke; attr A1; attr A2; }\n"
      "entity S { key Ks; attr B1; }\n"
      "entity T { key Kt; }\n"
      "relationship R between E (min 1, max 1) and S (min 0, max 1);\n"
      "relationship Q between S (min 0, max N) and T (min 1, max N);\n";
  const CliRun r = run({"verify", "-"}, source);
  CHECK(r.code == 0);
  CHECK(contains(r.out, "R: one-to-one"));
  CHECK(contains(r.out, "Q: many-to-many"));
  CHECK(contains(r.out, "overall: AGREE"));
}

}  // TEST_SUITE
