#include <doctest.h>

#include "releq/report.hpp"

using namespace releq;
using nlohmann::ordered_json;

namespace {

ordered_json minimal_strata_config() {
  return ordered_json{
      {"algebra", "so(3)"},
      {"tasks", {{{"type", "strata"}, {"samples", 50}, {"seed", 7},
                  {"strategies", {"generic", "origin"}}}}}};
}

}  // namespace

TEST_CASE("config validation") {
  CHECK_NOTHROW(parse_config(minimal_strata_config()));

  // Unknown keys are errors, not warnings.
  ordered_json bad = minimal_strata_config();
  bad["taskss"] = ordered_json::array();
  CHECK_THROWS_AS(parse_config(bad), ConfigError);

  ordered_json bad_task = minimal_strata_config();
  bad_task["tasks"][0]["mulstart"] = 3;
  CHECK_THROWS_AS(parse_config(bad_task), ConfigError);

  // Randomized tasks need seeds.
  ordered_json no_seed = minimal_strata_config();
  no_seed["tasks"][0].erase("seed");
  CHECK_THROWS_AS(parse_config(no_seed), ConfigError);

  // Tolerances must be positive.
  ordered_json bad_tol = minimal_strata_config();
  bad_tol["tolerances"] = ordered_json{{"membership_residual", -1.0}};
  CHECK_THROWS_AS(parse_config(bad_tol), ConfigError);
  bad_tol["tolerances"] = ordered_json{{"pair", 1e-9}};
  CHECK_THROWS_AS(parse_config(bad_tol), ConfigError);

  // Tasks that need a system reject configs without one.
  ordered_json solve_no_system{
      {"tasks", {{{"type", "solve"}, {"seed", 1}}}}};
  CHECK_THROWS_AS(parse_config(solve_no_system), ConfigError);

  // Unknown strategies and presets.
  ordered_json bad_strategy = minimal_strata_config();
  bad_strategy["tasks"][0]["strategies"] = {"diffusion"};
  CHECK_THROWS_AS(parse_config(bad_strategy), ConfigError);
  ordered_json bad_preset{{"system", {{"preset", "pendulum"}}},
                          {"tasks", ordered_json::array()}};
  CHECK_THROWS_AS(parse_config(bad_preset), ConfigError);
}

TEST_CASE("empty task list echoes the configuration only") {
  RunConfig config = parse_config(ordered_json{{"algebra", "so(3)"}});
  RunResult result = run(config);
  CHECK(result.exit_code == 0);
  CHECK(result.report["tasks"].empty());
  CHECK(result.report["config"]["algebra"] == "so(3)");
  CHECK(result.report["schema_version"] == kSchemaVersion);
}

TEST_CASE("strata task reproduces the two so(3) strata") {
  RunConfig config = parse_config(minimal_strata_config());
  RunResult result = run(config);
  REQUIRE(result.exit_code == 0);
  const auto& strata = result.report["tasks"][0]["strata"];
  REQUIRE(strata.size() == 2);
  CHECK(strata[0]["fingerprint"]["dim_k"] == 1);
  CHECK(strata[0]["dim_stratum"] == 4);
  CHECK(strata[0]["dim_quotient"] == 1);
  CHECK(strata[1]["fingerprint"]["dim_k"] == 3);
  CHECK(strata[1]["dim_stratum"] == 0);
  CHECK(strata[1]["transversal_possible"] == false);
  CHECK(result.report["tasks"][0]["rank_law_violations"] == 0);
  CHECK(result.report["tasks"][0]["tangent_dimension_mismatches"] == 0);
  for (const auto& row : strata) {
    CHECK(row["local_model"]["disagreements"] == 0);
    CHECK(row["local_model"]["samples"] == 200);
  }
}

TEST_CASE("reports are byte-identical across reruns") {
  ordered_json doc{
      {"system", {{"preset", "rigid_body"}, {"inertia", {1.0, 2.0, 3.0}}}},
      {"tasks", {{{"type", "solve"}, {"multistart", 12}, {"seed", 5}},
                 {{"type", "analyze"}}}}};
  RunConfig config = parse_config(doc);
  const std::string a = run(config).report.dump();
  const std::string b = run(config).report.dump();
  CHECK(a == b);
}

TEST_CASE("solve plus analyze on the rigid body") {
  ordered_json doc{
      {"system", {{"preset", "rigid_body"}, {"inertia", {1.0, 2.0, 3.0}}}},
      {"tasks", {{{"type", "solve"}, {"multistart", 30}, {"seed", 1}},
                 {{"type", "analyze"}}}}};
  RunResult result = run(parse_config(doc));
  REQUIRE(result.exit_code == 0);
  const auto& solve = result.report["tasks"][0];
  CHECK(solve["converged"].get<int>() >= 27);
  // Exactly the three principal-axis classes.
  REQUIRE(solve["classes"].size() == 3);
  for (const auto& cls : solve["classes"]) {
    CHECK(cls["axis"].get<int>() >= 0);
    CHECK(cls["fingerprint"]["dim_k"] == 1);
  }
  const auto& records = result.report["tasks"][1]["records"];
  for (const auto& rec : records) {
    CHECK(rec["verdicts_agree"] == true);
    CHECK(rec["transversal_direct"]["verdict"] == true);
    CHECK(rec["tangent_dim"] == 4);
    CHECK(rec["manifold_dim"] == 4);
    CHECK(rec["dim_quotient"] == 1);
    CHECK(rec["symplectic"]["agree"] == true);
    CHECK(rec["singularity"]["label"] == "smooth point");
  }
}

TEST_CASE("analyze without solve is a task failure with partial report") {
  ordered_json doc{
      {"system", {{"preset", "rigid_body"}}},
      {"tasks", {{{"type", "analyze"}}}}};
  RunResult result = run(parse_config(doc));
  CHECK(result.exit_code == 1);
  CHECK(result.report["tasks"][0].contains("error"));
}

TEST_CASE("genericity task with zero scale reproduces the baseline") {
  ordered_json doc{
      {"system", {{"preset", "rigid_body"}}},
      {"tasks", {{{"type", "generic"}, {"trials", 5}, {"scale", 0.0},
                  {"seed", 11}, {"multistart", 8}}}}};
  RunResult result = run(parse_config(doc));
  REQUIRE(result.exit_code == 0);
  const auto& task = result.report["tasks"][0];
  CHECK(task["skipped"] == 0);
  for (const auto& f : task["fractions"]) CHECK(f.get<double>() == 1.0);
  CHECK(task["aggregate"].get<double>() == 1.0);
}

TEST_CASE("genericity task reports the origin-type verdict per trial") {
  ordered_json doc{
      {"system", {{"preset", "rigid_body_rotors"}}},
      {"tasks", {{{"type", "generic"}, {"trials", 4}, {"scale", 0.05},
                  {"seed", 21}, {"multistart", 6}}}}};
  RunResult result = run(parse_config(doc));
  REQUIRE(result.exit_code == 0);
  const auto& task = result.report["tasks"][0];
  REQUIRE(task["origin_transversal"].size() == 4);
  // Recorded, not asserted a priori: for the default coupled form the
  // origin family stays transversal under small perturbations.
  for (const auto& v : task["origin_transversal"]) CHECK(v.get<bool>());
  for (const auto& f : task["fractions"])
    if (!f.is_null()) CHECK(f.get<double>() >= 0.0);
}

TEST_CASE("rotor solve records the singular origin class") {
  ordered_json doc{
      {"system", {{"preset", "rigid_body_rotors"}}},
      {"tasks", {{{"type", "solve"}, {"multistart", 10}, {"seed", 2},
                  {"include_origin", true}},
                 {{"type", "analyze"}}}}};
  RunResult result = run(parse_config(doc));
  REQUIRE(result.exit_code == 0);
  bool found_origin = false;
  for (const auto& rec : result.report["tasks"][1]["records"]) {
    CHECK(rec["verdicts_agree"] == true);
    if (rec["fingerprint"]["dim_k"] == 6) {
      found_origin = true;
      CHECK(rec["singularity"]["label"] == "commuting pairs of so(3)");
      CHECK(rec["singularity"]["cone_dim"] == 4);
      CHECK(rec["dim_quotient"] == 0);
    }
  }
  CHECK(found_origin);
}

TEST_CASE("oversized perturbations are skipped and counted") {
  ordered_json doc{
      {"system", {{"preset", "rigid_body"}}},
      {"tasks", {{{"type", "generic"}, {"trials", 12}, {"scale", 40.0},
                  {"seed", 9}, {"multistart", 4}}}}};
  RunResult result = run(parse_config(doc));
  REQUIRE(result.exit_code == 0);
  const auto& task = result.report["tasks"][0];
  CHECK(task["skipped"].get<int>() > 0);
  CHECK(task["skipped"].get<int>() <= 12);
}

TEST_CASE("non-transversal equilibria serialize with null analysis fields") {
  ordered_json doc{
      {"system", {{"preset", "rigid_body"}}},
      {"tasks", {{{"type", "solve"}, {"multistart", 2}, {"seed", 6},
                  {"include_origin", true}},
                 {{"type", "analyze"}}}}};
  RunResult result = run(parse_config(doc));
  REQUIRE(result.exit_code == 0);
  bool saw_origin = false;
  for (const auto& rec : result.report["tasks"][1]["records"]) {
    if (rec["fingerprint"]["dim_k"] != 3) continue;
    saw_origin = true;
    CHECK(rec["transversal_direct"]["verdict"] == false);
    CHECK(rec["necessary_inequality"] == false);
    CHECK(rec["tangent_dim"].is_null());
    CHECK(rec["manifold_dim"].is_null());
    CHECK(rec["symplectic"].is_null());
    CHECK(rec["verdicts_agree"] == true);
  }
  CHECK(saw_origin);
}

TEST_CASE("cotangent_group systems are buildable from config") {
  ordered_json doc{
      {"system", {{"preset", "cotangent_group"}, {"algebra", "torus(1)"},
                  {"mass_matrix", {{1.0}}}}},
      {"tasks", {{{"type", "solve"}, {"multistart", 5}, {"seed", 3}}}}};
  RunResult result = run(parse_config(doc));
  CHECK(result.exit_code == 0);
  CHECK(result.report["tasks"][0]["converged"].get<int>() == 5);

  ordered_json bad = doc;
  bad["system"]["mass_matrix"] = {{-1.0}};
  CHECK_THROWS_AS(build_system(parse_config(bad).system.value()), ConfigError);
}
