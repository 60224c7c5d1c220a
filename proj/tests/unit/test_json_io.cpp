#include <doctest.h>

#include <fstream>
#include <sstream>

#include "ringlab/json_io.hpp"
#include "ringlab/mc.hpp"

using namespace ringlab;
using jordan::BasisSpec;
using jordan::JordanSpec;
using json_io::json;

TEST_SUITE("io") {

TEST_CASE("profile JSON round-trip") {
  for (const auto& profile :
       {profiles::SingularProfile{profiles::Uniform{0.5, 4.0}},
        profiles::SingularProfile{profiles::QuarterCircle{}},
        profiles::SingularProfile{profiles::PointMass{2.0}},
        profiles::SingularProfile{profiles::ExplicitList{{1.0, 2.0, 3.0}}}}) {
    const auto j = json_io::to_json(profile);
    const auto back = json_io::profile_from_json(j);
    CHECK(json_io::to_json(back) == j);
  }
  CHECK_THROWS(json_io::profile_from_json(json{{"kind", "cauchy"}}));
}

TEST_CASE("jordan spec JSON round-trip") {
  const JordanSpec spec({{Complex{4, 1}, {{3, 1}, {1, 1}}}, {Complex{-2, 0}, {{2, 2}}}});
  const auto j = json_io::to_json(spec);
  const auto back = json_io::spec_from_json(j);
  CHECK(json_io::to_json(back) == j);
  CHECK(back.r() == spec.r());
}

TEST_CASE("basis JSON: identity keyword and explicit matrix") {
  const auto identity = json_io::basis_from_json(json("identity"), 3);
  CHECK(identity.q() == ComplexMatrix::Identity(3, 3));

  ComplexMatrix q(2, 2);
  q << Complex{1, 0}, Complex{0.5, 0.25}, Complex{0, -1}, Complex{2, 0};
  const auto j = json_io::basis_to_json(BasisSpec(q));
  const auto back = json_io::basis_from_json(j, 2);
  CHECK((back.q() - q).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS(json_io::basis_from_json(j, 3));
}

TEST_CASE("experiment config JSON round-trip") {
  const json j{{"profile", {{"kind", "uniform"}, {"lo", 0.5}, {"hi", 4.0}}},
               {"spec", {{"groups", json::array({{{"theta", {4.0, 1.0}}, {"blocks", {{1, 1}}}}})}}},
               {"q", "identity"},
               {"n", 500},
               {"trials", 4},
               {"base_seed", 99},
               {"outputs", {{"summary", "/tmp/out.json"}}}};
  const auto config = json_io::config_from_json(j);
  CHECK(config.n == 500);
  CHECK(config.trials == 4);
  CHECK(config.base_seed == 99);
  REQUIRE(config.profile.has_value());
  CHECK(config.outputs.summary_json == "/tmp/out.json");
  const auto j2 = json_io::to_json(config);
  CHECK(j2.at("n") == 500);
  CHECK(j2.at("spec") == j.at("spec"));

  json bad = j;
  bad.erase("profile");
  CHECK_THROWS(json_io::config_from_json(bad));
  bad["ginibre"] = true;
  CHECK_NOTHROW(json_io::config_from_json(bad));
}

TEST_CASE("summary JSON validates against the shipped schema") {
  mc::ExperimentConfig config{
      .profile = std::nullopt,
      .form = randmat::Form::UT,
      .spec = JordanSpec({{Complex{2, 0}, {{1, 1}}}, {Complex{0, -2.5}, {{1, 1}}}}),
      .q = BasisSpec::identity(2),
      .n = 120,
      .trials = 4,
      .base_seed = 3,
      .epsilon = std::nullopt,
      .delta = std::nullopt,
      .outputs = {},
      .jobs = 0,
  };
  const auto stats = mc::run_experiment(config);
  const auto j = json_io::to_json(stats);

  std::ifstream schema_file(std::string(RINGLAB_SOURCE_DIR) + "/schemas/summary.schema.json");
  REQUIRE(schema_file.good());
  json schema;
  schema_file >> schema;
  CHECK_NOTHROW(json_io::validate_schema(j, schema));
}

TEST_CASE("config JSON validates against the shipped schema") {
  const json j{{"ginibre", true},
               {"spec", {{"groups", json::array({{{"theta", {2.0, 0.0}}, {"blocks", {{1, 1}}}}})}}},
               {"q", "identity"},
               {"n", 100},
               {"trials", 2}};
  std::ifstream schema_file(std::string(RINGLAB_SOURCE_DIR) + "/schemas/experiment_config.schema.json");
  REQUIRE(schema_file.good());
  json schema;
  schema_file >> schema;
  CHECK_NOTHROW(json_io::validate_schema(j, schema));
}

TEST_CASE("scaling JSON validates against the shipped schema") {
  mc::ScalingResult result;
  result.n_values = {100, 200, 400};
  mc::RateClassSlope slope;
  slope.group = 0;
  slope.rate_class = 1;
  slope.p = 2;
  slope.slope = -0.25;
  slope.slope_stderr = 0.01;
  slope.medians = {0.3, 0.25, 0.21};
  result.classes.push_back(slope);
  const auto j = json_io::to_json(result);

  std::ifstream schema_file(std::string(RINGLAB_SOURCE_DIR) + "/schemas/scaling.schema.json");
  REQUIRE(schema_file.good());
  json schema;
  schema_file >> schema;
  CHECK_NOTHROW(json_io::validate_schema(j, schema));
}

TEST_CASE("schema validator rejects structural mistakes") {
  const json schema{{"type", "object"},
                    {"required", {"n"}},
                    {"properties", {{"n", {{"type", "integer"}, {"minimum", 1}}}}}};
  CHECK_NOTHROW(json_io::validate_schema(json{{"n", 5}}, schema));
  CHECK_THROWS(json_io::validate_schema(json{{"m", 5}}, schema));
  CHECK_THROWS(json_io::validate_schema(json{{"n", "five"}}, schema));
  CHECK_THROWS(json_io::validate_schema(json{{"n", 0}}, schema));
}

}  // TEST_SUITE
