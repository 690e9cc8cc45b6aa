#include <catch2/catch_amalgamated.hpp>

#include "isolink/config.hpp"
#include "isolink/records.hpp"
#include "isolink/zoo.hpp"

using namespace isolink;

TEST_CASE("config parsing validates keys and ranges") {
  auto ok = parse_config(nlohmann::json::parse(R"({"zoo":"Shear","seed":7,"tol":1e-4})"));
  CHECK(ok.zoo_name == "Shear");
  CHECK(ok.seed == 7);
  CHECK(ok.seed_given);
  CHECK(ok.tol == 1e-4);

  CHECK_THROWS_AS(parse_config(nlohmann::json::parse(R"({"zoot":"Shear"})")), error);
  CHECK_THROWS_AS(parse_config(nlohmann::json::parse(R"({"tol":-1})")), error);
  CHECK_THROWS_AS(parse_config(nlohmann::json::parse(R"({"estimator":"magic"})")), error);
  CHECK_THROWS_AS(parse_config(nlohmann::json::parse(R"([1,2,3])")), error);
}

TEST_CASE("point resolution by name or coordinates") {
  auto sh = zoo_shear();
  CHECK(resolve_point("a0", sh.named_points) == Vec2{0.0, 0.5});
  CHECK(resolve_point("0.25,0.75", sh.named_points) == Vec2{0.25, 0.75});
  CHECK_THROWS_AS(resolve_point("nonsense", sh.named_points), error);
}

TEST_CASE("record serialization is stable and carries provenance") {
  ResultRecord r;
  r.op = "triple_linking_fixed";
  r.inputs = digest("shear a0 a3 z");
  r.values = {3.0};
  r.set_expectation(3.0, "PAPER: shear vertical drift", 0.0);
  REQUIRE(r.pass.has_value());
  CHECK(*r.pass);
  CHECK(r.tolerance.has_value());  // expected implies tolerance

  std::string line1 = to_record_line(r);
  std::string line2 = to_record_line(r);
  CHECK(line1 == line2);
  auto parsed = nlohmann::json::parse(line1);
  CHECK(parsed["schema_version"] == kSchemaVersion);
  CHECK(parsed["op"] == "triple_linking_fixed");
  CHECK(parsed["expected"] == 3.0);
  CHECK(parsed["provenance"] == "PAPER: shear vertical drift");

  // failing expectation flips the flag
  ResultRecord bad = r;
  bad.values = {2.0};
  bad.set_expectation(3.0, "PAPER: shear vertical drift", 0.5);
  CHECK_FALSE(*bad.pass);
}

TEST_CASE("csv and table outputs") {
  ResultRecord r;
  r.op = "kac_check";
  r.inputs = digest("x");
  r.values = {0.3};
  r.stderr_ = 0.001;
  CHECK(to_csv_header().rfind("op,", 0) == 0);
  auto line = to_csv_line(r);
  CHECK(line.find("kac_check") != std::string::npos);
  auto table = to_table({r});
  CHECK(table.find("kac_check") != std::string::npos);
}

TEST_CASE("digests are deterministic and input-sensitive") {
  CHECK(digest("abc") == digest("abc"));
  CHECK(digest("abc") != digest("abd"));
  CHECK(digest("abc").size() == 16);
}

TEST_CASE("zoo listing names the five entries") {
  auto names = zoo_names();
  REQUIRE(names.size() == 5);
  CHECK(names[0] == "Shear");
  CHECK(names[1] == "CosineFlow");
  CHECK(names[2] == "RadialFast");
  CHECK(names[3] == "BumpAnnuli");
  CHECK(names[4] == "HamiltonianPendulum");
  for (const auto& n : names) CHECK_NOTHROW(zoo(n, ZooParams{4, 1e-2}));
}
