#include "bergman/error.hpp"
#include "bergman/experiments.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace bergman;
using nlohmann::json;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig parse(const char* text) { return ExperimentConfig::from_json(json::parse(text)); }

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("config parsing and defaults") {
  const auto c = parse(R"({"experiment": "sharp", "n": 1, "seed": 9, "params": {"deltas": [0.5, 0.25], "directions": 4}})");
  CHECK_NOTHROW(c.validate());
  CHECK(c.seed == 9);
  CHECK(c.depth_or(12) == 12);
  CHECK(c.integer("directions", 16) == 4);
  CHECK(c.number("missing", 1.5) == 1.5);
  CHECK(c.numbers("deltas", {}) == std::vector<double>{0.5, 0.25});
  CHECK(ExperimentConfig::from_json(c.to_json()).to_json() == c.to_json());
  CHECK(c.resolution(1).angular == default_resolution(1).angular);
}

TEST_CASE("config validation rejects bad windows and fields") {
  CHECK_THROWS_AS(parse(R"({"experiment": "nope"})").validate(), ConfigError);
  CHECK_THROWS_AS(parse(R"({"experiment": "sharp", "n": 3})").validate(), ConfigError);
  CHECK_THROWS_AS(parse(R"({"experiment": "bound", "params": {"p": 1.0}})").validate(), ConfigError);
  // -a < b + 1 fails
  CHECK_THROWS_AS(parse(R"({"experiment": "bound", "params": {"p": 2, "a": -2, "b": 0}})").validate(), ConfigError);
  CHECK_THROWS_AS(parse(R"({"experiment": "window", "params": {"cases": [{"p": 2, "a": 0, "b": -1}]}})").validate(),
                  ConfigError);
  CHECK_THROWS_AS(parse(R"({"experiment": "sharp", "params": {"deltas": [0]}})").validate(), ConfigError);
  CHECK_THROWS_AS(parse(R"({"experiment": "sharp", "depth": 20})").validate(), ConfigError);
  CHECK_THROWS_AS(parse(R"({"experiment": "sharp", "params": []})"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::load("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("checks: relations and non-finite values") {
  ResultTable t("x", {"a"});
  CHECK(t.check("lt", 1.0, "<", 2.0).pass);
  CHECK_FALSE(t.check("le", 2.5, "<=", 2.0).pass);
  CHECK(t.check("in", 1.0, "in", 0.5, 1.5).pass);
  CHECK_FALSE(t.check("nan", std::nan(""), ">", 0.0).pass);
  CHECK_FALSE(t.passed());
  CHECK(t.find_check("in") != nullptr);
  CHECK_THROWS(t.check("bad", 1.0, "~", 0.0));
}

TEST_CASE("CSV quoting and JSON document") {
  ResultTable t("demo", {"name", "value", "ok"});
  t.add_row({"plain", 0.125, true});
  t.add_row({"with, comma \"q\"", 1e-20, false});
  CHECK_THROWS(t.add_row({"short"}));
  CHECK(t.csv() == "name,value,ok\nplain,0.125,true\n\"with, comma \"\"q\"\"\",1e-20,false\n");
  t.metadata()["n"] = 1;
  t.check("c", 1.0, ">=", 1.0);
  const json d = t.document();
  CHECK(d["experiment"] == "demo");
  CHECK(d["passed"] == true);
  CHECK(d["checks"].size() == 1);
  CHECK(format_number(1.0 / 3.0) == "0.3333333333");
}

TEST_CASE("fit_slope") {
  CHECK(fit_slope({0, 1, 2, 3}, {1, 3, 5, 7}) == doctest::Approx(2.0));
  CHECK_THROWS(fit_slope({1}, {1}));
}

TEST_CASE("experiment output is deterministic") {
  const auto cfg = parse(R"({"experiment": "sharp", "n": 1, "seed": 3,
                             "params": {"deltas": [1, 0.5, 0.25], "max_depth": 8, "directions": 4}})");
  const auto dir = std::filesystem::temp_directory_path() / "bergman_unit_determinism";
  std::filesystem::remove_all(dir);
  run_experiment(cfg).write(dir / "a");
  run_experiment(cfg).write(dir / "b");
  CHECK(slurp(dir / "a" / "sharp.csv") == slurp(dir / "b" / "sharp.csv"));
  CHECK(slurp(dir / "a" / "sharp.json") == slurp(dir / "b" / "sharp.json"));
  const json doc = json::parse(slurp(dir / "a" / "sharp.json"));
  CHECK(doc.contains("checks"));
  CHECK(doc["config"]["seed"] == 3);
  std::filesystem::remove_all(dir);
}

TEST_CASE("experiments refuse unsupported dimensions") {
  CHECK_THROWS_AS(run_experiment(parse(R"({"experiment": "window", "n": 2})")), ConfigError);
  CHECK_THROWS_AS(run_experiment(parse(R"({"experiment": "bound", "n": 2})")), ConfigError);
}

}
