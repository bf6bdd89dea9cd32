#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "agebranch/cli/commands.hpp"
#include "agebranch/cli/config.hpp"
#include "agebranch/error.hpp"

using namespace agebranch;
using nlohmann::json;

namespace {

json base() {
  return json::parse(R"({
    "model": {
      "alpha": 1.5,
      "offspring": {"type": "zero_two", "p2": 0.25},
      "lifespan": {"type": "exponential", "rate": 1.0},
      "immigration": {"rate": 0.3,
                      "cluster": {"type": "singleton",
                                  "lifespan": {"type": "exponential", "rate": 1.0}}}
    }
  })");
}

std::string error_of(const json& doc) {
  try {
    cli::parse_config(doc);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Config);
    return e.what();
  }
  return "";
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config round-trips through the parser") {
  json doc = base();
  doc["model"]["alpha"] = {{"type", "piecewise_linear"}, {"knots", {{0.5, 1.0}, {2.0, 0.2}}}};
  doc["model"]["offspring"] = {{"type", "table"}, {"probabilities", {0.3, 0.4, 0.3}}};
  doc["model"]["immigration"]["cluster"] = {
      {"type", "iid"},
      {"size_probabilities", {0.5, 0.5}},
      {"lifespan", {{"type", "gamma"}, {"shape", 2.0}, {"scale", 0.5}}}};
  doc["grid"] = {{"h", 0.01}, {"T", 3}};
  doc["run"] = json::parse(R"({
    "sigma": [0.5, 1.5], "f": {"thresholds": [1], "values": [2, 0]}, "t": 2, "R": 500,
    "seed": 9, "checks": [
      {"check": "laplace", "label": "lap", "h": 0.01},
      {"check": "selection", "lifetimes": [1, 2], "alpha": 2},
      {"check": "lifespan_sampler", "law": {"type": "uniform", "lo": 0.5, "hi": 2}},
      {"check": "thinning", "rate": 2, "n": 3}
    ]})");
  doc["output"] = {{"directory", "x"}, {"stride", 5}};
  const auto c = cli::parse_config(doc);
  const json once = cli::to_json(c);
  const json twice = cli::to_json(cli::parse_config(once));
  CHECK(once == twice);
  CHECK(c.run.checks.size() == 4);
  CHECK(c.run.checks[1].label == "selection");
  CHECK(c.output.stride == 5);
}

TEST_CASE("config errors name the offending path") {
  json doc = base();
  doc["model"].erase("lifespan");
  CHECK(error_of(doc).find("model.lifespan") != std::string::npos);

  doc = base();
  doc["run"] = {{"colour", 1}};
  CHECK(error_of(doc).find("run.colour: unknown key") != std::string::npos);

  doc = base();
  doc["model"]["lifespan"] = {{"type", "exponential"}, {"rate", -1.0}};
  CHECK(error_of(doc).find("model.lifespan.rate") != std::string::npos);

  doc = base();
  doc["model"]["offspring"]["p2"] = 1.5;
  CHECK(error_of(doc).find("model.offspring") != std::string::npos);

  doc = base();
  doc["run"] = json::parse(R"({"checks": [{"check": "laplace"}, {"check": "laplace"}]})");
  CHECK(error_of(doc).find("run.checks[1].label") != std::string::npos);

  doc = base();
  doc["run"] = json::parse(R"({"checks": [{"check": "lln", "band": 0.2}]})");
  CHECK(error_of(doc).find("run.checks[0].band") != std::string::npos);

  doc = base();
  doc["run"] = json::parse(R"({"R": -3})");
  CHECK(error_of(doc).find("run.R") != std::string::npos);
}

TEST_CASE("zero test function gives trivial passing reports and identical files") {
  json doc = base();
  doc["run"] = json::parse(R"({"f": 0, "sigma": [1], "t": 1, "R": 100, "checks": [
      {"check": "laplace"}, {"check": "occupation_transform"},
      {"check": "ergodic", "t": 30}, {"check": "clt", "t": 5}]})");
  doc["grid"] = {{"h", 0.01}};
  const auto c = cli::parse_config(doc);
  const auto outcomes = cli::run_checks(c, 2);
  for (const auto& o : outcomes)
    for (const auto& r : o.reports) CHECK(r.pass);

  const auto dir = std::filesystem::temp_directory_path() / "agebranch_cli_test";
  std::filesystem::remove_all(dir);
  cli::write_reports(outcomes, dir / "a");
  cli::write_reports(cli::run_checks(c, 1), dir / "b");
  for (const auto& e : std::filesystem::directory_iterator(dir / "a"))
    CHECK(slurp(e.path()) == slurp(dir / "b" / e.path().filename()));
  CHECK(std::filesystem::exists(dir / "a" / "reports.json"));
  CHECK(std::filesystem::exists(dir / "a" / "ergodic_stationarity_ks.csv"));
  std::filesystem::remove_all(dir);
}
