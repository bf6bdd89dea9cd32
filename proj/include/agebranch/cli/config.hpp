#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "agebranch/model/model_spec.hpp"
#include "agebranch/model/test_function.hpp"

namespace agebranch::cli {

// One entry of run.checks. Unset fields fall back to the run block (sigma,
// f, t, R) or to the model (alpha, law).
struct CheckConfig {
  std::string kind;
  std::string label;
  std::optional<std::vector<double>> sigma;
  std::optional<model::TestFunction> f;
  std::optional<double> t;
  std::optional<std::uint64_t> R;
  std::optional<double> h;
  std::optional<double> tail_tol;
  std::optional<double> min_decay;
  std::optional<double> band;
  std::optional<model::ScalarField> alpha;
  std::optional<std::vector<double>> lifetimes;
  std::optional<model::LifespanLaw> law;
  std::optional<double> x;
  std::optional<double> rate;
  std::optional<std::uint64_t> n;
};

struct GridConfig {
  double h = 1e-3;
  double T = 1.0;
};

struct RunConfig {
  std::vector<double> sigma;
  model::TestFunction f = model::TestFunction::constant(1.0);
  double t = 1.0;
  std::uint64_t R = 1000;
  std::uint64_t seed = 1;
  double sigma_threshold = 4.0;
  double alpha_level = 1e-3;
  // Abscissae where `constants` tabulates the limit fields.
  std::vector<double> x = {0.5, 1.0, 2.0, 5.0};
  std::vector<CheckConfig> checks;
};

struct OutputConfig {
  std::string directory = "out";
  std::uint64_t stride = 1;
};

struct ExperimentConfig {
  model::ModelSpec model;
  GridConfig grid;
  RunConfig run;
  OutputConfig output;
};

// Throws Error(Config) naming the offending path, e.g. "model.lifespan:
// missing". Unknown keys are rejected.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);
// Canonical form; parse_config(to_json(c)) reproduces c.
nlohmann::json to_json(const ExperimentConfig& c);

// Text for --help describing every key.
std::string config_reference();

}  // namespace agebranch::cli
