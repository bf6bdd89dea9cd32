#include "agebranch/cli/commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <thread>

#include "agebranch/error.hpp"
#include "agebranch/format.hpp"
#include "agebranch/renewal/asymptotics.hpp"
#include "agebranch/renewal/kernel.hpp"
#include "agebranch/renewal/solvers.hpp"
#include "agebranch/simulate/path.hpp"
#include "agebranch/simulate/simulator.hpp"
#include "agebranch/verify/checks.hpp"
#include "agebranch/verify/runner.hpp"

namespace agebranch::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::ofstream open_out(const fs::path& p) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw Error(ErrorCode::Config, "cannot write '" + p.string() + "'");
  return os;
}

void write_json(const fs::path& p, const ordered_json& j) {
  auto os = open_out(p);
  os << j.dump(2) << '\n';
}

}  // namespace

void run_constants(const ExperimentConfig& c, const fs::path& out) {
  const auto k = renewal::asymptotics(c.model, c.run.f);
  ordered_json j;
  j["rho1"] = k.rho1;
  j["alpha1"] = k.alpha1;
  j["b"] = k.b;
  j["a1"] = k.a1;
  j["a2"] = k.a2;
  j["lln_constant"] = k.lln_constant;
  j["clt_variance"] = k.clt_variance;
  j["truncation_error"] = k.truncation_error;
  j["Q_inf"] = k.Q_inf;
  j["P1"] = k.P1;
  j["P2"] = k.P2;
  fs::create_directories(out);
  write_json(out / "constants.json", j);
  auto os = open_out(out / "fields.csv");
  os << "x,Pi_inf,Gamma_inf\n";
  for (double x : c.run.x)
    os << fmt17(x) << ',' << fmt17(k.Pi_inf(x)) << ',' << fmt17(k.Gamma_inf(x)) << '\n';
}

void run_solve(const ExperimentConfig& c, const fs::path& out) {
  const auto grid = renewal::TimeGrid::make(c.grid.h, c.grid.T);
  const auto& f = c.run.f;
  const auto u = renewal::solve_u(c.model, f, grid);
  const auto pi = renewal::solve_pi(c.model, f, grid, false);
  const auto occ = renewal::solve_occupation(c.model, f, grid);
  const auto v = renewal::solve_v(c.model, f, std::nullopt, grid);
  fs::create_directories(out);
  auto os = open_out(out / "solve.csv");
  os << "t,h_t,q_t,Pi_t,Gamma_t,v_t\n";
  for (std::size_t n = 0; n <= grid.n; ++n) {
    if (n % c.output.stride != 0 && n != grid.n) continue;
    os << fmt17(grid.t(n)) << ',' << fmt17(u.samples[n]) << ',' << fmt17(pi.samples[n]) << ','
       << fmt17(occ.Pi.samples[n]) << ',' << fmt17(occ.Gamma.samples[n]) << ','
       << fmt17(v.samples[n]) << '\n';
  }
}

void run_simulate(const ExperimentConfig& c, const fs::path& out, unsigned threads) {
  const double t = c.run.t;
  auto paths = verify::run_replicates<simulate::PathRecord>(
      c.run.R, threads,
      [&](std::size_t r) { return simulate::simulate(c.model, c.run.sigma, t, c.run.seed, r); });
  fs::create_directories(out);
  auto os = open_out(out / "paths.csv");
  simulate::write_path_csv_header(os);
  for (std::size_t r = 0; r < paths.size(); ++r) simulate::write_path_csv(os, r, paths[r]);
  auto sum = open_out(out / "summary.csv");
  sum << "replicate,population,state_f,occupation_f\n";
  for (std::size_t r = 0; r < paths.size(); ++r) {
    sum << r << ',' << simulate::population_size(paths[r], t) << ','
        << fmt17(simulate::snapshot(paths[r], t, c.run.f)) << ','
        << fmt17(simulate::occupation(paths[r], c.run.f)) << '\n';
  }
}

std::vector<CheckOutcome> run_checks(const ExperimentConfig& c, unsigned threads) {
  std::vector<CheckOutcome> out;
  for (const auto& k : c.run.checks) {
    verify::CheckOptions opt;
    opt.seed = c.run.seed;
    opt.threads = threads;
    opt.sigma_threshold = c.run.sigma_threshold;
    opt.alpha_level = c.run.alpha_level;
    opt.h = k.h.value_or(c.grid.h);
    const auto sigma = k.sigma.value_or(c.run.sigma);
    const auto f = k.f.value_or(c.run.f);
    const double t = k.t.value_or(c.run.t);
    const std::size_t R = k.R.value_or(c.run.R);
    CheckOutcome o{k.label, {}};
    if (k.kind == "laplace") {
      o.reports = {verify::check_laplace(c.model, sigma, f, t, R, opt)};
    } else if (k.kind == "moments") {
      o.reports = verify::check_moments(c.model, sigma, f, t, R, opt);
    } else if (k.kind == "occupation_transform") {
      o.reports = {verify::check_occupation_transform(c.model, sigma, f, t, R, opt)};
    } else if (k.kind == "ergodic") {
      o.reports = verify::check_ergodic(c.model, f, t, R, opt, k.tail_tol.value_or(1e-10),
                                        k.min_decay.value_or(5.0));
    } else if (k.kind == "lln") {
      o.reports = {verify::check_lln(c.model, f, t, R, opt)};
    } else if (k.kind == "clt") {
      o.reports = verify::check_clt(c.model, f, t, R, opt, k.band.value_or(0.10));
    } else if (k.kind == "selection") {
      o.reports = {
          verify::check_selection(k.alpha.value_or(c.model.alpha), *k.lifetimes, R, opt)};
    } else if (k.kind == "lifespan_sampler") {
      o.reports = {verify::check_lifespan_sampler(k.law.value_or(c.model.lifespan), R, opt)};
    } else if (k.kind == "offspring_sampler") {
      o.reports = {verify::check_offspring_sampler(c.model.offspring, k.x.value_or(1.0), R, opt)};
    } else {
      o.reports = {verify::check_thinning(*k.rate, k.n.value_or(1), R, opt)};
    }
    out.push_back(std::move(o));
  }
  return out;
}

void write_reports(const std::vector<CheckOutcome>& outcomes, const fs::path& out) {
  fs::create_directories(out);
  ordered_json all = ordered_json::array();
  for (const auto& o : outcomes) {
    for (const auto& r : o.reports) {
      ordered_json j;
      j["check"] = o.label;
      j["name"] = r.name;
      j["estimate"] = r.estimate;
      j["std_error"] = r.std_error;
      j["replicates"] = r.replicates;
      j["target"] = r.target;
      j["target_bar"] = r.target_bar;
      j["z"] = r.z;
      j["gate"] = verify::to_string(r.gate);
      j["threshold"] = r.threshold;
      j["pass"] = r.pass;
      j["seed"] = r.seed;
      ordered_json d = ordered_json::object();
      for (const auto& [key, value] : r.diagnostics) d[key] = value;
      j["diagnostics"] = d;
      all.push_back(j);

      const std::string file =
          o.reports.size() == 1 ? o.label + ".csv" : o.label + "_" + r.name + ".csv";
      auto os = open_out(out / file);
      os << "replicate,value\n";
      for (std::size_t i = 0; i < r.raw.size(); ++i) os << i << ',' << fmt17(r.raw[i]) << '\n';
    }
  }
  write_json(out / "reports.json", all);
}

int run(int argc, char** argv) {
  CLI::App app{"Age-structured branching processes: renewal solvers and Monte Carlo checks"};
  app.footer(config_reference());
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  app.add_option("--config", config_path, "experiment configuration (JSON)")->required();
  auto* out_opt = app.add_option("--out", out_dir, "output directory (overrides output.directory)");
  auto* seed_opt = app.add_option("--seed", seed, "master seed (overrides run.seed)");
  app.add_option("--threads", threads, "worker threads (default: hardware parallelism)")
      ->check(CLI::PositiveNumber);
  auto* constants = app.add_subcommand("constants", "asymptotic constants to constants.json");
  auto* solve = app.add_subcommand("solve", "renewal solutions on the grid to solve.csv");
  auto* sim = app.add_subcommand("simulate", "sample paths to paths.csv");
  auto* ver = app.add_subcommand("verify", "run run.checks and write reports.json");
  for (auto* s : {constants, solve, sim, ver}) s->fallthrough();
  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitPass : kExitError;
  }

  try {
    auto cfg = load_config(config_path);
    if (seed_opt->count() > 0) cfg.run.seed = seed;
    if (out_opt->count() > 0) cfg.output.directory = out_dir;
    const fs::path out = cfg.output.directory;
    if (constants->parsed()) {
      run_constants(cfg, out);
    } else if (solve->parsed()) {
      run_solve(cfg, out);
    } else if (sim->parsed()) {
      run_simulate(cfg, out, threads);
    } else {
      const auto outcomes = run_checks(cfg, threads);
      write_reports(outcomes, out);
      bool pass = true;
      for (const auto& o : outcomes) {
        for (const auto& r : o.reports) {
          std::cerr << (r.pass ? "PASS " : "FAIL ") << o.label << '/' << r.name
                    << " estimate=" << fmt17(r.estimate) << " target=" << fmt17(r.target)
                    << " z=" << fmt17(r.z) << " (" << r.seconds << " s)\n";
          pass = pass && r.pass;
        }
      }
      if (!pass) return kExitGateFailed;
    }
    return kExitPass;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return kExitError;
}

}  // namespace agebranch::cli
