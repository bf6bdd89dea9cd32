// Acceptance run on the exponential reference model: one line per criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "agebranch/cli/commands.hpp"
#include "agebranch/error.hpp"
#include "agebranch/model/model_spec.hpp"
#include "agebranch/renewal/asymptotics.hpp"
#include "agebranch/renewal/kernel.hpp"
#include "agebranch/renewal/solvers.hpp"
#include "agebranch/verify/checks.hpp"

using namespace agebranch;
using model::TestFunction;
using renewal::TimeGrid;

namespace {

model::ModelSpec exp_model(bool immigration) {
  model::ModelSpec s{model::ScalarField::constant(1.5),
                     model::OffspringLaw::zero_two(model::ScalarField::constant(0.25)),
                     model::LifespanLaw::exponential(1.0), std::nullopt};
  if (immigration)
    s.immigration = model::ImmigrationLaw(
        0.3, model::ImmigrationLaw::Singleton{model::LifespanLaw::exponential(1.0)});
  return s;
}

// Collects the sub-checks of one criterion.
struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void expect(bool ok, const std::string& what) {
    if (!detail.str().empty()) detail << "; ";
    detail << what << (ok ? "" : " [FAIL]");
    pass = pass && ok;
  }
};

std::string num(double x, int digits = 8) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

bool near(double value, double target, double tol) { return std::abs(value - target) <= tol; }

verify::CheckOptions options(double h) {
  verify::CheckOptions o;
  o.seed = 1;
  o.threads = std::max(1u, std::thread::hardware_concurrency());
  o.sigma_threshold = 4.0;
  o.alpha_level = 1e-3;
  o.h = h;
  return o;
}

void criterion1(Outcome& out) {
  const auto spec = exp_model(true);
  const double r = renewal::rho1(spec);
  const double a = renewal::alpha1(spec);
  const auto shape = renewal::a1(spec, a);
  out.expect(near(r, 0.75, 1e-10), "rho1=" + num(r, 14));
  out.expect(near(a, 0.25, 1e-10), "alpha1=" + num(a, 14));
  out.expect(near(shape.b, 4.0 / 3.0, 1e-8), "b=" + num(shape.b, 12));
  out.expect(near(shape.a1, 1.0, 1e-6), "a1=" + num(shape.a1, 10));
}

void criterion2(Outcome& out) {
  const auto spec = exp_model(false);
  const auto grid = TimeGrid::make(1e-3, 20.0);
  const auto pi = renewal::solve_pi(spec, TestFunction::constant(1.0), grid, false);
  double worst = 0.0;
  for (std::size_t n = 0; n <= grid.n; ++n)
    worst = std::max(worst, std::abs(pi.samples[n] / std::exp(-grid.t(n) / 4.0) - 1.0));
  const double p = pi.at(grid.index_of(2.0), 1.0);
  out.expect(worst <= 1e-6, "max rel err q=" + num(worst, 3));
  out.expect(near(p, 0.5168103, 1e-6), "pi_2 1(1)=" + num(p, 10));
}

void criterion3(Outcome& out) {
  const auto c = renewal::asymptotics(exp_model(true), TestFunction::constant(1.0));
  double pi_err = 0.0, gamma_err = 0.0;
  for (double x : {0.5, 1.0, 2.0, 5.0}) {
    pi_err = std::max(pi_err, std::abs(c.Pi_inf(x) - 4.0 * x) / (4.0 * x));
    gamma_err = std::max(gamma_err, std::abs(c.Gamma_inf(x) - 144.0 * x) / (144.0 * x));
  }
  out.expect(pi_err <= 1e-4, "Pi_inf rel err=" + num(pi_err, 3));
  out.expect(gamma_err <= 1e-4, "Gamma_inf rel err=" + num(gamma_err, 3));
  out.expect(near(c.a2, 144.0, 0.01), "a2=" + num(c.a2, 10));
  out.expect(near(c.lln_constant, 1.2, 1e-4), "lln=" + num(c.lln_constant, 10));
  out.expect(near(c.clt_variance, 52.8, 0.01), "clt=" + num(c.clt_variance, 10));
}

void criterion4(Outcome& out) {
  const auto spec = exp_model(false);
  const TestFunction f({0.5, 1.7}, {1.0, 0.3, 2.0});
  const std::vector<double> xs = {0.05, 0.3, 0.5, 0.9, 1.2, 1.7, 2.5, 4.0, 8.0};

  const auto occ = renewal::solve_occupation(spec, TestFunction::constant(1.0),
                                             TimeGrid::make(1e-3, 5.0));
  out.expect(occ.cross_check <= 1e-6, "Pi vs int pi=" + num(occ.cross_check, 3));

  double gap = 0.0;
  const double a = spec.alpha.sup_norm();
  for (const auto& g : {f, TestFunction::indicator(1.0).scaled(3.0)}) {
    const auto grid = TimeGrid::make(0.01, 2.0);
    const auto pi = renewal::solve_pi(spec, g, grid, false);
    const auto u = renewal::solve_u(spec, g, grid);
    for (std::size_t n = 0; n <= grid.n; n += 5) {
      for (double x : xs) {
        const double lower = (1.0 - std::exp(-g(x - grid.t(n)))) * std::exp(-a * grid.t(n));
        gap = std::max({gap, u.at(n, x) - pi.at(n, x), lower - u.at(n, x)});
      }
    }
  }
  out.expect(gap <= 1e-9, "bound chain violation=" + num(gap, 3));

  const auto g1 = TimeGrid::make(2e-3, 1.0), g2 = TimeGrid::make(2e-3, 2.0);
  const auto u1 = renewal::solve_u(spec, f, g1);
  const auto u2 = renewal::solve_u(spec, f, g2);
  const auto uu = renewal::solve_u(spec, *u1.final_field, g1);
  double semi = 0.0;
  for (double x : xs) semi = std::max(semi, std::abs(uu.at(g1.n, x) - u2.at(g2.n, x)));
  out.expect(semi <= 1e-5, "semigroup=" + num(semi, 3));

  const auto gl = TimeGrid::make(0.01, 2.0);
  const auto pi = renewal::solve_pi(spec, f, gl, false);
  auto dev = [&](double theta) {
    const auto u = renewal::solve_u(spec, f.scaled(theta), gl);
    double w = 0.0;
    for (double x : xs) w = std::max(w, std::abs(u.at(gl.n, x) / theta - pi.at(gl.n, x)));
    return w;
  };
  const double ratio = dev(1e-3) / dev(1e-4);
  out.expect(std::abs(ratio / 10.0 - 1.0) <= 0.05, "linearization order ratio=" + num(ratio, 5));

  auto grid = [](double h) { return TimeGrid::make(h, 2.0); };
  const double h = 0.02;
  double worst = 0.0;
  auto halving = [&](auto solve) {
    const auto x1 = solve(grid(h)), x2 = solve(grid(2 * h)), xh = solve(grid(h / 2));
    const double bar = renewal::richardson_bar(x1, x2);
    for (std::size_t i = 0; i < x1.size(); ++i)
      worst = std::max(worst, std::abs(x1[i] - xh[2 * i]) / bar);
  };
  halving([&](const TimeGrid& g) { return renewal::solve_pi(spec, f, g, false).samples; });
  halving([&](const TimeGrid& g) { return renewal::solve_u(spec, f, g).samples; });
  out.expect(worst <= 4.0, "halving change / bar=" + num(worst, 4));
}

void z_line(Outcome& out, const std::string& what, const verify::ComparisonReport& r,
            double literal = std::nan("")) {
  double z = r.z;
  double target = r.target;
  if (!std::isnan(literal)) {
    target = literal;
    z = verify::z_score(r.estimate, r.std_error, literal, r.target_bar);
  }
  out.expect(std::abs(z) <= 4.0, what + " est=" + num(r.estimate, 7) + " target=" +
                                     num(target, 7) + " z=" + num(z, 3));
}

void criterion5(Outcome& out) {
  const auto spec = exp_model(false);
  const auto one = TestFunction::constant(1.0);
  const auto opt = options(1e-3);
  const std::size_t R = 100000;
  z_line(out, "laplace", verify::check_laplace(spec, {1.0}, one, 2.0, R, opt));
  const auto m = verify::check_moments(spec, {1.0}, one, 2.0, R, opt);
  z_line(out, "mean", m[0], 0.516810);
  z_line(out, "second", m[1]);
  z_line(out, "occupation", verify::check_occupation_transform(spec, {1.0}, one, 2.0, R, opt));
}

void criterion6(Outcome& out) {
  const auto spec = exp_model(true);
  const auto one = TestFunction::constant(1.0);
  const auto opt = options(5e-3);
  z_line(out, "<Y_8,1>", verify::check_moments(spec, {}, one, 8.0, 100000, opt)[0], 1.037598);
  z_line(out, "Z_100", verify::check_moments(spec, {}, one, 100.0, 10000, opt)[2], 115.200);
}

void criterion7(Outcome& out) {
  const auto r = verify::check_ergodic(exp_model(true), TestFunction::constant(1.0), 60.0, 20000,
                                       options(1e-2));
  z_line(out, "E exp(-<Y_60,1>)", r[0]);
  out.expect(r[1].estimate > 1e-3, "KS p=" + num(r[1].estimate, 4));
}

void criterion8(Outcome& out) {
  const auto r = verify::check_lln(exp_model(true), TestFunction::constant(1.0), 400.0, 64,
                                   options(1e-3));
  out.expect(std::abs(r.estimate - 1.2) <= 4.0 * r.std_error,
             "mean Z/t=" + num(r.estimate, 6) + " 4SE=" + num(4.0 * r.std_error, 3));
}

void criterion9(Outcome& out) {
  const auto r = verify::check_clt(exp_model(true), TestFunction::constant(1.0), 100.0, 4000,
                                   options(5e-3), 0.10);
  const double var = r[0].estimate;
  out.expect(std::abs(var / 52.8 - 1.0) <= 0.10,
             "variance=" + num(var, 6) + " (finite-t " +
                 num(r[0].diagnostics.front().second, 5) + ")");
  out.expect(std::abs(r[1].estimate) <= 0.46, "mean W=" + num(r[1].estimate, 4));
  out.expect(true, "KS distance=" + num(r[2].estimate, 4) + " p=" +
                       num(r[2].diagnostics.front().second, 3));
}

void criterion10(Outcome& out) {
  const auto opt = options(1e-3);
  for (const auto& law : {model::LifespanLaw::exponential(1.0), model::LifespanLaw::gamma(0.7, 2.0),
                          model::LifespanLaw::uniform(0.5, 1.5)}) {
    const auto r = verify::check_lifespan_sampler(law, 1000000, opt);
    out.expect(r.estimate > 1e-3, law.describe() + " KS p=" + num(r.estimate, 3));
  }
  const auto zt = model::OffspringLaw::zero_two(model::ScalarField::constant(0.25));
  const auto po = model::OffspringLaw::poisson(model::ScalarField::constant(2.5));
  for (const auto& law : {zt, po}) {
    const auto r = verify::check_offspring_sampler(law, 1.0, 1000000, opt);
    out.expect(r.estimate > 1e-3, law.describe() + " chi2 p=" + num(r.estimate, 3));
  }
  const auto lin = model::ScalarField::piecewise_linear({{1.0, 1.0}, {3.0, 3.0}});
  const auto sel = verify::check_selection(lin, {1.0, 3.0}, 100000, opt);
  out.expect(sel.estimate > 1e-3, "selection p=" + num(sel.estimate, 3));
  const auto th = verify::check_thinning(1.5, 4, 100000, opt);
  out.expect(th.estimate > 1e-3, "thinning KS p=" + num(th.estimate, 3));
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(std::vector<std::string> args) {
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return cli::run(static_cast<int>(argv.size()), argv.data());
}

void criterion11(Outcome& out) {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "agebranch_acceptance";
  fs::remove_all(root);
  const std::string config = ACCEPTANCE_CONFIG;
  const int a = run_cli({"agebranch", "verify", "--config", config, "--out",
                         (root / "a").string(), "--threads", "1"});
  const int b = run_cli({"agebranch", "verify", "--config", config, "--out",
                         (root / "b").string(), "--threads", "2"});
  out.expect(a == b, "exit codes " + std::to_string(a) + "/" + std::to_string(b));
  std::size_t files = 0, same = 0;
  for (const auto& e : fs::directory_iterator(root / "a")) {
    ++files;
    const fs::path other = root / "b" / e.path().filename();
    if (fs::exists(other) && slurp(e.path()) == slurp(other)) ++same;
  }
  std::size_t files_b = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(root / "b")) ++files_b;
  out.expect(files > 0 && same == files && files_b == files,
             std::to_string(same) + "/" + std::to_string(files) + " files byte-identical");
  fs::remove_all(root);
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    double budget;  // seconds; 0 means no limit
    std::function<void(Outcome&)> run;
  };
  const std::vector<Criterion> all = {
      {1, 1.0, criterion1},    {2, 5.0, criterion2},   {3, 10.0, criterion3},
      {4, 30.0, criterion4},   {5, 120.0, criterion5}, {6, 120.0, criterion6},
      {7, 180.0, criterion7},  {8, 120.0, criterion8}, {9, 600.0, criterion9},
      {10, 60.0, criterion10}, {11, 0.0, criterion11},
  };
  int failed = 0;
  for (const auto& c : all) {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(out);
    } catch (const std::exception& e) {
      out.expect(false, std::string("error: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget > 0.0) out.expect(secs < c.budget, "runtime " + num(secs, 3) + " s < " +
                                                        num(c.budget, 4) + " s");
    std::printf("criterion %2d: %s  %s\n", c.id, out.pass ? "PASS" : "FAIL",
                out.detail.str().c_str());
    std::fflush(stdout);
    if (!out.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
  return failed == 0 ? 0 : 1;
}
