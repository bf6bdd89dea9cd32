#include "agebranch/verify/checks.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <functional>
#include <string_view>

#include "agebranch/error.hpp"
#include "agebranch/format.hpp"
#include "agebranch/model/population.hpp"
#include "agebranch/model/random.hpp"
#include "agebranch/renewal/asymptotics.hpp"
#include "agebranch/renewal/kernel.hpp"
#include "agebranch/renewal/solvers.hpp"
#include "agebranch/renewal/volterra.hpp"
#include "agebranch/simulate/path.hpp"
#include "agebranch/simulate/simulator.hpp"
#include "agebranch/verify/runner.hpp"

namespace agebranch::verify {

using model::ModelSpec;
using model::TestFunction;
using renewal::TimeGrid;

namespace {

// FNV-1a; std::hash is not specified across platforms.
std::uint64_t name_hash(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t check_seed(std::uint64_t master, std::string_view name) {
  return model::splitmix64(master ^ name_hash(name));
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void require_replicates(std::size_t R, std::size_t min) {
  if (R < min)
    throw Error(ErrorCode::InvalidArgument,
                "at least " + std::to_string(min) + " replicates required, got " +
                    std::to_string(R));
}

// Analytic value at step h with the Richardson bar from step 2h.
template <class F>
std::pair<double, double> with_bar(double t, double h, F&& target) {
  const double fine = target(TimeGrid::make(h, t));
  const double coarse = target(TimeGrid::make(2.0 * h, t));
  return {fine, std::abs(fine - coarse) / 3.0};
}

double psi_integral(const renewal::RenewalSolution& s, std::size_t n) {
  if (s.psi.empty()) return 0.0;
  return renewal::cumulative_integral(s.psi, s.grid.h)[n];
}

double laplace_target(const ModelSpec& spec, const std::vector<double>& sigma,
                      const TestFunction& f, const TimeGrid& grid) {
  const auto u = renewal::solve_u(spec, f, grid);
  return std::exp(-u.pair(grid.n, sigma) - psi_integral(u, grid.n));
}

double occupation_target(const ModelSpec& spec, const std::vector<double>& sigma,
                         const TestFunction& f, const TimeGrid& grid) {
  const auto v = renewal::solve_v(spec, f, std::nullopt, grid);
  return std::exp(-v.pair(grid.n, sigma) - psi_integral(v, grid.n));
}

ComparisonReport finish(ComparisonReport r, const Stopwatch& clock) {
  r.seconds = clock.seconds();
  return r;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace

ComparisonReport check_laplace(const ModelSpec& spec, const std::vector<double>& sigma,
                               const TestFunction& f, double t, std::size_t R,
                               const CheckOptions& opt) {
  require_replicates(R, 100);
  Stopwatch clock;
  const std::uint64_t seed = check_seed(opt.seed, "laplace");
  double target = 1.0, bar = 0.0;
  if (!f.is_zero() && t > 0.0)
    std::tie(target, bar) = with_bar(t, opt.h, [&](const TimeGrid& g) {
      return laplace_target(spec, sigma, f, g);
    });
  auto raw = run_replicates<double>(R, opt.threads, [&](std::size_t r) {
    const auto path = simulate::simulate(spec, sigma, t, seed, r);
    return std::exp(-simulate::snapshot(path, t, f));
  });
  return finish(mean_report("laplace", std::move(raw), target, bar, opt.sigma_threshold, seed),
                clock);
}

std::vector<ComparisonReport> check_moments(const ModelSpec& spec,
                                            const std::vector<double>& sigma,
                                            const TestFunction& f, double t, std::size_t R,
                                            const CheckOptions& opt) {
  require_replicates(R, 100);
  Stopwatch clock;
  const std::uint64_t seed = check_seed(opt.seed, "moments");
  std::array<double, 4> target{}, bar{};
  if (t > 0.0) {
    const auto fine = renewal::immigration_moments(spec, sigma, f, t, TimeGrid::make(opt.h, t));
    const auto coarse =
        renewal::immigration_moments(spec, sigma, f, t, TimeGrid::make(2.0 * opt.h, t));
    auto pack = [](const renewal::ImmigrationMoments& m) {
      return std::array<double, 4>{m.state_mean, m.state_second, m.occupation_mean,
                                   m.occupation_second};
    };
    target = pack(fine);
    const auto c = pack(coarse);
    for (int k = 0; k < 4; ++k) bar[k] = std::abs(target[k] - c[k]) / 3.0;
  } else {
    for (double x : sigma) target[0] += f(x);
    target[1] = target[0] * target[0];
  }
  const auto samples = run_replicates<std::array<double, 2>>(R, opt.threads, [&](std::size_t r) {
    const auto path = simulate::simulate(spec, sigma, t, seed, r);
    return std::array<double, 2>{simulate::snapshot(path, t, f), simulate::occupation(path, f)};
  });
  static const char* names[4] = {"state_mean", "state_second_moment", "occupation_mean",
                                 "occupation_second_moment"};
  std::vector<ComparisonReport> out;
  for (int k = 0; k < 4; ++k) {
    std::vector<double> raw(R);
    for (std::size_t r = 0; r < R; ++r) {
      const double v = samples[r][k / 2];
      raw[r] = k % 2 == 0 ? v : v * v;
    }
    out.push_back(mean_report(names[k], std::move(raw), target[k], bar[k],
                              opt.sigma_threshold, seed));
  }
  const double s = clock.seconds();
  for (auto& r : out) r.seconds = s;
  return out;
}

ComparisonReport check_occupation_transform(const ModelSpec& spec,
                                            const std::vector<double>& sigma,
                                            const TestFunction& f, double t, std::size_t R,
                                            const CheckOptions& opt) {
  require_replicates(R, 100);
  Stopwatch clock;
  const std::uint64_t seed = check_seed(opt.seed, "occupation_transform");
  double target = 1.0, bar = 0.0;
  if (!f.is_zero() && t > 0.0)
    std::tie(target, bar) = with_bar(t, opt.h, [&](const TimeGrid& g) {
      return occupation_target(spec, sigma, f, g);
    });
  auto raw = run_replicates<double>(R, opt.threads, [&](std::size_t r) {
    const auto path = simulate::simulate(spec, sigma, t, seed, r);
    return std::exp(-simulate::occupation(path, f));
  });
  return finish(mean_report("occupation_transform", std::move(raw), target, bar,
                            opt.sigma_threshold, seed),
                clock);
}

std::vector<ComparisonReport> check_ergodic(const ModelSpec& spec, const TestFunction& f,
                                            double t_large, std::size_t R,
                                            const CheckOptions& opt, double tail_tol,
                                            double min_decay) {
  require_replicates(R, 100);
  Stopwatch clock;
  const std::uint64_t seed = check_seed(opt.seed, "ergodic");
  renewal::ErgodicLaplace erg;
  if (!f.is_zero() && spec.immigration) {
    const double a = renewal::alpha1(spec);
    if (a * t_large < min_decay)
      throw Error(ErrorCode::InvalidArgument,
                  "t_large = " + fmt17(t_large) + " is below " + fmt17(min_decay) +
                      " / alpha1 = " + fmt17(min_decay / a));
    erg = renewal::ergodic_laplace(spec, f, TimeGrid::make(opt.h, t_large), tail_tol);
  }
  const std::vector<double> empty;
  // Replicates 0..R-1 run to t_large, R..2R-1 to 2 t_large, so the two KS
  // samples are independent.
  const auto sample = [&](double t, std::size_t offset) {
    return run_replicates<double>(R, opt.threads, [&](std::size_t r) {
      const auto path = simulate::simulate(spec, empty, t, seed, offset + r);
      return simulate::snapshot(path, t, f);
    });
  };
  const auto at_t = sample(t_large, 0);
  const auto at_2t = sample(2.0 * t_large, R);

  std::vector<double> raw(R);
  for (std::size_t r = 0; r < R; ++r) raw[r] = std::exp(-at_t[r]);
  const double bias = erg.bias_bound(t_large);
  auto laplace = mean_report("ergodic_laplace", std::move(raw), erg.value,
                             erg.error_bar + bias, opt.sigma_threshold, seed);
  laplace.diagnostics = {{"cutoff", erg.cutoff},
                         {"truncation_bar", erg.error_bar},
                         {"finite_time_bias_bound", bias}};

  ComparisonReport ks;
  ks.name = "stationarity_ks";
  const auto test = ks_two_sample(at_t, at_2t);
  ks.estimate = test.p_value;
  ks.replicates = R;
  ks.seed = seed;
  ks.diagnostics = {{"ks_statistic", test.statistic}};
  ks.raw = at_2t;
  decide(ks, Gate::PValue, opt.alpha_level);
  ks.z = z_from_p(test.p_value);
  laplace.raw = at_t;

  const double s = clock.seconds();
  laplace.seconds = ks.seconds = s;
  return {laplace, ks};
}

ComparisonReport check_lln(const ModelSpec& spec, const TestFunction& f, double t, std::size_t R,
                           const CheckOptions& opt) {
  require_replicates(R, 2);
  Stopwatch clock;
  const std::uint64_t seed = check_seed(opt.seed, "lln");
  const double target = f.is_zero() ? 0.0 : renewal::asymptotics(spec, f).lln_constant;
  const std::vector<double> empty;
  struct Outcome {
    double ratio = 0.0;
    std::size_t events = 0;
  };
  const auto outcomes = run_replicates<Outcome>(R, opt.threads, [&](std::size_t r) {
    const auto path = simulate::simulate(spec, empty, t, seed, r);
    return Outcome{simulate::occupation(path, f) / t, path.events.size()};
  });
  std::vector<double> raw(R);
  std::size_t longest = 0;
  for (std::size_t r = 0; r < R; ++r) {
    raw[r] = outcomes[r].ratio;
    if (outcomes[r].events > outcomes[longest].events) longest = r;
  }
  auto rep = mean_report("lln", std::move(raw), target, 0.0, opt.sigma_threshold, seed);
  // Replay the busiest path and record Z_s / s along it.
  const auto path = simulate::simulate(spec, empty, t, seed, longest);
  rep.diagnostics.emplace_back("trajectory_replicate", static_cast<double>(longest));
  for (int k = 1; k <= 8; ++k) {
    const double s = t * k / 8.0;
    rep.diagnostics.emplace_back("Z_s/s@" + fmt17(s), simulate::occupation(path, f, s) / s);
  }
  return finish(std::move(rep), clock);
}

std::vector<ComparisonReport> check_clt(const ModelSpec& spec, const TestFunction& f, double t,
                                        std::size_t R, const CheckOptions& opt, double band) {
  require_replicates(R, 2);
  Stopwatch clock;
  const std::uint64_t seed = check_seed(opt.seed, "clt");
  double V = 0.0, centre = 0.0, finite_var = 0.0;
  if (!f.is_zero()) {
    V = renewal::asymptotics(spec, f).clt_variance;
    const auto m = renewal::immigration_moments(spec, {}, f, t, TimeGrid::make(opt.h, t));
    centre = m.occupation_mean;
    finite_var = (m.occupation_second - centre * centre) / t;
  }
  const std::vector<double> empty;
  const double root_t = std::sqrt(t);
  auto W = run_replicates<double>(R, opt.threads, [&](std::size_t r) {
    const auto path = simulate::simulate(spec, empty, t, seed, r);
    return (simulate::occupation(path, f) - centre) / root_t;
  });
  const auto s = summarize(W);
  const double Rd = static_cast<double>(R);

  ComparisonReport var;
  var.name = "clt_variance";
  var.estimate = s.variance;
  var.std_error = V * std::sqrt(2.0 / Rd);
  var.replicates = R;
  var.target = V;
  var.seed = seed;
  var.diagnostics = {{"finite_time_variance", finite_var}, {"centring", centre}};
  decide(var, Gate::RelativeBand, band);
  std::vector<double> squares(R);
  for (std::size_t r = 0; r < R; ++r) squares[r] = (W[r] - s.mean) * (W[r] - s.mean);
  var.raw = std::move(squares);

  ComparisonReport mean;
  mean.name = "clt_mean";
  mean.estimate = s.mean;
  mean.std_error = s.std_error();
  mean.replicates = R;
  mean.seed = seed;
  decide(mean, Gate::AbsoluteBand, opt.sigma_threshold * std::sqrt(V / Rd));
  mean.raw = W;

  ComparisonReport ks;
  ks.name = "clt_ks";
  ks.replicates = R;
  ks.seed = seed;
  double p = 1.0;
  if (V > 0.0) {
    const double sd = std::sqrt(V);
    const auto test = ks_one_sample(W, [sd](double x) { return normal_cdf(x / sd); });
    ks.estimate = test.statistic;
    p = test.p_value;
  }
  ks.diagnostics = {{"p_value", p}};
  decide(ks, Gate::Diagnostic, 0.0);
  ks.z = z_from_p(p);
  ks.raw = std::move(W);

  const double secs = clock.seconds();
  var.seconds = mean.seconds = ks.seconds = secs;
  return {var, mean, ks};
}

namespace {

ComparisonReport p_value_report(std::string name, const TestResult& test, std::size_t N,
                                std::uint64_t seed, const CheckOptions& opt,
                                std::vector<double> raw) {
  ComparisonReport r;
  r.name = std::move(name);
  r.estimate = test.p_value;
  r.replicates = N;
  r.seed = seed;
  r.diagnostics = {{"statistic", test.statistic}};
  r.raw = std::move(raw);
  decide(r, Gate::PValue, opt.alpha_level);
  r.z = z_from_p(test.p_value);
  return r;
}

}  // namespace

ComparisonReport check_selection(const model::ScalarField& alpha,
                                 const std::vector<double>& lifetimes, std::size_t N,
                                 const CheckOptions& opt) {
  Stopwatch clock;
  if (lifetimes.empty() || lifetimes.size() > 10)
    throw Error(ErrorCode::InvalidArgument, "selection fixture needs 1 to 10 atoms");
  const std::uint64_t seed = check_seed(opt.seed, "selection");
  const model::Population pop(alpha, 0.0, lifetimes);
  const double mass = pop.alpha_mass();
  if (!(mass > 0.0)) throw Error(ErrorCode::EmptyOrZeroMass, "selection fixture has zero alpha mass");
  std::vector<double> prob(pop.size());
  for (std::size_t i = 0; i < pop.size(); ++i) prob[i] = alpha(pop.lifetime(i)) / mass;
  std::vector<std::uint64_t> counts(pop.size(), 0);
  model::RandomStream rng(model::derive_seed(seed, 0, 0));
  std::vector<double> raw(N);
  for (std::size_t k = 0; k < N; ++k) {
    const std::size_t i = model::weighted_select(pop, rng.uniform_open_closed());
    ++counts[i];
    raw[k] = static_cast<double>(i);
  }
  auto r = p_value_report("selection", chi_square(counts, prob), N, seed, opt, std::move(raw));
  for (std::size_t i = 0; i < pop.size(); ++i)
    r.diagnostics.emplace_back("share@" + fmt17(pop.lifetime(i)),
                               static_cast<double>(counts[i]) / static_cast<double>(N));
  return finish(std::move(r), clock);
}

ComparisonReport check_lifespan_sampler(const model::LifespanLaw& law, std::size_t N,
                                        const CheckOptions& opt) {
  require_replicates(N, 100);
  Stopwatch clock;
  const std::uint64_t seed = check_seed(opt.seed, "lifespan_sampler");
  model::RandomStream rng(model::derive_seed(seed, 0, 0));
  std::vector<double> xs(N);
  for (auto& x : xs) x = law.sample(rng);
  const auto test = ks_one_sample(xs, [&law](double x) { return law.cdf(x); });
  return finish(p_value_report("lifespan_sampler", test, N, seed, opt, std::move(xs)), clock);
}

ComparisonReport check_offspring_sampler(const model::OffspringLaw& law, double x, std::size_t N,
                                         const CheckOptions& opt) {
  require_replicates(N, 100);
  Stopwatch clock;
  const std::uint64_t seed = check_seed(opt.seed, "offspring_sampler");
  // Cells 0..K-1 exact, the last cell pools the tail beyond a 1e-12 remainder.
  std::vector<double> prob;
  double covered = 0.0;
  const int top = law.max_count();
  for (std::uint32_t k = 0;; ++k) {
    if (top >= 0 && static_cast<int>(k) > top) break;
    if (top < 0 && 1.0 - covered < 1e-12 && k > 0) break;
    prob.push_back(law.probability(x, k));
    covered += prob.back();
  }
  if (top < 0) prob.push_back(std::max(0.0, 1.0 - covered));
  const std::size_t cells = prob.size();
  std::vector<std::uint64_t> counts(cells, 0);
  model::RandomStream rng(model::derive_seed(seed, 0, 0));
  std::vector<double> raw(N);
  for (std::size_t i = 0; i < N; ++i) {
    const std::uint32_t k = law.sample_count(x, rng);
    ++counts[std::min<std::size_t>(k, cells - 1)];
    raw[i] = k;
  }
  return finish(p_value_report("offspring_sampler", chi_square(counts, prob), N, seed, opt,
                               std::move(raw)),
                clock);
}

ComparisonReport check_thinning(double rate, std::size_t n, std::size_t N,
                                const CheckOptions& opt) {
  require_replicates(N, 100);
  if (!(rate > 0.0) || n == 0)
    throw Error(ErrorCode::InvalidArgument, "thinning needs rate > 0 and n >= 1");
  Stopwatch clock;
  const std::uint64_t seed = check_seed(opt.seed, "thinning");
  // Lifetimes far beyond any gap keep the population frozen.
  model::Population pop(model::ScalarField::constant(rate), 0.0, std::vector<double>(n, 1e12));
  simulate::Streams streams(seed, 0);
  std::vector<double> gaps(N);
  for (auto& g : gaps) {
    const auto ev = simulate::next_event(pop, rate, 0.0, 1e11, streams);
    if (ev.kind != simulate::NextEvent::Birth)
      throw Error(ErrorCode::InvalidArgument, "thinning fixture ran past its horizon");
    g = ev.time - pop.time();
    pop.advance_to(ev.time);
  }
  const double total = rate * static_cast<double>(n);
  const auto test = ks_one_sample(gaps, [total](double x) { return -std::expm1(-total * x); });
  return finish(p_value_report("thinning", test, N, seed, opt, std::move(gaps)), clock);
}

}  // namespace agebranch::verify
