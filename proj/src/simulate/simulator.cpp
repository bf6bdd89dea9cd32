#include "agebranch/simulate/simulator.hpp"

#include <cmath>
#include <limits>

#include "agebranch/error.hpp"

namespace agebranch::simulate {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_inputs(const model::ModelSpec& spec, double T) {
  if (!(T >= 0.0)) throw Error(ErrorCode::HorizonNegative, "horizon must be >= 0");
  const auto violations = model::validate_model(spec);
  if (!violations.empty()) {
    throw Error(ErrorCode::InvalidSpec, violations.front().assumption);
  }
}

PathRecord run(const model::ModelSpec& spec, const std::vector<double>& sigma, double T,
               std::uint64_t seed, std::uint64_t replicate) {
  PathRecord path;
  path.initial = sigma;
  path.horizon = T;
  model::Population pop(spec.alpha, 0.0, sigma);
  Streams streams(seed, replicate);
  const double alpha_sup = spec.alpha.sup_norm();
  const double rho = spec.immigration ? spec.immigration->rate() : 0.0;

  for (;;) {
    const NextEvent ev = next_event(pop, alpha_sup, rho, T, streams);
    if (ev.kind == NextEvent::HorizonPassed) break;
    pop.advance_to(ev.time);
    Event rec{ev.time, EventKind::Birth, 0.0, {}, 0};
    if (ev.kind == NextEvent::Birth) {
      const std::size_t parent =
          model::weighted_select(pop, streams.branching.uniform_open_closed());
      rec.parent_lifetime = pop.lifetime(parent);
      const auto n = spec.offspring.sample_count(rec.parent_lifetime, streams.branching);
      rec.added.resize(n);
      for (auto& x : rec.added) x = spec.lifespan.sample(streams.branching);
    } else {
      rec.kind = EventKind::Immigration;
      rec.added = spec.immigration->sample_cluster(streams.immigration);
    }
    for (double x : rec.added) pop.add(x);
    rec.size_after = pop.size();
    path.events.push_back(std::move(rec));
  }
  return path;
}

}  // namespace

NextEvent next_event(const model::Population& pop, double alpha_sup, double rho,
                     double horizon, Streams& streams) {
  const double start = pop.time();
  const double t_imm = rho > 0.0 ? start + streams.immigration.exponential(rho) : kInf;
  const double stop = std::min(t_imm, horizon);

  const auto& ps = pop.particles();
  std::size_t first_alive = 0;
  double s = start;
  while (first_alive < ps.size() && ps[first_alive].death <= s) ++first_alive;

  if (alpha_sup > 0.0) {
    while (first_alive < ps.size() && s < stop) {
      const double n = static_cast<double>(ps.size() - first_alive);
      const double majorant = alpha_sup * n;
      const double proposal = s + streams.branching.exponential(majorant);
      const double death = ps[first_alive].death;
      const double u = streams.branching.uniform();
      if (proposal >= stop && stop <= death) break;
      if (proposal >= death) {
        // Majorant changes at the death; restart the exponential clock there.
        s = death;
        while (first_alive < ps.size() && ps[first_alive].death <= s) ++first_alive;
        continue;
      }
      s = proposal;
      if (u * majorant < pop.alpha_mass_at(s)) return {NextEvent::Birth, s};
    }
  }
  if (t_imm <= horizon) return {NextEvent::Immigration, t_imm};
  return {NextEvent::HorizonPassed, horizon};
}

PathRecord simulate_branching(const model::ModelSpec& spec, const std::vector<double>& sigma,
                              double T, std::uint64_t seed, std::uint64_t replicate) {
  check_inputs(spec, T);
  if (spec.immigration) {
    throw Error(ErrorCode::InvalidSpec, "branching simulation takes a spec without immigration");
  }
  return run(spec, sigma, T, seed, replicate);
}

PathRecord simulate_with_immigration(const model::ModelSpec& spec,
                                     const std::vector<double>& sigma, double T,
                                     std::uint64_t seed, std::uint64_t replicate) {
  check_inputs(spec, T);
  if (!spec.immigration) throw Error(ErrorCode::InvalidSpec, "spec has no immigration law");
  return run(spec, sigma, T, seed, replicate);
}

PathRecord simulate(const model::ModelSpec& spec, const std::vector<double>& sigma, double T,
                    std::uint64_t seed, std::uint64_t replicate) {
  return spec.immigration ? simulate_with_immigration(spec, sigma, T, seed, replicate)
                          : simulate_branching(spec, sigma, T, seed, replicate);
}

}  // namespace agebranch::simulate
