#pragma once

#include <cstdint>
#include <vector>

#include "agebranch/model/model_spec.hpp"
#include "agebranch/model/population.hpp"
#include "agebranch/model/random.hpp"
#include "agebranch/simulate/path.hpp"

namespace agebranch::simulate {

// Lane 0 drives births, lane 1 drives immigration, so the branching draws
// of a path do not depend on whether immigration is switched on.
struct Streams {
  model::RandomStream branching;
  model::RandomStream immigration;

  Streams(std::uint64_t seed, std::uint64_t replicate)
      : branching(model::derive_seed(seed, replicate, 0)),
        immigration(model::derive_seed(seed, replicate, 1)) {}
};

struct NextEvent {
  enum Kind { Birth, Immigration, HorizonPassed } kind;
  double time;
};

// Samples the next birth or immigration time after pop.time() without
// changing the population. Births are thinned against alpha_sup * N(s),
// where N only drops at the known death times; a proposal that overshoots
// the next death is discarded (memoryless) and redrawn from there. Each
// call starts a fresh Exp(rho) immigration clock. Immigration wins ties.
NextEvent next_event(const model::Population& pop, double alpha_sup, double rho,
                     double horizon, Streams& streams);

// Exact sample on [0, T]. Deterministic in (spec, sigma, T, seed, replicate).
// Throws Error(InvalidSpec) if the spec fails validation or carries
// immigration, Error(HorizonNegative) if T < 0.
PathRecord simulate_branching(const model::ModelSpec& spec, const std::vector<double>& sigma,
                              double T, std::uint64_t seed, std::uint64_t replicate = 0);

// As above with Poisson immigration; requires spec.immigration.
PathRecord simulate_with_immigration(const model::ModelSpec& spec,
                                     const std::vector<double>& sigma, double T,
                                     std::uint64_t seed, std::uint64_t replicate = 0);

// Dispatches on whether the spec has immigration.
PathRecord simulate(const model::ModelSpec& spec, const std::vector<double>& sigma, double T,
                    std::uint64_t seed, std::uint64_t replicate = 0);

}  // namespace agebranch::simulate
