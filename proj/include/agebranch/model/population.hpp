#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "agebranch/model/scalar_field.hpp"

namespace agebranch::model {

// Finite set of particles, each stored by its absolute death time. The
// remaining lifetime at the current time t is death - t. Kept sorted by
// (death, insertion id), which is the ascending-lifetime order with ties
// broken by insertion.
class Population {
 public:
  struct Particle {
    double death;
    std::uint64_t id;
  };

  // Throws Error(InvalidArgument) on a non-positive or non-finite lifetime.
  Population(ScalarField alpha, double t0, const std::vector<double>& lifetimes);

  double time() const { return now_; }
  std::size_t size() const { return particles_.size(); }
  bool empty() const { return particles_.empty(); }
  const std::vector<Particle>& particles() const { return particles_; }
  std::vector<double> lifetimes() const;
  double lifetime(std::size_t i) const { return particles_[i].death - now_; }

  // Time of the earliest death; +inf when empty.
  double next_death() const;
  // Moves the clock to t >= time(), dropping every particle whose death
  // time is <= t. Returns the number removed.
  std::size_t advance_to(double t);
  // Adds a particle with remaining lifetime x > 0 at the current time.
  void add(double x);

  // Cached <X, alpha> at the current time.
  double alpha_mass() const { return alpha_mass_; }
  double recompute_alpha_mass() const;
  // Value of <X, alpha> at time s >= time() without moving the clock.
  double alpha_mass_at(double s) const;

  const ScalarField& alpha() const { return alpha_; }

 private:
  void refresh_cache();

  ScalarField alpha_;
  std::vector<Particle> particles_;
  double now_;
  std::uint64_t next_id_ = 0;
  double alpha_mass_ = 0.0;
};

// Index (into the sorted particle order) of the first particle whose
// cumulative alpha weight reaches alpha_mass * y, for y in (0, 1].
// Throws Error(EmptyOrZeroMass) when alpha_mass is 0.
std::size_t weighted_select(const Population& pop, double y);

}  // namespace agebranch::model
