#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "agebranch/model/population.hpp"
#include "agebranch/model/test_function.hpp"

namespace agebranch::simulate {

enum class EventKind { Birth, Immigration };

struct Event {
  double time;
  EventKind kind;
  // Remaining lifetime of the parent at the birth instant; 0 for immigration.
  double parent_lifetime;
  // Offspring lifespans (possibly none) or the immigrant cluster.
  std::vector<double> added;
  std::size_t size_after;
};

// One trajectory on [0, horizon]. Deaths are implicit: a particle added at
// time b with lifespan x is alive on [b, b + x).
struct PathRecord {
  std::vector<double> initial;
  double horizon = 0.0;
  std::vector<Event> events;
};

// Remaining lifetimes alive at t (right-continuous), in event order.
// Throws Error(TimeOutOfRange) unless 0 <= t <= horizon.
std::vector<double> state_at(const PathRecord& path, double t);
// <X_t, f>.
double snapshot(const PathRecord& path, double t, const model::TestFunction& f);
std::size_t population_size(const PathRecord& path, double t);

// Integral over [0, upto] of <X_s, f> ds; upto defaults to the horizon.
double occupation(const PathRecord& path, const model::TestFunction& f);
double occupation(const PathRecord& path, const model::TestFunction& f, double upto);

// Running integral of <X_s, f>. Each particle contributes
// C(d - b) - C((d - t)^+) for birth b, death d and current time t, where C
// is the antiderivative of f; no quadrature is involved.
class OccupationAccumulator {
 public:
  explicit OccupationAccumulator(model::TestFunction f) : f_(std::move(f)) {}

  // Adds the integral over [from, to] for every particle in pop, assuming no
  // events between the two times. Requires pop.time() <= from.
  void add_interval(const model::Population& pop, double from, double to);
  void add_particle(double birth, double death, double upto);

  double value() const { return value_; }
  const model::TestFunction& function() const { return f_; }

 private:
  model::TestFunction f_;
  double value_ = 0.0;
};

// CSV rows: replicate,event_index,time,kind,parent_lifetime,n_offspring,
// cluster_size,pop_size_after.
void write_path_csv_header(std::ostream& os);
void write_path_csv(std::ostream& os, std::uint64_t replicate, const PathRecord& path);

}  // namespace agebranch::simulate
