#include "agebranch/simulate/path.hpp"

#include <algorithm>
#include <ostream>

#include "agebranch/error.hpp"
#include "agebranch/format.hpp"

namespace agebranch::simulate {

namespace {

void check_time(const PathRecord& path, double t) {
  if (!(t >= 0.0) || t > path.horizon) {
    throw Error(ErrorCode::TimeOutOfRange, "time outside [0, horizon]");
  }
}

template <class F>
void for_each_particle(const PathRecord& path, double upto, F&& visit) {
  for (double x : path.initial) visit(0.0, x);
  for (const auto& e : path.events) {
    if (e.time > upto) break;
    for (double x : e.added) visit(e.time, e.time + x);
  }
}

}  // namespace

std::vector<double> state_at(const PathRecord& path, double t) {
  check_time(path, t);
  std::vector<double> out;
  for_each_particle(path, t, [&](double, double death) {
    if (death > t) out.push_back(death - t);
  });
  return out;
}

double snapshot(const PathRecord& path, double t, const model::TestFunction& f) {
  check_time(path, t);
  double acc = 0.0;
  for_each_particle(path, t, [&](double, double death) {
    if (death > t) acc += f(death - t);
  });
  return acc;
}

std::size_t population_size(const PathRecord& path, double t) {
  check_time(path, t);
  std::size_t n = 0;
  for_each_particle(path, t, [&](double, double death) { n += death > t ? 1 : 0; });
  return n;
}

double occupation(const PathRecord& path, const model::TestFunction& f) {
  return occupation(path, f, path.horizon);
}

double occupation(const PathRecord& path, const model::TestFunction& f, double upto) {
  check_time(path, upto);
  OccupationAccumulator acc(f);
  for_each_particle(path, upto,
                    [&](double birth, double death) { acc.add_particle(birth, death, upto); });
  return acc.value();
}

void OccupationAccumulator::add_particle(double birth, double death, double upto) {
  if (upto <= birth) return;
  value_ += f_.cumulative(death - birth) - f_.cumulative(std::max(death - upto, 0.0));
}

void OccupationAccumulator::add_interval(const model::Population& pop, double from, double to) {
  if (!(to > from)) return;
  for (const auto& p : pop.particles()) {
    if (p.death <= from) continue;
    value_ += f_.cumulative(p.death - from) - f_.cumulative(std::max(p.death - to, 0.0));
  }
}

void write_path_csv_header(std::ostream& os) {
  os << "replicate,event_index,time,kind,parent_lifetime,n_offspring,cluster_size,"
        "pop_size_after\n";
}

void write_path_csv(std::ostream& os, std::uint64_t replicate, const PathRecord& path) {
  for (std::size_t i = 0; i < path.events.size(); ++i) {
    const Event& e = path.events[i];
    const bool birth = e.kind == EventKind::Birth;
    os << replicate << ',' << i << ',' << fmt17(e.time) << ','
       << (birth ? "birth" : "immigration") << ',' << fmt17(birth ? e.parent_lifetime : 0.0)
       << ',' << (birth ? e.added.size() : 0) << ',' << (birth ? 0 : e.added.size()) << ','
       << e.size_after << '\n';
  }
}

}  // namespace agebranch::simulate
