#include "agebranch/verify/report.hpp"

#include <cmath>
#include <limits>

namespace agebranch::verify {

std::string to_string(Gate g) {
  switch (g) {
    case Gate::ZScore: return "abs_z";
    case Gate::PValue: return "p_value";
    case Gate::RelativeBand: return "relative_band";
    case Gate::AbsoluteBand: return "absolute_band";
    case Gate::Diagnostic: return "diagnostic";
  }
  return "unknown";
}

double z_score(double estimate, double std_error, double target, double target_bar) {
  const double d = estimate - target;
  const double s = std::sqrt(std_error * std_error + target_bar * target_bar);
  if (s > 0.0) return d / s;
  if (d == 0.0) return 0.0;
  return d > 0.0 ? std::numeric_limits<double>::infinity()
                 : -std::numeric_limits<double>::infinity();
}

void decide(ComparisonReport& r, Gate gate, double threshold) {
  r.gate = gate;
  r.threshold = threshold;
  r.z = z_score(r.estimate, r.std_error, r.target, r.target_bar);
  switch (gate) {
    case Gate::ZScore: r.pass = std::abs(r.z) <= threshold; break;
    case Gate::PValue: r.pass = r.estimate > threshold; break;
    case Gate::RelativeBand:
      r.pass = r.target == 0.0 ? r.estimate == 0.0
                               : std::abs(r.estimate / r.target - 1.0) <= threshold;
      break;
    case Gate::AbsoluteBand: r.pass = std::abs(r.estimate - r.target) <= threshold; break;
    case Gate::Diagnostic: r.pass = true; break;
  }
}

ComparisonReport mean_report(std::string name, std::vector<double> raw, double target,
                             double target_bar, double threshold, std::uint64_t seed) {
  ComparisonReport r;
  r.name = std::move(name);
  const auto s = summarize(raw);
  r.estimate = s.mean;
  r.std_error = s.std_error();
  r.replicates = s.n;
  r.target = target;
  r.target_bar = target_bar;
  r.seed = seed;
  r.raw = std::move(raw);
  decide(r, Gate::ZScore, threshold);
  return r;
}

}  // namespace agebranch::verify
