#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "agebranch/verify/stats.hpp"

namespace agebranch::verify {

// How the verdict of a report is decided.
enum class Gate {
  ZScore,        // |z| <= threshold
  PValue,        // p = estimate > threshold
  RelativeBand,  // |estimate / target - 1| <= threshold
  AbsoluteBand,  // |estimate - target| <= threshold
  Diagnostic,    // always passes
};

std::string to_string(Gate g);

struct ComparisonReport {
  std::string name;
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t replicates = 0;
  double target = 0.0;
  double target_bar = 0.0;
  // (estimate - target) / sqrt(std_error^2 + target_bar^2); 0 when both
  // sides agree exactly with no spread.
  double z = 0.0;
  Gate gate = Gate::ZScore;
  double threshold = 4.0;
  bool pass = true;
  std::uint64_t seed = 0;
  // Wall clock; kept out of serialized output so runs stay byte-identical.
  double seconds = 0.0;
  std::vector<std::pair<std::string, double>> diagnostics;
  // Per-replicate statistic behind the estimate.
  std::vector<double> raw;
};

double z_score(double estimate, double std_error, double target, double target_bar);

// Fills z and the verdict for the given gate.
void decide(ComparisonReport& r, Gate gate, double threshold);

// Report for a replicate mean against an analytic target, gated on |z|.
ComparisonReport mean_report(std::string name, std::vector<double> raw, double target,
                             double target_bar, double threshold, std::uint64_t seed);

}  // namespace agebranch::verify
