#pragma once

#include <filesystem>
#include <vector>

#include "agebranch/cli/config.hpp"
#include "agebranch/verify/report.hpp"

namespace agebranch::cli {

// Exit codes of run().
inline constexpr int kExitPass = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitGateFailed = 2;

// Each writes its files under `out` (created if needed).
void run_constants(const ExperimentConfig& c, const std::filesystem::path& out);
void run_solve(const ExperimentConfig& c, const std::filesystem::path& out);
void run_simulate(const ExperimentConfig& c, const std::filesystem::path& out, unsigned threads);

struct CheckOutcome {
  std::string label;
  std::vector<verify::ComparisonReport> reports;
};
std::vector<CheckOutcome> run_checks(const ExperimentConfig& c, unsigned threads);
// reports.json plus one (replicate, value) CSV per report.
void write_reports(const std::vector<CheckOutcome>& outcomes, const std::filesystem::path& out);

int run(int argc, char** argv);

}  // namespace agebranch::cli
