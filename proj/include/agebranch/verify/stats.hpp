#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace agebranch::verify {

struct TestResult {
  double statistic;
  double p_value;
};

// Q(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_survival(double lambda);

// One-sample KS against a continuous cdf (Stephens' small-n correction).
TestResult ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf);
TestResult ks_two_sample(std::vector<double> a, std::vector<double> b);

// Pearson chi-square. Cells with expected probability 0 must have zero
// counts (otherwise p = 0). df = (#cells with positive probability) - 1.
TestResult chi_square(const std::vector<std::uint64_t>& observed,
                      const std::vector<double>& probabilities);

double normal_quantile(double p);
// Two-sided z equivalent of a p-value: Phi^{-1}(1 - p/2).
double z_from_p(double p);

struct Summary {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double std_error() const;
};

// Two-pass mean/variance in index order.
Summary summarize(const std::vector<double>& xs);

}  // namespace agebranch::verify
