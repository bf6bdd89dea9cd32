#include "agebranch/verify/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <limits>

namespace agebranch::verify {

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 0.2) {
    // The alternating series converges slowly here; the theta-function form
    // of the cdf is fast: P(K <= l) = sqrt(2 pi)/l sum exp(-(2k-1)^2 pi^2/(8 l^2)).
    const double c = M_PI * M_PI / (8.0 * lambda * lambda);
    double s = 0.0;
    for (int k = 1; k <= 20; ++k) s += std::exp(-(2.0 * k - 1) * (2.0 * k - 1) * c);
    return 1.0 - std::sqrt(2.0 * M_PI) / lambda * s;
  }
  double s = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    s += (k % 2 == 1 ? term : -term);
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

TestResult ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  const double sn = std::sqrt(n);
  return {d, kolmogorov_survival((sn + 0.12 + 0.11 / sn) * d)};
}

TestResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    // Step past every copy of the smaller value so ties are handled.
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  return {d, kolmogorov_survival((ne + 0.12 + 0.11 / ne) * d)};
}

TestResult chi_square(const std::vector<std::uint64_t>& observed,
                      const std::vector<double>& probabilities) {
  double total = 0.0;
  for (auto o : observed) total += static_cast<double>(o);
  double stat = 0.0;
  int cells = 0;
  for (std::size_t k = 0; k < observed.size(); ++k) {
    const double p = k < probabilities.size() ? probabilities[k] : 0.0;
    if (p <= 0.0) {
      if (observed[k] > 0) return {std::numeric_limits<double>::infinity(), 0.0};
      continue;
    }
    ++cells;
    const double e = total * p;
    const double diff = static_cast<double>(observed[k]) - e;
    stat += diff * diff / e;
  }
  if (cells <= 1) return {0.0, 1.0};
  boost::math::chi_squared dist(cells - 1);
  return {stat, boost::math::cdf(boost::math::complement(dist, stat))};
}

double normal_quantile(double p) {
  return boost::math::quantile(boost::math::normal(), p);
}

double z_from_p(double p) {
  if (p >= 1.0) return 0.0;
  if (p <= 0.0) return std::numeric_limits<double>::infinity();
  return boost::math::quantile(boost::math::complement(boost::math::normal(), p / 2.0));
}

double Summary::std_error() const {
  return n > 0 ? std::sqrt(variance / static_cast<double>(n)) : 0.0;
}

Summary summarize(const std::vector<double>& xs) {
  Summary s;
  s.n = xs.size();
  if (s.n == 0) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(s.n);
  if (s.n > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.variance = ss / static_cast<double>(s.n - 1);
  }
  return s;
}

}  // namespace agebranch::verify
