#include "agebranch/renewal/volterra.hpp"

#include <algorithm>

namespace agebranch::renewal {

std::vector<double> march_linear(const std::vector<double>& K, const std::vector<double>& S,
                                 double h) {
  const std::size_t N = S.size();
  std::vector<double> c(N, 0.0);
  if (N == 0) return c;
  c[0] = S[0];
  const double denom = 1.0 - 0.5 * h * K[0];
  for (std::size_t n = 1; n < N; ++n) {
    double acc = 0.5 * K[n] * c[0];
    for (std::size_t k = 1; k < n; ++k) acc += K[k] * c[n - k];
    c[n] = (S[n] + h * acc) / denom;
  }
  return c;
}

std::vector<double> convolve(const std::vector<double>& A, const std::vector<double>& B,
                             double h) {
  const std::size_t N = std::min(A.size(), B.size());
  std::vector<double> out(N, 0.0);
  for (std::size_t n = 1; n < N; ++n) {
    double acc = 0.5 * (A[0] * B[n] + A[n] * B[0]);
    for (std::size_t k = 1; k < n; ++k) acc += A[k] * B[n - k];
    out[n] = h * acc;
  }
  return out;
}

std::vector<double> cumulative_integral(const std::vector<double>& y, double h) {
  std::vector<double> out(y.size(), 0.0);
  for (std::size_t i = 1; i < y.size(); ++i) out[i] = out[i - 1] + 0.5 * h * (y[i - 1] + y[i]);
  return out;
}

double interpolate(const std::vector<double>& y, double index) {
  if (y.empty()) return 0.0;
  if (index <= 0.0) return y.front();
  const double last = static_cast<double>(y.size() - 1);
  if (index >= last) return y.back();
  const auto i = static_cast<std::size_t>(index);
  const double w = index - static_cast<double>(i);
  return w == 0.0 ? y[i] : (1.0 - w) * y[i] + w * y[i + 1];
}

}  // namespace agebranch::renewal
