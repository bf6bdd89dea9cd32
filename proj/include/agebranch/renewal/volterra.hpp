#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace agebranch::renewal {

// Trapezoidal march of c(t) = S(t) + int_0^t K(s) c(t - s) ds on nodes
// t_n = n h. K and S are sampled on the same nodes.
std::vector<double> march_linear(const std::vector<double>& K, const std::vector<double>& S,
                                 double h);

// Trapezoidal (A * B)(t_n) = int_0^{t_n} A(s) B(t_n - s) ds for every node.
std::vector<double> convolve(const std::vector<double>& A, const std::vector<double>& B,
                             double h);

// Running trapezoid integral from 0.
std::vector<double> cumulative_integral(const std::vector<double>& y, double h);

// Linear interpolation at a fractional node index (clamped to the range).
double interpolate(const std::vector<double>& y, double index);

// int_0^{t_n ^ x} F(x - s, (t_n - s) / h) ds by the trapezoid rule on the
// grid s = k h, with a partial last panel when x < t_n is off-grid. F gets
// the remaining age and a fractional node index; age 0 stands for 0+.
template <class F>
double convolve_at(double x, std::size_t n, double h, F&& integrand) {
  if (!(x > 0.0) || n == 0) return 0.0;
  const double tn = h * static_cast<double>(n);
  const bool clipped = x < tn;
  const double upper = clipped ? x : tn;
  double r = upper / h;
  double kr = std::round(r);
  std::size_t K;
  bool partial;
  if (std::abs(r - kr) <= 1e-9 * std::max(1.0, r)) {
    K = static_cast<std::size_t>(kr);
    partial = false;
  } else {
    K = static_cast<std::size_t>(std::floor(r));
    partial = true;
  }
  double acc = 0.0;
  auto age = [&](std::size_t k) {
    const double y = x - h * static_cast<double>(k);
    return (!partial && k == K && clipped) ? 0.0 : y;
  };
  if (K > 0) {
    acc += 0.5 * integrand(age(0), static_cast<double>(n));
    for (std::size_t k = 1; k < K; ++k) acc += integrand(age(k), static_cast<double>(n - k));
    acc += 0.5 * integrand(age(K), static_cast<double>(n - K));
    acc *= h;
  }
  if (partial) {
    const double w = upper - h * static_cast<double>(K);
    acc += 0.5 * w *
           (integrand(age(K), static_cast<double>(n - K)) +
            integrand(0.0, (tn - upper) / h));
  }
  return acc;
}

}  // namespace agebranch::renewal
