#pragma once

#include <cstddef>

namespace agebranch::renewal {

// Uniform time grid {0, h, ..., n h}.
struct TimeGrid {
  double h = 1e-3;
  std::size_t n = 1;

  // Throws Error(InvalidGrid) unless h > 0, T > 0 and T / h is an integer
  // (to 1e-9 relative).
  static TimeGrid make(double h, double T);

  double horizon() const { return h * static_cast<double>(n); }
  double t(std::size_t i) const { return h * static_cast<double>(i); }
  // Index of the node equal to t; throws Error(InvalidGrid) if t is not a
  // node and Error(GridTooShort) if t lies beyond the horizon.
  std::size_t index_of(double t) const;
};

}  // namespace agebranch::renewal
