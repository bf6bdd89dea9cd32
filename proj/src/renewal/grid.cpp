#include "agebranch/renewal/grid.hpp"

#include <cmath>

#include "agebranch/error.hpp"

namespace agebranch::renewal {

TimeGrid TimeGrid::make(double h, double T) {
  if (!(h > 0.0) || !std::isfinite(h)) throw Error(ErrorCode::InvalidGrid, "step must be > 0");
  if (!(T > 0.0) || !std::isfinite(T)) {
    throw Error(ErrorCode::InvalidGrid, "horizon must be > 0");
  }
  const double r = T / h;
  const double n = std::round(r);
  if (n < 1.0 || std::abs(r - n) > 1e-9 * std::max(1.0, r)) {
    throw Error(ErrorCode::InvalidGrid, "horizon must be a whole number of steps");
  }
  return TimeGrid{h, static_cast<std::size_t>(n)};
}

std::size_t TimeGrid::index_of(double t) const {
  if (t < 0.0) throw Error(ErrorCode::InvalidGrid, "negative time");
  const double r = t / h;
  const double k = std::round(r);
  if (std::abs(r - k) > 1e-9 * std::max(1.0, r)) {
    throw Error(ErrorCode::InvalidGrid, "time is not a grid node");
  }
  if (k > static_cast<double>(n)) throw Error(ErrorCode::GridTooShort, "time beyond grid horizon");
  return static_cast<std::size_t>(k);
}

}  // namespace agebranch::renewal
