#include "agebranch/model/test_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "agebranch/error.hpp"

namespace agebranch::model {

TestFunction::TestFunction(std::vector<double> thresholds, std::vector<double> values)
    : thresholds_(std::move(thresholds)), values_(std::move(values)) {
  if (values_.size() != thresholds_.size() + 1) {
    throw Error(ErrorCode::InvalidArgument,
                "test function needs one more value than thresholds");
  }
  for (std::size_t j = 0; j < thresholds_.size(); ++j) {
    if (!(thresholds_[j] > 0.0) || !std::isfinite(thresholds_[j]) ||
        (j > 0 && !(thresholds_[j] > thresholds_[j - 1]))) {
      throw Error(ErrorCode::InvalidArgument,
                  "thresholds must be positive and strictly increasing");
    }
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "values must be finite");
  }
}

double TestFunction::operator()(double x) const {
  if (!(x > 0.0)) return 0.0;
  // First threshold >= x: bins are closed on the right.
  auto it = std::lower_bound(thresholds_.begin(), thresholds_.end(), x);
  return values_[static_cast<std::size_t>(it - thresholds_.begin())];
}

double TestFunction::right_limit(double x) const {
  if (x < 0.0) return 0.0;
  auto it = std::upper_bound(thresholds_.begin(), thresholds_.end(), x);
  return values_[static_cast<std::size_t>(it - thresholds_.begin())];
}

double TestFunction::cumulative(double x) const {
  if (!(x > 0.0)) return 0.0;
  double acc = 0.0;
  double lo = 0.0;
  for (std::size_t j = 0; j < thresholds_.size(); ++j) {
    const double hi = thresholds_[j];
    if (x <= hi) return acc + values_[j] * (x - lo);
    acc += values_[j] * (hi - lo);
    lo = hi;
  }
  return acc + values_.back() * (x - lo);
}

double TestFunction::sup_norm() const {
  double s = 0.0;
  for (double v : values_) s = std::max(s, std::abs(v));
  return s;
}

double TestFunction::min_value() const {
  return *std::min_element(values_.begin(), values_.end());
}

bool TestFunction::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

std::optional<double> TestFunction::constant_value() const {
  for (double v : values_) {
    if (v != values_.front()) return std::nullopt;
  }
  return values_.front();
}

std::vector<double> TestFunction::jumps() const {
  std::vector<double> out;
  if (values_.front() != 0.0) out.push_back(0.0);
  for (std::size_t j = 0; j < thresholds_.size(); ++j) {
    if (values_[j] != values_[j + 1]) out.push_back(thresholds_[j]);
  }
  return out;
}

double TestFunction::shifted_mean(const LifespanLaw& g, double t) const {
  double acc = 0.0;
  double lo = t;
  for (std::size_t j = 0; j < thresholds_.size(); ++j) {
    const double hi = t + thresholds_[j];
    if (values_[j] != 0.0) acc += values_[j] * g.partial_mass(lo, hi);
    lo = hi;
  }
  if (values_.back() != 0.0) acc += values_.back() * g.survival(lo);
  return acc;
}

double TestFunction::shifted_cumulative_mean(const LifespanLaw& g, double t) const {
  if (!(t > 0.0)) return 0.0;
  std::vector<double> kinks{t};
  for (double a : thresholds_) {
    kinks.push_back(a);
    kinks.push_back(a + t);
  }
  return expect_piecewise_linear(
      g, kinks, [this, t](double z) { return cumulative(z) - cumulative(z - t); });
}

TestFunction TestFunction::scaled(double c) const {
  std::vector<double> v = values_;
  for (auto& x : v) x *= c;
  return TestFunction(thresholds_, std::move(v));
}

double expect_piecewise_linear(const LifespanLaw& g, std::vector<double> kinks,
                               const std::function<double(double)>& p) {
  kinks.push_back(0.0);
  std::sort(kinks.begin(), kinks.end());
  kinks.erase(std::remove_if(kinks.begin(), kinks.end(), [](double k) { return k < 0.0; }),
              kinks.end());
  kinks.erase(std::unique(kinks.begin(), kinks.end()), kinks.end());
  double acc = 0.0;
  for (std::size_t i = 0; i < kinks.size(); ++i) {
    const double lo = kinks[i];
    const bool last = i + 1 == kinks.size();
    const double hi = last ? lo + 1.0 : kinks[i + 1];
    const double plo = p(lo);
    const double slope = (p(hi) - plo) / (hi - lo);
    const double right = last ? std::numeric_limits<double>::infinity() : hi;
    const double mass = last ? g.survival(lo) : g.partial_mass(lo, hi);
    const double first = g.partial_first_moment(lo, right);
    // P(z) = plo + slope (z - lo) on (lo, hi].
    acc += (plo - slope * lo) * mass + slope * first;
  }
  return acc;
}

}  // namespace agebranch::model
