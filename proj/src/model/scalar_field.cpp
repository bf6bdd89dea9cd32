#include "agebranch/model/scalar_field.hpp"

#include <algorithm>
#include <cmath>

#include "agebranch/error.hpp"

namespace agebranch::model {

ScalarField ScalarField::constant(double value) {
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::InvalidArgument, "constant field must be finite");
  }
  return ScalarField(Constant{value});
}

ScalarField ScalarField::piecewise_linear(std::vector<Knot> knots) {
  if (knots.empty()) {
    throw Error(ErrorCode::InvalidArgument, "piecewise linear field needs a knot");
  }
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (!std::isfinite(knots[i].x) || !std::isfinite(knots[i].value)) {
      throw Error(ErrorCode::InvalidArgument, "knots must be finite");
    }
    if (knots[i].x <= 0.0) {
      throw Error(ErrorCode::InvalidArgument, "knot abscissae must be > 0");
    }
    if (i > 0 && knots[i].x <= knots[i - 1].x) {
      throw Error(ErrorCode::InvalidArgument,
                  "knot abscissae must be strictly increasing");
    }
  }
  return ScalarField(PiecewiseLinear{std::move(knots)});
}

double ScalarField::left_extrapolation(double x) const {
  const auto& k = std::get<PiecewiseLinear>(rep_).knots;
  if (k.size() == 1) return k[0].value;
  const double slope = (k[1].value - k[0].value) / (k[1].x - k[0].x);
  const double v = k[0].value + slope * (x - k[0].x);
  // Clamp only where extrapolation leaves the knot range, so negative knot
  // values are still visible to validation.
  return k[0].value >= 0.0 ? std::max(v, 0.0) : v;
}

double ScalarField::operator()(double x) const {
  if (!(x > 0.0)) return 0.0;
  if (const auto* c = std::get_if<Constant>(&rep_)) return c->value;
  const auto& k = std::get<PiecewiseLinear>(rep_).knots;
  if (x <= k.front().x) return left_extrapolation(x);
  if (x >= k.back().x) return k.back().value;
  auto it = std::upper_bound(k.begin(), k.end(), x,
                             [](double v, const Knot& kn) { return v < kn.x; });
  const Knot& hi = *it;
  const Knot& lo = *(it - 1);
  const double w = (x - lo.x) / (hi.x - lo.x);
  return lo.value + w * (hi.value - lo.value);
}

double ScalarField::limit_at_zero() const {
  if (const auto* c = std::get_if<Constant>(&rep_)) return c->value;
  return left_extrapolation(0.0);
}

double ScalarField::sup_norm() const {
  if (const auto* c = std::get_if<Constant>(&rep_)) return std::abs(c->value);
  double s = std::abs(limit_at_zero());
  for (const auto& kn : std::get<PiecewiseLinear>(rep_).knots) {
    s = std::max(s, std::abs(kn.value));
  }
  return s;
}

double ScalarField::min_value() const {
  if (const auto* c = std::get_if<Constant>(&rep_)) return c->value;
  double s = limit_at_zero();
  for (const auto& kn : std::get<PiecewiseLinear>(rep_).knots) {
    s = std::min(s, kn.value);
  }
  return s;
}

bool ScalarField::is_constant() const { return constant_value().has_value(); }

std::optional<double> ScalarField::constant_value() const {
  if (const auto* c = std::get_if<Constant>(&rep_)) return c->value;
  const auto& k = std::get<PiecewiseLinear>(rep_).knots;
  for (const auto& kn : k) {
    if (kn.value != k.front().value) return std::nullopt;
  }
  return k.front().value;
}

std::vector<double> ScalarField::breakpoints() const {
  std::vector<double> out;
  const auto* pl = std::get_if<PiecewiseLinear>(&rep_);
  if (pl == nullptr) return out;
  const auto& k = pl->knots;
  if (k.size() >= 2 && k[0].value >= 0.0) {
    const double slope = (k[1].value - k[0].value) / (k[1].x - k[0].x);
    if (slope > 0.0) {
      const double zero = k[0].x - k[0].value / slope;
      if (zero > 0.0) out.push_back(zero);
    }
  }
  for (const auto& kn : k) out.push_back(kn.x);
  return out;
}

}  // namespace agebranch::model
