#pragma once

#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace agebranch::model {

struct Knot {
  double x;
  double value;
};

// Nonnegative bounded function of a remaining lifetime. Evaluates to 0 for
// every x <= 0. PiecewiseLinear interpolates between knots, is flat to the
// right of the last knot, and extends the first segment linearly toward the
// origin (clamped at 0) to the left of the first knot.
class ScalarField {
 public:
  struct Constant {
    double value;
  };
  struct PiecewiseLinear {
    std::vector<Knot> knots;
  };

  ScalarField() : rep_(Constant{0.0}) {}

  static ScalarField constant(double value);
  // Throws Error(InvalidArgument) unless abscissae are > 0 and strictly
  // increasing. Negative values are accepted here and reported by
  // validate_model.
  static ScalarField piecewise_linear(std::vector<Knot> knots);

  double operator()(double x) const;
  // lim_{x -> 0+} of the field.
  double limit_at_zero() const;
  double sup_norm() const;
  double min_value() const;

  bool is_constant() const;
  std::optional<double> constant_value() const;
  // Abscissae where the field is not smooth (knots and the clamp point).
  std::vector<double> breakpoints() const;

  const std::variant<Constant, PiecewiseLinear>& rep() const { return rep_; }

 private:
  explicit ScalarField(std::variant<Constant, PiecewiseLinear> rep)
      : rep_(std::move(rep)) {}

  double left_extrapolation(double x) const;

  std::variant<Constant, PiecewiseLinear> rep_;
};

}  // namespace agebranch::model
