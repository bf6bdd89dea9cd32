#pragma once

#include <string>
#include <variant>
#include <vector>

#include "agebranch/model/random.hpp"

namespace agebranch::model {

// Continuous lifespan distribution G on (0, inf).
class LifespanLaw {
 public:
  struct Exponential {
    double rate;
  };
  struct Gamma {
    double shape;
    double scale;
  };
  struct Uniform {
    double lo;
    double hi;
  };
  using Variant = std::variant<Exponential, Gamma, Uniform>;

  // Throws Error(InvalidArgument) on non-positive parameters or lo >= hi.
  explicit LifespanLaw(Variant law);

  static LifespanLaw exponential(double rate) { return LifespanLaw(Exponential{rate}); }
  static LifespanLaw gamma(double shape, double scale) {
    return LifespanLaw(Gamma{shape, scale});
  }
  static LifespanLaw uniform(double lo, double hi) { return LifespanLaw(Uniform{lo, hi}); }

  double cdf(double x) const;
  double survival(double x) const;
  double density(double x) const;
  double sample(RandomStream& rng) const;

  double mean() const;
  double second_moment() const;
  // Inverse cdf for p in [0,1).
  double quantile(double p) const;
  // Point beyond which the remaining mass is below `tail`.
  double upper_bound(double tail) const;

  // Integral of e^{theta x} G(dx); +inf when divergent.
  double exp_moment(double theta) const;
  // Integral of x e^{theta x} G(dx); +inf when divergent.
  double exp_moment_derivative(double theta) const;
  // Integral of (x - y)^order e^{theta (x - y)} over x > y, for order 0 or 1.
  // Finite below the moment abscissa.
  double shifted_exp_moment(double theta, double y, int order) const;
  // Supremum of theta with exp_moment(theta) finite (+inf for bounded support).
  double moment_abscissa() const;

  // G((a, b]) and the integral of x over (a, b] against G.
  double partial_mass(double a, double b) const;
  double partial_first_moment(double a, double b) const;

  // Points where the density is discontinuous.
  std::vector<double> breakpoints() const;

  std::string describe() const;
  const Variant& rep() const { return law_; }

 private:
  Variant law_;
};

}  // namespace agebranch::model
