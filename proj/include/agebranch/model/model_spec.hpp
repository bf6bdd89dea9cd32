#pragma once

#include <optional>
#include <string>
#include <vector>

#include "agebranch/model/immigration.hpp"
#include "agebranch/model/lifespan.hpp"
#include "agebranch/model/offspring.hpp"
#include "agebranch/model/scalar_field.hpp"

namespace agebranch::model {

struct ModelSpec {
  ScalarField alpha;
  OffspringLaw offspring;
  LifespanLaw lifespan;
  std::optional<ImmigrationLaw> immigration;

  // m(x) = alpha(x) g'(x, 1-) and m2(x) = alpha(x) g''(x, 1-); zero for x <= 0.
  double m(double x) const { return alpha(x) * offspring.mean(x); }
  double m2(double x) const { return alpha(x) * offspring.second_factorial(x); }
  double m_at_zero() const { return alpha.limit_at_zero() * offspring.mean_at_zero(); }
  double m2_at_zero() const {
    return alpha.limit_at_zero() * offspring.second_factorial_at_zero();
  }
  // Integrals of m and m2 over (0, x]; exact for the catalog (polynomial
  // pieces of degree <= 3).
  double M(double x) const;
  double M2(double x) const;

  // beta = sup_x alpha(x) g'(x, 1-).
  double beta() const;
  double m2_sup() const;
  // Merged kinks of alpha and the offspring law.
  std::vector<double> breakpoints() const;

  ModelSpec without_immigration() const {
    ModelSpec s = *this;
    s.immigration.reset();
    return s;
  }
};

struct Violation {
  std::string assumption;
  double value;
};

std::vector<Violation> validate_model(const ModelSpec& spec);

}  // namespace agebranch::model
