#pragma once

#include <vector>

#include "agebranch/model/model_spec.hpp"
#include "agebranch/model/random.hpp"
#include "agebranch/model/test_function.hpp"

namespace testing {

using namespace agebranch::model;

// alpha = 1.5, P(2 offspring) = 0.25, Exp(1) lifespans, singleton
// Exp(1) immigrants at rate 0.3.
inline ModelSpec exp_model(bool with_immigration = true) {
  ModelSpec s{ScalarField::constant(1.5), OffspringLaw::zero_two(ScalarField::constant(0.25)),
              LifespanLaw::exponential(1.0), std::nullopt};
  if (with_immigration) {
    s.immigration = ImmigrationLaw(0.3, ImmigrationLaw::Singleton{LifespanLaw::exponential(1.0)});
  }
  return s;
}

// Small generator for property tests.
struct Gen {
  explicit Gen(std::uint64_t seed) : rng(seed) {}

  double uniform(double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

  // Random nonnegative field: constant or 1-4 increasing knots.
  ScalarField field() {
    if (rng.uniform() < 0.3) return ScalarField::constant(uniform(0.0, 2.0));
    const int n = 1 + static_cast<int>(uniform(0, 4));
    std::vector<Knot> k;
    double x = 0.0;
    for (int i = 0; i < n; ++i) {
      x += uniform(0.1, 2.0);
      k.push_back({x, uniform(0.0, 2.0)});
    }
    return ScalarField::piecewise_linear(k);
  }

  // Random nonnegative step function with up to 3 thresholds.
  TestFunction step(double top = 2.0) {
    const int n = static_cast<int>(uniform(0, 4));
    std::vector<double> a, v{uniform(0.0, top)};
    double x = 0.0;
    for (int i = 0; i < n; ++i) {
      x += uniform(0.2, 1.5);
      a.push_back(x);
      v.push_back(uniform(0.0, top));
    }
    return TestFunction(a, v);
  }

  LifespanLaw lifespan() {
    switch (static_cast<int>(uniform(0, 3))) {
      case 0: return LifespanLaw::exponential(uniform(1.2, 3.0));
      case 1: return LifespanLaw::gamma(uniform(0.6, 3.0), uniform(0.1, 0.3));
      default: {
        const double lo = uniform(0.1, 0.5);
        return LifespanLaw::uniform(lo, lo + uniform(0.3, 0.8));
      }
    }
  }

  // Subcritical model: m <= 1 and mean lifespan below 0.9.
  ModelSpec subcritical() {
    ModelSpec s{ScalarField::constant(1.0), OffspringLaw::zero_two(ScalarField::constant(0.25)),
                lifespan(), std::nullopt};
    if (rng.uniform() < 0.5) {
      std::vector<Knot> k{{uniform(0.2, 1.0), uniform(0.0, 1.0)}, {uniform(1.1, 2.0), uniform(0.0, 1.0)}};
      s.alpha = ScalarField::piecewise_linear(k);
    } else {
      s.alpha = ScalarField::constant(uniform(0.2, 1.0));
    }
    if (rng.uniform() < 0.5)
      s.offspring = OffspringLaw::zero_two(ScalarField::piecewise_linear(
          {{uniform(0.2, 1.0), uniform(0.0, 0.5)}, {uniform(1.1, 2.0), uniform(0.0, 0.5)}}));
    else
      s.offspring = OffspringLaw::zero_two(ScalarField::constant(uniform(0.0, 0.5)));
    return s;
  }

  RandomStream rng;
};

}  // namespace testing
