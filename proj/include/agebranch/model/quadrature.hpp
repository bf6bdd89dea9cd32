#pragma once

#include <functional>
#include <vector>

namespace agebranch::model {

class LifespanLaw;

// Adaptive Gauss-Kronrod on [a, b], split at the given interior points.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const std::vector<double>& breaks = {}, double rel_tol = 1e-10);

// Integral of phi(x) G(dx) over (0, inf). The range is cut where the
// remaining mass of G drops below 1e-17.
double integrate_lifespan(const LifespanLaw& law, const std::function<double(double)>& phi,
                          const std::vector<double>& breaks = {}, double rel_tol = 1e-10);

}  // namespace agebranch::model
