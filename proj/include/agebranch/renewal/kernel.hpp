#pragma once

#include <string>
#include <vector>

#include "agebranch/model/model_spec.hpp"
#include "agebranch/renewal/grid.hpp"

namespace agebranch::renewal {

// K(s) = int_s^inf m(x - s) G(dx), the mean offspring density at age s of
// a newborn. Closed form when m is constant, else adaptive quadrature.
double kernel_K(const model::ModelSpec& spec, double s);
// Same with m2 in place of m.
double kernel_K2(const model::ModelSpec& spec, double s);
// Kernels against an arbitrary lifespan law (used for immigrants).
double kernel_against(const model::ModelSpec& spec, const model::LifespanLaw& law, double s,
                      bool second_factorial);
std::vector<double> kernel_on_grid(const model::ModelSpec& spec, const model::LifespanLaw& law,
                                   const TimeGrid& grid, bool second_factorial);

// Lambda(theta) = int_0^inf e^{theta s} K(s) ds (+inf when divergent).
double malthus_transform(const model::ModelSpec& spec, double theta);

double rho1(const model::ModelSpec& spec);
// Throws Error(Supercritical) if rho1 >= 1 and Error(NoMalthusianRoot) if
// Lambda stays below 1 up to the exponential moment abscissa of G.
double alpha1(const model::ModelSpec& spec);

struct RenewalShape {
  double b;   // int s e^{alpha1 s} K(s) ds
  double a1;  // b^{-1} int e^{alpha1 s} (1 - G(s)) ds, 0 when b is infinite
};
RenewalShape a1(const model::ModelSpec& spec);
RenewalShape a1(const model::ModelSpec& spec, double alpha1_value);

struct ConditionReport {
  double rho1;
  double alpha1;
  double b;
  double a1;
  // e^{alpha1 t}(1 - G(t)) nonincreasing, the sufficient test for direct
  // Riemann integrability. When false only a warning is raised.
  bool dri_monotone;
  std::vector<std::string> warnings;
};
ConditionReport condition_report(const model::ModelSpec& spec);

}  // namespace agebranch::renewal
