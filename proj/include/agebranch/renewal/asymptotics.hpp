#pragma once

#include <functional>
#include <vector>

#include "agebranch/model/model_spec.hpp"
#include "agebranch/model/test_function.hpp"
#include "agebranch/renewal/grid.hpp"

namespace agebranch::renewal {

struct AsymptoticConstants {
  double rho1 = 0.0;
  double alpha1 = 0.0;
  double b = 0.0;
  double a1 = 0.0;
  // int_0^inf q, <G, Pi_inf f>, <G, (Pi_inf f)^2>.
  double Q_inf = 0.0;
  double P1 = 0.0;
  double P2 = 0.0;
  double a2 = 0.0;
  // Zero without immigration.
  double lln_constant = 0.0;
  double clt_variance = 0.0;
  // Tail plus discretization bar on Q_inf.
  double truncation_error = 0.0;
  std::function<double(double)> Pi_inf;
  std::function<double(double)> Gamma_inf;
};

// Throws Error(Supercritical), Error(NoMalthusianRoot), or
// Error(MissingMomentCondition) naming the missing moment.
AsymptoticConstants asymptotics(const model::ModelSpec& spec, const model::TestFunction& f);

struct ImmigrationMoments {
  double state_mean = 0.0;          // E <Y_t, f>
  double state_second = 0.0;        // E <Y_t, f>^2
  double occupation_mean = 0.0;     // E Z_t(f)
  double occupation_second = 0.0;   // E Z_t(f)^2
};

// Moments started from the atomic configuration sigma. t must be a node of
// the grid: Error(InvalidGrid) otherwise, Error(GridTooShort) past the
// horizon.
ImmigrationMoments immigration_moments(const model::ModelSpec& spec,
                                       const std::vector<double>& sigma,
                                       const model::TestFunction& f, double t,
                                       const TimeGrid& grid);

struct ErgodicLaplace {
  double value = 1.0;      // exp(-int_0^inf psi(u_s f) ds)
  double error_bar = 0.0;  // truncation tail plus discretization
  double cutoff = 0.0;     // time where the integral was truncated
  double h = 0.0;
  // psi(u_{t_n} f) on the nodes up to the cutoff, and the decay constant C
  // with psi(u_t f) <= C e^{-alpha1 t} past it.
  std::vector<double> psi;
  double decay_constant = 0.0;
  double alpha1 = 0.0;

  // exp(-int_0^t psi) for t on the grid below the cutoff.
  double finite_time(double t) const;
  // Bound on |finite_time(t) - value| from the decay constant.
  double bias_bound(double t) const;
};

// The horizon of grid is doubled until the mean integrand falls below
// tail_tol. Throws Error(MissingMomentCondition) when the immigrant
// lifespans lack the exponential moment at alpha1.
ErgodicLaplace ergodic_laplace(const model::ModelSpec& spec, const model::TestFunction& f,
                               const TimeGrid& grid, double tail_tol);

}  // namespace agebranch::renewal
