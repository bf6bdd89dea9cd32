#pragma once

#include <cstdint>
#include <vector>

#include "agebranch/model/model_spec.hpp"
#include "agebranch/model/test_function.hpp"
#include "agebranch/verify/report.hpp"

namespace agebranch::verify {

struct CheckOptions {
  std::uint64_t seed = 1;
  unsigned threads = 1;
  double sigma_threshold = 4.0;
  // p-value gates pass when p > alpha_level.
  double alpha_level = 1e-3;
  // Solver step; the horizon must be a multiple of 2h (the Richardson bar
  // re-solves with step 2h).
  double h = 1e-3;
};

// E exp(-<X_t, f>) from sigma against exp(-<sigma, u_t f> - int_0^t psi(u_s f) ds).
// Throws Error(InvalidArgument) when R < 100.
ComparisonReport check_laplace(const model::ModelSpec& spec, const std::vector<double>& sigma,
                               const model::TestFunction& f, double t, std::size_t R,
                               const CheckOptions& opt);

// First and second moments of <X_t, f> and Z_t(f), in that order:
// state_mean, state_second_moment, occupation_mean, occupation_second_moment.
std::vector<ComparisonReport> check_moments(const model::ModelSpec& spec,
                                            const std::vector<double>& sigma,
                                            const model::TestFunction& f, double t,
                                            std::size_t R, const CheckOptions& opt);

// E exp(-Z_t(f)) against exp(-<sigma, v_t f> - int_0^t psi(v_s f) ds).
ComparisonReport check_occupation_transform(const model::ModelSpec& spec,
                                            const std::vector<double>& sigma,
                                            const model::TestFunction& f, double t,
                                            std::size_t R, const CheckOptions& opt);

// ergodic_laplace against E exp(-<Y_t, f>) from Y_0 = 0, then a two-sample
// KS between <Y_t, f> and <Y_{2t}, f> on independent replicates. Requires
// t alpha1 >= min_decay.
std::vector<ComparisonReport> check_ergodic(const model::ModelSpec& spec,
                                            const model::TestFunction& f, double t_large,
                                            std::size_t R, const CheckOptions& opt,
                                            double tail_tol = 1e-10, double min_decay = 5.0);

// Mean of Z_t(f) / t from Y_0 = 0 against the LLN constant. Diagnostics hold
// Z_s / s at checkpoints along the path with the most events.
ComparisonReport check_lln(const model::ModelSpec& spec, const model::TestFunction& f, double t,
                           std::size_t R, const CheckOptions& opt);

// W = (Z_t(f) - E Z_t(f)) / sqrt(t) from Y_0 = 0: sample variance within
// `band` of the CLT variance, |mean W| <= threshold sqrt(V / R), and a KS
// distance against N(0, V) reported as a diagnostic.
std::vector<ComparisonReport> check_clt(const model::ModelSpec& spec,
                                        const model::TestFunction& f, double t, std::size_t R,
                                        const CheckOptions& opt, double band = 0.10);

// Parent selection frequencies over N draws against alpha weights.
ComparisonReport check_selection(const model::ScalarField& alpha,
                                 const std::vector<double>& lifetimes, std::size_t N,
                                 const CheckOptions& opt);

ComparisonReport check_lifespan_sampler(const model::LifespanLaw& law, std::size_t N,
                                        const CheckOptions& opt);
ComparisonReport check_offspring_sampler(const model::OffspringLaw& law, double x, std::size_t N,
                                         const CheckOptions& opt);
// Birth gaps of a frozen population of n particles under a constant rate
// against Exp(rate n).
ComparisonReport check_thinning(double rate, std::size_t n, std::size_t N,
                                const CheckOptions& opt);

}  // namespace agebranch::verify
