#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "agebranch/model/model_spec.hpp"
#include "agebranch/model/test_function.hpp"
#include "agebranch/renewal/grid.hpp"
#include "agebranch/renewal/terminal.hpp"

namespace agebranch::renewal {

// Grid samples of a scalar renewal unknown plus a field evaluator.
struct RenewalSolution {
  TimeGrid grid;
  // <G, field_n>: q for pi and Pi, the <G, .> scalar of gamma and Gamma,
  // <G, exp(-field_n)> for u and v.
  std::vector<double> samples;
  // <G, field_n^2> (pi and Pi only).
  std::vector<double> second;
  // Same reductions against the immigrant lifespan law (immigration only):
  // <G', field_n>, <G', field_n^2>, and psi(field_n) for u and v.
  std::vector<double> imm_first;
  std::vector<double> imm_second;
  std::vector<double> psi;
  // Richardson error estimate for the samples, filled on request.
  std::optional<double> error_bar;

  std::function<double(std::size_t, double)> field;
  // u_t f or v_t as a Terminal for the last node (u and v only).
  std::optional<Terminal> final_field;

  double at(std::size_t n, double x) const { return field(n, x); }
  // <sigma, field_n> for an atomic configuration.
  double pair(std::size_t n, const std::vector<double>& sigma) const;
};

// With squares = false the second and imm_second series are left empty
// (they cost a full field march and only feed solve_gamma).
RenewalSolution solve_pi(const model::ModelSpec& spec, const model::TestFunction& f,
                         const TimeGrid& grid, bool squares = true);
// Requires pi from solve_pi on the same grid.
RenewalSolution solve_gamma(const model::ModelSpec& spec, const RenewalSolution& pi);

struct OccupationSolution {
  RenewalSolution Pi;
  RenewalSolution Gamma;
  // max_n |Q_n - int_0^{t_n} q| / (1 + |Q_n|) against the pi march.
  double cross_check;
};
OccupationSolution solve_occupation(const model::ModelSpec& spec, const model::TestFunction& f,
                                    const TimeGrid& grid);

// Throws Error(NonConvergentStep) when a step fails to converge.
RenewalSolution solve_u(const model::ModelSpec& spec, const model::TestFunction& f,
                        const TimeGrid& grid);
RenewalSolution solve_u(const model::ModelSpec& spec, const Terminal& f, const TimeGrid& grid);
RenewalSolution solve_v(const model::ModelSpec& spec, const model::TestFunction& f,
                        const std::optional<Terminal>& terminal, const TimeGrid& grid);

// max over shared nodes of |fine - coarse| / 3, where coarse was solved with
// twice the step. Second-order error estimate for the fine samples.
double richardson_bar(const std::vector<double>& fine, const std::vector<double>& coarse);

}  // namespace agebranch::renewal
