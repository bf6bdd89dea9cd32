#include "agebranch/renewal/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "agebranch/error.hpp"
#include "agebranch/renewal/kernel.hpp"
#include "agebranch/renewal/volterra.hpp"
#include "field_march.hpp"

namespace agebranch::renewal {

namespace {

using model::ModelSpec;
using model::TestFunction;

double m_plus(const ModelSpec& s, double y) { return y > 0.0 ? s.m(y) : s.m_at_zero(); }
double m2_plus(const ModelSpec& s, double y) { return y > 0.0 ? s.m2(y) : s.m2_at_zero(); }

std::vector<double> sampled(const TimeGrid& grid, const std::function<double(double)>& fn) {
  std::vector<double> v(grid.n + 1);
  for (std::size_t i = 0; i <= grid.n; ++i) v[i] = fn(grid.t(i));
  return v;
}

std::vector<double> add(std::vector<double> a, const std::vector<double>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

std::vector<double> squares(std::vector<double> a) {
  for (double& v : a) v *= v;
  return a;
}

// Linear first-moment solution for a source S: pi (S = shifted mean) or Pi
// (S = shifted cumulative mean).
RenewalSolution first_moment(const ModelSpec& spec, const TestFunction& f, const TimeGrid& grid,
                             bool occupation, bool squares) {
  const auto& G = spec.lifespan;
  auto source = [&](const model::LifespanLaw& law) {
    return sampled(grid, [&](double t) {
      return occupation ? f.shifted_cumulative_mean(law, t) : f.shifted_mean(law, t);
    });
  };
  const auto K = kernel_on_grid(spec, G, grid, false);
  auto q = march_linear(K, source(G), grid.h);

  RenewalSolution sol;
  sol.grid = grid;
  const auto running = occupation ? f : TestFunction();
  const auto terminal = occupation ? Terminal() : Terminal(f);
  detail::LinearResult sq;
  if (squares) sq = detail::march_linear_field(spec, running, terminal, q, grid);
  sol.second = std::move(sq.sq);
  if (spec.immigration) {
    const auto& Gi = spec.immigration->lifespan();
    const auto Ki = kernel_on_grid(spec, Gi, grid, false);
    sol.imm_first = add(source(Gi), convolve(Ki, q, grid.h));
    sol.imm_second = std::move(sq.imm_sq);
  }
  sol.samples = q;

  auto sp = std::make_shared<const ModelSpec>(spec);
  auto qs = std::make_shared<const std::vector<double>>(std::move(q));
  const double h = grid.h;
  sol.field = [sp, qs, f, h, occupation](std::size_t n, double x) {
    const double t = h * static_cast<double>(n);
    const double direct =
        occupation ? f.cumulative(x) - f.cumulative(x - t) : f(x - t);
    return direct + convolve_at(x, n, h, [&](double y, double j) {
             return m_plus(*sp, y) * interpolate(*qs, j);
           });
  };
  return sol;
}

// Second-moment kernel from a first-moment solution (gamma from pi, Gamma
// from Pi).
RenewalSolution second_moment(const ModelSpec& spec, const RenewalSolution& first) {
  if (first.second.size() != first.samples.size())
    throw Error(ErrorCode::InvalidArgument, "first-moment solution lacks its square series");
  const auto& grid = first.grid;
  const double h = grid.h;
  const auto& G = spec.lifespan;
  const auto K = kernel_on_grid(spec, G, grid, false);
  const auto K2 = kernel_on_grid(spec, G, grid, true);
  const auto q = first.samples;
  const auto qq = squares(q);
  auto c = march_linear(K, add(convolve(K2, qq, h), convolve(K, first.second, h)), h);

  RenewalSolution sol;
  sol.grid = grid;
  if (spec.immigration) {
    const auto& Gi = spec.immigration->lifespan();
    const auto Ki = kernel_on_grid(spec, Gi, grid, false);
    const auto K2i = kernel_on_grid(spec, Gi, grid, true);
    sol.imm_first = add(convolve(K2i, qq, h), convolve(Ki, add(first.second, c), h));
  }
  sol.samples = c;

  auto sp = std::make_shared<const ModelSpec>(spec);
  auto qs = std::make_shared<const std::vector<double>>(q);
  auto ws = std::make_shared<const std::vector<double>>(add(first.second, c));
  sol.field = [sp, qs, ws, h](std::size_t n, double x) {
    return convolve_at(x, n, h, [&](double y, double j) {
      const double qj = interpolate(*qs, j);
      return m2_plus(*sp, y) * qj * qj + m_plus(*sp, y) * interpolate(*ws, j);
    });
  };
  return sol;
}

}  // namespace

double RenewalSolution::pair(std::size_t n, const std::vector<double>& sigma) const {
  double s = 0.0;
  for (double x : sigma) s += field(n, x);
  return s;
}

RenewalSolution solve_pi(const ModelSpec& spec, const TestFunction& f, const TimeGrid& grid,
                         bool squares) {
  return first_moment(spec, f, grid, false, squares);
}

RenewalSolution solve_gamma(const ModelSpec& spec, const RenewalSolution& pi) {
  return second_moment(spec, pi);
}

OccupationSolution solve_occupation(const ModelSpec& spec, const TestFunction& f,
                                    const TimeGrid& grid) {
  OccupationSolution out;
  out.Pi = first_moment(spec, f, grid, true, true);
  out.Gamma = second_moment(spec, out.Pi);

  const auto K = kernel_on_grid(spec, spec.lifespan, grid, false);
  const auto q = march_linear(
      K, sampled(grid, [&](double t) { return f.shifted_mean(spec.lifespan, t); }), grid.h);
  const auto iq = cumulative_integral(q, grid.h);
  double worst = 0.0;
  for (std::size_t n = 0; n <= grid.n; ++n) {
    const double Q = out.Pi.samples[n];
    worst = std::max(worst, std::abs(Q - iq[n]) / (1.0 + std::abs(Q)));
  }
  out.cross_check = worst;
  return out;
}

RenewalSolution solve_v(const ModelSpec& spec, const TestFunction& f,
                        const std::optional<Terminal>& terminal, const TimeGrid& grid) {
  const Terminal T = terminal.value_or(Terminal());
  auto r = detail::march_nonlinear(spec, f, T, grid);

  RenewalSolution sol;
  sol.grid = grid;
  if (spec.immigration) {
    sol.psi.resize(grid.n + 1);
    for (std::size_t n = 0; n <= grid.n; ++n)
      sol.psi[n] = spec.immigration->psi_from_laplace(r.Hi[n]);
    sol.imm_first = r.Hi;
  }
  const double h = grid.h;
  if (!T.has_table()) {
    std::vector<double> table(r.W.size());
    for (std::size_t k = 0; k < table.size(); ++k) table[k] = r.W[k] + r.C[k];
    sol.final_field = Terminal(T.step(), T.shift() + grid.horizon(), h, std::move(table));
  }
  sol.samples = r.H;

  auto sp = std::make_shared<const ModelSpec>(spec);
  auto hs = std::make_shared<const std::vector<double>>(std::move(r.H));
  sol.field = [sp, hs, f, T, h](std::size_t n, double x) {
    const double t = h * static_cast<double>(n);
    const double direct = T.left(x - t) + f.cumulative(x) - f.cumulative(x - t);
    return direct + convolve_at(x, n, h, [&](double y, double j) {
             const double z = interpolate(*hs, j);
             if (y > 0.0) return sp->alpha(y) * (1.0 - sp->offspring.pgf(y, z));
             return sp->alpha.limit_at_zero() * (1.0 - sp->offspring.pgf_at_zero(z));
           });
  };
  return sol;
}

RenewalSolution solve_u(const ModelSpec& spec, const TestFunction& f, const TimeGrid& grid) {
  return solve_v(spec, TestFunction(), Terminal(f), grid);
}

RenewalSolution solve_u(const ModelSpec& spec, const Terminal& f, const TimeGrid& grid) {
  return solve_v(spec, TestFunction(), f, grid);
}

double richardson_bar(const std::vector<double>& fine, const std::vector<double>& coarse) {
  double worst = 0.0;
  for (std::size_t i = 0; i < coarse.size() && 2 * i < fine.size(); ++i)
    worst = std::max(worst, std::abs(fine[2 * i] - coarse[i]));
  return worst / 3.0;
}

}  // namespace agebranch::renewal
