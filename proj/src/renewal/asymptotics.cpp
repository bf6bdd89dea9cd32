#include "agebranch/renewal/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "agebranch/error.hpp"
#include "agebranch/model/quadrature.hpp"
#include "agebranch/renewal/kernel.hpp"
#include "agebranch/renewal/solvers.hpp"
#include "agebranch/renewal/volterra.hpp"

namespace agebranch::renewal {

namespace {

using model::ModelSpec;
using model::TestFunction;

std::vector<double> breaks_for(const ModelSpec& spec, const TestFunction& f) {
  auto b = spec.breakpoints();
  b.insert(b.end(), f.thresholds().begin(), f.thresholds().end());
  return b;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::MissingMomentCondition, what);
}

// int_0^T q plus the tail q(T) / alpha1, for a march with step h.
double q_integral(const ModelSpec& spec, const TestFunction& f, double h, std::size_t n,
                  double alpha1, double* tail_bound) {
  const TimeGrid g{h, n};
  const auto K = kernel_on_grid(spec, spec.lifespan, g, false);
  std::vector<double> S(n + 1);
  for (std::size_t i = 0; i <= n; ++i) S[i] = f.shifted_mean(spec.lifespan, g.t(i));
  const auto q = march_linear(K, S, h);
  const auto iq = cumulative_integral(q, h);
  if (tail_bound) {
    double c = 0.0;
    for (std::size_t i = n / 2; i <= n; ++i)
      c = std::max(c, std::abs(q[i]) * std::exp(alpha1 * g.t(i)));
    *tail_bound = c * std::exp(-alpha1 * g.horizon()) / alpha1;
  }
  return iq[n] + q[n] / alpha1;
}

}  // namespace

AsymptoticConstants asymptotics(const ModelSpec& spec, const TestFunction& f) {
  AsymptoticConstants out;
  out.rho1 = rho1(spec);
  out.alpha1 = alpha1(spec);
  const auto shape = a1(spec, out.alpha1);
  out.b = shape.b;
  out.a1 = shape.a1;

  const auto& G = spec.lifespan;
  if (spec.immigration) {
    require(std::isfinite(spec.immigration->exp_integral(out.alpha1)),
            "immigrant lifespans lack the exponential moment at alpha1");
    require(std::isfinite(spec.immigration->exp_square_integral(out.alpha1)),
            "immigrant clusters lack a square-integrable exponential moment at alpha1");
  }
  require(std::isfinite(G.exp_moment(2.0 * out.alpha1)),
          "lifespan law lacks the exponential moment at 2 alpha1");
  require(std::isfinite(spec.m2_sup()), "offspring second factorial moment unbounded");

  // Horizon where e^{-alpha1 T} = 1e-10, with the node count capped.
  const double T = std::min(std::log(1e10) / out.alpha1, 2000.0);
  std::size_t n = 20000;
  double h = T / static_cast<double>(n);
  if (h < 5e-3) {
    h = 5e-3;
    n = static_cast<std::size_t>(std::ceil(T / h / 2.0)) * 2;
  }
  double tail = 0.0;
  if (f.is_zero()) {
    out.Q_inf = 0.0;
  } else {
    // Richardson extrapolation of the second-order march; the correction
    // itself is kept as the discretization bar.
    const double fine = q_integral(spec, f, h, n, out.alpha1, &tail);
    const double coarse = q_integral(spec, f, 2.0 * h, n / 2, out.alpha1, nullptr);
    out.Q_inf = fine + (fine - coarse) / 3.0;
    out.truncation_error = tail + std::abs(fine - coarse) / 3.0;
  }

  auto sp = std::make_shared<const ModelSpec>(spec);
  const double Q = out.Q_inf;
  out.Pi_inf = [sp, f, Q](double x) { return f.cumulative(x) + Q * sp->M(x); };
  const auto breaks = breaks_for(spec, f);
  out.P1 = model::integrate_lifespan(G, out.Pi_inf, breaks);
  out.P2 = model::integrate_lifespan(
      G, [&](double x) { return out.Pi_inf(x) * out.Pi_inf(x); }, breaks);
  const double EM = model::integrate_lifespan(G, [&](double x) { return spec.M(x); }, breaks);
  const double EM2 = model::integrate_lifespan(G, [&](double x) { return spec.M2(x); }, breaks);
  out.a2 = (out.P1 * out.P1 * EM2 + out.P2 * EM) / (1.0 - out.rho1);
  const double c2 = out.P1 * out.P1, c1 = out.P2 + out.a2;
  out.Gamma_inf = [sp, c2, c1](double x) { return c2 * sp->M2(x) + c1 * sp->M(x); };

  if (spec.immigration) {
    const auto& L = *spec.immigration;
    out.lln_constant = L.mean_integral(out.Pi_inf, breaks);
    out.clt_variance = L.mean_integral(out.Gamma_inf, breaks) + L.square_integral(out.Pi_inf, breaks);
  }
  return out;
}

ImmigrationMoments immigration_moments(const ModelSpec& spec, const std::vector<double>& sigma,
                                       const TestFunction& f, double t, const TimeGrid& grid) {
  const std::size_t n = grid.index_of(t);
  ImmigrationMoments out;
  if (n == 0) {
    for (double x : sigma) out.state_mean += f(x);
    out.state_second = out.state_mean * out.state_mean;
    return out;
  }
  const TimeGrid g{grid.h, n};
  const auto pi = solve_pi(spec, f, g);
  const auto gamma = solve_gamma(spec, pi);
  const auto occ = solve_occupation(spec, f, g);
  out.state_mean = pi.pair(n, sigma);
  out.occupation_mean = occ.Pi.pair(n, sigma);
  double state_var = gamma.pair(n, sigma);
  double occ_var = occ.Gamma.pair(n, sigma);
  if (spec.immigration) {
    const auto& L = *spec.immigration;
    const double r1 = L.rate() * L.mean_size();
    const double r2 = L.rate() * L.size_second_factorial();
    out.state_mean += r1 * cumulative_integral(pi.imm_first, g.h)[n];
    out.occupation_mean += r1 * cumulative_integral(occ.Pi.imm_first, g.h)[n];
    // A cluster arriving at time t - s contributes its own second moment.
    auto cluster_second = [&](const RenewalSolution& first, const RenewalSolution& second) {
      std::vector<double> w(n + 1);
      for (std::size_t i = 0; i <= n; ++i) {
        const double p = first.imm_first[i];
        w[i] = r1 * (second.imm_first[i] + first.imm_second[i]) + r2 * p * p;
      }
      return cumulative_integral(w, g.h)[n];
    };
    state_var += cluster_second(pi, gamma);
    occ_var += cluster_second(occ.Pi, occ.Gamma);
  }
  out.state_second = out.state_mean * out.state_mean + state_var;
  out.occupation_second = out.occupation_mean * out.occupation_mean + occ_var;
  return out;
}

double ErgodicLaplace::finite_time(double t) const {
  if (psi.empty()) return value;
  const TimeGrid g{h, psi.size() - 1};
  const std::size_t n = g.index_of(t);
  return std::exp(-cumulative_integral(psi, h)[n]);
}

double ErgodicLaplace::bias_bound(double t) const {
  if (decay_constant == 0.0) return 0.0;
  return value * decay_constant * std::exp(-alpha1 * t) / alpha1;
}

ErgodicLaplace ergodic_laplace(const ModelSpec& spec, const TestFunction& f, const TimeGrid& grid,
                               double tail_tol) {
  ErgodicLaplace out;
  out.h = grid.h;
  if (f.is_zero() || !spec.immigration) return out;
  const auto& L = *spec.immigration;
  out.alpha1 = alpha1(spec);
  require(std::isfinite(L.exp_integral(out.alpha1)),
          "immigrant lifespans lack the exponential moment at alpha1");
  const double r1 = L.rate() * L.mean_size();

  // Bound on the integrand: psi(u_s f) <= rate E[N] <G', pi_s f>.
  TimeGrid g = grid;
  std::vector<double> bound;
  std::size_t cut = 0;
  for (;;) {
    const auto pi = solve_pi(spec, f, g, false);
    bound = pi.imm_first;
    for (double& b : bound) b *= r1;
    std::size_t last = 0;
    for (std::size_t i = 0; i <= g.n; ++i)
      if (std::abs(bound[i]) >= tail_tol) last = i;
    cut = last + 1;
    if (cut % 2) ++cut;
    if (2 * cut <= g.n) break;
    if (g.horizon() > 1e5)
      throw Error(ErrorCode::GridTooShort, "ergodic integrand does not decay below the tail tolerance");
    g.n *= 2;
  }
  const TimeGrid gc{grid.h, cut};
  const auto u = solve_u(spec, f, gc);
  out.psi = u.psi;
  out.cutoff = gc.horizon();
  const double Psi = cumulative_integral(u.psi, gc.h)[cut];
  out.value = std::exp(-Psi);

  double C = 0.0;
  for (std::size_t i = cut / 2; i <= cut; ++i)
    C = std::max(C, std::abs(bound[i]) * std::exp(out.alpha1 * g.t(i)));
  out.decay_constant = C;
  const double tail = C * std::exp(-out.alpha1 * out.cutoff) / out.alpha1;

  const auto coarse = solve_u(spec, f, TimeGrid{2.0 * gc.h, cut / 2});
  const double Psi2 = cumulative_integral(coarse.psi, 2.0 * gc.h)[cut / 2];
  out.error_bar = out.value * (tail + std::abs(Psi - Psi2) / 3.0);
  return out;
}

}  // namespace agebranch::renewal
