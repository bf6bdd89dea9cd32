#include "field_march.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>

#include "agebranch/error.hpp"

namespace agebranch::renewal::detail {

namespace {

constexpr std::array<double, 5> kGLx = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                        0.5384693101056831, 0.9061798459386640};
constexpr std::array<double, 5> kGLw = {0.2369268850561891, 0.4786286704993665,
                                        0.5688888888888889, 0.4786286704993665,
                                        0.2369268850561891};

// int_a^b (x - a) G(dx) by Gauss-Legendre on the smooth pieces of the density.
double first_offset_moment(const model::LifespanLaw& law, double a, double b) {
  std::vector<double> cuts{a};
  for (double p : law.breakpoints())
    if (p > a && p < b) cuts.push_back(p);
  cuts.push_back(b);
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    const double half = 0.5 * (cuts[i + 1] - cuts[i]);
    for (std::size_t j = 0; j < kGLx.size(); ++j) {
      const double x = mid + half * kGLx[j];
      acc += kGLw[j] * half * (x - a) * law.density(x);
    }
  }
  return acc;
}

}  // namespace

PanelIntegrator::PanelIntegrator(const model::LifespanLaw& law, double dx, std::size_t nx)
    : law_(&law), dx_(dx), wl_(nx - 1), wr_(nx - 1), node_(nx, 0.0) {
  for (std::size_t k = 0; k + 1 < nx; ++k) {
    const auto [l, r] = linear_weights(dx * static_cast<double>(k), dx * static_cast<double>(k + 1));
    wl_[k] = l;
    wr_[k] = r;
    node_[k] += l;
    node_[k + 1] += r;
  }
  node_[nx - 1] += law.survival(dx * static_cast<double>(nx - 1));
}

std::pair<double, double> PanelIntegrator::linear_weights(double a, double b) const {
  if (!(b > a)) return {0.0, 0.0};
  const double mass = law_->partial_mass(a, b);
  if (mass == 0.0) return {0.0, 0.0};
  double offset;
  // Near the origin the moment formula has no cancellation and copes with
  // singular densities.
  if (a < 4.0 * (b - a))
    offset = law_->partial_first_moment(a, b) - a * mass;
  else
    offset = first_offset_moment(*law_, a, b);
  const double wr = std::clamp(offset / (b - a), 0.0, mass);
  return {mass - wr, wr};
}

std::vector<SplitPanel> locate_splits(const Terminal& terminal, double t, double dx,
                                      std::size_t nx) {
  std::map<std::size_t, SplitPanel> panels;
  auto panel = [&](std::size_t k) -> SplitPanel& {
    auto it = panels.find(k);
    if (it != panels.end()) return it->second;
    SplitPanel sp;
    sp.k = k;
    sp.start_value = terminal.right(dx * static_cast<double>(k) - t);
    sp.end_value = terminal.left(dx * static_cast<double>(k + 1) - t);
    return panels.emplace(k, sp).first->second;
  };
  for (std::size_t i = 0; i < terminal.jump_count(); ++i) {
    const double p = terminal.jump(i) + t;
    if (p < 0.0) continue;
    const double r = p / dx;
    const double kr = std::round(r);
    if (std::abs(r - kr) <= 1e-9 * std::max(1.0, r)) {
      const auto K = static_cast<std::size_t>(kr);
      if (K >= 1 && K <= nx - 1) panel(K - 1).end_value = terminal.left_at_jump(i);
      if (K + 1 <= nx - 1) panel(K).start_value = terminal.right_at_jump(i);
    } else {
      const auto k = static_cast<std::size_t>(std::floor(r));
      if (k + 1 > nx - 1) continue;
      panel(k).cuts.push_back({p, terminal.left_at_jump(i), terminal.right_at_jump(i)});
    }
  }
  std::vector<SplitPanel> out;
  out.reserve(panels.size());
  for (auto& [k, sp] : panels) {
    std::sort(sp.cuts.begin(), sp.cuts.end(),
              [](const auto& a, const auto& b) { return a.pos < b.pos; });
    out.push_back(std::move(sp));
  }
  return out;
}

std::size_t field_nodes(const model::ModelSpec& spec, double dx) {
  double top = spec.lifespan.upper_bound(1e-16);
  if (spec.immigration) top = std::max(top, spec.immigration->lifespan().upper_bound(1e-16));
  return static_cast<std::size_t>(std::ceil(top / dx)) + 2;
}

bool same_law(const model::LifespanLaw& a, const model::LifespanLaw& b) {
  return a.describe() == b.describe();
}

namespace {

// Per-step terminal and running-cost contributions on the x nodes.
struct StepData {
  std::vector<double> T;  // terminal(x_k - t)
  std::vector<double> C;  // C(x_k) - C((x_k - t)^+)
  std::vector<SplitPanel> splits;
};

void fill_step(StepData& d, const Terminal& terminal, const model::TestFunction& running,
               double t, double dx, std::size_t nx) {
  d.T.assign(nx, 0.0);
  d.C.assign(nx, 0.0);
  const bool term = !terminal.is_zero();
  const bool run = !running.is_zero();
  for (std::size_t k = 1; k < nx; ++k) {
    const double x = dx * static_cast<double>(k);
    if (term) d.T[k] = terminal.left(x - t);
    if (run) d.C[k] = running.cumulative(x) - running.cumulative(x - t);
  }
  d.splits = term ? locate_splits(terminal, t, dx, nx) : std::vector<SplitPanel>{};
}

}  // namespace

NonlinearResult march_nonlinear(const model::ModelSpec& spec, const model::TestFunction& running,
                                const Terminal& terminal, const TimeGrid& grid) {
  const double h = grid.h;
  const std::size_t nx = field_nodes(spec, h);
  const PanelIntegrator PG(spec.lifespan, h, nx);
  std::optional<PanelIntegrator> own_imm;
  const PanelIntegrator* PI = nullptr;
  if (spec.immigration) {
    if (same_law(spec.lifespan, spec.immigration->lifespan())) {
      PI = &PG;
    } else {
      own_imm.emplace(spec.immigration->lifespan(), h, nx);
      PI = &*own_imm;
    }
  }

  const bool fast = spec.alpha.is_constant() && spec.offspring.is_x_independent();
  std::vector<double> alpha_k(nx);
  for (std::size_t k = 1; k < nx; ++k) alpha_k[k] = spec.alpha(h * static_cast<double>(k));
  const double alpha0 = spec.alpha.limit_at_zero();
  // phi at node k (k = 0 means 0+).
  auto phi = [&](std::size_t k, double z) {
    if (k == 0) return alpha0 * (1.0 - spec.offspring.pgf_at_zero(z));
    return alpha_k[k] * (1.0 - spec.offspring.pgf(h * static_cast<double>(k), z));
  };

  NonlinearResult res;
  res.H.resize(grid.n + 1);
  if (PI) res.Hi.resize(grid.n + 1);
  std::vector<double> W(nx, 0.0), B(nx, 0.0), E(nx, 0.0);
  StepData sd;

  auto comb = [](double T, double R) { return std::exp(-(T + R)); };

  // t = 0: V = terminal.
  {
    fill_step(sd, terminal, running, 0.0, h, nx);
    auto nodeval = [&](std::size_t k) { return std::exp(-sd.T[k]); };
    auto rval = [&](std::size_t) { return 0.0; };
    auto integrate = [&](const PanelIntegrator& P) {
      double s = 0.0;
      const auto& c = P.node_weights();
      for (std::size_t k = 0; k < nx; ++k) s += c[k] * nodeval(k);
      return s + split_correction(P, sd.splits, h, nodeval, rval, comb);
    };
    res.H[0] = integrate(PG);
    if (PI) res.Hi[0] = integrate(*PI);
  }

  constexpr int kMaxIter = 50;
  constexpr double kTol = 1e-12;
  for (std::size_t n = 1; n <= grid.n; ++n) {
    const double t = grid.t(n);
    fill_step(sd, terminal, running, t, h, nx);
    const double Hprev = res.H[n - 1];
    // Shift the previous integral part one node to the right.
    if (fast) {
      const double half = 0.5 * h * phi(1, Hprev);
      for (std::size_t k = nx - 1; k >= 1; --k) B[k] = W[k - 1] + half;
    } else {
      for (std::size_t k = nx - 1; k >= 1; --k) B[k] = W[k - 1] + 0.5 * h * phi(k - 1, Hprev);
    }
    B[0] = 0.0;
    // A_k = T + C + B; the current-step half panel is added inside H(z).
    for (std::size_t k = 0; k < nx; ++k) B[k] += sd.T[k] + sd.C[k];

    double z = n >= 2 ? std::clamp(2.0 * Hprev - res.H[n - 2], 0.0, 1.0) : Hprev;

    std::function<double(double, const PanelIntegrator&)> H_of;
    if (fast) {
      for (std::size_t k = 0; k < nx; ++k) E[k] = std::exp(-B[k]);
      auto tail_sum = [&](const PanelIntegrator& P) {
        const auto& c = P.node_weights();
        double s = 0.0;
        for (std::size_t k = 1; k < nx; ++k) s += c[k] * E[k];
        return s;
      };
      const double SG = tail_sum(PG);
      const double SI = (PI && PI != &PG) ? tail_sum(*PI) : SG;
      H_of = [&, SG, SI](double zz, const PanelIntegrator& P) {
        const double inc = 0.5 * h * phi(1, zz);
        const double f = std::exp(-inc);
        const double base = P.node_weights()[0] * E[0] + f * (&P == &PG ? SG : SI);
        auto nodeval = [&](std::size_t k) { return k == 0 ? E[0] : E[k] * f; };
        auto rval = [&](std::size_t k) {
          return k == 0 ? B[0] - sd.T[0] : B[k] - sd.T[k] + inc;
        };
        return base + split_correction(P, sd.splits, h, nodeval, rval, comb);
      };
    } else {
      H_of = [&](double zz, const PanelIntegrator& P) {
        for (std::size_t k = 1; k < nx; ++k) E[k] = std::exp(-(B[k] + 0.5 * h * phi(k, zz)));
        E[0] = std::exp(-B[0]);
        const auto& c = P.node_weights();
        double s = 0.0;
        for (std::size_t k = 0; k < nx; ++k) s += c[k] * E[k];
        auto nodeval = [&](std::size_t k) { return E[k]; };
        auto rval = [&](std::size_t k) {
          return k == 0 ? B[0] - sd.T[0] : B[k] - sd.T[k] + 0.5 * h * phi(k, zz);
        };
        return s + split_correction(P, sd.splits, h, nodeval, rval, comb);
      };
    }

    bool converged = false;
    for (int it = 0; it < kMaxIter; ++it) {
      const double next = H_of(z, PG);
      const double diff = std::abs(next - z);
      z = next;
      if (diff <= kTol) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw Error(ErrorCode::NonConvergentStep,
                  "fixed-point iteration did not converge at t = " + std::to_string(t) +
                      "; reduce the time step");
    res.H[n] = z;
    if (PI) res.Hi[n] = PI == &PG ? z : H_of(z, *PI);

    for (std::size_t k = 1; k < nx; ++k)
      W[k] = B[k] - sd.T[k] - sd.C[k] + 0.5 * h * phi(k, z);
    W[0] = 0.0;
    if (n == grid.n) res.C = sd.C;
  }
  if (grid.n == 0) res.C.assign(nx, 0.0);
  res.W = std::move(W);
  return res;
}

LinearResult march_linear_field(const model::ModelSpec& spec, const model::TestFunction& running,
                                const Terminal& terminal, const std::vector<double>& driver,
                                const TimeGrid& grid) {
  const double h = grid.h;
  const std::size_t nx = field_nodes(spec, h);
  const PanelIntegrator PG(spec.lifespan, h, nx);
  std::optional<PanelIntegrator> own_imm;
  const PanelIntegrator* PI = nullptr;
  if (spec.immigration) {
    if (same_law(spec.lifespan, spec.immigration->lifespan())) {
      PI = &PG;
    } else {
      own_imm.emplace(spec.immigration->lifespan(), h, nx);
      PI = &*own_imm;
    }
  }
  std::vector<double> mk(nx);
  mk[0] = spec.m_at_zero();
  for (std::size_t k = 1; k < nx; ++k) mk[k] = spec.m(h * static_cast<double>(k));

  LinearResult res;
  res.sq.resize(grid.n + 1);
  if (PI) res.imm_sq.resize(grid.n + 1);
  std::vector<double> L(nx, 0.0), P(nx, 0.0);
  StepData sd;
  auto comb = [](double T, double R) { return (T + R) * (T + R); };

  for (std::size_t n = 0; n <= grid.n; ++n) {
    fill_step(sd, terminal, running, grid.t(n), h, nx);
    if (n > 0) {
      const double dn = driver[n], dp = driver[n - 1];
      for (std::size_t k = nx - 1; k >= 1; --k)
        L[k] = L[k - 1] + 0.5 * h * (mk[k] * dn + mk[k - 1] * dp);
      L[0] = 0.0;
    }
    for (std::size_t k = 0; k < nx; ++k) P[k] = sd.T[k] + sd.C[k] + L[k];
    auto nodeval = [&](std::size_t k) { return P[k] * P[k]; };
    auto rval = [&](std::size_t k) { return P[k] - sd.T[k]; };
    auto integrate = [&](const PanelIntegrator& I) {
      const auto& c = I.node_weights();
      double s = 0.0;
      for (std::size_t k = 0; k < nx; ++k) s += c[k] * P[k] * P[k];
      return s + split_correction(I, sd.splits, h, nodeval, rval, comb);
    };
    res.sq[n] = integrate(PG);
    if (PI) res.imm_sq[n] = PI == &PG ? res.sq[n] : integrate(*PI);
  }
  return res;
}

}  // namespace agebranch::renewal::detail
