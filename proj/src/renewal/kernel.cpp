#include "agebranch/renewal/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "agebranch/error.hpp"
#include "agebranch/model/quadrature.hpp"

namespace agebranch::renewal {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Constant value of m (or m2) when neither alpha nor the offspring law
// depends on the remaining lifetime.
std::optional<double> constant_rate(const model::ModelSpec& spec, bool second) {
  const auto a = spec.alpha.constant_value();
  if (!a || !spec.offspring.is_x_independent()) return std::nullopt;
  return *a * (second ? spec.offspring.second_factorial(1.0) : spec.offspring.mean(1.0));
}

// int_0^inf m(y) E_G[(zeta - y)^order e^{theta (zeta - y)}; zeta > y] dy, which
// is int_0^inf s^order e^{theta s} K(s) ds after swapping the integrals.
double weighted_kernel_integral(const model::ModelSpec& spec, double theta, int order) {
  const auto& g = spec.lifespan;
  auto breaks = spec.breakpoints();
  for (double b : g.breakpoints()) breaks.push_back(b);
  const double top = g.upper_bound(1e-17);
  const double q50 = g.quantile(0.5);
  for (double k = 1.0; k * q50 < top; k *= 2.0) breaks.push_back(k * q50);
  return model::integrate(
      [&](double y) { return spec.m(y) * g.shifted_exp_moment(theta, y, order); }, 0.0, top,
      breaks, 1e-12);
}

}  // namespace

double kernel_against(const model::ModelSpec& spec, const model::LifespanLaw& law, double s,
                      bool second) {
  if (s < 0.0) return 0.0;
  if (auto c = constant_rate(spec, second)) return *c * law.survival(s);
  auto rate = [&spec, second](double y) { return second ? spec.m2(y) : spec.m(y); };
  if (s == 0.0) return model::integrate_lifespan(law, rate, spec.breakpoints());
  const double top = law.upper_bound(1e-17);
  if (s >= top) return 0.0;
  std::vector<double> breaks = spec.breakpoints();
  for (double b : law.breakpoints()) breaks.push_back(b - s);
  const double q50 = law.quantile(0.5);
  for (double k = 1.0; k * q50 < top; k *= 2.0) breaks.push_back(k * q50 - s);
  return model::integrate([&](double y) { return rate(y) * law.density(y + s); }, 0.0, top - s,
                          breaks, 1e-11);
}

double kernel_K(const model::ModelSpec& spec, double s) {
  return kernel_against(spec, spec.lifespan, s, false);
}

double kernel_K2(const model::ModelSpec& spec, double s) {
  return kernel_against(spec, spec.lifespan, s, true);
}

std::vector<double> kernel_on_grid(const model::ModelSpec& spec, const model::LifespanLaw& law,
                                   const TimeGrid& grid, bool second) {
  std::vector<double> k(grid.n + 1);
  for (std::size_t i = 0; i <= grid.n; ++i) k[i] = kernel_against(spec, law, grid.t(i), second);
  return k;
}

double malthus_transform(const model::ModelSpec& spec, double theta) {
  const auto& g = spec.lifespan;
  if (theta >= g.moment_abscissa()) return kInf;
  if (auto c = constant_rate(spec, false)) {
    if (theta == 0.0) return *c * g.mean();
    const double mg = g.exp_moment(theta);
    if (!std::isfinite(mg)) return kInf;
    return *c * (mg - 1.0) / theta;
  }
  return weighted_kernel_integral(spec, theta, 0);
}

double rho1(const model::ModelSpec& spec) { return malthus_transform(spec, 0.0); }

double alpha1(const model::ModelSpec& spec) {
  const double r = rho1(spec);
  if (r >= 1.0) throw Error(ErrorCode::Supercritical, "rho1 >= 1");
  if (!(r > 0.0)) throw Error(ErrorCode::NoMalthusianRoot, "reproduction kernel vanishes");
  const double abscissa = spec.lifespan.moment_abscissa();
  double lo = 0.0;
  double hi = 0.25 / spec.lifespan.mean();
  bool found = false;
  for (int k = 0; k < 200 && !found; ++k) {
    if (hi >= abscissa) break;
    const double v = malthus_transform(spec, hi);
    if (v >= 1.0) {
      found = true;
    } else {
      lo = hi;
      hi *= 2.0;
    }
  }
  if (!found && std::isfinite(abscissa)) {
    // Creep toward the abscissa where the transform may still reach 1.
    for (int j = 1; j <= 60 && !found; ++j) {
      const double th = abscissa * (1.0 - std::ldexp(1.0, -j));
      if (th <= lo) continue;
      if (malthus_transform(spec, th) >= 1.0) {
        hi = th;
        found = true;
      } else {
        lo = th;
      }
    }
  }
  if (!found) {
    throw Error(ErrorCode::NoMalthusianRoot,
                "transform of the kernel stays below 1 up to the moment abscissa");
  }
  while (hi - lo > 1e-13 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    (malthus_transform(spec, mid) < 1.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

RenewalShape a1(const model::ModelSpec& spec) { return a1(spec, alpha1(spec)); }

RenewalShape a1(const model::ModelSpec& spec, double th) {
  const auto& g = spec.lifespan;
  double b;
  if (auto c = constant_rate(spec, false)) {
    const double mg = g.exp_moment(th);
    const double dmg = g.exp_moment_derivative(th);
    b = (std::isfinite(mg) && std::isfinite(dmg)) ? *c * (dmg * th - (mg - 1.0)) / (th * th)
                                                  : kInf;
  } else {
    b = th < g.moment_abscissa() ? weighted_kernel_integral(spec, th, 1) : kInf;
  }
  if (!std::isfinite(b)) return {kInf, 0.0};
  // int_0^inf e^{th s}(1 - G(s)) ds = (E e^{th zeta} - 1) / th.
  const double survival_transform = (g.exp_moment(th) - 1.0) / th;
  return {b, survival_transform / b};
}

ConditionReport condition_report(const model::ModelSpec& spec) {
  ConditionReport rep{};
  rep.rho1 = rho1(spec);
  rep.alpha1 = alpha1(spec);
  const auto shape = a1(spec, rep.alpha1);
  rep.b = shape.b;
  rep.a1 = shape.a1;
  const auto& g = spec.lifespan;
  const double top = g.upper_bound(1e-12);
  rep.dri_monotone = true;
  double prev = kInf;
  for (int i = 0; i <= 4000; ++i) {
    const double t = top * i / 4000.0;
    const double v = std::exp(rep.alpha1 * t) * g.survival(t);
    if (v > prev * (1.0 + 1e-12)) {
      rep.dri_monotone = false;
      break;
    }
    prev = v;
  }
  if (!rep.dri_monotone) {
    rep.warnings.push_back(
        "e^{alpha1 t}(1 - G(t)) is not monotone; direct Riemann integrability not verified");
  }
  if (!std::isfinite(rep.b)) rep.warnings.push_back("b is infinite; a1 set to 0");
  return rep;
}

}  // namespace agebranch::renewal
