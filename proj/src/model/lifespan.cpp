#include "agebranch/model/lifespan.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "agebranch/error.hpp"

namespace agebranch::model {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

LifespanLaw::LifespanLaw(Variant law) : law_(law) {
  std::visit(Overloaded{
                 [](const Exponential& e) {
                   if (!(e.rate > 0.0) || !std::isfinite(e.rate)) {
                     throw Error(ErrorCode::InvalidArgument,
                                 "exponential rate must be > 0");
                   }
                 },
                 [](const Gamma& g) {
                   if (!(g.shape > 0.0) || !(g.scale > 0.0) ||
                       !std::isfinite(g.shape) || !std::isfinite(g.scale)) {
                     throw Error(ErrorCode::InvalidArgument,
                                 "gamma shape and scale must be > 0");
                   }
                 },
                 [](const Uniform& u) {
                   if (!(u.lo > 0.0) || !(u.hi > u.lo) || !std::isfinite(u.hi)) {
                     throw Error(ErrorCode::InvalidArgument,
                                 "uniform lifespan needs 0 < a < b");
                   }
                 },
             },
             law_);
}

double LifespanLaw::cdf(double x) const {
  if (!(x > 0.0)) return 0.0;
  if (std::isinf(x)) return 1.0;
  return std::visit(Overloaded{
                        [x](const Exponential& e) { return -std::expm1(-e.rate * x); },
                        [x](const Gamma& g) {
                          return boost::math::gamma_p(g.shape, x / g.scale);
                        },
                        [x](const Uniform& u) {
                          return std::clamp((x - u.lo) / (u.hi - u.lo), 0.0, 1.0);
                        },
                    },
                    law_);
}

double LifespanLaw::survival(double x) const {
  if (!(x > 0.0)) return 1.0;
  if (std::isinf(x)) return 0.0;
  return std::visit(Overloaded{
                        [x](const Exponential& e) { return std::exp(-e.rate * x); },
                        [x](const Gamma& g) { return boost::math::gamma_q(g.shape, x / g.scale); },
                        [x](const Uniform& u) {
                          return std::clamp((u.hi - x) / (u.hi - u.lo), 0.0, 1.0);
                        },
                    },
                    law_);
}

double LifespanLaw::density(double x) const {
  if (!(x > 0.0)) return 0.0;
  return std::visit(Overloaded{
                        [x](const Exponential& e) { return e.rate * std::exp(-e.rate * x); },
                        [x](const Gamma& g) {
                          return boost::math::gamma_p_derivative(g.shape, x / g.scale) /
                                 g.scale;
                        },
                        [x](const Uniform& u) {
                          return (x > u.lo && x <= u.hi) ? 1.0 / (u.hi - u.lo) : 0.0;
                        },
                    },
                    law_);
}

double LifespanLaw::sample(RandomStream& rng) const {
  return std::visit(Overloaded{
                        [&rng](const Exponential& e) { return rng.exponential(e.rate); },
                        [&rng](const Gamma& g) { return g.scale * rng.gamma(g.shape); },
                        [&rng](const Uniform& u) {
                          // (0,1] keeps the draw inside (lo, hi].
                          return u.lo + (u.hi - u.lo) * rng.uniform_open_closed();
                        },
                    },
                    law_);
}

double LifespanLaw::mean() const {
  return std::visit(Overloaded{
                        [](const Exponential& e) { return 1.0 / e.rate; },
                        [](const Gamma& g) { return g.shape * g.scale; },
                        [](const Uniform& u) { return 0.5 * (u.lo + u.hi); },
                    },
                    law_);
}

double LifespanLaw::second_moment() const {
  return std::visit(Overloaded{
                        [](const Exponential& e) { return 2.0 / (e.rate * e.rate); },
                        [](const Gamma& g) {
                          return g.shape * (g.shape + 1.0) * g.scale * g.scale;
                        },
                        [](const Uniform& u) {
                          return (u.hi * u.hi + u.hi * u.lo + u.lo * u.lo) / 3.0;
                        },
                    },
                    law_);
}

double LifespanLaw::quantile(double p) const {
  if (p <= 0.0) return 0.0;
  return std::visit(Overloaded{
                        [p](const Exponential& e) { return -std::log1p(-p) / e.rate; },
                        [p](const Gamma& g) {
                          return g.scale * boost::math::gamma_q_inv(g.shape, 1.0 - p);
                        },
                        [p](const Uniform& u) { return u.lo + p * (u.hi - u.lo); },
                    },
                    law_);
}

double LifespanLaw::upper_bound(double tail) const {
  return std::visit(Overloaded{
                        [tail](const Exponential& e) { return -std::log(tail) / e.rate; },
                        [tail](const Gamma& g) {
                          return g.scale * boost::math::gamma_q_inv(g.shape, tail);
                        },
                        [](const Uniform& u) { return u.hi; },
                    },
                    law_);
}

double LifespanLaw::exp_moment(double theta) const {
  if (theta == 0.0) return 1.0;
  return std::visit(Overloaded{
                        [theta](const Exponential& e) {
                          return theta < e.rate ? e.rate / (e.rate - theta) : kInf;
                        },
                        [theta](const Gamma& g) {
                          const double r = 1.0 - theta * g.scale;
                          return r > 0.0 ? std::pow(r, -g.shape) : kInf;
                        },
                        [theta](const Uniform& u) {
                          const double w = u.hi - u.lo;
                          // e^{theta lo} (e^{theta w} - 1) / (theta w)
                          return std::exp(theta * u.lo) * std::expm1(theta * w) / (theta * w);
                        },
                    },
                    law_);
}

double LifespanLaw::exp_moment_derivative(double theta) const {
  return std::visit(Overloaded{
                        [theta](const Exponential& e) {
                          const double r = e.rate - theta;
                          return r > 0.0 ? e.rate / (r * r) : kInf;
                        },
                        [theta](const Gamma& g) {
                          const double r = 1.0 - theta * g.scale;
                          return r > 0.0 ? g.shape * g.scale * std::pow(r, -g.shape - 1.0)
                                         : kInf;
                        },
                        [theta](const Uniform& u) {
                          const double w = u.hi - u.lo;
                          if (theta == 0.0) return 0.5 * (u.lo + u.hi);
                          const double eb = std::exp(theta * u.hi);
                          const double ea = std::exp(theta * u.lo);
                          return ((u.hi * eb - u.lo * ea) / theta - (eb - ea) / (theta * theta)) /
                                 w;
                        },
                    },
                    law_);
}

double LifespanLaw::shifted_exp_moment(double theta, double y, int order) const {
  y = std::max(y, 0.0);
  if (theta >= moment_abscissa()) return kInf;
  return std::visit(
      Overloaded{
          [=](const Exponential& e) {
            const double r = e.rate - theta;
            return e.rate * std::exp(-e.rate * y) / (order == 0 ? r : r * r);
          },
          [=](const Gamma& g) {
            const double r = 1.0 - theta * g.scale;
            const double sc = g.scale / r;
            const double x = y / sc;
            const double pre = std::exp(-theta * y) * std::pow(r, -g.shape);
            const double q = boost::math::gamma_q(g.shape, x);
            if (order == 0) return pre * q;
            // k sc Q(k+1, x) - y Q(k, x) with Q(k+1, x) = Q(k, x) + x^k e^{-x} / k!.
            const double lead = y > 0.0 ? std::exp(g.shape * std::log(x) - x -
                                                   std::lgamma(g.shape))
                                        : 0.0;
            return pre * sc * ((g.shape - x) * q + lead);
          },
          [=](const Uniform& u) {
            if (y >= u.hi) return 0.0;
            const double w = u.hi - u.lo;
            const double u0 = std::max(y, u.lo) - y, u1 = u.hi - y;
            if (order == 0) {
              if (theta == 0.0) return (u1 - u0) / w;
              return std::exp(theta * u0) * std::expm1(theta * (u1 - u0)) / (theta * w);
            }
            if (std::abs(theta) * u1 < 1e-3) {
              const double p2 = u1 * u1 - u0 * u0, p3 = u1 * u1 * u1 - u0 * u0 * u0;
              const double p4 = u1 * u1 * u1 * u1 - u0 * u0 * u0 * u0;
              return (p2 / 2.0 + theta * p3 / 3.0 + theta * theta * p4 / 8.0) / w;
            }
            auto F = [theta](double v) {
              return std::exp(theta * v) * (theta * v - 1.0) / (theta * theta);
            };
            return (F(u1) - F(u0)) / w;
          },
      },
      law_);
}

double LifespanLaw::moment_abscissa() const {
  return std::visit(Overloaded{
                        [](const Exponential& e) { return e.rate; },
                        [](const Gamma& g) { return 1.0 / g.scale; },
                        [](const Uniform&) { return kInf; },
                    },
                    law_);
}

double LifespanLaw::partial_mass(double a, double b) const {
  if (!(b > a)) return 0.0;
  if (std::isinf(b)) return survival(a);
  if (const auto* e = std::get_if<Exponential>(&law_)) {
    // Difference of survivals keeps precision deep in the tail.
    const double sa = std::exp(-e->rate * std::max(a, 0.0));
    const double sb = std::exp(-e->rate * std::max(b, 0.0));
    return sa - sb;
  }
  if (const auto* g = std::get_if<Gamma>(&law_)) {
    const double xa = std::max(a, 0.0) / g->scale;
    const double xb = std::max(b, 0.0) / g->scale;
    if (xa > g->shape) {
      return boost::math::gamma_q(g->shape, xa) - boost::math::gamma_q(g->shape, xb);
    }
    return boost::math::gamma_p(g->shape, xb) - boost::math::gamma_p(g->shape, xa);
  }
  return cdf(b) - cdf(a);
}

double LifespanLaw::partial_first_moment(double a, double b) const {
  if (!(b > a)) return 0.0;
  a = std::max(a, 0.0);
  b = std::max(b, 0.0);
  return std::visit(
      Overloaded{
          [a, b](const Exponential& e) {
            // d/dx [-(x + 1/r) e^{-r x}] = r x e^{-r x}
            const double r = e.rate;
            const double tail_b = std::isinf(b) ? 0.0 : (b + 1.0 / r) * std::exp(-r * b);
            return (a + 1.0 / r) * std::exp(-r * a) - tail_b;
          },
          [a, b](const Gamma& g) {
            const double k1 = g.shape + 1.0;
            const double xa = a / g.scale;
            const double xb = b / g.scale;
            const double m = g.shape * g.scale;
            if (std::isinf(b)) return m * boost::math::gamma_q(k1, xa);
            if (xa > k1) {
              return m * (boost::math::gamma_q(k1, xa) - boost::math::gamma_q(k1, xb));
            }
            return m * (boost::math::gamma_p(k1, xb) - boost::math::gamma_p(k1, xa));
          },
          [a, b](const Uniform& u) {
            const double lo = std::clamp(a, u.lo, u.hi);
            const double hi = std::clamp(b, u.lo, u.hi);
            return 0.5 * (hi * hi - lo * lo) / (u.hi - u.lo);
          },
      },
      law_);
}

std::vector<double> LifespanLaw::breakpoints() const {
  if (const auto* u = std::get_if<Uniform>(&law_)) return {u->lo, u->hi};
  return {};
}

std::string LifespanLaw::describe() const {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&os](const Exponential& e) { os << "Exponential(rate=" << e.rate << ")"; },
                 [&os](const Gamma& g) {
                   os << "Gamma(shape=" << g.shape << ", scale=" << g.scale << ")";
                 },
                 [&os](const Uniform& u) { os << "Uniform(" << u.lo << ", " << u.hi << ")"; },
             },
             law_);
  return os.str();
}

}  // namespace agebranch::model
