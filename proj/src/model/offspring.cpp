#include "agebranch/model/offspring.hpp"

#include <cmath>
#include <sstream>

#include "agebranch/error.hpp"

namespace agebranch::model {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double poisson_pmf(double mean, std::uint32_t k) {
  if (mean <= 0.0) return k == 0 ? 1.0 : 0.0;
  return std::exp(k * std::log(mean) - mean - std::lgamma(k + 1.0));
}

}  // namespace

OffspringLaw::OffspringLaw(Variant law) : law_(std::move(law)) {
  if (const auto* t = std::get_if<Table>(&law_)) {
    if (t->probabilities.empty()) {
      throw Error(ErrorCode::InvalidArgument, "offspring table is empty");
    }
    for (double p : t->probabilities) {
      if (!std::isfinite(p)) {
        throw Error(ErrorCode::InvalidArgument, "offspring table entries must be finite");
      }
    }
  }
}

double OffspringLaw::pgf(double x, double z) const {
  return std::visit(Overloaded{
                        [x, z](const ZeroTwo& l) {
                          const double p = l.p2(x);
                          return (1.0 - p) + p * z * z;
                        },
                        [x, z](const PoissonCount& l) { return std::exp(l.mean(x) * (z - 1.0)); },
                        [z](const Table& l) {
                          double acc = 0.0;
                          for (auto it = l.probabilities.rbegin(); it != l.probabilities.rend();
                               ++it) {
                            acc = acc * z + *it;
                          }
                          return acc;
                        },
                    },
                    law_);
}

double OffspringLaw::mean(double x) const {
  if (!(x > 0.0)) return 0.0;
  return std::visit(Overloaded{
                        [x](const ZeroTwo& l) { return 2.0 * l.p2(x); },
                        [x](const PoissonCount& l) { return l.mean(x); },
                        [](const Table& l) {
                          double m = 0.0;
                          for (std::size_t k = 1; k < l.probabilities.size(); ++k) {
                            m += k * l.probabilities[k];
                          }
                          return m;
                        },
                    },
                    law_);
}

double OffspringLaw::second_factorial(double x) const {
  if (!(x > 0.0)) return 0.0;
  return std::visit(Overloaded{
                        [x](const ZeroTwo& l) { return 2.0 * l.p2(x); },
                        [x](const PoissonCount& l) {
                          const double m = l.mean(x);
                          return m * m;
                        },
                        [](const Table& l) {
                          double m = 0.0;
                          for (std::size_t k = 2; k < l.probabilities.size(); ++k) {
                            m += static_cast<double>(k) * (k - 1.0) * l.probabilities[k];
                          }
                          return m;
                        },
                    },
                    law_);
}

std::uint32_t OffspringLaw::sample_count(double x, RandomStream& rng) const {
  return std::visit(
      Overloaded{
          [x, &rng](const ZeroTwo& l) -> std::uint32_t {
            return rng.uniform() < l.p2(x) ? 2u : 0u;
          },
          [x, &rng](const PoissonCount& l) -> std::uint32_t {
            return static_cast<std::uint32_t>(rng.poisson(l.mean(x)));
          },
          [&rng](const Table& l) -> std::uint32_t {
            const double u = rng.uniform();
            double cdf = 0.0;
            std::size_t last = 0;
            for (std::size_t k = 0; k < l.probabilities.size(); ++k) {
              if (l.probabilities[k] <= 0.0) continue;
              last = k;
              cdf += l.probabilities[k];
              if (u < cdf) return static_cast<std::uint32_t>(k);
            }
            // Rounding left a sliver above the cumulative sum.
            return static_cast<std::uint32_t>(last);
          },
      },
      law_);
}

double OffspringLaw::pgf_at_zero(double z) const {
  return std::visit(Overloaded{
                        [z](const ZeroTwo& l) {
                          const double p = l.p2.limit_at_zero();
                          return (1.0 - p) + p * z * z;
                        },
                        [z](const PoissonCount& l) {
                          return std::exp(l.mean.limit_at_zero() * (z - 1.0));
                        },
                        [this, z](const Table&) { return pgf(1.0, z); },
                    },
                    law_);
}

double OffspringLaw::mean_at_zero() const {
  return std::visit(Overloaded{
                        [](const ZeroTwo& l) { return 2.0 * l.p2.limit_at_zero(); },
                        [](const PoissonCount& l) { return l.mean.limit_at_zero(); },
                        [this](const Table&) { return mean(1.0); },
                    },
                    law_);
}

double OffspringLaw::second_factorial_at_zero() const {
  return std::visit(Overloaded{
                        [](const ZeroTwo& l) { return 2.0 * l.p2.limit_at_zero(); },
                        [](const PoissonCount& l) {
                          const double m = l.mean.limit_at_zero();
                          return m * m;
                        },
                        [this](const Table&) { return second_factorial(1.0); },
                    },
                    law_);
}

double OffspringLaw::mean_sup() const {
  return std::visit(Overloaded{
                        [](const ZeroTwo& l) { return 2.0 * l.p2.sup_norm(); },
                        [](const PoissonCount& l) { return l.mean.sup_norm(); },
                        [this](const Table&) { return std::abs(mean(1.0)); },
                    },
                    law_);
}

double OffspringLaw::second_factorial_sup() const {
  return std::visit(Overloaded{
                        [](const ZeroTwo& l) { return 2.0 * l.p2.sup_norm(); },
                        [](const PoissonCount& l) {
                          const double m = l.mean.sup_norm();
                          return m * m;
                        },
                        [this](const Table&) { return std::abs(second_factorial(1.0)); },
                    },
                    law_);
}

std::vector<double> OffspringLaw::breakpoints() const {
  return std::visit(Overloaded{
                        [](const ZeroTwo& l) { return l.p2.breakpoints(); },
                        [](const PoissonCount& l) { return l.mean.breakpoints(); },
                        [](const Table&) { return std::vector<double>{}; },
                    },
                    law_);
}

bool OffspringLaw::is_x_independent() const {
  return std::visit(Overloaded{
                        [](const ZeroTwo& l) { return l.p2.is_constant(); },
                        [](const PoissonCount& l) { return l.mean.is_constant(); },
                        [](const Table&) { return true; },
                    },
                    law_);
}

int OffspringLaw::max_count() const {
  return std::visit(Overloaded{
                        [](const ZeroTwo&) { return 2; },
                        [](const PoissonCount&) { return -1; },
                        [](const Table& l) { return static_cast<int>(l.probabilities.size()) - 1; },
                    },
                    law_);
}

double OffspringLaw::probability(double x, std::uint32_t k) const {
  return std::visit(Overloaded{
                        [x, k](const ZeroTwo& l) {
                          const double p = l.p2(x);
                          return k == 0 ? 1.0 - p : (k == 2 ? p : 0.0);
                        },
                        [x, k](const PoissonCount& l) { return poisson_pmf(l.mean(x), k); },
                        [k](const Table& l) {
                          return k < l.probabilities.size() ? l.probabilities[k] : 0.0;
                        },
                    },
                    law_);
}

std::string OffspringLaw::describe() const {
  return std::visit(Overloaded{
                        [](const ZeroTwo&) { return std::string("ZeroTwo"); },
                        [](const PoissonCount&) { return std::string("PoissonCount"); },
                        [](const Table& l) {
                          std::ostringstream os;
                          os << "Table(" << l.probabilities.size() << " entries)";
                          return os.str();
                        },
                    },
                    law_);
}

}  // namespace agebranch::model
