#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "agebranch/model/random.hpp"
#include "agebranch/model/scalar_field.hpp"

namespace agebranch::model {

// Offspring count law p(x, .) for a parent with remaining lifetime x.
class OffspringLaw {
 public:
  // 0 or 2 offspring, P(2) = p2(x).
  struct ZeroTwo {
    ScalarField p2;
  };
  // Poisson with mean field mean(x); counts are capped by the sampler's
  // mean <= 700 limit.
  struct PoissonCount {
    ScalarField mean;
  };
  // x-independent table, probabilities[k] = P(k offspring).
  struct Table {
    std::vector<double> probabilities;
  };
  using Variant = std::variant<ZeroTwo, PoissonCount, Table>;

  explicit OffspringLaw(Variant law);

  static OffspringLaw zero_two(ScalarField p2) { return OffspringLaw(ZeroTwo{std::move(p2)}); }
  static OffspringLaw poisson(ScalarField mean) {
    return OffspringLaw(PoissonCount{std::move(mean)});
  }
  static OffspringLaw table(std::vector<double> p) { return OffspringLaw(Table{std::move(p)}); }

  double pgf(double x, double z) const;
  double mean(double x) const;
  double second_factorial(double x) const;
  // Exactly one engine draw for ZeroTwo and Table; Poisson inversion also
  // uses one uniform.
  std::uint32_t sample_count(double x, RandomStream& rng) const;

  // Right limits at x = 0+.
  double pgf_at_zero(double z) const;
  double mean_at_zero() const;
  double second_factorial_at_zero() const;
  double mean_sup() const;
  double second_factorial_sup() const;

  // Kinks of mean/second_factorial in x.
  std::vector<double> breakpoints() const;
  bool is_x_independent() const;

  // Largest count with positive probability, or -1 when unbounded.
  int max_count() const;
  // P(k offspring) at x.
  double probability(double x, std::uint32_t k) const;

  std::string describe() const;
  const Variant& rep() const { return law_; }

 private:
  Variant law_;
};

}  // namespace agebranch::model
