#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "agebranch/model/lifespan.hpp"
#include "agebranch/model/random.hpp"

namespace agebranch::model {

// Immigration law L: clusters arrive at Poisson rate `rate`; each cluster
// is a list of independent lifespans.
class ImmigrationLaw {
 public:
  struct Singleton {
    LifespanLaw lifespan;
  };
  // size_probabilities[k] = P(cluster size = k + 1).
  struct IIDCluster {
    std::vector<double> size_probabilities;
    LifespanLaw lifespan;
  };
  using Cluster = std::variant<Singleton, IIDCluster>;

  ImmigrationLaw(double rate, Cluster cluster);

  double rate() const { return rate_; }
  const LifespanLaw& lifespan() const;
  const Cluster& cluster() const { return cluster_; }

  // Draw order: one uniform for the size (IIDCluster only), then lifespans
  // left to right. Always at least one particle.
  std::vector<double> sample_cluster(RandomStream& rng) const;

  double mean_size() const;
  // E[N(N-1)].
  double size_second_factorial() const;
  double size_pgf(double s) const;

  // Integral of <nu, phi> L(dnu) = rate E[N] E[phi(zeta)].
  double mean_integral(const std::function<double(double)>& phi,
                       const std::vector<double>& breaks = {}) const;
  // Integral of <nu, phi>^2 L(dnu).
  double square_integral(const std::function<double(double)>& phi,
                         const std::vector<double>& breaks = {}) const;
  double exp_integral(double theta) const;
  double exp_square_integral(double theta) const;

  // psi(f) = rate (1 - E[s^N]) where s = E[exp(-f(zeta))].
  double psi_from_laplace(double s) const { return rate_ * (1.0 - size_pgf(s)); }

  std::string describe() const;

 private:
  double rate_;
  Cluster cluster_;
};

}  // namespace agebranch::model
