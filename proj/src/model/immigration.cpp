#include "agebranch/model/immigration.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "agebranch/error.hpp"
#include "agebranch/model/quadrature.hpp"

namespace agebranch::model {

ImmigrationLaw::ImmigrationLaw(double rate, Cluster cluster)
    : rate_(rate), cluster_(std::move(cluster)) {
  if (!std::isfinite(rate_)) {
    throw Error(ErrorCode::InvalidArgument, "immigration rate must be finite");
  }
  if (const auto* c = std::get_if<IIDCluster>(&cluster_)) {
    if (c->size_probabilities.empty()) {
      throw Error(ErrorCode::InvalidArgument, "cluster size table is empty");
    }
  }
}

const LifespanLaw& ImmigrationLaw::lifespan() const {
  if (const auto* s = std::get_if<Singleton>(&cluster_)) return s->lifespan;
  return std::get<IIDCluster>(cluster_).lifespan;
}

std::vector<double> ImmigrationLaw::sample_cluster(RandomStream& rng) const {
  std::size_t n = 1;
  if (const auto* c = std::get_if<IIDCluster>(&cluster_)) {
    const double u = rng.uniform();
    double cdf = 0.0;
    for (std::size_t k = 0; k < c->size_probabilities.size(); ++k) {
      if (c->size_probabilities[k] <= 0.0) continue;
      n = k + 1;
      cdf += c->size_probabilities[k];
      if (u < cdf) break;
    }
  }
  std::vector<double> out(n);
  const LifespanLaw& g = lifespan();
  for (auto& x : out) x = g.sample(rng);
  return out;
}

double ImmigrationLaw::mean_size() const {
  const auto* c = std::get_if<IIDCluster>(&cluster_);
  if (c == nullptr) return 1.0;
  double m = 0.0;
  for (std::size_t k = 0; k < c->size_probabilities.size(); ++k) {
    m += (k + 1.0) * c->size_probabilities[k];
  }
  return m;
}

double ImmigrationLaw::size_second_factorial() const {
  const auto* c = std::get_if<IIDCluster>(&cluster_);
  if (c == nullptr) return 0.0;
  double m = 0.0;
  for (std::size_t k = 0; k < c->size_probabilities.size(); ++k) {
    m += (k + 1.0) * static_cast<double>(k) * c->size_probabilities[k];
  }
  return m;
}

double ImmigrationLaw::size_pgf(double s) const {
  const auto* c = std::get_if<IIDCluster>(&cluster_);
  if (c == nullptr) return s;
  double acc = 0.0;
  const auto& p = c->size_probabilities;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * s + *it;
  return acc * s;
}

double ImmigrationLaw::mean_integral(const std::function<double(double)>& phi,
                                     const std::vector<double>& breaks) const {
  return rate_ * mean_size() * integrate_lifespan(lifespan(), phi, breaks);
}

double ImmigrationLaw::square_integral(const std::function<double(double)>& phi,
                                       const std::vector<double>& breaks) const {
  const double e1 = integrate_lifespan(lifespan(), phi, breaks);
  const double e2 =
      integrate_lifespan(lifespan(), [&phi](double x) { return phi(x) * phi(x); }, breaks);
  return rate_ * (mean_size() * e2 + size_second_factorial() * e1 * e1);
}

double ImmigrationLaw::exp_integral(double theta) const {
  return rate_ * mean_size() * lifespan().exp_moment(theta);
}

double ImmigrationLaw::exp_square_integral(double theta) const {
  const double m1 = lifespan().exp_moment(theta);
  const double m2 = lifespan().exp_moment(2.0 * theta);
  if (!std::isfinite(m1) || !std::isfinite(m2)) return std::numeric_limits<double>::infinity();
  return rate_ * (mean_size() * m2 + size_second_factorial() * m1 * m1);
}

std::string ImmigrationLaw::describe() const {
  std::ostringstream os;
  os << "Immigration(rate=" << rate_ << ", "
     << (std::holds_alternative<Singleton>(cluster_) ? "singleton" : "iid cluster") << ", "
     << lifespan().describe() << ")";
  return os.str();
}

}  // namespace agebranch::model
