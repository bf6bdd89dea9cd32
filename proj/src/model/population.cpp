#include "agebranch/model/population.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "agebranch/error.hpp"

namespace agebranch::model {

namespace {

bool before(const Population::Particle& a, const Population::Particle& b) {
  return a.death < b.death || (a.death == b.death && a.id < b.id);
}

}  // namespace

Population::Population(ScalarField alpha, double t0, const std::vector<double>& lifetimes)
    : alpha_(std::move(alpha)), now_(t0) {
  particles_.reserve(lifetimes.size());
  for (double x : lifetimes) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw Error(ErrorCode::InvalidArgument, "lifetimes must be finite and > 0");
    }
    particles_.push_back({t0 + x, next_id_++});
  }
  std::stable_sort(particles_.begin(), particles_.end(), before);
  refresh_cache();
}

std::vector<double> Population::lifetimes() const {
  std::vector<double> out;
  out.reserve(particles_.size());
  for (const auto& p : particles_) out.push_back(p.death - now_);
  return out;
}

double Population::next_death() const {
  return particles_.empty() ? std::numeric_limits<double>::infinity()
                            : particles_.front().death;
}

std::size_t Population::advance_to(double t) {
  if (t < now_) throw Error(ErrorCode::InvalidArgument, "population clock moved backwards");
  now_ = t;
  auto it = std::find_if(particles_.begin(), particles_.end(),
                         [t](const Particle& p) { return p.death > t; });
  const auto removed = static_cast<std::size_t>(it - particles_.begin());
  particles_.erase(particles_.begin(), it);
  refresh_cache();
  return removed;
}

void Population::add(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw Error(ErrorCode::InvalidArgument, "lifetimes must be finite and > 0");
  }
  const Particle p{now_ + x, next_id_++};
  particles_.insert(std::upper_bound(particles_.begin(), particles_.end(), p, before), p);
  if (auto c = alpha_.constant_value()) {
    alpha_mass_ = *c * static_cast<double>(particles_.size());
  } else {
    alpha_mass_ += alpha_(x);
  }
}

double Population::recompute_alpha_mass() const { return alpha_mass_at(now_); }

double Population::alpha_mass_at(double s) const {
  if (auto c = alpha_.constant_value()) {
    std::size_t alive = 0;
    for (const auto& p : particles_) alive += p.death > s ? 1 : 0;
    return *c * static_cast<double>(alive);
  }
  double m = 0.0;
  for (const auto& p : particles_) m += alpha_(p.death - s);
  return m;
}

void Population::refresh_cache() { alpha_mass_ = recompute_alpha_mass(); }

std::size_t weighted_select(const Population& pop, double y) {
  const double mass = pop.recompute_alpha_mass();
  if (pop.empty() || !(mass > 0.0)) {
    throw Error(ErrorCode::EmptyOrZeroMass, "no particle carries birth weight");
  }
  const double target = mass * y;
  const ScalarField& alpha = pop.alpha();
  double cum = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    const double w = alpha(pop.lifetime(i));
    if (w <= 0.0) continue;
    cum += w;
    last_positive = i;
    if (cum >= target) return i;
  }
  // Rounding in the running sum; y = 1 lands on the last weighted atom.
  return last_positive;
}

}  // namespace agebranch::model
