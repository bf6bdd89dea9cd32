#include "agebranch/model/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "agebranch/model/lifespan.hpp"

namespace agebranch::model {

double integrate(const std::function<double(double)>& f, double a, double b,
                 const std::vector<double>& breaks, double rel_tol) {
  if (!(b > a)) return 0.0;
  std::vector<double> pts{a};
  for (double x : breaks) {
    if (x > a && x < b) pts.push_back(x);
  }
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, pts[i], pts[i + 1], 15, rel_tol);
  }
  return total;
}

double integrate_lifespan(const LifespanLaw& law, const std::function<double(double)>& phi,
                          const std::vector<double>& breaks, double rel_tol) {
  const double top = law.upper_bound(1e-17);
  std::vector<double> all = law.breakpoints();
  all.insert(all.end(), breaks.begin(), breaks.end());
  // Extra cuts keep the adaptive rule honest on long exponential tails.
  const double q50 = law.quantile(0.5);
  for (double k = 1.0; k * q50 < top; k *= 2.0) all.push_back(k * q50);
  auto integrand = [&](double x) { return phi(x) * law.density(x); };
  const auto* gam = std::get_if<LifespanLaw::Gamma>(&law.rep());
  if (gam == nullptr || gam->shape >= 1.0) return integrate(integrand, 0.0, top, all, rel_tol);

  // Density blows up at 0 like x^{k-1}; x = u^{1/k} removes it on (0, a].
  const double k = gam->shape;
  const double a = std::min(gam->scale, top);
  auto near_zero = [&](double u) {
    const double x = std::pow(u, 1.0 / k);
    return integrand(x) * std::pow(u, 1.0 / k - 1.0) / k;
  };
  std::vector<double> ubreaks;
  for (double b : all) {
    if (b > 0.0 && b < a) ubreaks.push_back(std::pow(b, k));
  }
  return integrate(near_zero, 0.0, std::pow(a, k), ubreaks, rel_tol) +
         integrate(integrand, a, top, all, rel_tol);
}

}  // namespace agebranch::model
