#pragma once

// Characteristic marches of x-indexed fields on the grid x_k = k h. Only
// used to produce the <G, .> scalars that need the whole field (squares and
// exponentials); the fields themselves are reconstructed on demand by
// convolve_at.

#include <cstddef>
#include <utility>
#include <vector>

#include "agebranch/model/model_spec.hpp"
#include "agebranch/renewal/grid.hpp"
#include "agebranch/renewal/terminal.hpp"

namespace agebranch::renewal::detail {

// Integrates piecewise-linear interpolants of nodal values against a law.
// Weights are exact for the interpolant.
class PanelIntegrator {
 public:
  PanelIntegrator(const model::LifespanLaw& law, double dx, std::size_t nx);

  // (wL, wR) with int_a^b [vA (b - x) + vB (x - a)] / (b - a) G(dx) = wL vA + wR vB.
  std::pair<double, double> linear_weights(double a, double b) const;

  const std::vector<double>& node_weights() const { return node_; }
  double wl(std::size_t k) const { return wl_[k]; }
  double wr(std::size_t k) const { return wr_[k]; }

 private:
  const model::LifespanLaw* law_;
  double dx_;
  std::vector<double> wl_, wr_, node_;
};

// Panel that holds a jump of the shifted terminal.
struct SplitPanel {
  std::size_t k;
  double start_value;  // terminal right limit at x_k
  double end_value;    // terminal left limit at x_{k+1}
  struct Cut {
    double pos;
    double left, right;
  };
  std::vector<Cut> cuts;  // strictly inside the panel, ascending
};

std::vector<SplitPanel> locate_splits(const Terminal& terminal, double t, double dx,
                                      std::size_t nx);

// Sum over split panels of (exact - nodal) contribution. nodeval(k) is the
// integrand at node k as used in the nodal sum, rval(k) the continuous part
// at node k and comb(T, R) the integrand from terminal and continuous parts.
template <class NodeVal, class RVal, class Comb>
double split_correction(const PanelIntegrator& P, const std::vector<SplitPanel>& splits,
                        double dx, NodeVal&& nodeval, RVal&& rval, Comb&& comb) {
  double corr = 0.0;
  for (const auto& sp : splits) {
    const std::size_t k = sp.k;
    corr -= P.wl(k) * nodeval(k) + P.wr(k) * nodeval(k + 1);
    const double xa = dx * static_cast<double>(k);
    const double ra = rval(k);
    const double rb = rval(k + 1);
    auto r_at = [&](double x) { return ra + (rb - ra) * (x - xa) / dx; };
    double a = xa;
    double ta = sp.start_value;
    for (const auto& c : sp.cuts) {
      const auto [wl, wr] = P.linear_weights(a, c.pos);
      corr += wl * comb(ta, r_at(a)) + wr * comb(c.left, r_at(c.pos));
      a = c.pos;
      ta = c.right;
    }
    const double xb = xa + dx;
    const auto [wl, wr] = P.linear_weights(a, xb);
    corr += wl * comb(ta, r_at(a)) + wr * comb(sp.end_value, rb);
  }
  return corr;
}

// Number of x nodes so that both laws keep less than 1e-16 mass beyond.
std::size_t field_nodes(const model::ModelSpec& spec, double dx);

struct NonlinearResult {
  std::vector<double> H;    // <G, exp(-V_n)>
  std::vector<double> Hi;   // <G', exp(-V_n)> for the immigrant law, if any
  std::vector<double> W;    // integral part of the field at the final step
  std::vector<double> C;    // running-cost part at the final step
};

// V_n(x) = terminal(x - t_n) + [C(x) - C((x - t_n)^+)] + W_n(x) with
// W_n(x) = int_0^{t_n ^ x} alpha(x - s)[1 - g(x - s, H_{n-s/h})] ds.
NonlinearResult march_nonlinear(const model::ModelSpec& spec, const model::TestFunction& running,
                                const Terminal& terminal, const TimeGrid& grid);

struct LinearResult {
  std::vector<double> sq;      // <G, P_n^2>
  std::vector<double> imm_sq;  // <G', P_n^2>, if immigration
};

// P_n(x) = terminal(x - t_n) + [C(x) - C((x - t_n)^+)]
//          + int_0^{t_n ^ x} m(x - s) d_{n - s/h} ds for a driver series d.
LinearResult march_linear_field(const model::ModelSpec& spec, const model::TestFunction& running,
                                const Terminal& terminal, const std::vector<double>& driver,
                                const TimeGrid& grid);

bool same_law(const model::LifespanLaw& a, const model::LifespanLaw& b);

}  // namespace agebranch::renewal::detail
