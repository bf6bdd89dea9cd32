#include "agebranch/renewal/terminal.hpp"

#include <algorithm>
#include <cmath>

#include "agebranch/renewal/volterra.hpp"

namespace agebranch::renewal {

Terminal::Terminal(model::TestFunction step, double shift)
    : step_(std::move(step)), shift_(shift), jumps_(step_.jumps()) {}

Terminal::Terminal(model::TestFunction step, double shift, double dx, std::vector<double> table)
    : step_(std::move(step)),
      shift_(shift),
      dx_(dx),
      table_(std::move(table)),
      jumps_(step_.jumps()) {}

double Terminal::continuous(double y) const {
  if (table_.empty() || !(y > 0.0)) return 0.0;
  return interpolate(table_, y / dx_);
}

double Terminal::left(double y) const {
  if (!(y > 0.0)) return 0.0;
  return step_(y - shift_) + continuous(y);
}

double Terminal::right(double y) const {
  if (y < 0.0) return 0.0;
  return step_.right_limit(y - shift_) + continuous(y);
}

double Terminal::left_at_jump(std::size_t i) const {
  const double y = jump(i);
  if (!(y > 0.0)) return 0.0;
  return step_(jumps_[i]) + continuous(y);
}

double Terminal::right_at_jump(std::size_t i) const {
  return step_.right_limit(jumps_[i]) + continuous(jump(i));
}

bool Terminal::is_zero() const {
  return step_.is_zero() &&
         std::all_of(table_.begin(), table_.end(), [](double v) { return v == 0.0; });
}

double Terminal::sup_norm() const {
  double s = 0.0;
  for (double v : table_) s = std::max(s, std::abs(v));
  return step_.sup_norm() + s;
}

}  // namespace agebranch::renewal
