#pragma once

#include <vector>

#include "agebranch/model/test_function.hpp"

namespace agebranch::renewal {

// Bounded function on (0, inf) of the form y -> step(y - shift) + c(y),
// where step is a TestFunction and c is continuous, tabulated on a uniform
// grid (linear in between, flat past the end, c(0) = 0). Zero for y <= 0.
// This covers plain test functions and fields u_s f fed back as initial
// data.
class Terminal {
 public:
  Terminal() = default;
  explicit Terminal(model::TestFunction step, double shift = 0.0);
  Terminal(model::TestFunction step, double shift, double dx, std::vector<double> table);

  double left(double y) const;
  double right(double y) const;

  std::size_t jump_count() const { return jumps_.size(); }
  double jump(std::size_t i) const { return shift_ + jumps_[i]; }
  // One-sided values at jump i, evaluated exactly on the step function.
  double left_at_jump(std::size_t i) const;
  double right_at_jump(std::size_t i) const;

  bool is_zero() const;
  double sup_norm() const;
  bool has_table() const { return !table_.empty(); }
  const model::TestFunction& step() const { return step_; }
  double shift() const { return shift_; }

 private:
  double continuous(double y) const;

  model::TestFunction step_;
  double shift_ = 0.0;
  double dx_ = 1.0;
  std::vector<double> table_;
  std::vector<double> jumps_;  // jump points of step (unshifted)
};

}  // namespace agebranch::renewal
