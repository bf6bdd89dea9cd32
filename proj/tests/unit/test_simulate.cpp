#include <doctest.h>

#include <cmath>
#include <sstream>

#include "agebranch/error.hpp"
#include "agebranch/simulate/path.hpp"
#include "agebranch/simulate/simulator.hpp"
#include "agebranch/verify/stats.hpp"
#include "fixtures.hpp"

using namespace agebranch;
using namespace agebranch::simulate;
using namespace agebranch::model;

namespace {

ModelSpec inert() {
  auto s = testing::exp_model(false);
  s.alpha = ScalarField::constant(0.0);
  return s;
}

}  // namespace

TEST_CASE("no births without a birth rate") {
  const auto path = simulate_branching(inert(), {2.0}, 5.0, 1);
  CHECK(path.events.empty());
  CHECK(population_size(path, 0.0) == 1);
  CHECK(population_size(path, 1.999) == 1);
  CHECK(population_size(path, 2.0) == 0);
  CHECK(population_size(path, 5.0) == 0);
  const auto one = TestFunction::constant(1.0);
  CHECK(snapshot(path, 1.999, one) == 1.0);
  CHECK(snapshot(path, 2.0, one) == 0.0);
  CHECK_THROWS_AS(snapshot(path, 5.1, one), Error);
  CHECK_THROWS_AS(snapshot(path, -0.1, one), Error);
}

TEST_CASE("empty initial state stays empty") {
  const auto path = simulate_branching(testing::exp_model(false), {}, 10.0, 3);
  CHECK(path.events.empty());
  CHECK(population_size(path, 10.0) == 0);
}

TEST_CASE("occupation closed forms") {
  const auto path = simulate_branching(inert(), {2.0}, 5.0, 1);
  CHECK(occupation(path, TestFunction::constant(1.0)) == 2.0);
  CHECK(occupation(path, TestFunction::indicator(1.0)) == 1.0);
  CHECK(occupation(path, TestFunction::indicator(1.0), 0.5) == 0.0);
  CHECK(occupation(path, TestFunction::constant(1.0), 1.5) == 1.5);
  CHECK(occupation(path, TestFunction({0.5, 1.5}, {1.0, 3.0, 2.0})) ==
        doctest::Approx(0.5 + 3.0 + 1.0));
}

TEST_CASE("occupation is additive and matches a fine Riemann sum") {
  const auto spec = testing::exp_model(true);
  const TestFunction f({0.7, 1.9}, {1.0, 0.25, 2.0});
  for (std::uint64_t r = 0; r < 5; ++r) {
    const auto path = simulate_with_immigration(spec, {1.0, 0.4}, 12.0, 77, r);
    const double whole = occupation(path, f);
    CHECK(occupation(path, f, 5.0) + (whole - occupation(path, f, 5.0)) == doctest::Approx(whole));
    // Midpoint sum with a step that makes the bias negligible.
    const int n = 24000;
    double riemann = 0.0;
    for (int i = 0; i < n; ++i) riemann += snapshot(path, (i + 0.5) * 12.0 / n, f);
    riemann *= 12.0 / n;
    CHECK(whole == doctest::Approx(riemann).epsilon(2e-3));
  }
}

TEST_CASE("constant rate thinning accepts every proposal") {
  const auto spec = testing::exp_model(false);
  model::Population pop(spec.alpha, 0.0, {5.0, 7.0, 9.0});
  Streams s(42, 0);
  Streams clone = s;
  const auto ev = next_event(pop, spec.alpha.sup_norm(), 0.0, 100.0, s);
  REQUIRE(ev.kind == NextEvent::Birth);
  const double expected = clone.branching.exponential(1.5 * 3);
  CHECK(ev.time == expected);
}

TEST_CASE("empty population waits for an immigrant") {
  model::Population pop(ScalarField::constant(1.5), 2.0, {});
  Streams s(5, 0);
  Streams clone = s;
  const auto ev = next_event(pop, 1.5, 0.3, 1e9, s);
  CHECK(ev.kind == NextEvent::Immigration);
  CHECK(ev.time == 2.0 + clone.immigration.exponential(0.3));
  const auto none = next_event(pop, 1.5, 0.0, 50.0, s);
  CHECK(none.kind == NextEvent::HorizonPassed);
}

TEST_CASE("survival without birth under a slope-one rate") {
  // P(no birth before death) = exp(-int_0^1 (1 - s) ds) = exp(-1/2).
  auto spec = testing::exp_model(false);
  spec.alpha = ScalarField::piecewise_linear({{1.0, 1.0}, {2.0, 2.0}});
  model::Population pop(spec.alpha, 0.0, {1.0});
  const int R = 100000;
  int survived = 0;
  for (int r = 0; r < R; ++r) {
    Streams s(9, r);
    if (next_event(pop, spec.alpha.sup_norm(), 0.0, 10.0, s).kind == NextEvent::HorizonPassed) {
      ++survived;
    }
  }
  const double p = std::exp(-0.5);
  const double se = std::sqrt(p * (1 - p) / R);
  CHECK(std::abs(survived / double(R) - p) <= 4 * se);
}

TEST_CASE("frozen population gaps are exponential") {
  auto spec = testing::exp_model(false);
  spec.offspring = OffspringLaw::zero_two(ScalarField::constant(0.0));
  const auto path = simulate_branching(spec, {1e9, 1e9, 1e9, 1e9}, 20000.0, 8);
  std::vector<double> gaps;
  double prev = 0.0;
  for (const auto& e : path.events) {
    gaps.push_back(e.time - prev);
    prev = e.time;
  }
  REQUIRE(gaps.size() > 100000);
  const auto r = verify::ks_one_sample(gaps, [](double x) { return -std::expm1(-6.0 * x); });
  CHECK(r.p_value > 0.001);
}

TEST_CASE("pure immigration is a Poisson stream") {
  auto spec = testing::exp_model(true);
  spec.alpha = ScalarField::constant(0.0);
  double total = 0.0;
  const int R = 100;
  for (int r = 0; r < R; ++r) {
    const auto path = simulate_with_immigration(spec, {}, 1000.0, 4, r);
    for (const auto& e : path.events) CHECK(e.kind == EventKind::Immigration);
    total += static_cast<double>(path.events.size());
  }
  CHECK(std::abs(total / R - 300.0) <= 4 * std::sqrt(300.0 / R));
}

TEST_CASE("paths are deterministic and conserve particles") {
  const auto spec = testing::exp_model(true);
  const auto a = simulate_with_immigration(spec, {1.0, 2.0}, 30.0, 123, 7);
  const auto b = simulate_with_immigration(spec, {1.0, 2.0}, 30.0, 123, 7);
  std::ostringstream sa, sb;
  write_path_csv(sa, 7, a);
  write_path_csv(sb, 7, b);
  CHECK(sa.str() == sb.str());
  CHECK(!a.events.empty());
  const auto c = simulate_with_immigration(spec, {1.0, 2.0}, 30.0, 124, 7);
  std::ostringstream sc;
  write_path_csv(sc, 7, c);
  CHECK(sc.str() != sa.str());

  double prev = 0.0;
  std::size_t before = 2;
  for (const auto& e : a.events) {
    CHECK(e.time > prev);
    CHECK(e.time <= a.horizon);
    const std::size_t alive_before = before;  // size right after the previous event
    const std::size_t at = population_size(a, e.time);
    CHECK(at == e.size_after);
    // Deaths in the gap can only shrink the population.
    CHECK(e.size_after <= alive_before + e.added.size());
    prev = e.time;
    before = e.size_after;
  }
}

TEST_CASE("simulator input errors") {
  CHECK_THROWS_AS(simulate_branching(testing::exp_model(false), {1.0}, -1.0, 1), Error);
  CHECK_THROWS_AS(simulate_branching(testing::exp_model(true), {1.0}, 1.0, 1), Error);
  CHECK_THROWS_AS(simulate_with_immigration(testing::exp_model(false), {}, 1.0, 1), Error);
  auto bad = testing::exp_model(false);
  bad.offspring = OffspringLaw::zero_two(ScalarField::constant(1.3));
  try {
    simulate_branching(bad, {1.0}, 1.0, 1);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidSpec);
  }
}
