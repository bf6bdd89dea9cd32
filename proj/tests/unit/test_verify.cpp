#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "agebranch/error.hpp"
#include "agebranch/verify/checks.hpp"
#include "agebranch/verify/runner.hpp"
#include "fixtures.hpp"

using namespace agebranch;
using namespace agebranch::verify;
using testing::exp_model;

namespace {

CheckOptions quick(double h = 1e-2) {
  CheckOptions o;
  o.seed = 7;
  o.h = h;
  return o;
}

}  // namespace

TEST_CASE("z-score and gates") {
  CHECK(z_score(1.0, 0.3, 0.2, 0.4) == doctest::Approx(1.6));
  CHECK(z_score(1.0, 0.0, 1.0, 0.0) == 0.0);
  CHECK(std::isinf(z_score(1.0, 0.0, 0.5, 0.0)));

  ComparisonReport r;
  r.estimate = 0.95;
  r.target = 1.0;
  r.std_error = 0.01;
  decide(r, Gate::ZScore, 4.0);
  CHECK_FALSE(r.pass);
  decide(r, Gate::RelativeBand, 0.1);
  CHECK(r.pass);
  decide(r, Gate::AbsoluteBand, 0.01);
  CHECK_FALSE(r.pass);
  decide(r, Gate::PValue, 0.99);
  CHECK_FALSE(r.pass);
  decide(r, Gate::Diagnostic, 0.0);
  CHECK(r.pass);
  CHECK(to_string(Gate::ZScore) == "abs_z");
}

TEST_CASE("replicate runner is independent of the thread count") {
  auto fn = [](std::size_t r) { return static_cast<double>(r * r % 97); };
  const auto one = run_replicates<double>(1000, 1, fn);
  const auto four = run_replicates<double>(1000, 4, fn);
  CHECK(one == four);
  CHECK_THROWS_AS(run_replicates<int>(300, 3,
                                      [](std::size_t r) -> int {
                                        if (r == 200) throw std::runtime_error("boom");
                                        return 0;
                                      }),
                  std::runtime_error);
}

TEST_CASE("trivial Laplace functionals") {
  const auto spec = exp_model(false);
  const auto zero = model::TestFunction::constant(0.0);
  auto r = check_laplace(spec, {1.0}, zero, 1.0, 100, quick());
  CHECK(r.estimate == 1.0);
  CHECK(r.target == 1.0);
  CHECK(r.z == 0.0);
  CHECK(r.pass);

  r = check_laplace(spec, {}, model::TestFunction::constant(1.0), 1.0, 100, quick());
  CHECK(r.estimate == 1.0);
  CHECK(r.target == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.pass);

  CHECK_THROWS_AS(check_laplace(spec, {1.0}, zero, 1.0, 99, quick()), Error);
}

TEST_CASE("single particle without births") {
  auto spec = exp_model(false);
  spec.alpha = model::ScalarField::constant(0.0);
  const auto reps = check_moments(spec, {2.0}, model::TestFunction::constant(1.0), 1.0, 200,
                                  quick());
  REQUIRE(reps.size() == 4);
  CHECK(reps[0].name == "state_mean");
  for (const auto& r : reps) {
    CHECK(r.estimate == 1.0);
    CHECK(r.target == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.pass);
  }
}

TEST_CASE("moments and transforms agree with the solvers at small R") {
  const auto spec = exp_model(false);
  const auto one = model::TestFunction::constant(1.0);
  const auto opt = quick();
  const auto reps = check_moments(spec, {1.0}, one, 2.0, 4000, opt);
  CHECK(reps[0].target == doctest::Approx(0.516810).epsilon(1e-4));
  for (const auto& r : reps) {
    CHECK(r.replicates == 4000);
    CHECK(std::abs(r.z) <= 4.0);
  }
  const auto lap = check_laplace(spec, {1.0}, one, 2.0, 4000, opt);
  CHECK(std::abs(lap.z) <= 4.0);
  const auto occ = check_occupation_transform(spec, {1.0}, one, 2.0, 4000, opt);
  CHECK(std::abs(occ.z) <= 4.0);
  CHECK(occ.target_bar < 1e-4);
}

TEST_CASE("reports are reproducible and thread independent") {
  const auto spec = exp_model(true);
  const auto f = model::TestFunction::indicator(0.5);
  auto a = quick();
  auto b = quick();
  b.threads = 3;
  const auto x = check_laplace(spec, {0.5, 2.0}, f, 1.0, 300, a);
  const auto y = check_laplace(spec, {0.5, 2.0}, f, 1.0, 300, b);
  CHECK(x.raw == y.raw);
  CHECK(x.estimate == y.estimate);
  CHECK(x.seed == y.seed);
  a.seed = 8;
  const auto z = check_laplace(spec, {0.5, 2.0}, f, 1.0, 300, a);
  CHECK(z.raw != x.raw);
}

TEST_CASE("degenerate ergodic, LLN and CLT checks") {
  const auto zero = model::TestFunction::constant(0.0);
  const auto spec = exp_model(true);
  const auto erg = check_ergodic(spec, zero, 30.0, 100, quick());
  REQUIRE(erg.size() == 2);
  CHECK(erg[0].estimate == 1.0);
  CHECK(erg[0].target == 1.0);
  CHECK(erg[0].pass);
  CHECK(erg[1].pass);

  const auto lln = check_lln(exp_model(false), model::TestFunction::constant(1.0), 10.0, 8,
                             quick());
  CHECK(lln.estimate == 0.0);
  CHECK(lln.target == 0.0);
  CHECK(lln.pass);

  const auto clt = check_clt(spec, zero, 10.0, 50, quick());
  REQUIRE(clt.size() == 3);
  for (const auto& r : clt) {
    CHECK(r.estimate == 0.0);
    CHECK(r.pass);
  }
}

TEST_CASE("ergodic check needs a horizon of several decay times") {
  CHECK_THROWS_AS(check_ergodic(exp_model(true), model::TestFunction::constant(1.0), 10.0, 100,
                                quick()),
                  Error);
}

TEST_CASE("selection frequencies") {
  const auto opt = quick();
  const auto lin = model::ScalarField::piecewise_linear({{1.0, 1.0}, {3.0, 3.0}});
  const auto r = check_selection(lin, {1.0, 3.0}, 100000, opt);
  CHECK(r.pass);
  REQUIRE(r.diagnostics.size() == 3);
  CHECK(r.diagnostics[1].second == doctest::Approx(0.25).epsilon(0.03));
  CHECK(r.diagnostics[2].second == doctest::Approx(0.75).epsilon(0.01));

  const auto flat = check_selection(model::ScalarField::constant(2.0), {1.0, 1.0, 1.0, 1.0},
                                    40000, opt);
  CHECK(flat.pass);

  const auto single = check_selection(lin, {2.0}, 1000, opt);
  CHECK(single.estimate == 1.0);
  CHECK(single.diagnostics[1].second == 1.0);
}

TEST_CASE("sampler checks pass on the catalog") {
  const auto opt = quick();
  for (const auto& law : {model::LifespanLaw::exponential(1.0), model::LifespanLaw::gamma(0.7, 2.0),
                          model::LifespanLaw::uniform(0.5, 1.5)}) {
    const auto r = check_lifespan_sampler(law, 20000, opt);
    CHECK(r.pass);
  }
  const auto zt = model::OffspringLaw::zero_two(model::ScalarField::constant(0.25));
  CHECK(check_offspring_sampler(zt, 1.0, 20000, opt).pass);
  const auto po = model::OffspringLaw::poisson(model::ScalarField::constant(3.0));
  CHECK(check_offspring_sampler(po, 1.0, 20000, opt).pass);
  const auto tb = model::OffspringLaw::table({0.2, 0.0, 0.5, 0.3});
  CHECK(check_offspring_sampler(tb, 1.0, 20000, opt).pass);
  CHECK(check_thinning(1.5, 5, 20000, opt).pass);
}
