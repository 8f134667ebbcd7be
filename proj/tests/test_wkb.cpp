#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rhlab/errors.hpp"
#include "rhlab/wkb.hpp"
#include "test_helpers.hpp"

using namespace rhlab;
using namespace rhlab_test;

TEST_CASE("sweep of the zero system is flat at log 2") {
  auto curve = quintic();
  PathOnCurve loop = circle_path(cplx(0.5, 0.0), 0.72);
  auto sw = sweep(curve, SlTwoSystem{}, loop, linear_grid(5.0, 40.0, 8));
  for (std::size_t i = 0; i < sw.t_grid.size(); ++i) {
    REQUIRE(sw.used[i]);
    CHECK(sw.log_chars[i] == doctest::Approx(std::log(2.0)).epsilon(1e-10));
  }
  CHECK(std::abs(sw.slope) < 1e-12);
}

TEST_CASE("model diagonal sweep recovers |Re a| as the slope") {
  // Closed form: log|chi| = log|2 cosh(t a)| ~ t |Re a| + log(1) for large t.
  cplx a(0.63, 0.21);
  WkbSweep sw;
  sw.t_grid = linear_grid(10.0, 40.0, 13);
  for (double t : sw.t_grid) {
    ModelOde model{[](double) { return Mat2{}; }, [a](double) { return a; }};
    sw.log_chars.push_back(log_char(wkb_model_transfer(model, t, {1e-12})));
    sw.used.push_back(1);
  }
  fit_top_fraction(sw, 0.5);
  CHECK(sw.slope == doctest::Approx(std::abs(a.real())).epsilon(1e-6));
}

TEST_CASE("the constructed instance has a certified transverse loop") {
  auto inst = make_wkb_instance();
  CHECK(inst.margin > 0.9);
  CHECK(inst.loop_width == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(continue_sheet(inst.curve, inst.loop) == inst.loop.start_sheet);
  auto check = is_wkb_curve(inst.curve, inst.phi, inst.loop);
  CHECK(check.is_wkb);
}

TEST_CASE("slope matches width within 2% on the certified loop") {
  auto inst = make_wkb_instance();
  auto sw = sweep(inst.curve, inst.system, inst.loop, linear_grid(10.0, 40.0, 13),
                  {1e-11});
  double w = inst.loop_width;
  CHECK(std::abs(sw.slope - w) / w < 0.02);
  CHECK(check_upper_bound(sw, w, 0.02));
}

TEST_CASE("slope stabilizes: top-third refit moves it less than the residual") {
  auto inst = make_wkb_instance();
  auto sw = sweep(inst.curve, inst.system, inst.loop, linear_grid(8.0, 40.0, 17),
                  {1e-11});
  WkbSweep refit = sw;
  fit_top_fraction(refit, 1.0 / 3.0);
  CHECK(std::abs(refit.slope - sw.slope) <= sw.residual + 1e-12);
}

TEST_CASE("slope scales linearly in the system") {
  auto inst = make_wkb_instance();
  auto grid = linear_grid(10.0, 40.0, 9);
  auto sw1 = sweep(inst.curve, inst.system, inst.loop, grid, {1e-11});
  double c = 1.5;
  auto grid2 = linear_grid(10.0 / c, 40.0 / c, 9);
  auto sw2 = sweep(inst.curve, inst.system.scaled(c), inst.loop, grid2, {1e-11});
  CHECK(std::abs(sw2.slope - c * sw1.slope) / (c * sw1.slope) < 0.01);
}

TEST_CASE("check_upper_bound flags constructed violations") {
  WkbSweep sw;
  sw.slope = 2.0;
  CHECK(!check_upper_bound(sw, 1.0, 0.02));
  sw.slope = 0.0;
  CHECK(check_upper_bound(sw, 0.0, 0.02));
  CHECK(check_upper_bound(sw, 5.0, 0.02));
}

TEST_CASE("degenerate grids are rejected") {
  auto curve = quintic();
  PathOnCurve loop = circle_path(cplx(0.5, 0.0), 0.72);
  CHECK_THROWS_AS(sweep(curve, SlTwoSystem{}, loop, {1.0, 1.0, 2.0}), NumericError);
  CHECK_THROWS_AS(sweep(curve, SlTwoSystem{}, loop, {1.0, 2.0, 3.0}), DegenerateFit);
}
