#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "rhlab/errors.hpp"
#include "rhlab/quadrature.hpp"
#include "rhlab/transfer.hpp"
#include "test_helpers.hpp"

using namespace rhlab;
using namespace rhlab_test;

namespace {

// Independent fixed-step RK4 integrator for dF = -t A F along a path, used as
// the step-halving oracle. Tracks the y-branch on a fine grid.
RenormalizedMatrix rk4_transfer(const HyperellipticCurve& curve, const SlTwoSystem& a,
                                double t, const PathOnCurve& path, int steps_per_seg) {
  Mat2 m = Mat2::identity();
  double log_scale = 0.0;
  cplx y = std::sqrt(curve.p(path.start()));
  if (path.start_sheet < 0) y = -y;
  for (const auto& seg : path.segments) {
    auto coef = [&](double s, cplx ys) -> Mat2 {
      cplx z = seg_point(seg, s);
      cplx w = -t * seg_deriv(seg, s) / ys;
      return Mat2{a.alpha.at(z), a.beta.at(z), a.gamma.at(z), -a.alpha.at(z)} * w;
    };
    double h = 1.0 / steps_per_seg;
    for (int i = 0; i < steps_per_seg; ++i) {
      double s = i * h;
      // y at stage points by direct continuation (clearance keeps this safe).
      cplx y0 = nearest_sqrt(curve.p(seg_point(seg, s)), y);
      cplx yh = nearest_sqrt(curve.p(seg_point(seg, s + 0.5 * h)), y0);
      cplx y1 = nearest_sqrt(curve.p(seg_point(seg, s + h)), yh);
      Mat2 k1 = coef(s, y0) * m;
      Mat2 k2 = coef(s + 0.5 * h, yh) * (m + k1 * (0.5 * h));
      Mat2 k3 = coef(s + 0.5 * h, yh) * (m + k2 * (0.5 * h));
      Mat2 k4 = coef(s + h, y1) * (m + k3 * h);
      m = m + (k1 + (k2 + k3) * 2.0 + k4) * (h / 6.0);
      y = y1;
      RenormalizedMatrix rn = RenormalizedMatrix::from(m, log_scale);
      m = rn.m;
      log_scale = rn.log_scale;
    }
  }
  RenormalizedMatrix out;
  out.m = m;
  out.log_scale = log_scale;
  return out;
}

PathOnCurve generic_loop() {
  // Loop around branch points 0 and 1 of x^5 - x.
  return circle_path(cplx(0.5, 0.0), 0.72, 0.3);
}

// Random system rescaled so that ||det A|| = 1 (the normalization the growth
// statements are phrased in; it also keeps transfer magnitudes tame).
SlTwoSystem unit_det_system(const HyperellipticCurve& curve, std::mt19937& rng) {
  auto a = random_system(rng);
  double nrm = qd_norm(curve, det_map(a), {1e-9, 1e-9}).value;
  return a.scaled(1.0 / std::sqrt(nrm));
}

}  // namespace

TEST_CASE("A = 0 gives the identity transfer") {
  auto curve = quintic();
  SlTwoSystem zero{};
  auto m = transfer_matrix(curve, zero, 1.0, generic_loop());
  CHECK(m.distance_to(RenormalizedMatrix::identity()) < 1e-12);
  CHECK(m.log_scale == doctest::Approx(0.0));
}

TEST_CASE("constant diagonal model integrates to the closed form") {
  // B = 0, a constant: f_t(1) = diag(exp(-t a), exp(t a)).
  ModelOde model{[](double) { return Mat2{}; }, [](double) { return cplx(0.8, 0.3); }};
  double t = 7.0;
  auto f = wkb_model_transfer(model, t, {1e-12});
  cplx want_hi = std::exp(cplx(0.8, 0.3) * t);
  double log_mag = f.log_scale + std::log(std::abs(f.m.d));
  CHECK(log_mag == doctest::Approx(t * 0.8).epsilon(1e-9));
  CHECK(std::arg(f.m.d) == doctest::Approx(std::arg(want_hi)).epsilon(1e-8));
  // Off-diagonals stay zero.
  CHECK(std::abs(f.m.b) < 1e-12);
  CHECK(std::abs(f.m.c) < 1e-12);
}

TEST_CASE("renormalized storage survives t = 300 growth") {
  ModelOde model{[](double) { return Mat2{}; }, [](double) { return cplx(1.0, 0.0); }};
  auto f = wkb_model_transfer(model, 300.0, {1e-12});
  CHECK(log_char(f) == doctest::Approx(300.0).epsilon(1e-9));
  CHECK(f.unimodularity_defect() < 1e-8);
}

TEST_CASE("generic loop matches the fixed-step oracle") {
  auto curve = quintic();
  std::mt19937 rng(31);
  auto a = unit_det_system(curve, rng);
  double t = 3.0;
  auto loop = generic_loop();
  auto adaptive = transfer_matrix(curve, a, t, loop, {1e-12});
  auto oracle = rk4_transfer(curve, a, t, loop, 40000);
  double lc1 = log_char(adaptive);
  double lc2 = log_char(oracle);
  CHECK(std::abs(lc1 - lc2) < 1e-7);
}

TEST_CASE("halving the tolerance leaves log|tr| stable") {
  auto curve = quintic();
  std::mt19937 rng(32);
  auto a = unit_det_system(curve, rng);
  auto loop = generic_loop();
  double lc1 = log_char(transfer_matrix(curve, a, 5.0, loop, {1e-10}));
  double lc2 = log_char(transfer_matrix(curve, a, 5.0, loop, {5e-11}));
  CHECK(std::abs(lc1 - lc2) < 10.0 * 1e-10 + 1e-12);
}

TEST_CASE("unimodularity holds along random loops") {
  // The det = 1 invariant is representable as long as e^{-2 lambda} stays
  // above the cancellation floor of det(m); test in that regime.
  auto curve = quintic();
  std::mt19937 rng(33);
  for (double t : {0.5, 2.0, 6.0}) {
    auto a = unit_det_system(curve, rng);
    auto m = transfer_matrix(curve, a, t, generic_loop(), {1e-12});
    CHECK(m.unimodularity_defect() < 1e-8);
  }
}

TEST_CASE("concatenation and inverse behave like the flow") {
  auto curve = quintic();
  std::mt19937 rng(34);
  auto a = random_system(rng);
  double t = 2.0;
  PathOnCurve gamma1 = polyline_path({cplx(2.0, -1.0), cplx(1.6, 0.9), cplx(0.4, 1.6)});
  PathOnCurve gamma2 = polyline_path({cplx(0.4, 1.6), cplx(-1.5, 1.2), cplx(-1.9, -0.8)});
  auto t1 = transfer_matrix(curve, a, t, gamma1, {1e-12});
  // The second piece starts on the sheet gamma1 ends on.
  PathOnCurve gamma2_sheeted = gamma2;
  gamma2_sheeted.start_sheet = continue_sheet(curve, gamma1);
  auto t2 = transfer_matrix(curve, a, t, gamma2_sheeted, {1e-12});
  auto whole = transfer_matrix(curve, a, t, gamma1.then(gamma2), {1e-12});
  CHECK((t2 * t1).distance_to(whole) < 1e-9 * std::exp(whole.log_scale));

  auto back = transfer_matrix(curve, a, t, gamma1.reversed().then(gamma1), {1e-12});
  CHECK(back.distance_to(RenormalizedMatrix::identity()) < 1e-9);
}

TEST_CASE("representation: A = 0 is the trivial representation") {
  auto curve = quintic();
  auto gens = canonical_generators(curve);
  auto rep = representation(curve, SlTwoSystem{}, 1.0, gens);
  CHECK(rep.defect < 1e-12);
  for (const auto& g : rep.gens)
    CHECK(g.distance_to(RenormalizedMatrix::identity()) < 1e-12);
}

TEST_CASE("representation: random systems satisfy the relation word") {
  auto curve = quintic();
  auto gens = canonical_generators(curve);
  std::mt19937 rng(35);
  for (double t : {0.5, 1.0, 2.0}) {
    auto a = unit_det_system(curve, rng);
    auto rep = representation(curve, a, t, gens, {1e-12});
    CHECK(rep.defect <= 1e-8);
  }
}

TEST_CASE("characters are conjugation invariant") {
  auto curve = quintic();
  auto gens = canonical_generators(curve);
  std::mt19937 rng(36);
  auto a = unit_det_system(curve, rng);
  // Moderate conjugation so the conjugated system stays well conditioned.
  cplx ga(1.1, 0.2), gb(0.3, -0.1), gc(-0.2, 0.25);
  cplx gd = (1.0 + gb * gc) / ga;
  auto rep1 = representation(curve, a, 1.0, gens, {1e-12});
  auto rep2 = representation(curve, conjugate(a, {ga, gb, gc, gd}), 1.0, gens, {1e-12});
  for (int k = 0; k < 4; ++k) {
    double c1 = log_char(rep1.gens[k]);
    double c2 = log_char(rep2.gens[k]);
    CHECK(std::abs(c1 - c2) < 1e-9 * std::max(1.0, std::abs(c1)));
  }
}

TEST_CASE("characters are base-point independent") {
  auto curve = quintic();
  auto gens1 = canonical_generators(curve);
  RoutingHints hints;
  hints.base_point = gens1.base_point + cplx(0.21, -0.35);
  auto gens2 = canonical_generators(curve, hints);
  std::mt19937 rng(37);
  auto a = unit_det_system(curve, rng);
  auto rep1 = representation(curve, a, 1.5, gens1, {1e-12});
  auto rep2 = representation(curve, a, 1.5, gens2, {1e-12});
  for (int k = 0; k < 4; ++k)
    CHECK(std::abs(log_char(rep1.gens[k]) - log_char(rep2.gens[k])) < 1e-8);
}

TEST_CASE("homotopy invariance of log characters") {
  auto curve = quintic();
  std::mt19937 rng(38);
  auto a = unit_det_system(curve, rng);
  PathOnCurve loop = generic_loop();
  double clear = path_clearance(curve, loop);
  double base = log_char(transfer_matrix(curve, a, 2.0, loop, {1e-12}));
  // Same homotopy class, different shape: radius and start angle nudged by
  // less than clearance/2.
  PathOnCurve wobble;
  wobble.start_sheet = loop.start_sheet;
  cplx c(0.5, 0.0);
  double r = 0.72;
  double dr = 0.4 * clear;
  wobble.segments.push_back(ArcSeg{c, r - dr, 0.3, kPi});
  wobble.segments.push_back(LineSeg{c + (r - dr) * std::exp(cplx(0.0, 0.3 + kPi)),
                                    c + r * std::exp(cplx(0.0, 0.3 + kPi))});
  wobble.segments.push_back(ArcSeg{c, r, 0.3 + kPi, kPi});
  wobble.segments.push_back(
      LineSeg{c + r * std::exp(cplx(0.0, 0.3)), c + (r - dr) * std::exp(cplx(0.0, 0.3))});
  double moved = log_char(transfer_matrix(curve, a, 2.0, wobble, {1e-12}));
  CHECK(std::abs(moved - base) < 1e-8);
}

TEST_CASE("log_char on explicit matrices") {
  RenormalizedMatrix id = RenormalizedMatrix::identity();
  CHECK(log_char(id) == doctest::Approx(std::log(2.0)));

  auto big = RenormalizedMatrix::from(Mat2::diag(std::exp(cplx(0.0)), 0.0), 0.0);
  big = RenormalizedMatrix::from(Mat2::diag(1.0, 0.0), 50.0);
  // represents diag(e^50, ~0): log|tr| = 50.
  CHECK(log_char(big) == doctest::Approx(50.0).epsilon(1e-12));

  auto rot = RenormalizedMatrix::from(Mat2{0.0, -1.0, 1.0, 0.0});
  CHECK_THROWS_AS(log_char(rot), VanishingTrace);
}

TEST_CASE("model ODE corner asymptotics decay monotonically") {
  // Bounded oscillatory B, Re a > 0 of constant sign.
  ModelOde model{
      [](double s) {
        return Mat2{cplx(0.3 * std::sin(2.0 * kPi * s), 0.1),
                    cplx(0.4 * std::cos(kPi * s), -0.2),
                    cplx(-0.25, 0.15 * std::sin(3.0 * s)), cplx(-0.3 * std::sin(2.0 * kPi * s), -0.1)};
      },
      [](double s) { return cplx(0.9 + 0.2 * std::cos(2.0 * kPi * s), 0.4 * std::sin(kPi * s)); }};
  double d10 = model_corner_deviation(model, 10.0, {1e-12});
  double d20 = model_corner_deviation(model, 20.0, {1e-12});
  double d40 = model_corner_deviation(model, 40.0, {1e-12});
  CHECK(d20 < d10);
  CHECK(d40 < d20);
  CHECK(d40 < 0.05);
}

TEST_CASE("model ODE log-norm gap stays bounded over t in [5, 50]") {
  ModelOde model{
      [](double s) {
        return Mat2{cplx(0.2 * std::cos(kPi * s), 0.0), cplx(0.3, 0.1),
                    cplx(-0.2, 0.25), cplx(-0.2 * std::cos(kPi * s), 0.0)};
      },
      [](double s) { return cplx(1.1 + 0.3 * std::sin(kPi * s), 0.2); }};
  double lo = 1e300, hi = -1e300;
  for (double t = 5.0; t <= 50.0; t += 2.5) {
    double gap = model_log_norm_gap(model, t, {1e-12});
    lo = std::min(lo, gap);
    hi = std::max(hi, gap);
  }
  CHECK(hi - lo < 1.0);
}

TEST_CASE("sampled paths reproduce callables") {
  SampledScalarPath a;
  SampledMatrixPath b;
  int n = 257;
  for (int i = 0; i < n; ++i) {
    double s = double(i) / (n - 1);
    a.samples.push_back(cplx(1.0 + 0.3 * std::sin(kPi * s), 0.1 * s));
    b.samples.push_back(Mat2{cplx(0.2 * s, 0.0), cplx(0.1, 0.0), cplx(0.0, 0.1),
                             cplx(-0.2 * s, 0.0)});
  }
  auto model = model_from_samples(b, a);
  ModelOde exact{
      [](double s) {
        return Mat2{cplx(0.2 * s, 0.0), cplx(0.1, 0.0), cplx(0.0, 0.1), cplx(-0.2 * s, 0.0)};
      },
      [](double s) { return cplx(1.0 + 0.3 * std::sin(kPi * s), 0.1 * s); }};
  auto f1 = wkb_model_transfer(model, 8.0, {1e-11});
  auto f2 = wkb_model_transfer(exact, 8.0, {1e-11});
  CHECK(std::abs(log_char(f1) - log_char(f2)) < 1e-5);
}
