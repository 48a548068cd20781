#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "twave/dispersion1d.hpp"
#include "twave/nonlinearity.hpp"
#include "twave/quadrature1d.hpp"

using namespace twave;

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrt2 = 1.4142135623730951;
}  // namespace

TEST_CASE("sweep samples of the quadratic model match closed forms to 1e-6") {
  Nonlinearity m = make_gp();
  DispersionOptions o;
  o.n = 25;
  DispersionCurve cv = dispersion_sweep(m, o);
  CHECK(cv.skipped.empty());
  CHECK(cv.samples.size() >= 25);
  for (const DispersionPoint& s : cv.samples) {
    const double ew = gp::energy(s.c);
    const double pw = gp::momentum(s.c);
    CHECK(std::abs(s.energy - ew) <= 1e-6 * std::max(1.0, std::abs(ew)));
    CHECK(std::abs(s.p - pw) <= 1e-6 * std::max(1.0, std::abs(pw)));
    CHECK(s.zeta == doctest::Approx(0.5 * s.c * s.c).epsilon(1e-10));
    CHECK(s.finite_L);
  }
  // samples arrive sorted by speed
  for (std::size_t k = 1; k < cv.samples.size(); ++k)
    CHECK(cv.samples[k].c > cv.samples[k - 1].c);
}

TEST_CASE("quadratic-model envelope: concave, subsonic, cusp-free") {
  Nonlinearity m = make_gp();
  Envelope env = minimal_envelope(m, dispersion_sweep(m));
  CurveDiagnostics d = envelope_diagnostics(env);

  CHECK(d.concave);
  CHECK(d.worst_convexity <= 1e-6);
  CHECK(d.lipschitz_constant == doctest::Approx(1.375736075).epsilon(1e-5));
  CHECK(d.lipschitz_constant <= kSqrt2 + 1e-3);
  CHECK(d.subsonic_gap > 0.0);
  CHECK(d.subsonic_gap == doctest::Approx(0.003362).epsilon(0.02));
  CHECK(d.cusp_points.empty());
  CHECK(std::abs(d.slope_at_pi) < 1e-10);
  CHECK(d.threshold == doctest::Approx(1.8856180831641267).epsilon(1e-9));

  // envelope chain starts at the origin and ends at (pi, threshold)
  CHECK(env.chain.front().p == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(env.chain.front().e == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(env.chain.back().p == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(emin1(env, kPi) == doctest::Approx(1.885618083).epsilon(1e-8));

  // frozen interior values
  CHECK(emin1(env, kPi / 2.0 - 1.0) == doctest::Approx(0.666661171).epsilon(1e-6));
  CHECK(emin1(env, 0.3) == doctest::Approx(0.376522729).epsilon(1e-6));

  // strictly below the sonic line away from zero
  for (int i = 1; i <= 100; ++i) {
    const double p = 0.05 + (kPi - 0.05) * i / 100.0;
    CHECK(emin1(env, p) < kSqrt2 * p);
    CHECK(emin1(env, p) > 0.0);
  }
}

TEST_CASE("envelope evaluation is even and 2 pi periodic") {
  Nonlinearity m = make_gp();
  Envelope env = minimal_envelope(m, dispersion_sweep(m));
  for (double p : {0.2, 0.9, 1.7, 2.9}) {
    CHECK(emin1(env, -p) == doctest::Approx(emin1(env, p)).epsilon(1e-13));
    CHECK(emin1(env, p + 2.0 * kPi) == doctest::Approx(emin1(env, p)).epsilon(1e-13));
    CHECK(emin1(env, -p + 2.0 * kPi) == doctest::Approx(emin1(env, p)).epsilon(1e-13));
  }
  // slopes are reported on the folded representative
  CHECK(emin1_slope_left(env, -0.5) == doctest::Approx(emin1_slope_left(env, 0.5)).epsilon(1e-10));
  CHECK(emin1_slope_right(env, 0.5 + 2.0 * kPi) ==
        doctest::Approx(emin1_slope_right(env, 0.5)).epsilon(1e-10));
}

TEST_CASE("envelope slope equals the wave speed to 1e-3") {
  Nonlinearity m = make_gp();
  // chord slopes between adjacent samples carry an O(speed spacing / 2) error,
  // so the 1e-3 gate needs a dense sweep
  DispersionOptions o;
  o.n = 801;
  Envelope env = minimal_envelope(m, dispersion_sweep(m, o));
  for (double c : {0.3, 0.7, 1.0, 1.2}) {
    const double p = gp::momentum(c);
    const double sl = emin1_slope_left(env, p);
    const double sr = emin1_slope_right(env, p);
    INFO("c = ", c);
    CHECK(sl >= sr - 1e-12);  // concavity
    CHECK(std::abs(sl - c) < 1e-3);
    CHECK(std::abs(sr - c) < 1e-3);
  }
}

TEST_CASE("coarse sweeps do not produce spurious corners") {
  Nonlinearity m = make_gp();
  DispersionOptions o;
  o.n = 41;
  Envelope env = minimal_envelope(m, dispersion_sweep(m, o));
  CurveDiagnostics d = envelope_diagnostics(env);
  CHECK(d.concave);
  CHECK(d.cusp_points.empty());
}

TEST_CASE("two-speed model: corner with two attained speeds at one momentum") {
  Nonlinearity m = make_example43();
  Envelope env = minimal_envelope(m, dispersion_sweep(m));
  CurveDiagnostics d = envelope_diagnostics(env);

  CHECK(d.concave);
  CHECK(d.worst_convexity <= 1e-6);
  REQUIRE(!d.cusp_points.empty());

  // the main family crossing: slope jump with well-separated speeds
  const CuspPoint* main_cusp = nullptr;
  for (const CuspPoint& cp : d.cusp_points)
    if (std::abs(cp.p - 0.875291) < 0.05) main_cusp = &cp;
  REQUIRE(main_cusp != nullptr);
  CHECK(main_cusp->slope_left > main_cusp->slope_right + 0.2);
  CHECK(main_cusp->speed_lo == doctest::Approx(0.401).epsilon(0.02));
  CHECK(main_cusp->speed_hi == doctest::Approx(0.8013).epsilon(0.02));
  // multiplier duality: corner slopes bracket the attained speeds
  CHECK(main_cusp->slope_right <= main_cusp->speed_lo + 0.05);
  CHECK(main_cusp->slope_left >= main_cusp->speed_hi - 0.05);

  // the envelope reaches the vanishing threshold at the half-period
  CHECK(emin1(env, kPi) == doctest::Approx(1.122854143).epsilon(1e-7));
  CHECK(env.threshold == doctest::Approx(1.122854143148).epsilon(1e-9));
  CHECK(std::abs(d.slope_at_pi) < 1e-10);
}

TEST_CASE("two-speed model: several speeds attain the corner momentum") {
  Nonlinearity m = make_example43();
  std::vector<double> roots = speed_for_momentum(m, 0.86645);
  REQUIRE(roots.size() >= 2);
  // sorted by increasing energy: fast low-energy branch first, slow branch next
  CHECK(roots[0] == doctest::Approx(0.8008).epsilon(0.01));
  CHECK(roots[1] == doctest::Approx(0.4031).epsilon(0.01));
}

TEST_CASE("speed recovery on the quadratic model inverts the momentum map") {
  Nonlinearity m = make_gp();
  for (double c : {0.4, 0.9, 1.25}) {
    std::vector<double> roots = speed_for_momentum(m, gp::momentum(c));
    REQUIRE(roots.size() == 1);
    CHECK(roots[0] == doctest::Approx(c).epsilon(1e-4));
  }
}

TEST_CASE("monotone-potential model: cusp only at the half-period") {
  Nonlinearity m = make_example55();
  Envelope env = minimal_envelope(m, dispersion_sweep(m));
  CurveDiagnostics d = envelope_diagnostics(env);

  CHECK(d.concave);
  // every interior corner is absent; the terminal one is real
  REQUIRE(d.cusp_points.size() == 1);
  CHECK(d.cusp_points[0].p == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(d.slope_at_pi == doctest::Approx(1.346725).epsilon(1e-3));
  CHECK(d.cusp_gap_at_pi == doctest::Approx(2.0 * d.slope_at_pi).epsilon(1e-12));
  // by even reflection the one-sided slopes at pi disagree: genuine corner
  CHECK(d.slope_at_pi > 1.0);
  CHECK(emin1(env, kPi) == doctest::Approx(4.231911252).epsilon(1e-6));
  // stays strictly below both caps at the half-period
  CHECK(emin1(env, kPi) < kSqrt2 * kPi);
  CHECK(emin1(env, kPi) < env.threshold);
}

TEST_CASE("explicit low-energy pair: exact momentum, predicted energy") {
  Nonlinearity m = make_gp();
  TestPairResult r = test_function_energy(m, 0.3, 400.0);
  CHECK(r.momentum == doctest::Approx(0.3).epsilon(1e-10));
  CHECK(r.energy == doctest::Approx(0.424337703013).epsilon(1e-8));
  CHECK(r.energy == doctest::Approx(r.predicted).epsilon(1e-6));
  CHECK(r.energy > kSqrt2 * 0.3);
  CHECK(r.amplitude < 0.05);

  // larger scale approaches the sonic line from above
  TestPairResult r2 = test_function_energy(m, 0.3, 100.0);
  CHECK(r2.energy > r.energy);
  CHECK(r.energy - kSqrt2 * 0.3 < 2e-4);
}

TEST_CASE("bump template frozen constants") {
  CHECK(bump::chi(1.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(bump::chi(-1.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(bump::chi(0.0) == doctest::Approx(-0.5862303955444107).epsilon(1e-12));
  CHECK(bump::quad_a() == doctest::Approx(13.5).epsilon(1e-12));
  CHECK(bump::quad_b() == doctest::Approx(0.9199641665235494).epsilon(1e-10));
  // chi' is odd with unit squared integral (midpoint rule check)
  double i2 = 0.0;
  const int n = 20000;
  for (int k = 0; k < n; ++k) {
    const double u = -1.0 + 2.0 * (k + 0.5) / n;
    CHECK(bump::dchi(u) == doctest::Approx(-bump::dchi(-u)).epsilon(1e-12));
    i2 += bump::dchi(u) * bump::dchi(u) * (2.0 / n);
  }
  CHECK(i2 == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(bump::max_dchi() > 0.0);
}
