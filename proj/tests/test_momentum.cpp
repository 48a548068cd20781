#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "twave/errors.hpp"
#include "twave/momentum.hpp"
#include "twave/nonlinearity.hpp"
#include "twave/quadrature1d.hpp"

using namespace twave;

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 6.283185307179586;
}  // namespace

TEST_CASE("canonical representative and absolute class: fixed points") {
  CHECK(canonical_momentum(0.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(canonical_momentum(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(canonical_momentum(-1.0) == doctest::Approx(kTwoPi - 1.0).epsilon(1e-14));
  CHECK(canonical_momentum(kTwoPi) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(canonical_momentum(3.0 * kPi) == doctest::Approx(kPi).epsilon(1e-14));
  CHECK(abs_momentum_class(0.3) == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(abs_momentum_class(-0.3) == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(abs_momentum_class(kTwoPi - 0.3) == doctest::Approx(0.3).epsilon(1e-13));
  CHECK(abs_momentum_class(kPi) == doctest::Approx(kPi).epsilon(1e-14));
  CHECK(momentum_class_add(kPi, kPi) == doctest::Approx(0.0).epsilon(1e-13));
  CHECK(momentum_class_add(5.0, 4.0) == doctest::Approx(9.0 - kTwoPi).epsilon(1e-13));
}

TEST_CASE("randomized momentum algebra holds to 1e-12") {
  // 10^4 draws over several decades of magnitude
  std::mt19937_64 rng(20260823ull);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_int_distribution<int> expo(0, 3);
  int fails = 0;
  for (int it = 0; it < 10000; ++it) {
    const double a = unit(rng) * std::pow(10.0, expo(rng));
    const double b = unit(rng) * std::pow(10.0, expo(rng));
    const double ca = canonical_momentum(a);
    const double cb = canonical_momentum(b);

    // representative lies in [0, 2 pi) and differs from the input by a
    // whole number of periods
    if (!(ca >= 0.0 && ca < kTwoPi)) ++fails;
    const double k = (a - ca) / kTwoPi;
    if (std::abs(k - std::round(k)) > 1e-9) ++fails;

    // canonical is idempotent
    if (std::abs(canonical_momentum(ca) - ca) > 1e-12) ++fails;

    // addition descends to classes: add(a, b) == canonical(ca + cb)
    const double s1 = momentum_class_add(a, b);
    const double s2 = canonical_momentum(ca + cb);
    if (std::abs(s1 - s2) > 1e-12) ++fails;

    // commutativity and neutral element
    if (std::abs(momentum_class_add(a, b) - momentum_class_add(b, a)) > 1e-12) ++fails;
    if (std::abs(momentum_class_add(a, 0.0) - ca) > 1e-12) ++fails;

    // inverse: a + (-a) is the zero class
    const double z = momentum_class_add(a, -a);
    if (std::min(z, kTwoPi - z) > 1e-12) ++fails;

    // absolute class: even, 2 pi periodic, in [0, pi]
    const double qa = abs_momentum_class(a);
    if (!(qa >= 0.0 && qa <= kPi + 1e-15)) ++fails;
    if (std::abs(qa - abs_momentum_class(-a)) > 1e-12) ++fails;
    if (std::abs(qa - abs_momentum_class(a + kTwoPi)) > 1e-12) ++fails;
    if (std::abs(qa - std::min(ca, kTwoPi - ca)) > 1e-12) ++fails;
  }
  CHECK(fails == 0);
}

TEST_CASE("momentum report carries all three representations") {
  MomentumReport r = momentum_report(-2.5);
  CHECK(r.valuation == doctest::Approx(-2.5).epsilon(1e-15));
  CHECK(r.canonical == doctest::Approx(kTwoPi - 2.5).epsilon(1e-14));
  CHECK(r.abs_class == doctest::Approx(2.5).epsilon(1e-14));
}

TEST_CASE("phase lifting recovers a linear phase modulo a constant") {
  const int n = 2001;
  std::vector<std::complex<double>> psi(n);
  std::vector<double> want(n);
  for (int k = 0; k < n; ++k) {
    const double x = -5.0 + 10.0 * k / (n - 1);
    want[k] = 1.7 * x;
    psi[k] = std::polar(1.0, want[k]);
  }
  std::vector<double> th = lift_phase(psi);
  const double off = th[0] - want[0];
  CHECK(std::abs(off - kTwoPi * std::round(off / kTwoPi)) < 1e-12);
  for (int k = 0; k < n; ++k)
    CHECK(th[k] - off == doctest::Approx(want[k]).epsilon(1e-10));
}

TEST_CASE("phase lifting refuses near-vanishing modulus") {
  std::vector<std::complex<double>> psi(101, std::complex<double>(1.0, 0.0));
  psi[50] = std::complex<double>(1e-12, 0.0);
  CHECK_THROWS_AS(lift_phase(psi), LiftingUnavailable);
}

TEST_CASE("lifted 1D valuation reproduces the quadratic closed form") {
  Nonlinearity m = make_gp();
  for (double c : {0.5, 1.0, 1.3}) {
    WaveProfile1D prof = build_profile(m, c);
    std::vector<double> mod(prof.rho.size());
    for (std::size_t k = 0; k < mod.size(); ++k) mod[k] = std::sqrt(prof.rho[k]);
    const double p = momentum_lifted_1d(prof.x, mod, prof.theta);
    CHECK(p == doctest::Approx(gp::momentum(c)).epsilon(1e-5));
  }
}

TEST_CASE("lifted valuation requires normalized boundary modulus") {
  std::vector<double> x{-1.0, 0.0, 1.0};
  std::vector<double> rho{0.5, 0.7, 0.5};
  std::vector<double> th{0.0, 0.1, 0.2};
  CHECK_THROWS_AS(momentum_lifted_1d(x, rho, th), BoundaryNotNormalized);
}

TEST_CASE("compact representation agrees with the lifted one modulo 2 pi") {
  // psi = exp(i phi(x)) (1 - a w(x)), w compactly supported, phi winding by
  // 2 pi k across the support
  const int n = 20001;
  std::vector<double> x(n), mod(n), th(n);
  std::vector<std::complex<double>> psi(n);
  for (int k = 0; k < n; ++k) {
    x[k] = -10.0 + 20.0 * k / (n - 1);
    const double u = x[k] / 4.0;
    const double w = (std::abs(u) < 1.0) ? std::exp(-1.0 / (1.0 - u * u)) * std::exp(1.0) : 0.0;
    mod[k] = 1.0 - 0.4 * w;
    th[k] = kTwoPi * (0.5 + 0.5 * std::tanh(x[k]));
    psi[k] = std::polar(mod[k], th[k]);
  }
  const double lifted = momentum_lifted_1d(x, mod, th);
  const double compact = momentum_compact_1d(x, psi);
  const double diff = lifted - compact;
  CHECK(std::abs(diff - kTwoPi * std::round(diff / kTwoPi)) < 1e-5);
}

TEST_CASE("strip valuation is ny-fold consistent with the 1D rule") {
  // replicate a 1D field across ny rows: the strip valuation (dy = 1/ny)
  // must equal the single-row valuation
  const int nx = 801, ny = 7;
  std::vector<double> x(nx), mod1(nx), th1(nx);
  for (int i = 0; i < nx; ++i) {
    x[i] = -8.0 + 16.0 * i / (nx - 1);
    mod1[i] = 1.0 - 0.3 * std::exp(-x[i] * x[i]);
    th1[i] = 0.9 * std::tanh(x[i]);
  }
  std::vector<double> rho(nx * ny), th(nx * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      rho[i + nx * j] = mod1[i];
      th[i + nx * j] = th1[i];
    }
  const double p2 = momentum_lifted_2d(rho, th, nx, ny, 1.0 / ny);
  // same trapezoid-in-dtheta cell rule, x-uniform grid
  double p1 = 0.0;
  for (int i = 0; i + 1 < nx; ++i)
    p1 += 0.5 * ((1.0 - mod1[i] * mod1[i]) + (1.0 - mod1[i + 1] * mod1[i + 1])) *
          (th1[i + 1] - th1[i]);
  CHECK(p2 == doctest::Approx(p1).epsilon(1e-13));
}
