// 1D traveling waves by quadrature.  A nonconstant wave of speed c (with
// squared modulus rho -> 1 at infinity) satisfies the first integral
//     (rho')^2 = g(rho, c),     g(s, c) = 4 s V(s) - c^2 (1 - s)^2,
// with phase theta' = (c/2)(1 - rho)/rho.  The wave dips to the largest zero
// zeta(c) of g below 1 (lower branch) or climbs to the smallest zero above 1
// (upper branch).  We integrate the profile as an IVP started from a local
// series at the turning point instead of inverting the hodograph primitive.
#pragma once

#include <vector>

#include "twave/nonlinearity.hpp"

namespace twave {

enum class Branch { lower, upper };

struct TurningPoint {
  double zeta;
  double dg;  // dg/ds at zeta: positive on the lower branch, negative on the upper
  Branch branch = Branch::lower;
};

// throws PreconditionError (c < 0 or supersonic), NoTurningPoint,
// UndecidableFiniteness (|dg| below the simple-zero certification threshold)
TurningPoint turning_point(const Nonlinearity& m, double c, Branch branch = Branch::lower);

// Antiderivative of 1/sqrt(g(., c)) anchored at the midpoint a = (zeta+1)/2,
// evaluated at s strictly between zeta and 1 (resp. 1 and zeta on the upper
// branch).  Finite limit at zeta iff the zero is simple.
double primitive_G(const Nonlinearity& m, double c, double s, Branch branch = Branch::lower);
// L(c) = lim_{s -> zeta} G(s): the finite-time-vs-infinite-tail indicator.
double primitive_L(const Nonlinearity& m, double c, Branch branch = Branch::lower);

struct ProfileOptions {
  double x_max = 0.0;  // <= 0: automatic 12 / sqrt(2 - c^2)
  int n = 4001;        // odd, >= 41
  Branch branch = Branch::lower;
};

struct WaveProfile1D {
  double c = 0.0;
  Branch branch = Branch::lower;
  double zeta = 0.0;
  double x_max = 0.0;
  std::vector<double> x;      // symmetric grid of odd length
  std::vector<double> rho;    // SQUARED modulus, even in x
  std::vector<double> theta;  // phase, odd in x (theta(0) = 0)
};

WaveProfile1D build_profile(const Nonlinearity& m, double c, const ProfileOptions& opts = {});

// fills rho/theta at given nonnegative sorted nodes (series + IVP); used by
// build_profile and by the 2D embedding init
void half_profile(const Nonlinearity& m, double c, Branch branch, const std::vector<double>& xs,
                  std::vector<double>& rho_out, std::vector<double>& theta_out);

// hodograph-side invariants:  E = 4 int V/sqrt(g) ds,  p = c int (1-s)^2/(s sqrt(g)) ds
double energy_s(const Nonlinearity& m, double c, Branch branch = Branch::lower);
double momentum_s(const Nonlinearity& m, double c, Branch branch = Branch::lower);

struct WaveInvariants {
  double c = 0.0;
  double energy = 0.0;    // x-quadrature on the profile
  double energy_s = 0.0;  // hodograph quadrature
  double momentum_valuation = 0.0;
  double momentum_s = 0.0;
  double momentum_canonical = 0.0;
  double abs_class = 0.0;
  double decay_rate = 0.0;
  double decay_rate_expected = 0.0;  // sqrt(2 - c^2)
  bool finite_L = true;
};

// computes both forms of each invariant and cross-checks them (throws
// DisagreementError beyond 1e-6 relative)
WaveInvariants wave_invariants(const Nonlinearity& m, const WaveProfile1D& prof);

// max over interior nodes of |(rho')^2 + c^2 (1-rho)^2 - 4 rho V(rho)| with a
// 5th-order finite-difference rho'
double first_integral_residual(const Nonlinearity& m, const WaveProfile1D& prof);

// closed forms for the quadratic (Gross-Pitaevskii) potential, used as the
// exactness reference in tests and acceptance runs
namespace gp {
double zeta(double c);
double rho(double c, double x);    // squared modulus
double theta(double c, double x);
double energy(double c);
double momentum(double c);
// antiderivative of 1/sqrt(g) with the anchor G(zeta) = 0
double primitive_G(double c, double s);
// midpoint-anchored limit at zeta, i.e. -(2/kappa) log(1 + sqrt2)
double primitive_L(double c);
double threshold();  // 4 sqrt2 / 3
}  // namespace gp

}  // namespace twave
