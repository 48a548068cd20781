// Exception hierarchy shared by the whole library.  The CLI maps these to
// process exit codes at its top level; library code never calls exit().
#pragma once

#include <stdexcept>
#include <string>

namespace twave {

enum ExitCode : int {
  exit_ok = 0,
  exit_config = 2,        // malformed config / model file
  exit_precondition = 3,  // violated precondition (supersonic speed, bad grid, ...)
  exit_no_wave = 4,       // no wave exists / existence undecidable at this speed
  exit_no_convergence = 5
};

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : Error {
  using Error::Error;
};

struct PreconditionError : Error {
  using Error::Error;
};

// The discriminant has no admissible zero on the requested side of 1:
// no nonconstant wave on that branch.
struct NoTurningPoint : Error {
  double c;
  NoTurningPoint(double c_, const std::string& what) : Error(what), c(c_) {}
};

// |dg/ds| at the turning point is below the certification threshold, so we
// cannot decide numerically whether the hodograph primitive stays finite
// (the zero may be of higher order, in which case no wave exists).
struct UndecidableFiniteness : Error {
  double c, zeta, dg;
  UndecidableFiniteness(double c_, double zeta_, double dg_, const std::string& what)
      : Error(what), c(c_), zeta(zeta_), dg(dg_) {}
};

struct NumericalError : Error {
  using Error::Error;
};

// Two independent evaluations of the same quantity differ beyond tolerance.
struct DisagreementError : Error {
  double a, b, rel;
  DisagreementError(double a_, double b_, double rel_, const std::string& what)
      : Error(what), a(a_), b(b_), rel(rel_) {}
};

// Phase lift requested through a zero (or near-zero) of the field.
struct LiftingUnavailable : Error {
  using Error::Error;
};

// Lifted momentum needs |psi| -> 1 at the ends of the x-interval.
struct BoundaryNotNormalized : Error {
  using Error::Error;
};

// Modulus dropped below the admissible floor during the 2D minimization.
struct RhoUnderflow : Error {
  double rho_min;
  RhoUnderflow(double rho_min_, const std::string& what) : Error(what), rho_min(rho_min_) {}
};

struct MaxIterations : Error {
  long iters;
  MaxIterations(long iters_, const std::string& what) : Error(what), iters(iters_) {}
};

struct InsufficientSamples : Error {
  using Error::Error;
};

// Test-pair amplitude would push the modulus to (or below) zero.
struct AmplitudeTooLarge : Error {
  using Error::Error;
};

}  // namespace twave
