// Momentum bookkeeping.  With nonvanishing boundary conditions the momentum
// is only defined modulo 2*pi; we track three representations:
//   valuation  - a real number attached to a concrete lift (rho, theta),
//   canonical  - the valuation reduced to [0, 2*pi),
//   abs class  - distance of the class to 0 on the circle, in [0, pi].
// Conventions: rho here always means the MODULUS |psi| (the 1D wave profile
// struct stores the squared modulus; callers convert).
#pragma once

#include <complex>
#include <vector>

#include "twave/errors.hpp"

namespace twave {

double canonical_momentum(double p);             // in [0, 2*pi)
double abs_momentum_class(double p);             // in [0, pi]
double momentum_class_add(double a, double b);   // canonical(a + b)

struct MomentumReport {
  double valuation;
  double canonical;
  double abs_class;
};
MomentumReport momentum_report(double valuation);

// Unwraps the phase of complex samples along the array; throws
// LiftingUnavailable when the modulus dips below `floor` times its maximum.
std::vector<double> lift_phase(const std::vector<std::complex<double>>& psi,
                               double floor = 1e-8);

// Lifted valuation int (1 - rho^2) theta' dx on a sorted 1D grid; exact in
// the theta-increments (trapezoid in the measure d theta).  Requires the
// modulus to be ~1 at both ends.
double momentum_lifted_1d(const std::vector<double>& x, const std::vector<double>& rho,
                          const std::vector<double>& theta, double boundary_tol = 1e-2);

// Compact-support representation int <i psi_x, psi> dx for fields equal to a
// constant unimodular value near the ends.  Agrees with the lifted valuation
// modulo 2*pi (the total phase increment of such a field is a multiple of
// 2*pi).
double momentum_compact_1d(const std::vector<double>& x,
                           const std::vector<std::complex<double>>& psi);

// Strip valuation int_0^1 int (1 - rho^2) theta_x dx dy on an nx-by-ny grid
// (index i + nx*j, y-period 1, dy = 1/ny).  Same cell rule as the discrete
// 2D energy, so constrained iterates can hold it exactly.
double momentum_lifted_2d(const std::vector<double>& rho, const std::vector<double>& theta,
                          int nx, int ny, double dy);

}  // namespace twave
