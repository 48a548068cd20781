// Shared test utilities.
#pragma once

#include <cmath>

#include "twave/minimize2d.hpp"
#include "twave/quadrature1d.hpp"

namespace twave::testutil {

// Uniform strip field filled from the quadratic-model closed forms.  Unlike
// embed_profile (which samples an ODE-built profile), every node is exact to
// machine precision, so Euler-Lagrange residuals show clean O(h^2) decay.
inline Field2D embed_closed_form(double c, int nx, int ny, double x_max, double lam) {
  Field2D f = make_field(nx, ny, x_max, lam);
  for (int i = 0; i < nx; ++i) {
    const double rr = (i == 0 || i == nx - 1) ? 1.0 : std::sqrt(gp::rho(c, f.x_of(i)));
    const double tt = gp::theta(c, f.x_of(i));
    for (int j = 0; j < ny; ++j) {
      f.rho[f.idx(i, j)] = rr;
      f.theta[f.idx(i, j)] = tt;
    }
  }
  return f;
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

}  // namespace twave::testutil
