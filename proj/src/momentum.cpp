#include "twave/momentum.hpp"

#include <cmath>

namespace twave {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

double canonical_momentum(double p) {
  double r = std::fmod(p, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod can land exactly on 2*pi after the correction when p is a tiny
  // negative number; fold that back
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double abs_momentum_class(double p) {
  double r = canonical_momentum(p);
  return std::min(r, kTwoPi - r);
}

double momentum_class_add(double a, double b) { return canonical_momentum(a + b); }

MomentumReport momentum_report(double valuation) {
  return {valuation, canonical_momentum(valuation), abs_momentum_class(valuation)};
}

std::vector<double> lift_phase(const std::vector<std::complex<double>>& psi, double floor) {
  if (psi.empty()) throw PreconditionError("lift_phase: empty input");
  double amax = 0.0;
  for (const auto& z : psi) amax = std::max(amax, std::abs(z));
  if (amax <= 0.0) throw LiftingUnavailable("lift_phase: field is identically zero");
  std::vector<double> theta(psi.size());
  theta[0] = std::arg(psi[0]);
  for (size_t k = 0; k < psi.size(); ++k) {
    if (std::abs(psi[k]) < floor * amax)
      throw LiftingUnavailable("lift_phase: modulus vanishes along the path");
    if (k == 0) continue;
    // increment by the principal argument of the ratio: continuous as long as
    // consecutive samples stay within a half-turn of each other
    theta[k] = theta[k - 1] + std::arg(psi[k] / psi[k - 1]);
  }
  return theta;
}

double momentum_lifted_1d(const std::vector<double>& x, const std::vector<double>& rho,
                          const std::vector<double>& theta, double boundary_tol) {
  size_t n = x.size();
  if (rho.size() != n || theta.size() != n || n < 2)
    throw PreconditionError("momentum_lifted_1d: bad sample arrays");
  if (std::fabs(rho.front() - 1.0) > boundary_tol || std::fabs(rho.back() - 1.0) > boundary_tol)
    throw BoundaryNotNormalized("momentum_lifted_1d: |psi| must approach 1 at the ends");
  double acc = 0.0;
  for (size_t k = 0; k + 1 < n; ++k) {
    double f0 = 1.0 - rho[k] * rho[k];
    double f1 = 1.0 - rho[k + 1] * rho[k + 1];
    acc += 0.5 * (f0 + f1) * (theta[k + 1] - theta[k]);
  }
  return acc;
}

double momentum_compact_1d(const std::vector<double>& x,
                           const std::vector<std::complex<double>>& psi) {
  size_t n = x.size();
  if (psi.size() != n || n < 2) throw PreconditionError("momentum_compact_1d: bad sample arrays");
  // per cell: Re(i (psi_{k+1}-psi_k) conj(psi_k+psi_{k+1})/2) = -Im(psi_{k+1} conj(psi_k))
  double acc = 0.0;
  for (size_t k = 0; k + 1 < n; ++k) acc -= std::imag(psi[k + 1] * std::conj(psi[k]));
  return acc;
}

double momentum_lifted_2d(const std::vector<double>& rho, const std::vector<double>& theta,
                          int nx, int ny, double dy) {
  if (nx < 2 || ny < 1 || rho.size() != static_cast<size_t>(nx) * ny || theta.size() != rho.size())
    throw PreconditionError("momentum_lifted_2d: bad field dimensions");
  double acc = 0.0;
  for (int j = 0; j < ny; ++j) {
    const double* r = rho.data() + static_cast<size_t>(nx) * j;
    const double* th = theta.data() + static_cast<size_t>(nx) * j;
    double row = 0.0;
    for (int i = 0; i + 1 < nx; ++i) {
      double f0 = 1.0 - r[i] * r[i];
      double f1 = 1.0 - r[i + 1] * r[i + 1];
      row += 0.5 * (f0 + f1) * (th[i + 1] - th[i]);
    }
    acc += row;
  }
  return acc * dy;
}

}  // namespace twave
