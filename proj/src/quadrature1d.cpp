#include "twave/quadrature1d.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

#include "twave/errors.hpp"
#include "twave/momentum.hpp"

namespace twave {

namespace {

constexpr double kPi = 3.14159265358979323846;

double quad(const std::function<double(double)>& f, double a, double b, double tol = 1e-11) {
  if (a == b) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, tol);
}

// Integral of W(tau)/sqrt(g) over the inner quarter next to the turning point,
// after the substitution tau = zeta + sgn*u^2 that removes the 1/sqrt
// singularity.  Integrates u in [ua, ub]; pass W(zeta) separately so the u=0
// limit 2 W / sqrt|dg| is exact.
double usub_piece(const Nonlinearity& m, double c, const TurningPoint& tp, double ua, double ub,
                  const std::function<double(double)>& W) {
  const double sgn = (tp.branch == Branch::lower) ? 1.0 : -1.0;
  const double adg = std::abs(tp.dg);
  auto fu = [&](double u) {
    const double tau = tp.zeta + sgn * u * u;
    const double gg = m.g(tau, c);
    if (u < 1e-9 || gg <= 0.0) return 2.0 * W(tp.zeta) / std::sqrt(adg);
    return 2.0 * u * W(tau) / std::sqrt(gg);
  };
  return quad(fu, ua, ub);
}

double direct_piece(const Nonlinearity& m, double c, double s_lo, double s_hi,
                    const std::function<double(double)>& W) {
  auto fd = [&](double tau) {
    return W(tau) / std::sqrt(std::max(m.g(tau, c), 1e-300));
  };
  return quad(fd, s_lo, s_hi);
}

// Splitting points of the interval between the turning point and 1: the sqrt
// substitution handles the nearest quarter, plain quadrature the rest.
struct HodoSplit {
  double a;        // midpoint anchor (zeta+1)/2
  double split;    // boundary between the substituted and the direct piece
  double u_split;  // u-coordinate of split
};

HodoSplit hodo_split(const TurningPoint& tp) {
  HodoSplit h;
  h.a = 0.5 * (tp.zeta + 1.0);
  h.split = tp.zeta + 0.25 * (h.a - tp.zeta);
  h.u_split = std::sqrt(std::abs(h.split - tp.zeta));
  return h;
}

// Full integral of W/sqrt(g) over the admissible interval (zeta,1) or (1,zeta).
double hodo_full(const Nonlinearity& m, double c, const TurningPoint& tp,
                 const std::function<double(double)>& W) {
  const HodoSplit h = hodo_split(tp);
  const double near = usub_piece(m, c, tp, 0.0, h.u_split, W);
  const double far = (tp.branch == Branch::lower) ? direct_piece(m, c, h.split, 1.0, W)
                                                  : direct_piece(m, c, 1.0, h.split, W);
  return near + far;
}

const std::function<double(double)> kUnitW = [](double) { return 1.0; };

// Integrate F(rho(x)) dx over the sampled profile: per-cell 7-point Gauss on a
// centered cubic interpolant of rho.  Plain trapezoid is not enough for the
// momentum density (1-rho)^2/rho, whose spike at a near-zero dip can be only a
// couple of cells wide; the cubic reproduces the parabolic dip to O(dx^4).
double profile_integral(const std::vector<double>& rho, double dx,
                        const std::function<double(double)>& F) {
  static const double gx[7] = {0.025446043828620812, 0.12923440720030277, 0.29707742431130141,
                               0.5,                  0.70292257568869859, 0.87076559279969723,
                               0.97455395617137919};
  static const double gw[7] = {0.064742483084434846, 0.13985269574463833, 0.19091502525255947,
                               0.20897959183673469,  0.19091502525255947, 0.13985269574463833,
                               0.064742483084434846};
  const int n = int(rho.size());
  double total = 0.0;
  for (int k = 0; k + 1 < n; ++k) {
    const double r0 = rho[std::max(k - 1, 0)];
    const double r1 = rho[k];
    const double r2 = rho[k + 1];
    const double r3 = rho[std::min(k + 2, n - 1)];
    double cell = 0.0;
    for (int j = 0; j < 7; ++j) {
      const double t = gx[j];
      const double rh =
          r1 + 0.5 * t *
                   (r2 - r0 + t * (2.0 * r0 - 5.0 * r1 + 4.0 * r2 - r3 +
                                   t * (3.0 * (r1 - r2) + r3 - r0)));
      cell += gw[j] * F(rh);
    }
    total += cell * dx;
  }
  return total;
}

}  // namespace

TurningPoint turning_point(const Nonlinearity& m, double c, Branch branch) {
  if (!std::isfinite(c) || c < 0.0)
    throw PreconditionError("turning_point: speed must be finite and nonnegative");
  if (c * c >= 2.0 - 1e-9)
    throw PreconditionError("turning_point: speed at or above the sound speed sqrt(2)");

  // Bracket the zero of g(., c) nearest to 1 on the requested side by a
  // downward (resp. upward) scan, then polish with TOMS 748.
  const int K = 4096;
  double bl = 0.0, br = 0.0, gbl = 0.0, gbr = 0.0;
  bool found = false;
  if (branch == Branch::lower) {
    const double s_start = 1.0 - 1e-7;
    double prev = s_start, gprev = m.g(prev, c);
    if (gprev <= 0.0)
      throw PreconditionError("turning_point: discriminant not positive just below s = 1");
    for (int k = 1; k <= K; ++k) {
      const double s = s_start * double(K - k) / double(K);
      const double gs = m.g(s, c);
      if (gs <= 0.0) {
        bl = s;
        br = prev;
        gbl = gs;
        gbr = gprev;
        found = true;
        break;
      }
      prev = s;
      gprev = gs;
    }
    if (!found)
      throw NoTurningPoint(c, "turning_point: no zero of the discriminant in [0, 1)");
  } else {
    const double s_lo = 1.0 + 1e-7;
    if (!(m.s_max > s_lo + 1e-6))
      throw PreconditionError("turning_point: model horizon does not extend above s = 1");
    double prev = s_lo, gprev = m.g(prev, c);
    if (gprev <= 0.0)
      throw PreconditionError("turning_point: discriminant not positive just above s = 1");
    for (int k = 1; k <= K; ++k) {
      const double s = s_lo + (m.s_max - s_lo) * double(k) / double(K);
      const double gs = m.g(s, c);
      if (gs <= 0.0) {
        bl = prev;
        br = s;
        gbl = gprev;
        gbr = gs;
        found = true;
        break;
      }
      prev = s;
      gprev = gs;
    }
    if (!found)
      throw NoTurningPoint(c,
                           "turning_point: discriminant stays positive up to the model horizon");
  }

  double zeta;
  if (gbl == 0.0) {
    zeta = bl;
  } else if (gbr == 0.0) {
    zeta = br;
  } else {
    auto fg = [&](double s) { return m.g(s, c); };
    std::uintmax_t iters = 200;
    auto r = boost::math::tools::toms748_solve(fg, bl, br, gbl, gbr,
                                               boost::math::tools::eps_tolerance<double>(), iters);
    zeta = 0.5 * (r.first + r.second);
  }

  const double dg = m.dg_ds(zeta, c);
  const double thresh = 1e-6 * (1.0 + c * c);
  if (std::abs(dg) <= thresh)
    throw UndecidableFiniteness(c, zeta, dg,
                                "turning_point: |dg/ds| at the turning point is below the "
                                "simple-zero certification threshold");
  // The zero nearest to 1 is an up-crossing seen from the s=1 side; wrong sign
  // means the scan landed on an inconsistent root.
  if ((branch == Branch::lower && dg < 0.0) || (branch == Branch::upper && dg > 0.0))
    throw NumericalError("turning_point: inconsistent crossing direction at the turning point");

  TurningPoint tp;
  tp.zeta = zeta;
  tp.dg = dg;
  tp.branch = branch;
  return tp;
}

double primitive_G(const Nonlinearity& m, double c, double s, Branch branch) {
  const TurningPoint tp = turning_point(m, c, branch);
  const HodoSplit h = hodo_split(tp);
  if (branch == Branch::lower) {
    if (!(s > tp.zeta && s < 1.0))
      throw PreconditionError("primitive_G: s must lie strictly between zeta and 1");
    if (s >= h.split) {
      return (s >= h.a) ? direct_piece(m, c, h.a, s, kUnitW)
                        : -direct_piece(m, c, s, h.a, kUnitW);
    }
    const double us = std::sqrt(s - tp.zeta);
    return -(usub_piece(m, c, tp, us, h.u_split, kUnitW) +
             direct_piece(m, c, h.split, h.a, kUnitW));
  }
  if (!(s > 1.0 && s < tp.zeta))
    throw PreconditionError("primitive_G: s must lie strictly between 1 and the upper zeta");
  if (s <= h.split) {
    return (s >= h.a) ? direct_piece(m, c, h.a, s, kUnitW) : -direct_piece(m, c, s, h.a, kUnitW);
  }
  const double us = std::sqrt(tp.zeta - s);
  return direct_piece(m, c, h.a, h.split, kUnitW) + usub_piece(m, c, tp, us, h.u_split, kUnitW);
}

double primitive_L(const Nonlinearity& m, double c, Branch branch) {
  const TurningPoint tp = turning_point(m, c, branch);
  const HodoSplit h = hodo_split(tp);
  const double inner = usub_piece(m, c, tp, 0.0, h.u_split, kUnitW);
  if (branch == Branch::lower) return -(inner + direct_piece(m, c, h.split, h.a, kUnitW));
  return direct_piece(m, c, h.a, h.split, kUnitW) + inner;
}

void half_profile(const Nonlinearity& m, double c, Branch branch, const std::vector<double>& xs,
                  std::vector<double>& rho_out, std::vector<double>& theta_out) {
  rho_out.assign(xs.size(), 0.0);
  theta_out.assign(xs.size(), 0.0);
  if (xs.empty()) return;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] >= 0.0) || (i > 0 && xs[i] < xs[i - 1]))
      throw PreconditionError("half_profile: nodes must be nonnegative and ascending");
  }

  const TurningPoint tp = turning_point(m, c, branch);
  const double zeta = tp.zeta;
  const double alpha = 0.25 * tp.dg;  // signed: negative on the upper branch
  const double beta = tp.dg * m.d2g_ds2(zeta, c) / 96.0;

  // Leave the turning point on a local series rho = zeta + alpha x^2 + beta x^4
  // (the IVP is degenerate at x = 0).  The handoff point x0 keeps the series
  // increment tiny relative to both the wave amplitude and, when the phase is
  // active, to zeta itself (theta' carries a 1/rho).
  double clamp1 = 1e-3 * std::abs(1.0 - zeta);
  if (c > 0.0 && branch == Branch::lower) clamp1 = std::min(clamp1, 1e-3 * zeta);
  double x0 = std::sqrt(clamp1 / std::max(std::abs(alpha), 1e-300));
  if (beta != 0.0) x0 = std::min(x0, std::sqrt(0.05 * std::abs(alpha) / std::abs(beta)));
  x0 = std::max(x0, 1e-8);

  auto series_rho = [&](double x) {
    const double x2 = x * x;
    return zeta + alpha * x2 + beta * x2 * x2;
  };
  auto series_theta = [&](double x) {
    if (c <= 0.0) return 0.0;
    const double x2 = x * x;
    return 0.5 * c * x * ((1.0 - zeta) / zeta - alpha * x2 / (3.0 * zeta * zeta));
  };

  using state_t = std::array<double, 2>;
  const double dirn = (branch == Branch::lower) ? 1.0 : -1.0;
  auto rhs = [&](const state_t& u, state_t& dudx, double) {
    dudx[0] = dirn * std::sqrt(std::max(m.g(u[0], c), 0.0));
    dudx[1] = (c > 0.0) ? 0.5 * c * (1.0 - u[0]) / u[0] : 0.0;
  };
  auto stepper = boost::numeric::odeint::make_controlled(
      1e-12, 1e-12, boost::numeric::odeint::runge_kutta_cash_karp54<state_t>());

  state_t u{};
  double xc = 0.0;
  bool started = false;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    if (x <= x0) {
      rho_out[i] = series_rho(x);
      theta_out[i] = series_theta(x);
      continue;
    }
    if (!started) {
      u = {series_rho(x0), series_theta(x0)};
      xc = x0;
      started = true;
    }
    if (x > xc) {
      boost::numeric::odeint::integrate_adaptive(stepper, rhs, u, xc, x,
                                                 std::min(1e-3, x - xc));
      xc = x;
    }
    rho_out[i] = u[0];
    theta_out[i] = u[1];
  }
}

WaveProfile1D build_profile(const Nonlinearity& m, double c, const ProfileOptions& opts) {
  if (opts.n < 41 || opts.n % 2 == 0)
    throw ConfigError("build_profile: node count must be odd and at least 41");
  const double kappa2 = 2.0 - c * c;
  if (!(kappa2 > 0.0)) throw PreconditionError("build_profile: speed at or above sqrt(2)");
  const double x_max = (opts.x_max > 0.0) ? opts.x_max : 12.0 / std::sqrt(kappa2);
  const int half = (opts.n - 1) / 2;
  const double dx = x_max / half;

  std::vector<double> xs(half + 1);
  for (int k = 0; k <= half; ++k) xs[k] = dx * k;
  std::vector<double> rh, th;
  half_profile(m, c, opts.branch, xs, rh, th);

  WaveProfile1D prof;
  prof.c = c;
  prof.branch = opts.branch;
  prof.zeta = rh[0];
  prof.x_max = x_max;
  prof.x.resize(opts.n);
  prof.rho.resize(opts.n);
  prof.theta.resize(opts.n);
  const bool black = (c == 0.0 && prof.zeta < 1e-12);
  for (int i = 0; i < opts.n; ++i) {
    const int j = std::abs(i - half);
    const double sg = (i > half) ? 1.0 : (i < half ? -1.0 : 0.0);
    prof.x[i] = (i - half) * dx;
    prof.rho[i] = rh[j];
    // a zero-speed wave through rho = 0 carries the half-turn phase jump
    prof.theta[i] = black ? sg * 0.5 * kPi : sg * th[j];
  }
  return prof;
}

double energy_s(const Nonlinearity& m, double c, Branch branch) {
  const TurningPoint tp = turning_point(m, c, branch);
  return hodo_full(m, c, tp, [&](double tau) { return 4.0 * m.V(tau); });
}

double momentum_s(const Nonlinearity& m, double c, Branch branch) {
  const TurningPoint tp = turning_point(m, c, branch);
  if (c == 0.0) {
    // zero-speed limit: the phase jump is pi when the wave touches rho = 0,
    // and the momentum vanishes when it does not
    return (tp.zeta < 1e-12) ? kPi : 0.0;
  }
  return hodo_full(m, c, tp, [&](double tau) {
    const double d = 1.0 - tau;
    return c * d * d / tau;
  });
}

WaveInvariants wave_invariants(const Nonlinearity& m, const WaveProfile1D& prof) {
  const int n = int(prof.x.size());
  if (n < 41 || n != int(prof.rho.size()) || n != int(prof.theta.size()))
    throw PreconditionError("wave_invariants: malformed profile");
  const double c = prof.c;
  const double dx = prof.x[1] - prof.x[0];

  WaveInvariants inv;
  inv.c = c;
  inv.decay_rate_expected = std::sqrt(std::max(0.0, 2.0 - c * c));
  inv.energy_s = energy_s(m, c, prof.branch);
  inv.momentum_s = momentum_s(m, c, prof.branch);

  // x-side quadrature.  On a wave the first integral gives the equipartition
  // |psi'|^2 = V(rho), so the energy density is just 2 V(rho(x)); the momentum
  // density (c/2)(1-rho)^2/rho keeps its 1/rho spike and needs the dip-aware
  // cell quadrature.
  double ex = profile_integral(prof.rho, dx,
                               [&](double r) { return 2.0 * m.V(std::max(r, 0.0)); });
  double px = 0.0;
  if (c > 0.0) {
    px = profile_integral(prof.rho, dx, [&](double r) {
      const double rr = std::max(r, 1e-14);
      const double d = 1.0 - rr;
      return 0.5 * c * d * d / rr;
    });
  }
  if (c == 0.0) {
    // phase-jump representative: evaluate the lifted valuation on the grid
    std::vector<double> mod(n);
    for (int k = 0; k < n; ++k) mod[k] = std::sqrt(std::max(prof.rho[k], 0.0));
    px = momentum_lifted_1d(prof.x, mod, prof.theta);
  }
  inv.energy = ex;
  inv.momentum_valuation = px;

  const double e_rel = std::abs(ex - inv.energy_s) / std::max(std::abs(inv.energy_s), 1e-12);
  if (e_rel > 1e-6)
    throw DisagreementError(ex, inv.energy_s, e_rel,
                            "wave_invariants: x-form and hodograph energies disagree");
  const double p_tol = (c == 0.0) ? 1e-3 : 1e-6;
  const double p_rel =
      std::abs(px - inv.momentum_s) / std::max(std::abs(inv.momentum_s), 1e-12);
  if (p_rel > p_tol)
    throw DisagreementError(px, inv.momentum_s, p_rel,
                            "wave_invariants: x-form and hodograph momenta disagree");

  inv.momentum_canonical = canonical_momentum(inv.momentum_valuation);
  inv.abs_class = abs_momentum_class(inv.momentum_valuation);

  // decay rate: least-squares slope of log|1 - rho| inside a fixed tail window
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int cnt = 0;
  for (int k = (n - 1) / 2; k < n; ++k) {
    const double u = std::abs(1.0 - prof.rho[k]);
    if (u >= 1e-5 && u <= 1e-3) {
      const double X = prof.x[k], Y = std::log(u);
      sx += X;
      sy += Y;
      sxx += X * X;
      sxy += X * Y;
      ++cnt;
    }
  }
  if (cnt < 10)
    throw InsufficientSamples(
        "wave_invariants: fewer than 10 grid points in the decay-fit window |1-rho| in "
        "[1e-5, 1e-3]; enlarge x_max or refine the grid");
  inv.decay_rate = -(cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  inv.finite_L = true;
  return inv;
}

double first_integral_residual(const Nonlinearity& m, const WaveProfile1D& prof) {
  const int n = int(prof.x.size());
  if (n < 41) throw PreconditionError("first_integral_residual: too few nodes");
  const double dx = prof.x[1] - prof.x[0];
  const double c = prof.c;
  double worst = 0.0;
  for (int k = 2; k + 2 < n; ++k) {
    const double rp = (-prof.rho[k + 2] + 8.0 * prof.rho[k + 1] - 8.0 * prof.rho[k - 1] +
                       prof.rho[k - 2]) /
                      (12.0 * dx);
    const double r = prof.rho[k];
    const double d = 1.0 - r;
    const double res = rp * rp + c * c * d * d - 4.0 * r * m.V(r);
    worst = std::max(worst, std::abs(res));
  }
  return worst;
}

namespace gp {

double zeta(double c) { return 0.5 * c * c; }

double rho(double c, double x) {
  const double k2 = 2.0 - c * c;
  const double t = std::tanh(0.5 * std::sqrt(k2) * x);
  return 0.5 * c * c + 0.5 * k2 * t * t;
}

double theta(double c, double x) {
  const double k = std::sqrt(2.0 - c * c);
  if (c <= 0.0) return (x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0)) * 0.5 * kPi;
  return std::atan((k / c) * std::tanh(0.5 * k * x));
}

double energy(double c) {
  const double k2 = 2.0 - c * c;
  return (2.0 / 3.0) * k2 * std::sqrt(k2);
}

double momentum(double c) {
  const double k = std::sqrt(2.0 - c * c);
  if (c <= 0.0) return kPi;
  return 2.0 * std::atan(k / c) - c * k;
}

double primitive_G(double c, double s) {
  // antiderivative of 1/sqrt(g) vanishing at zeta; differences of it match the
  // midpoint-anchored library primitive
  const double k = std::sqrt(2.0 - c * c);
  const double w = std::sqrt(std::max(0.0, 2.0 * s - c * c));
  return std::log((k + w) / std::max(k - w, 1e-300)) / k;
}

double primitive_L(double c) {
  return -2.0 * std::log(1.0 + std::sqrt(2.0)) / std::sqrt(2.0 - c * c);
}

double threshold() { return 4.0 * std::sqrt(2.0) / 3.0; }

}  // namespace gp

}  // namespace twave
