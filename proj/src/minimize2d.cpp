#include "twave/minimize2d.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstring>
#include <deque>
#include <limits>
#include <random>

#include "twave/momentum.hpp"
#include "twave/quadrature1d.hpp"
#include "twave/dispersion1d.hpp"

namespace twave {

namespace {

constexpr double kPi = 3.14159265358979323846;

// trapezoid weight for node-centered terms in x
inline double wx(int i, int nx) { return (i == 0 || i == nx - 1) ? 0.5 : 1.0; }

template <class Pot>
double energy_impl(const Field2D& f, Pot&& pot) {
  const int nx = f.nx, ny = f.ny;
  const double inv_dx = 1.0 / f.dx, inv_dy = 1.0 / f.dy;
  const double lam2 = f.lam * f.lam;
  double acc = 0.0;
  for (int j = 0; j < ny; ++j) {
    const int jp = (j + 1 == ny) ? 0 : j + 1;
    const double* r = f.rho.data() + f.idx(0, j);
    const double* th = f.theta.data() + f.idx(0, j);
    const double* rp = f.rho.data() + f.idx(0, jp);
    const double* thp = f.theta.data() + f.idx(0, jp);
    double row = 0.0;
    for (int i = 0; i + 1 < nx; ++i) {
      const double drx = (r[i + 1] - r[i]) * inv_dx;
      const double dtx = (th[i + 1] - th[i]) * inv_dx;
      const double sx = 0.5 * (r[i] * r[i] + r[i + 1] * r[i + 1]);
      row += f.dx * (drx * drx + sx * dtx * dtx);
    }
    for (int i = 0; i < nx; ++i) {
      const double w = wx(i, nx);
      const double dry = (rp[i] - r[i]) * inv_dy;
      const double dty = (thp[i] - th[i]) * inv_dy;
      const double sy = 0.5 * (r[i] * r[i] + rp[i] * rp[i]);
      row += f.dx * w * (lam2 * (dry * dry + sy * dty * dty) + pot(r[i] * r[i]));
    }
    acc += row;
  }
  return acc * f.dy;
}

// Exact gradients of the discrete energy with respect to (rho, theta); the
// boundary columns' rho components are zeroed (pinned to 1).
void grad_energy(const Nonlinearity& m, const Field2D& f, std::vector<double>& gr,
                 std::vector<double>& gt) {
  const int nx = f.nx, ny = f.ny;
  const double inv_dx = 1.0 / f.dx, inv_dy = 1.0 / f.dy;
  const double lam2 = f.lam * f.lam;
  const double ax = f.dy * inv_dx;        // dy * dx * (1/dx^2)
  gr.assign(f.rho.size(), 0.0);
  gt.assign(f.theta.size(), 0.0);
  for (int j = 0; j < ny; ++j) {
    const int jp = (j + 1 == ny) ? 0 : j + 1;
    const double* r = f.rho.data() + f.idx(0, j);
    const double* th = f.theta.data() + f.idx(0, j);
    const double* rp = f.rho.data() + f.idx(0, jp);
    const double* thp = f.theta.data() + f.idx(0, jp);
    double* grj = gr.data() + f.idx(0, j);
    double* gtj = gt.data() + f.idx(0, j);
    double* grp = gr.data() + f.idx(0, jp);
    double* gtp = gt.data() + f.idx(0, jp);
    for (int i = 0; i + 1 < nx; ++i) {
      const double dr = r[i + 1] - r[i];
      const double dt = th[i + 1] - th[i];
      const double sx = 0.5 * (r[i] * r[i] + r[i + 1] * r[i + 1]);
      // d/d rho of (dr/dx)^2 and of sx (dt/dx)^2; d/d theta of sx (dt/dx)^2
      grj[i] += ax * (-2.0 * dr + dt * dt * r[i]);
      grj[i + 1] += ax * (2.0 * dr + dt * dt * r[i + 1]);
      gtj[i] += -2.0 * ax * sx * dt;
      gtj[i + 1] += 2.0 * ax * sx * dt;
    }
    for (int i = 0; i < nx; ++i) {
      const double w = wx(i, nx);
      const double ay = f.dx * w * lam2 * inv_dy;  // dx w lam^2 dy (1/dy^2)
      const double dr = rp[i] - r[i];
      const double dt = thp[i] - th[i];
      const double sy = 0.5 * (r[i] * r[i] + rp[i] * rp[i]);
      grj[i] += ay * (-2.0 * dr + dt * dt * r[i]);
      grp[i] += ay * (2.0 * dr + dt * dt * rp[i]);
      gtj[i] += -2.0 * ay * sy * dt;
      gtp[i] += 2.0 * ay * sy * dt;
      grj[i] += f.dx * f.dy * w * m.dV(r[i] * r[i]) * 2.0 * r[i];
    }
  }
  // pinned boundary columns
  for (int j = 0; j < ny; ++j) {
    gr[f.idx(0, j)] = 0.0;
    gr[f.idx(nx - 1, j)] = 0.0;
  }
}

// Exact gradients of the discrete momentum Q = dy sum (1 - Sx) d theta.
void grad_momentum(const Field2D& f, std::vector<double>& qr, std::vector<double>& qt) {
  const int nx = f.nx, ny = f.ny;
  qr.assign(f.rho.size(), 0.0);
  qt.assign(f.theta.size(), 0.0);
  for (int j = 0; j < ny; ++j) {
    const double* r = f.rho.data() + f.idx(0, j);
    const double* th = f.theta.data() + f.idx(0, j);
    double* qrj = qr.data() + f.idx(0, j);
    double* qtj = qt.data() + f.idx(0, j);
    for (int i = 0; i + 1 < nx; ++i) {
      const double one_sx = 1.0 - 0.5 * (r[i] * r[i] + r[i + 1] * r[i + 1]);
      const double dt = th[i + 1] - th[i];
      qtj[i] += -f.dy * one_sx;
      qtj[i + 1] += f.dy * one_sx;
      qrj[i] += -f.dy * r[i] * dt;
      qrj[i + 1] += -f.dy * r[i + 1] * dt;
    }
  }
  for (int j = 0; j < ny; ++j) {
    qr[f.idx(0, j)] = 0.0;
    qr[f.idx(nx - 1, j)] = 0.0;
  }
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

std::complex<double> psi_at(const Field2D& f, int i, int j) {
  const std::size_t k = f.idx(i, j);
  return std::polar(f.rho[k], f.theta[k]);
}

}  // namespace

bool Field2D::valid() const {
  if (nx < 3 || ny < 1 || dx <= 0.0 || dy <= 0.0 || lam <= 0.0) return false;
  if (rho.size() != static_cast<std::size_t>(nx) * ny || theta.size() != rho.size()) return false;
  for (double r : rho)
    if (!(r > 0.0)) return false;
  return true;
}

Field2D make_field(int nx, int ny, double x_max, double lam) {
  if (nx < 3 || ny < 1 || x_max <= 0.0 || lam <= 0.0)
    throw ConfigError("make_field: need nx >= 3, ny >= 1, x_max > 0, lam > 0");
  Field2D f;
  f.nx = nx;
  f.ny = ny;
  f.x_max = x_max;
  f.dx = 2.0 * x_max / (nx - 1);
  f.dy = 1.0 / ny;
  f.lam = lam;
  f.rho.assign(static_cast<std::size_t>(nx) * ny, 1.0);
  f.theta.assign(static_cast<std::size_t>(nx) * ny, 0.0);
  return f;
}

double default_x_max(double c_est) {
  const double kap2 = 2.0 - c_est * c_est;
  if (kap2 <= 1e-12) return 20.0;
  return std::max(12.0 / std::sqrt(kap2), 20.0);
}

Field2D embed_profile(const Nonlinearity& m, double c, int nx, int ny,
                      double x_max, double lam) {
  Field2D f = make_field(nx, ny, x_max, lam);
  ProfileOptions po;
  po.x_max = x_max;
  po.n = std::max(4 * nx + 1, 4001) | 1;
  WaveProfile1D prof = build_profile(m, c, po);
  const double h = prof.x[1] - prof.x[0];
  for (int i = 0; i < nx; ++i) {
    const double x = f.x_of(i);
    double rr, tt;
    if (i == 0 || i == nx - 1) {
      rr = 1.0;
      tt = (x < 0.0) ? prof.theta.front() : prof.theta.back();
    } else {
      const double u = (x - prof.x.front()) / h;
      const int np = static_cast<int>(prof.x.size());
      const int k = std::clamp(static_cast<int>(u), 1, np - 3);
      const double t = u - k;
      // Catmull-Rom through the four surrounding profile nodes; keeps the
      // embedded field's discrete EL residual at the O(h^2) of the grid
      auto cubic = [&](const std::vector<double>& a) {
        const double a0 = a[k - 1], a1 = a[k], a2 = a[k + 1], a3 = a[k + 2];
        return a1 + 0.5 * t * (a2 - a0 +
                               t * (2.0 * a0 - 5.0 * a1 + 4.0 * a2 - a3 +
                                    t * (3.0 * (a1 - a2) + a3 - a0)));
      };
      rr = std::sqrt(std::max(cubic(prof.rho), 0.0));
      tt = cubic(prof.theta);
    }
    for (int j = 0; j < ny; ++j) {
      f.rho[f.idx(i, j)] = rr;
      f.theta[f.idx(i, j)] = tt;
    }
  }
  return f;
}

Field2D blend_profiles(const Nonlinearity& m, double p, int nx, int ny,
                       double x_max, double lam, double split) {
  if (!(split > 0.0 && split < 1.0))
    throw ConfigError("blend_profiles: split must lie in (0,1)");
  const double p1 = 2.0 * p * split, p2 = 2.0 * p * (1.0 - split);
  DispersionOptions dopts;
  const std::vector<double> c1s = speed_for_momentum(m, p1, dopts);
  const std::vector<double> c2s = speed_for_momentum(m, p2, dopts);
  if (c1s.empty() || c2s.empty())
    throw PreconditionError("blend_profiles: no 1D wave at a split momentum");
  Field2D f1 = embed_profile(m, c1s.front(), nx, 1, x_max, lam);
  Field2D f2 = embed_profile(m, c2s.front(), nx, 1, x_max, lam);

  Field2D f = make_field(nx, ny, x_max, lam);
  std::vector<double> prev_theta(nx, 0.0);
  for (int j = 0; j < ny; ++j) {
    const double chi = 0.5 * (1.0 + std::cos(2.0 * kPi * f.y_of(j)));
    double carry = 0.0;  // unwrap offset along the row
    for (int i = 0; i < nx; ++i) {
      const std::complex<double> psi =
          chi * psi_at(f1, i, 0) + (1.0 - chi) * psi_at(f2, i, 0);
      double rr = std::abs(psi);
      double tt = std::arg(psi) + carry;
      if (i > 0) {
        // keep the row's phase continuous in x
        while (tt - f.theta[f.idx(i - 1, j)] > kPi) { tt -= 2.0 * kPi; carry -= 2.0 * kPi; }
        while (tt - f.theta[f.idx(i - 1, j)] < -kPi) { tt += 2.0 * kPi; carry += 2.0 * kPi; }
      } else if (j > 0) {
        // zero winding in y: align the row start with the previous row
        while (tt - prev_theta[0] > kPi) { tt -= 2.0 * kPi; carry -= 2.0 * kPi; }
        while (tt - prev_theta[0] < -kPi) { tt += 2.0 * kPi; carry += 2.0 * kPi; }
      }
      f.rho[f.idx(i, j)] = std::max(rr, 2e-3);
      f.theta[f.idx(i, j)] = tt;
    }
    for (int i = 0; i < nx; ++i) prev_theta[i] = f.theta[f.idx(i, j)];
  }
  for (int j = 0; j < ny; ++j) {
    f.rho[f.idx(0, j)] = 1.0;
    f.rho[f.idx(nx - 1, j)] = 1.0;
  }
  return f;
}

void perturb_field(Field2D& f, double amplitude, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 2.0 * kPi);
  const double phase0 = uni(rng), phase1 = uni(rng);
  for (int j = 0; j < f.ny; ++j) {
    const double y = f.y_of(j);
    for (int i = 1; i + 1 < f.nx; ++i) {
      const double x = f.x_of(i);
      const double w = std::exp(-x * x / 16.0);
      const std::size_t k = f.idx(i, j);
      f.rho[k] = std::max(f.rho[k] * (1.0 + amplitude * w * std::cos(2.0 * kPi * y + phase0)), 2e-3);
      f.theta[k] += amplitude * w * std::sin(2.0 * kPi * y + phase1);
    }
  }
}

double energy_2d(const Nonlinearity& m, const Field2D& f) {
  if (!f.valid()) throw PreconditionError("energy_2d: invalid field");
  return energy_impl(f, [&](double s) { return m.V(s); });
}

double energy_gl_2d(const Field2D& f) {
  if (!f.valid()) throw PreconditionError("energy_gl_2d: invalid field");
  return energy_impl(f, [](double s) { return 0.5 * (s - 1.0) * (s - 1.0); });
}

double momentum_2d(const Field2D& f) {
  return momentum_lifted_2d(f.rho, f.theta, f.nx, f.ny, f.dy);
}

void project_momentum(Field2D& f, double p_target) {
  std::vector<double> qr, qt;
  grad_momentum(f, qr, qt);
  const double qq = dot(qt, qt);
  if (qq <= 1e-300) throw NumericalError("project_momentum: degenerate constraint gradient");
  const double t = (p_target - momentum_2d(f)) / qq;
  for (std::size_t k = 0; k < f.theta.size(); ++k) f.theta[k] += t * qt[k];
}

double two_dimensionality(const Field2D& f) {
  const int nx = f.nx, ny = f.ny;
  double dev = 0.0, mass = 0.0;
  std::vector<std::complex<double>> mean(nx);
  for (int i = 0; i < nx; ++i) {
    std::complex<double> s = 0.0;
    for (int j = 0; j < ny; ++j) s += psi_at(f, i, j);
    mean[i] = s / static_cast<double>(ny);
  }
  for (int i = 0; i < nx; ++i) {
    const double w = wx(i, nx);
    for (int j = 0; j < ny; ++j) {
      const std::complex<double> psi = psi_at(f, i, j);
      dev += w * std::norm(psi - mean[i]);
      mass += w * std::norm(psi - 1.0);
    }
  }
  if (mass <= 1e-300) return 0.0;
  return dev / mass;
}

ElResidual el_residual(const Nonlinearity& m, const Field2D& f, double c) {
  if (!f.valid()) throw PreconditionError("el_residual: invalid field");
  const int nx = f.nx, ny = f.ny;
  const double inv_dx2 = 1.0 / (f.dx * f.dx);
  const double inv_dy2 = 1.0 / (f.dy * f.dy);
  const double lam2 = f.lam * f.lam;
  ElResidual res;
  double acc = 0.0;
  long cnt = 0;
  for (int j = 0; j < ny; ++j) {
    const int jp = (j + 1 == ny) ? 0 : j + 1;
    const int jm = (j == 0) ? ny - 1 : j - 1;
    for (int i = 2; i + 2 < nx; ++i) {
      const std::complex<double> pc = psi_at(f, i, j);
      const std::complex<double> pxp = psi_at(f, i + 1, j), pxm = psi_at(f, i - 1, j);
      const std::complex<double> pyp = psi_at(f, i, jp), pym = psi_at(f, i, jm);
      const std::complex<double> px = (pxp - pxm) / (2.0 * f.dx);
      const std::complex<double> pxx = (pxp - 2.0 * pc + pxm) * inv_dx2;
      const std::complex<double> pyy = (ny > 1) ? (pyp - 2.0 * pc + pym) * inv_dy2
                                                : std::complex<double>(0.0);
      const std::complex<double> r =
          std::complex<double>(0.0, c) * px + pxx + lam2 * pyy + m.F(std::norm(pc)) * pc;
      const double a = std::abs(r);
      res.linf = std::max(res.linf, a);
      acc += a * a;
      ++cnt;
    }
  }
  res.l2 = (cnt > 0) ? std::sqrt(acc * f.dx * f.dy) : 0.0;
  return res;
}

SymmetryReport symmetry_check(const Field2D& f) {
  const int nx = f.nx, ny = f.ny;
  SymmetryReport best;
  best.defect = std::numeric_limits<double>::infinity();
  double mass = 0.0;
  for (int i = 0; i < nx; ++i) {
    const double w = wx(i, nx);
    for (int j = 0; j < ny; ++j) mass += w * std::norm(psi_at(f, i, j) - 1.0);
  }
  if (mass <= 1e-300) {
    best.defect = 0.0;
    best.y0 = 0.0;
    return best;
  }
  for (int k = 0; k < 2 * ny; ++k) {
    // reflection about y0 = k dy / 2 maps grid row j to row (k - j) mod ny
    double dev = 0.0;
    for (int j = 0; j < ny; ++j) {
      const int jr = ((k - j) % ny + ny) % ny;
      for (int i = 0; i < nx; ++i) {
        const double w = wx(i, nx);
        dev += w * std::norm(psi_at(f, i, j) - psi_at(f, i, jr));
      }
    }
    const double defect = dev / mass;
    if (defect < best.defect) {
      best.defect = defect;
      best.y0 = 0.5 * f.dy * k;
    }
  }
  return best;
}

MinimizeResult minimize_at_momentum(const Nonlinearity& m, const Field2D& init,
                                    double p_target, const MinimizeOptions& opts) {
  if (!init.valid()) throw PreconditionError("minimize_at_momentum: invalid init field");
  if (!(p_target > 0.0 && p_target <= kPi + 1e-12))
    throw PreconditionError("minimize_at_momentum: target momentum must lie in (0, pi]");

  MinimizeResult out;
  Field2D f = init;
  project_momentum(f, p_target);

  const std::size_t n = f.rho.size();
  std::vector<double> gr, gt, qr, qt, pg_r(n), pg_t(n);
  std::vector<double> prev_r = f.rho, prev_t = f.theta;
  std::vector<double> prev_pg_r(n, 0.0), prev_pg_t(n, 0.0);
  Field2D trial = f;

  double energy = energy_2d(m, f);
  const double alpha0 =
      1.0 / (4.0 / (f.dx * f.dx) + 4.0 * f.lam * f.lam / (f.dy * f.dy));
  double alpha = alpha0;
  std::deque<double> recent;   // nonmonotone Armijo reference window
  std::vector<double> history; // full energy history for the flatness test
  recent.push_back(energy);
  history.push_back(energy);
  // the nonmonotone search can end above the lowest point it visited; keep
  // the best feasible iterate seen so the returned energy is monotone in
  // the initialization energy
  double best_energy = energy;
  std::vector<double> best_r = f.rho, best_t = f.theta;

  double c_mult = 0.0;
  bool have_prev = false;
  long it = 0;
  for (; it < opts.max_iters; ++it) {
    grad_energy(m, f, gr, gt);
    grad_momentum(f, qr, qt);
    const double qq = dot(qr, qr) + dot(qt, qt);
    if (qq <= 1e-300) throw NumericalError("minimize_at_momentum: degenerate constraint");
    c_mult = (dot(gr, qr) + dot(gt, qt)) / qq;
    for (std::size_t k = 0; k < n; ++k) {
      pg_r[k] = gr[k] - c_mult * qr[k];
      pg_t[k] = gt[k] - c_mult * qt[k];
    }
    const double g2 = dot(pg_r, pg_r) + dot(pg_t, pg_t);
    if (g2 <= 1e-28) {
      out.converged = true;
      break;
    }

    if (have_prev) {
      // Barzilai-Borwein step from the last accepted move
      double ss = 0.0, sy = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const double dxr = f.rho[k] - prev_r[k], dxt = f.theta[k] - prev_t[k];
        ss += dxr * dxr + dxt * dxt;
        sy += dxr * (pg_r[k] - prev_pg_r[k]) + dxt * (pg_t[k] - prev_pg_t[k]);
      }
      if (sy > 1e-300) alpha = std::clamp(ss / sy, 1e-2 * alpha0, 1e6 * alpha0);
    }
    prev_r = f.rho;
    prev_t = f.theta;
    prev_pg_r = pg_r;
    prev_pg_t = pg_t;

    const double e_ref = *std::max_element(recent.begin(), recent.end());
    bool accepted = false;
    for (int bt = 0; bt < 40; ++bt) {
      trial.lam = f.lam;
      double min_rho = 1.0;
      for (std::size_t k = 0; k < n; ++k) {
        trial.rho[k] = f.rho[k] - alpha * pg_r[k];
        trial.theta[k] = f.theta[k] - alpha * pg_t[k];
        min_rho = std::min(min_rho, trial.rho[k]);
      }
      if (min_rho < opts.rho_floor) {
        if (alpha <= 1e-6 * alpha0)
          throw RhoUnderflow(min_rho,
                             "minimize_at_momentum: modulus reached the lifting floor "
                             "(black-soliton regime)");
        alpha *= 0.5;
        continue;
      }
      project_momentum(trial, p_target);
      const double e_trial = energy_2d(m, trial);
      if (e_trial <= e_ref - opts.armijo_sigma * alpha * g2) {
        f.rho.swap(trial.rho);
        f.theta.swap(trial.theta);
        energy = e_trial;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;  // step collapsed; flatness test below decides
    have_prev = true;

    const double q_err = std::abs(momentum_2d(f) - p_target) / std::max(p_target, 1e-300);
    out.max_constraint_violation = std::max(out.max_constraint_violation, q_err);
    if (q_err > opts.tol_q_rel)
      throw NumericalError("minimize_at_momentum: constraint drifted beyond tolerance");

    if (energy < best_energy) {
      best_energy = energy;
      best_r = f.rho;
      best_t = f.theta;
    }
    recent.push_back(energy);
    if (static_cast<int>(recent.size()) > opts.nonmonotone_window) recent.pop_front();
    history.push_back(energy);
    const int w = opts.window;
    if (static_cast<int>(history.size()) > w) {
      const double drop = history[history.size() - 1 - w] - energy;
      if (drop <= opts.tol_e * std::max(1.0, std::abs(energy))) {
        out.converged = true;
        break;
      }
    }
  }

  if (!out.converged && opts.strict)
    throw MaxIterations(it, "minimize_at_momentum: iteration cap before convergence");

  f.rho = std::move(best_r);
  f.theta = std::move(best_t);
  energy = best_energy;
  {
    grad_energy(m, f, gr, gt);
    grad_momentum(f, qr, qt);
    const double qq = dot(qr, qr) + dot(qt, qt);
    if (qq > 1e-300) c_mult = (dot(gr, qr) + dot(gt, qt)) / qq;
  }
  out.field = std::move(f);
  out.energy = energy;
  out.momentum = momentum_2d(out.field);
  out.momentum_class = canonical_momentum(out.momentum);
  out.multiplier_c = c_mult;
  out.iterations = it;
  out.el = el_residual(m, out.field, c_mult);
  out.two_dim = two_dimensionality(out.field);
  return out;
}

LambdaScan lambda_scan(const Nonlinearity& m, double p,
                       const std::vector<double>& lambdas,
                       const LambdaScanOptions& opts) {
  if (lambdas.empty()) throw ConfigError("lambda_scan: empty lambda grid");
  std::vector<double> lams = lambdas;
  std::sort(lams.begin(), lams.end());
  if (lams.front() <= 0.0) throw ConfigError("lambda_scan: lambda values must be > 0");

  LambdaScan scan;
  scan.p = p;

  // 1D reference wave: lowest-energy branch speed at this momentum
  DispersionOptions dopts;
  const std::vector<double> roots = speed_for_momentum(m, p, dopts);
  if (roots.empty())
    throw PreconditionError("lambda_scan: no 1D wave found at the target momentum");
  scan.speed_1d = roots.front();
  {
    WaveProfile1D prof = build_profile(m, scan.speed_1d);
    scan.e1_reference = wave_invariants(m, prof).energy_s;
  }
  const double x_max = (opts.x_max > 0.0) ? opts.x_max : default_x_max(scan.speed_1d);

  Field2D embed1 = embed_profile(m, scan.speed_1d, opts.nx, opts.ny, x_max, lams.back());
  project_momentum(embed1, p);
  scan.e1_grid = energy_2d(m, embed1);
  scan.grid_tol = std::abs(scan.e1_grid - scan.e1_reference) + 1e-10;

  // descending-lambda cascade with warm starts keeps energies monotone
  struct Run {
    double lam;
    MinimizeResult best;
    std::string init;
    double qviol = 0.0;  // worst over all candidates, not just the winner
  };
  std::vector<Run> runs;
  const MinimizeResult* warm = nullptr;
  for (std::size_t k = lams.size(); k-- > 0;) {
    const double lam = lams[k];
    Run run;
    run.lam = lam;
    bool have = false;
    auto consider = [&](MinimizeResult&& r, const char* label) {
      run.qviol = std::max(run.qviol, r.max_constraint_violation);
      if (!have || r.energy < run.best.energy) {
        run.best = std::move(r);
        run.init = label;
        have = true;
      }
    };
    if (warm != nullptr) {
      Field2D f = warm->field;
      f.lam = lam;
      consider(minimize_at_momentum(m, f, p, opts.minimize), "warm");
    }
    {
      Field2D f = embed1;
      f.lam = lam;
      consider(minimize_at_momentum(m, f, p, opts.minimize), "embed");
    }
    consider(minimize_at_momentum(
                 m, blend_profiles(m, p, opts.nx, opts.ny, x_max, lam, opts.split), p,
                 opts.minimize),
             "blend");
    if (runs.empty()) {
      // widen the search once at the smallest computed lambda so far
      Field2D f = embed1;
      f.lam = lam;
      perturb_field(f, 0.05, opts.seed);
      consider(minimize_at_momentum(m, f, p, opts.minimize), "perturb");
    }
    runs.push_back(std::move(run));
    warm = &runs.back().best;
  }
  std::reverse(runs.begin(), runs.end());
  if (!runs.empty()) scan.field_smallest_lambda = runs.front().best.field;

  auto improving = [&](const MinimizeResult& r) {
    return (scan.e1_grid - r.energy) > 3.0 * scan.grid_tol && r.two_dim > 0.01;
  };

  for (const Run& r : runs) {
    LambdaScanEntry e;
    e.lam = r.lam;
    e.energy = r.best.energy;
    e.two_dim = r.best.two_dim;
    e.converged = r.best.converged;
    e.init = r.init;
    e.max_constraint_violation = r.qviol;
    scan.entries.push_back(e);
  }

  // bracket: last improving lambda vs first non-improving one after it
  std::ptrdiff_t last_improving = -1;
  bool clean = true;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (improving(runs[i].best)) {
      if (last_improving != static_cast<std::ptrdiff_t>(i) - 1) clean = false;
      last_improving = static_cast<std::ptrdiff_t>(i);
    }
  }
  if (last_improving < 0) {
    scan.lambda_lo = 0.0;
    scan.lambda_hi = lams.front();
    scan.lambda_s_estimate = 0.0;
    scan.bracket_reliable = false;
  } else if (last_improving + 1 >= static_cast<std::ptrdiff_t>(runs.size())) {
    scan.lambda_lo = lams.back();
    scan.lambda_hi = std::numeric_limits<double>::infinity();
    scan.lambda_s_estimate = lams.back();
    scan.bracket_reliable = false;
  } else {
    scan.lambda_lo = runs[last_improving].lam;
    scan.lambda_hi = runs[last_improving + 1].lam;
    scan.bracket_reliable = clean;
    const Run* lo_run = &runs[last_improving];
    for (int b = 0; b < opts.bisect_steps; ++b) {
      const double mid = std::sqrt(scan.lambda_lo * scan.lambda_hi);
      Field2D f = lo_run->best.field;
      f.lam = mid;
      MinimizeResult r_warm = minimize_at_momentum(m, f, p, opts.minimize);
      MinimizeResult r_blend = minimize_at_momentum(
          m, blend_profiles(m, p, opts.nx, opts.ny, x_max, mid, opts.split), p,
          opts.minimize);
      const MinimizeResult& r = (r_blend.energy < r_warm.energy) ? r_blend : r_warm;
      if (improving(r))
        scan.lambda_lo = mid;
      else
        scan.lambda_hi = mid;
    }
    scan.lambda_s_estimate = std::sqrt(scan.lambda_lo * scan.lambda_hi);
  }
  return scan;
}

}  // namespace twave
