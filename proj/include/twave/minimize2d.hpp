// Constrained minimization of the rescaled strip energy
//   E_lam(psi) = int_{R x [0,1]} |psi_x|^2 + lam^2 |psi_y|^2 + V(|psi|^2)
// at fixed momentum class, in lifted (rho, theta) variables on a truncated
// strip [-x_max, x_max] x [0,1) with a y-periodic grid.  The momentum
//   Q = int (1 - rho^2) theta_x
// uses the same cell rule as the energy, and is affine in theta, so a single
// Newton correction along its own theta-gradient restores the constraint
// exactly after every trial step.  The Lagrange multiplier read off from the
// gradient projection is the wave speed c.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "twave/errors.hpp"
#include "twave/nonlinearity.hpp"

namespace twave {

struct Field2D {
  int nx = 0;         // columns (x), including the two pinned boundary columns
  int ny = 1;         // rows (y), periodic; ny == 1 embeds a 1D field
  double dx = 0.0;
  double dy = 1.0;    // 1 / ny
  double x_max = 0.0; // half-width of the truncated strip
  double lam = 1.0;   // transverse rescaling; lam^2 multiplies y-derivatives
  std::vector<double> rho;    // modulus |psi| > 0, index i + nx*j
  std::vector<double> theta;  // unwrapped phase, zero winding in y

  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) + static_cast<std::size_t>(nx) * j; }
  double x_of(int i) const { return -x_max + dx * i; }
  double y_of(int j) const { return dy * j; }
  bool valid() const;
};

// Uniform field psi == 1 (rho = 1, theta = 0).
Field2D make_field(int nx, int ny, double x_max, double lam);

// Truncation half-width max(12 / sqrt(2 - c^2), 20) for an estimated speed.
double default_x_max(double c_est);

// 1D traveling wave at speed c replicated across the rows.
Field2D embed_profile(const Nonlinearity& m, double c, int nx, int ny,
                      double x_max, double lam);

// Two-wave transverse blend chi(y) psi1(x) + (1-chi(y)) psi2(x) with
// chi = (1 + cos 2 pi y)/2 and momenta split*2p, (1-split)*2p, so the mean
// momentum is p.  Used to seed genuinely two-dimensional minimizers.
Field2D blend_profiles(const Nonlinearity& m, double p, int nx, int ny,
                       double x_max, double lam, double split = 0.3);

// Seeded multiplicative modulus / additive phase wiggle, localized in x and
// with a single y harmonic; deterministic for a fixed seed.
void perturb_field(Field2D& f, double amplitude, std::uint64_t seed);

// Discrete energies.  energy_2d uses the model potential, energy_gl_2d the
// Ginzburg-Landau potential (rho^2 - 1)^2 / 2.  Both: forward differences on
// cell edges, trapezoid weights in x for node-centered terms, plain periodic
// sum in y.
double energy_2d(const Nonlinearity& m, const Field2D& f);
double energy_gl_2d(const Field2D& f);

// Momentum valuation of the field (same cell rule as the energy).
double momentum_2d(const Field2D& f);

// Restore the momentum valuation to p_target exactly (one Newton step along
// the theta-gradient of Q, which is affine in theta).
void project_momentum(Field2D& f, double p_target);

// ||psi - mean_y psi||^2 relative to the deviation mass ||psi - 1||^2; zero
// for y-independent fields, order one for genuinely two-dimensional ones.
double two_dimensionality(const Field2D& f);

struct ElResidual {
  double linf = 0.0;
  double l2 = 0.0;
};

// Residual of i c psi_x + psi_xx + lam^2 psi_yy + F(|psi|^2) psi on interior
// points (two columns at each end excluded), central differences.
ElResidual el_residual(const Nonlinearity& m, const Field2D& f, double c);

struct SymmetryReport {
  double y0 = 0.0;      // best reflection center among half-grid candidates
  double defect = 0.0;  // normalized reflection defect at y0
};

// Minimizers are expected to be symmetric about some y0: psi(x, y0 + y) =
// psi(x, y0 - y).  Scans all half-grid centers and reports the best.
SymmetryReport symmetry_check(const Field2D& f);

struct MinimizeOptions {
  long max_iters = 20000;
  double tol_e = 1e-10;        // relative energy flatness over `window` iterations
  int window = 50;
  double tol_q_rel = 1e-8;     // accepted-iterate constraint tolerance (relative)
  double rho_floor = 1e-3;     // lifted representation limit (black-soliton guard)
  double armijo_sigma = 1e-4;
  int nonmonotone_window = 10;
  bool strict = false;         // throw MaxIterations instead of converged=false
};

struct MinimizeResult {
  Field2D field;
  double energy = 0.0;
  double momentum = 0.0;        // valuation (held at the target)
  double momentum_class = 0.0;  // canonical representative in [0, 2 pi)
  double multiplier_c = 0.0;    // constraint multiplier = wave speed estimate
  long iterations = 0;
  bool converged = false;
  double max_constraint_violation = 0.0;  // max |Q - p|/p over accepted iterates
  ElResidual el;
  double two_dim = 0.0;
};

// Projected gradient descent (Barzilai-Borwein step, nonmonotone Armijo
// backtracking) on (rho, theta) at fixed momentum class; rho is pinned to 1
// on the two boundary columns.
MinimizeResult minimize_at_momentum(const Nonlinearity& m, const Field2D& init,
                                    double p_target,
                                    const MinimizeOptions& opts = {});

struct LambdaScanEntry {
  double lam = 0.0;
  double energy = 0.0;
  double two_dim = 0.0;
  bool converged = false;
  std::string init;  // which initialization won: "warm" | "embed" | "blend" | "perturb"
  // worst relative |Q - p|/p over accepted iterates of ALL candidate runs here
  double max_constraint_violation = 0.0;
};

struct LambdaScanOptions {
  int nx = 512;
  int ny = 16;
  double x_max = 0.0;  // 0: choose from the estimated 1D speed
  MinimizeOptions minimize;
  int bisect_steps = 0;      // extra bisection refinements of the bracket
  double split = 0.3;        // blend momentum split
  std::uint64_t seed = 12345;
};

struct LambdaScan {
  double p = 0.0;
  std::vector<LambdaScanEntry> entries;  // sorted by lambda ascending
  double e1_reference = 0.0;  // 1D branch minimum at this momentum
  double e1_grid = 0.0;       // embedded 1D wave energy on this grid
  double grid_tol = 0.0;      // |e1_grid - e1_reference| + floor
  double speed_1d = 0.0;      // speed of the 1D reference wave
  // bracket for the critical period: largest lambda with strict improvement
  // (margin > 3 * grid_tol and two_dim > 0.01) and smallest without
  double lambda_lo = 0.0;
  double lambda_hi = 0.0;
  double lambda_s_estimate = 0.0;
  bool bracket_reliable = false;
  Field2D field_smallest_lambda;  // best minimizer at the smallest scanned lambda
};

// Descending-lambda cascade: at each lambda runs the 1D embedding, the
// transverse blend, and (warm) the previous minimizer, keeps the best.
// Energies are nondecreasing in lambda by construction of the warm start.
LambdaScan lambda_scan(const Nonlinearity& m, double p,
                       const std::vector<double>& lambdas,
                       const LambdaScanOptions& opts = {});

}  // namespace twave
