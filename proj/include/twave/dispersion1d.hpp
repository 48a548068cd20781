// Energy-momentum dispersion: sweep the 1D wave branch, build the concave
// nondecreasing minimal-energy envelope E_min(p) on [0, pi], and run the
// structural diagnostics (Lipschitz bound, subsonic gap, cusps / corners with
// their multiplier sets).
#pragma once

#include <string>
#include <vector>

#include "twave/nonlinearity.hpp"
#include "twave/quadrature1d.hpp"

namespace twave {

struct DispersionPoint {
  double c = 0.0;
  double p = 0.0;       // momentum valuation of the wave
  double energy = 0.0;  // E^1
  double zeta = 0.0;
  double dg = 0.0;
  bool finite_L = true;
  Branch branch = Branch::lower;
};

struct SkippedSpeed {
  double c = 0.0;
  std::string reason;
};

struct DispersionOptions {
  double c_min = 0.05;
  double c_max = 1.35;
  int n = 201;
  Branch branch = Branch::lower;
  // add a graded cluster of speeds on both sides of the model's critical speed
  // (branch endpoints / gaps carry the interesting envelope structure)
  bool refine_near_critical = true;
  int jobs = 1;
};

struct DispersionCurve {
  std::vector<DispersionPoint> samples;  // ascending c
  std::vector<SkippedSpeed> skipped;     // speeds where no wave was certified
};

DispersionCurve dispersion_sweep(const Nonlinearity& m, const DispersionOptions& opts = {});

// One linear segment endpoint of the envelope chain.
struct EnvelopeVertex {
  double p = 0.0;
  double e = 0.0;
  double in_slope = 0.0;  // slope of the segment arriving from the left
  double c = 0.0;         // speed of the backing sample (meaningful iff from_branch)
  bool from_branch = false;
  bool capped_sqrt2 = false;
  bool capped_threshold = false;
  bool interpolated = false;  // clipped to the concave chain, not an attained sample
};

struct CuspPoint {
  double p = 0.0;
  double slope_left = 0.0;
  double slope_right = 0.0;
  // attained Lagrange multipliers (speeds) of the arcs meeting at the corner;
  // by concavity speed_lo = slope_right <= slope_left = speed_hi
  double speed_lo = 0.0;
  double speed_hi = 0.0;
};

struct CurveDiagnostics {
  bool concave = true;
  double worst_convexity = 0.0;  // most positive second difference on the p-grid
  double lipschitz_constant = 0.0;
  double subsonic_gap = 0.0;  // min over p >= p_floor of sqrt(2) p - E(p)
  double p_floor = 0.05;
  double threshold = 0.0;  // vanishing threshold 4 int_0^1 sqrt(V(t^2)) dt
  double slope_at_pi = 0.0;
  double cusp_gap_at_pi = 0.0;  // 2 * slope_at_pi by even reflection
  std::vector<CuspPoint> cusp_points;
};

struct Envelope {
  std::vector<EnvelopeVertex> chain;  // ascending p over [0, pi], starts at (0,0)
  double threshold = 0.0;
};

// Concave nondecreasing envelope through the attained samples, capped by
// sqrt(2) p and by the vanishing threshold, extended to p = pi.
Envelope minimal_envelope(const Nonlinearity& m, const DispersionCurve& curve);

// evaluate the envelope at any real p (even and 2 pi periodic by folding)
double emin1(const Envelope& env, double p);
// left/right slopes of the folded envelope at p
double emin1_slope_left(const Envelope& env, double p);
double emin1_slope_right(const Envelope& env, double p);

// grid diagnostics (second differences, Lipschitz, subsonic gap, cusps)
CurveDiagnostics envelope_diagnostics(const Envelope& env, int n_grid = 257,
                                      double p_floor = 0.05);

// all branch speeds whose momentum equals p (multi-valued at corner momenta),
// sorted by increasing energy
std::vector<double> speed_for_momentum(const Nonlinearity& m, double p,
                                       const DispersionOptions& opts = {});

// Explicit low-energy test pair on scale lambda: modulus 1 - (eps/lambda)
// chi'(x/lambda), phase sigma chi(x/lambda) with eps = 2^{-3/4} sqrt(p lambda),
// sigma = 2^{-1/4} sqrt(p lambda); its momentum is exactly p and its energy
// tends to sqrt(2) p from above as lambda grows.
struct TestPairResult {
  double lambda = 0.0;
  double p = 0.0;
  double momentum = 0.0;   // quadrature of (1 - rho^2) theta' (equals p analytically)
  double energy = 0.0;     // quadrature of the 1D energy of the pair
  double predicted = 0.0;  // sqrt(2) p + A p / (2^{3/2} lambda^2) + 5 B p^2 / (16 lambda)
  double amplitude = 0.0;  // max |1 - rho|
};

TestPairResult test_function_energy(const Nonlinearity& m, double p, double lambda);

// fixed bump template used by the test pair (exposed for tests)
namespace bump {
double chi(double u);        // even primitive, supported on [-1, 1], chi(+-1) = 0
double dchi(double u);       // chi', odd, int chi'^2 = 1
double d2chi(double u);      // chi''
double max_dchi();           // max |chi'|
double quad_a();             // A = int chi''^2
double quad_b();             // B = int chi'^4
}  // namespace bump

}  // namespace twave
