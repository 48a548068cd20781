#include "twave/dispersion1d.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <thread>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "twave/errors.hpp"
#include "twave/momentum.hpp"

namespace twave {

namespace {

constexpr double kPi = 3.14159265358979323846;

double quad(const std::function<double(double)>& f, double a, double b, double tol = 1e-12) {
  if (a == b) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, tol);
}

}  // namespace

DispersionCurve dispersion_sweep(const Nonlinearity& m, const DispersionOptions& opts) {
  if (!(opts.c_min > 0.0) || !(opts.c_max > opts.c_min) || !(opts.c_max * opts.c_max < 2.0))
    throw PreconditionError("dispersion_sweep: need 0 < c_min < c_max < sqrt(2)");
  if (opts.n < 2) throw PreconditionError("dispersion_sweep: need at least 2 grid speeds");

  std::vector<double> cs;
  cs.reserve(opts.n + 28);
  for (int i = 0; i < opts.n; ++i)
    cs.push_back(opts.c_min + (opts.c_max - opts.c_min) * double(i) / double(opts.n - 1));
  if (opts.refine_near_critical && m.c_crit > 0.0) {
    // The branch arcs steepen like a fractional power of the distance to the
    // critical speed; a geometric cluster keeps the envelope sampled there.
    for (int k = 0; k < 14; ++k) {
      const double d = 1e-6 * std::pow(0.12 / 1e-6, double(k) / 13.0);
      for (double s : {m.c_crit - d, m.c_crit + d})
        if (s > opts.c_min && s < opts.c_max) cs.push_back(s);
    }
  }
  std::sort(cs.begin(), cs.end());
  cs.erase(std::unique(cs.begin(), cs.end(),
                       [](double a, double b) { return std::abs(a - b) < 1e-12; }),
           cs.end());

  struct Slot {
    bool ok = false;
    DispersionPoint pt;
    std::string reason;
  };
  std::vector<Slot> slots(cs.size());
  auto work = [&](std::size_t i) {
    try {
      const TurningPoint tp = turning_point(m, cs[i], opts.branch);
      DispersionPoint q;
      q.c = cs[i];
      q.zeta = tp.zeta;
      q.dg = tp.dg;
      q.branch = opts.branch;
      q.energy = energy_s(m, cs[i], opts.branch);
      q.p = momentum_s(m, cs[i], opts.branch);
      q.finite_L = true;
      slots[i].pt = q;
      slots[i].ok = true;
    } catch (const Error& e) {
      slots[i].reason = e.what();
    }
  };

  const int jobs = std::max(1, opts.jobs);
  if (jobs == 1 || cs.size() < 4) {
    for (std::size_t i = 0; i < cs.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < cs.size(); i = next.fetch_add(1)) work(i);
      });
    for (auto& th : pool) th.join();
  }

  DispersionCurve cv;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (slots[i].ok)
      cv.samples.push_back(slots[i].pt);
    else
      cv.skipped.push_back({cs[i], slots[i].reason});
  }
  return cv;
}

Envelope minimal_envelope(const Nonlinearity& m, const DispersionCurve& curve) {
  Envelope env;
  env.threshold = vanishing_threshold(m);
  const double rt2 = std::sqrt(2.0);

  struct Cand {
    double p, e, c;
    bool capped_sqrt2, capped_threshold;
  };
  std::vector<Cand> cands;
  cands.reserve(curve.samples.size());
  for (const auto& s : curve.samples) {
    if (!s.finite_L) continue;
    const double q = abs_momentum_class(s.p);
    if (q <= 1e-12) continue;
    Cand cd{q, s.energy, s.c, false, false};
    if (rt2 * q < cd.e) {
      cd.e = rt2 * q;
      cd.capped_sqrt2 = true;
    }
    if (env.threshold < cd.e) {
      cd.e = env.threshold;
      cd.capped_threshold = true;
      cd.capped_sqrt2 = false;
    }
    cands.push_back(cd);
  }
  if (cands.size() < 2)
    throw InsufficientSamples("minimal_envelope: need at least two attained samples");
  std::sort(cands.begin(), cands.end(),
            [](const Cand& a, const Cand& b) { return a.p < b.p || (a.p == b.p && a.e < b.e); });

  // Greatest concave nondecreasing minorant of the sample constraints:
  // the chain keeps only TOUCH vertices (samples that actually bind).  A
  // candidate at or above the ride line (the last slope extended forward) is
  // not binding and is skipped; a candidate below it becomes a new touch, and
  // its chord slope is then automatically smaller than the incoming one.
  std::vector<EnvelopeVertex> ch;
  EnvelopeVertex origin;
  origin.in_slope = rt2;  // the near-zero bound E <= sqrt(2) p caps the first slope
  ch.push_back(origin);
  for (const Cand& cd : cands) {
    // monotonicity: an envelope value can never exceed a later sample value
    while (ch.size() > 1 && ch.back().e > cd.e) ch.pop_back();
    const EnvelopeVertex b = ch.back();
    const double dp = cd.p - b.p;
    if (dp < 1e-12) continue;
    const double ride = b.e + b.in_slope * dp;
    if (cd.e >= ride) continue;  // chain passes below this sample
    EnvelopeVertex v;
    v.p = cd.p;
    v.c = cd.c;
    v.e = cd.e;
    v.in_slope = (cd.e - b.e) / dp;
    v.capped_sqrt2 = cd.capped_sqrt2;
    v.capped_threshold = cd.capped_threshold;
    v.from_branch = !(cd.capped_sqrt2 || cd.capped_threshold);
    ch.push_back(v);
  }

  // extend to p = pi at the last attained slope, flattening at the threshold
  {
    const EnvelopeVertex b = ch.back();
    if (b.p < kPi - 1e-12) {
      const double s = std::max(b.in_slope, 0.0);
      const double e_pi = b.e + s * (kPi - b.p);
      if (e_pi > env.threshold && s > 0.0) {
        const double p_t = b.p + (env.threshold - b.e) / s;
        if (p_t > b.p + 1e-12 && p_t < kPi - 1e-12) {
          EnvelopeVertex t;
          t.p = p_t;
          t.e = env.threshold;
          t.in_slope = s;
          t.capped_threshold = true;
          t.interpolated = true;
          ch.push_back(t);
        }
        EnvelopeVertex f;
        f.p = kPi;
        f.e = env.threshold;
        f.in_slope = 0.0;
        f.capped_threshold = true;
        f.interpolated = true;
        ch.push_back(f);
      } else {
        EnvelopeVertex f;
        f.p = kPi;
        f.e = e_pi;
        f.in_slope = s;
        f.interpolated = true;
        ch.push_back(f);
      }
    }
  }
  env.chain = std::move(ch);
  return env;
}

namespace {

// fold to [0, pi] using evenness and 2 pi periodicity
double fold_p(double p) {
  double q = canonical_momentum(std::abs(p));
  if (q > kPi) q = 2.0 * kPi - q;
  return q;
}

// index of the segment [chain[i], chain[i+1]] containing q
std::size_t segment_index(const std::vector<EnvelopeVertex>& ch, double q) {
  std::size_t lo = 0, hi = ch.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (ch[mid].p <= q)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

}  // namespace

double emin1(const Envelope& env, double p) {
  const auto& ch = env.chain;
  if (ch.size() < 2) throw InsufficientSamples("emin1: empty envelope");
  const double q = fold_p(p);
  if (q >= ch.back().p) return ch.back().e;
  const std::size_t i = segment_index(ch, q);
  const double t = (q - ch[i].p) / (ch[i + 1].p - ch[i].p);
  return ch[i].e + t * (ch[i + 1].e - ch[i].e);
}

double emin1_slope_left(const Envelope& env, double p) {
  const auto& ch = env.chain;
  if (ch.size() < 2) throw InsufficientSamples("emin1_slope_left: empty envelope");
  const double q = fold_p(p);
  if (q <= 1e-14) return -ch[1].in_slope;  // reflection through the even origin
  if (q >= ch.back().p - 1e-14) return ch.back().in_slope;
  const std::size_t i = segment_index(ch, q);
  if (std::abs(q - ch[i].p) < 1e-14 && i > 0) return ch[i].in_slope;
  return ch[i + 1].in_slope;
}

double emin1_slope_right(const Envelope& env, double p) {
  const auto& ch = env.chain;
  if (ch.size() < 2) throw InsufficientSamples("emin1_slope_right: empty envelope");
  const double q = fold_p(p);
  if (q >= ch.back().p - 1e-14) return -ch.back().in_slope;  // even reflection at pi
  const std::size_t i = segment_index(ch, q);
  return ch[i + 1].in_slope;
}

CurveDiagnostics envelope_diagnostics(const Envelope& env, int n_grid, double p_floor) {
  const auto& ch = env.chain;
  if (ch.size() < 2) throw InsufficientSamples("envelope_diagnostics: empty envelope");
  CurveDiagnostics d;
  d.threshold = env.threshold;
  d.p_floor = p_floor;
  const double rt2 = std::sqrt(2.0);

  const int n = std::max(n_grid, 16);
  const double h = kPi / (n - 1);
  std::vector<double> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = emin1(env, i * h);

  d.worst_convexity = 0.0;
  for (int i = 1; i + 1 < n; ++i)
    d.worst_convexity = std::max(d.worst_convexity, ev[i - 1] - 2.0 * ev[i] + ev[i + 1]);
  d.concave = d.worst_convexity <= 1e-9;

  d.lipschitz_constant = 0.0;
  for (std::size_t k = 1; k < ch.size(); ++k)
    d.lipschitz_constant = std::max(d.lipschitz_constant, std::abs(ch[k].in_slope));

  d.subsonic_gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double p = i * h;
    if (p < p_floor) continue;
    d.subsonic_gap = std::min(d.subsonic_gap, rt2 * p - ev[i]);
  }

  // A discretization corner between consecutive sweep samples has slope jump
  // of order the local speed spacing (dE/dp = c), so gate on a multiple of the
  // median speed gap along the chain; a genuine family crossing joins speeds
  // far apart and clears any reasonable multiple.
  std::vector<double> dcs;
  for (std::size_t k = 1, jprev = 0; k < ch.size(); ++k) {
    if (!ch[k].from_branch) continue;
    if (ch[jprev].from_branch) dcs.push_back(std::abs(ch[k].c - ch[jprev].c));
    jprev = k;
  }
  double median_dc = 0.0;
  if (!dcs.empty()) {
    std::nth_element(dcs.begin(), dcs.begin() + dcs.size() / 2, dcs.end());
    median_dc = dcs[dcs.size() / 2];
  }
  const double gap_gate = std::max(0.02 * rt2, 4.0 * median_dc);
  auto branch_speed_before = [&](std::size_t k) {
    for (std::size_t j = k; j-- > 0;)
      if (ch[j].from_branch) return ch[j].c;
    return ch[k].in_slope;  // multiplier duality fallback
  };
  // Interior corners: both edges must join genuine branch samples.  The first
  // vertex is excluded because its incoming edge is the origin chord (set by
  // the subsonic cap, not by wave data).  At a family crossing the corner
  // vertex is the first binding sample of the slower family, so it supplies
  // the low speed; the high speed comes from the last branch sample before it.
  for (std::size_t k = 2; k + 1 < ch.size(); ++k) {
    if (!ch[k].from_branch || !ch[k + 1].from_branch) continue;
    const double jump = ch[k].in_slope - ch[k + 1].in_slope;
    if (jump > gap_gate) {
      CuspPoint cp;
      cp.p = ch[k].p;
      cp.slope_left = ch[k].in_slope;
      cp.slope_right = ch[k + 1].in_slope;
      cp.speed_hi = branch_speed_before(k);
      cp.speed_lo = ch[k].c;
      if (cp.speed_lo > cp.speed_hi) std::swap(cp.speed_lo, cp.speed_hi);
      d.cusp_points.push_back(cp);
    }
  }
  // merge corner entries smeared over adjacent chain vertices
  for (std::size_t k = 1; k < d.cusp_points.size();) {
    if (d.cusp_points[k].p - d.cusp_points[k - 1].p < 0.05) {
      d.cusp_points[k - 1].slope_right = d.cusp_points[k].slope_right;
      d.cusp_points[k - 1].speed_lo = std::min(d.cusp_points[k - 1].speed_lo,
                                               d.cusp_points[k].speed_lo);
      d.cusp_points[k - 1].speed_hi = std::max(d.cusp_points[k - 1].speed_hi,
                                               d.cusp_points[k].speed_hi);
      d.cusp_points.erase(d.cusp_points.begin() + k);
    } else {
      ++k;
    }
  }

  d.slope_at_pi = ch.back().in_slope;
  d.cusp_gap_at_pi = 2.0 * d.slope_at_pi;  // even reflection across pi
  if (d.slope_at_pi > gap_gate) {
    CuspPoint cp;
    cp.p = kPi;
    cp.slope_left = d.slope_at_pi;
    cp.slope_right = -d.slope_at_pi;
    cp.speed_lo = cp.speed_hi = branch_speed_before(ch.size() - 1);
    d.cusp_points.push_back(cp);
  }
  return d;
}

std::vector<double> speed_for_momentum(const Nonlinearity& m, double p,
                                       const DispersionOptions& opts) {
  const double q = abs_momentum_class(p);
  std::vector<double> roots;
  if (q <= 1e-12) return roots;
  const DispersionCurve cv = dispersion_sweep(m, opts);

  auto push_root = [&](double c) {
    for (double r : roots)
      if (std::abs(r - c) < 1e-10) return;
    roots.push_back(c);
  };
  for (std::size_t i = 0; i + 1 < cv.samples.size(); ++i) {
    const auto& a = cv.samples[i];
    const auto& b = cv.samples[i + 1];
    const double fa = a.p - q, fb = b.p - q;
    if (fa == 0.0) push_root(a.c);
    if (fb == 0.0) push_root(b.c);
    if (fa * fb >= 0.0) continue;
    try {
      auto f = [&](double c) { return momentum_s(m, c, a.branch) - q; };
      std::uintmax_t iters = 120;
      auto r = boost::math::tools::toms748_solve(f, a.c, b.c, fa, fb,
                                                 boost::math::tools::eps_tolerance<double>(45),
                                                 iters);
      const double c = 0.5 * (r.first + r.second);
      // a bracket across a branch discontinuity converges to the jump speed
      // without actually attaining q; verify before accepting
      if (std::abs(momentum_s(m, c, a.branch) - q) < 1e-6 * (1.0 + q)) push_root(c);
    } catch (const Error&) {
      // bracket touches a gap in the branch: no certified root here
    }
  }
  std::sort(roots.begin(), roots.end(), [&](double a, double b) {
    return energy_s(m, a) < energy_s(m, b);
  });
  return roots;
}

namespace bump {

// chi'(u) = N u (1-u^2)^3 on [-1, 1]; N normalizes int chi'^2 = 1, and
// int u^2 (1-u^2)^6 du = 2048/45045 exactly.
static const double kN = std::sqrt(45045.0 / 2048.0);

double chi(double u) {
  if (std::abs(u) >= 1.0) return 0.0;
  const double w = 1.0 - u * u;
  return -kN / 8.0 * w * w * w * w;
}

double dchi(double u) {
  if (std::abs(u) >= 1.0) return 0.0;
  const double w = 1.0 - u * u;
  return kN * u * w * w * w;
}

double d2chi(double u) {
  if (std::abs(u) >= 1.0) return 0.0;
  const double w = 1.0 - u * u;
  return kN * w * w * (1.0 - 7.0 * u * u);
}

double max_dchi() {
  // critical point of chi' at u = 1/sqrt(7)
  const double u = 1.0 / std::sqrt(7.0);
  return dchi(u);
}

double quad_a() {
  static const double a = quad([](double u) { return d2chi(u) * d2chi(u); }, -1.0, 1.0);
  return a;
}

double quad_b() {
  static const double b = quad(
      [](double u) {
        const double d = dchi(u);
        return d * d * d * d;
      },
      -1.0, 1.0);
  return b;
}

}  // namespace bump

TestPairResult test_function_energy(const Nonlinearity& m, double p, double lambda) {
  if (!(p >= 0.0) || !std::isfinite(p))
    throw PreconditionError("test_function_energy: momentum must be nonnegative");
  if (!(lambda > 0.0)) throw PreconditionError("test_function_energy: lambda must be positive");
  TestPairResult r;
  r.lambda = lambda;
  r.p = p;
  if (p == 0.0) return r;

  const double eps = std::pow(2.0, -0.75) * std::sqrt(p * lambda);
  const double sigma = std::pow(2.0, -0.25) * std::sqrt(p * lambda);
  r.amplitude = (eps / lambda) * bump::max_dchi();
  if (r.amplitude >= 0.995)
    throw AmplitudeTooLarge(
        "test_function_energy: pair amplitude would drive the modulus to zero; "
        "increase lambda");

  auto rho = [&](double u) { return 1.0 - (eps / lambda) * bump::dchi(u); };
  r.energy = lambda * quad(
                           [&](double u) {
                             const double rr = rho(u);
                             const double t1 = eps / (lambda * lambda) * bump::d2chi(u);
                             const double t2 = rr * (sigma / lambda) * bump::dchi(u);
                             return t1 * t1 + t2 * t2 + m.V(rr * rr);
                           },
                           -1.0, 1.0, 1e-13);
  r.momentum = sigma * quad(
                           [&](double u) {
                             const double rr = rho(u);
                             return (1.0 - rr * rr) * bump::dchi(u);
                           },
                           -1.0, 1.0, 1e-13);
  const double rt2 = std::sqrt(2.0);
  r.predicted = rt2 * p + bump::quad_a() * p / (2.0 * rt2 * lambda * lambda) +
                5.0 * bump::quad_b() * p * p / (16.0 * lambda);
  return r;
}

}  // namespace twave
