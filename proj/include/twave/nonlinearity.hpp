// Model layer: the nonlinearity F, its potential V(s) = int_s^1 F, and the
// discriminant g(s,c) = 4 s V(s) - c^2 (1-s)^2 that drives the whole 1D
// theory.  Normalization throughout: the boundary modulus is 1, F(1) = 0,
// F'(1) = -1, so V(s) = (s-1)^2/2 + o((s-1)^2) and the sound speed is sqrt2.
#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "twave/errors.hpp"
#include "twave/toml_lite.hpp"

namespace twave {

struct Nonlinearity {
  std::string name;  // "gp", "example43", "example55", "table", or custom
  std::string kind;

  std::function<double(double)> f;   // F(s)
  std::function<double(double)> v;   // V(s)
  std::function<double(double)> dv;  // V'(s); empty => finite differences
  bool v_analytic = true;            // false when V was integrated numerically

  double s_max = 50.0;  // horizon used by growth checks and upper-branch scans

  // speeds at which the wave family is expected to degenerate (the cubic
  // contact speed c0 for the flat-contact models); used by sweeps to refine
  double c_crit = -1.0;  // < 0: none

  std::map<std::string, double> params;  // for hashing and reports
  std::vector<double> table_s, table_f;  // only for kind == "table"

  double V(double s) const { return v(s); }
  double F(double s) const { return f(s); }
  double dV(double s) const;  // analytic when available, else central FD
  double g(double s, double c) const { return 4.0 * s * V(s) - c * c * (1.0 - s) * (1.0 - s); }
  double dg_ds(double s, double c) const;
  double d2g_ds2(double s, double c) const;  // by FD of dg_ds when dv is FD
};

// H(s) = int_1^s |V(t^2)|^(1/2) dt (signed; negative for s < 1).  Divergence
// of H at +inf is the coercivity assumption for existence theory.
double potential_h(const Nonlinearity& m, double s);

// 4 int_0^1 sqrt(V(t^2)) dt: the energy threshold below which the modulus of
// a wave cannot vanish (equals the black-soliton energy when one exists).
double vanishing_threshold(const Nonlinearity& m);

Nonlinearity make_gp();
// Flat-contact model: V has a cubic tangency of g(., c0) at s0, so the wave
// family degenerates exactly at speed c0.
Nonlinearity make_example43(double c0 = 0.8, double s0 = 0.55, double a = 1.0,
                            double delta1 = 0.1, double delta2 = 0.1);
// Monotone-bump model: quadratic V near 1, large decreasing bump below, so
// slow waves are energetically expensive and the dispersion envelope keeps a
// positive slope up to momentum pi (cusp there).
Nonlinearity make_example55(double height = 4.0, double delta = 0.1);
// Tabulated F samples, monotone-cubic interpolated; V integrated numerically.
Nonlinearity make_table(const std::vector<double>& s, const std::vector<double>& fvals);

Nonlinearity load_model(const TomlTable& t);
Nonlinearity load_model_file(const std::string& path);
// "gp" | "example43" | "example55" or a path to a TOML file
Nonlinearity resolve_model(const std::string& name);

std::string model_canonical_string(const Nonlinearity& m);
std::uint64_t model_hash(const Nonlinearity& m);

struct AssumptionCheck {
  std::string id;       // "A1", "A2", "B1", "B2", "F1=0", ...
  std::string status;   // "pass" | "fail" | "unknown"
  std::string witness;  // human-readable evidence
};

struct AssumptionReport {
  std::vector<AssumptionCheck> checks;
  bool all_pass() const;
};

AssumptionReport check_assumptions(const Nonlinearity& m);

}  // namespace twave
