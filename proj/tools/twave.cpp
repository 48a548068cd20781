// Command-line driver: model checks, 1D profiles, dispersion sweeps, E1_min
// envelope queries, and 2D lambda scans, with reproducible CSV/JSON exports.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "twave/dispersion1d.hpp"
#include "twave/errors.hpp"
#include "twave/io.hpp"
#include "twave/minimize2d.hpp"
#include "twave/momentum.hpp"
#include "twave/nonlinearity.hpp"
#include "twave/quadrature1d.hpp"
#include "twave/toml_lite.hpp"
#include "twave/version.hpp"

namespace {

using namespace twave;

constexpr double kPi = 3.14159265358979323846;

struct GlobalArgs {
  std::string model = "gp";
  std::string out = ".";
  std::string config;
  int jobs = 0;  // 0: take TWAVE_JOBS, else 1
  std::uint64_t seed = 12345;
};

int effective_jobs(int flag_jobs) {
  if (flag_jobs > 0) return flag_jobs;
  if (const char* env = std::getenv("TWAVE_JOBS")) {
    const int j = std::atoi(env);
    if (j > 0) return j;
  }
  return 1;
}

// "min:max:geometric|linear:n" (3-part form defaults to geometric)
std::vector<double> parse_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ':')) parts.push_back(tok);
  if (parts.size() != 3 && parts.size() != 4)
    throw ConfigError("grid argument must be min:max:[geometric|linear:]n, got '" + text + "'");
  const double lo = std::atof(parts[0].c_str());
  const double hi = std::atof(parts[1].c_str());
  std::string kind = (parts.size() == 4) ? parts[2] : "geometric";
  const int n = std::atoi(parts.back().c_str());
  if (!(lo > 0.0) || !(hi > lo) || n < 2)
    throw ConfigError("grid argument needs 0 < min < max and n >= 2: '" + text + "'");
  if (kind != "geometric" && kind != "linear")
    throw ConfigError("grid kind must be geometric or linear: '" + text + "'");
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / (n - 1);
    v[i] = (kind == "geometric") ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t;
  }
  return v;
}

// canonical "key=value|..." string over the final effective settings; hashed
// into every output header so identical runs are traceable
std::string canonical_config(const std::string& cmd,
                             const std::map<std::string, std::string>& kv) {
  std::string s = "cmd=" + cmd;
  for (const auto& [k, v] : kv) s += "|" + k + "=" + v;
  return s;
}

std::string out_path(const GlobalArgs& g, const std::string& name) {
  std::filesystem::create_directories(g.out);
  return (std::filesystem::path(g.out) / name).string();
}

// config-file fallback for options the user did not pass on the command line
template <class T>
void merge_cfg(const CLI::Option* opt, const TomlTable& t, const std::string& key, T& target) {
  if (opt != nullptr && opt->count() > 0) return;
  if (!toml_has(t, key)) return;
  if constexpr (std::is_same_v<T, std::string>)
    target = toml_str(t, key);
  else if constexpr (std::is_integral_v<T>)
    target = static_cast<T>(toml_int_or(t, key, static_cast<long long>(target)));
  else
    target = static_cast<T>(toml_real(t, key));
}

int cmd_check(const GlobalArgs& g) {
  Nonlinearity m = resolve_model(g.model);
  AssumptionReport rep = check_assumptions(m);
  OutputHeader h = make_header(m, canonical_config("check", {{"model", g.model}}));
  write_assumptions_json(out_path(g, "assumptions.json"), h, rep);
  for (const AssumptionCheck& c : rep.checks)
    std::printf("%-6s %-8s %s\n", c.id.c_str(), c.status.c_str(), c.witness.c_str());
  std::printf("model %s: %s\n", m.name.c_str(), rep.all_pass() ? "all checks pass" : "FAILED");
  return rep.all_pass() ? exit_ok : exit_precondition;
}

int cmd_profile(const GlobalArgs& g, double c, int n, double x_max,
                const std::string& branch) {
  Nonlinearity m = resolve_model(g.model);
  ProfileOptions po;
  po.n = n;
  po.x_max = x_max;
  po.branch = (branch == "upper") ? Branch::upper : Branch::lower;
  WaveProfile1D prof = build_profile(m, c, po);
  WaveInvariants w = wave_invariants(m, prof);
  OutputHeader h = make_header(
      m, canonical_config("profile", {{"model", g.model},
                                      {"c", fmt_double(c)},
                                      {"n", std::to_string(n)},
                                      {"x_max", fmt_double(x_max)},
                                      {"branch", branch}}));
  write_profile_csv(out_path(g, "profile.csv"), h, prof);
  write_invariants_json(out_path(g, "invariants.json"), h, w);
  std::printf("c=%.12g zeta=%.12g energy=%.12g momentum=%.12g (canonical %.12g) decay=%.12g\n",
              w.c, prof.zeta, w.energy_s, w.momentum_s, w.momentum_canonical, w.decay_rate);
  return exit_ok;
}

int cmd_dispersion(const GlobalArgs& g, double c_min, double c_max, int n, int p_grid) {
  Nonlinearity m = resolve_model(g.model);
  DispersionOptions o;
  o.c_min = c_min;
  o.c_max = c_max;
  o.n = n;
  o.jobs = effective_jobs(g.jobs);
  DispersionCurve curve = dispersion_sweep(m, o);
  Envelope env = minimal_envelope(m, curve);
  CurveDiagnostics diag = envelope_diagnostics(env);
  OutputHeader h = make_header(
      m, canonical_config("dispersion", {{"model", g.model},
                                         {"c_min", fmt_double(c_min)},
                                         {"c_max", fmt_double(c_max)},
                                         {"n", std::to_string(n)},
                                         {"p_grid", std::to_string(p_grid)}}));
  write_dispersion_csv(out_path(g, "dispersion.csv"), h, curve);
  write_envelope_csv(out_path(g, "envelope.csv"), h, env, p_grid);
  write_diagnostics_json(out_path(g, "diagnostics.json"), h, diag);
  std::printf("%zu samples (%zu skipped), threshold=%.12g, concave=%d, cusps=%zu\n",
              curve.samples.size(), curve.skipped.size(), env.threshold,
              diag.concave ? 1 : 0, diag.cusp_points.size());
  for (const CuspPoint& c : diag.cusp_points)
    std::printf("  cusp p=%.6g slopes %.6g/%.6g speeds %.6g/%.6g\n", c.p, c.slope_left,
                c.slope_right, c.speed_lo, c.speed_hi);
  return exit_ok;
}

int cmd_emin1(const GlobalArgs& g, double p, int p_grid) {
  Nonlinearity m = resolve_model(g.model);
  DispersionOptions o;
  o.jobs = effective_jobs(g.jobs);
  DispersionCurve curve = dispersion_sweep(m, o);
  Envelope env = minimal_envelope(m, curve);
  OutputHeader h = make_header(
      m, canonical_config("emin1", {{"model", g.model},
                                    {"p", fmt_double(p)},
                                    {"p_grid", std::to_string(p_grid)}}));
  if (p > 0.0) {
    std::printf("emin1(%.12g) = %.12g  slopes [%.12g, %.12g]\n", p, emin1(env, p),
                emin1_slope_left(env, p), emin1_slope_right(env, p));
  }
  write_envelope_csv(out_path(g, "emin1.csv"), h, env, p_grid);
  write_diagnostics_json(out_path(g, "diagnostics.json"), h, envelope_diagnostics(env));
  return exit_ok;
}

int cmd_scan2d(const GlobalArgs& g, double p, const std::string& lambda_arg, int nx,
               int ny, double x_max, long max_iters, int bisect, double split) {
  Nonlinearity m = resolve_model(g.model);
  LambdaScanOptions o;
  o.nx = nx;
  o.ny = ny;
  o.x_max = x_max;
  o.minimize.max_iters = max_iters;
  o.bisect_steps = bisect;
  o.split = split;
  o.seed = g.seed;
  std::vector<double> lams = parse_grid(lambda_arg);
  LambdaScan scan = lambda_scan(m, p, lams, o);
  OutputHeader h = make_header(
      m, canonical_config("scan2d", {{"model", g.model},
                                     {"p", fmt_double(p)},
                                     {"lambda", lambda_arg},
                                     {"nx", std::to_string(nx)},
                                     {"ny", std::to_string(ny)},
                                     {"x_max", fmt_double(x_max)},
                                     {"max_iters", std::to_string(max_iters)},
                                     {"bisect", std::to_string(bisect)},
                                     {"split", fmt_double(split)},
                                     {"seed", std::to_string(g.seed)}}));
  write_scan_csv(out_path(g, "scan.csv"), h, scan);
  write_scan_json(out_path(g, "scan.json"), h, scan);
  write_field_csv(out_path(g, "field.csv"), h, scan.field_smallest_lambda);
  std::printf("p=%.12g e1=%.12g grid_tol=%.3g bracket [%.6g, %.6g] reliable=%d\n", scan.p,
              scan.e1_reference, scan.grid_tol, scan.lambda_lo, scan.lambda_hi,
              scan.bracket_reliable ? 1 : 0);
  for (const LambdaScanEntry& e : scan.entries)
    std::printf("  lambda=%-10.6g E=%.12g two_dim=%.3g conv=%d %s\n", e.lam, e.energy,
                e.two_dim, e.converged ? 1 : 0, e.init.c_str());
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"traveling waves of the defocusing NLS with nonvanishing boundary "
               "conditions: 1D quadrature, dispersion curves, 2D strip minimization"};
  app.set_version_flag("--version", std::string("twave ") + kVersion);
  app.require_subcommand(1);

  GlobalArgs g;
  app.add_option("--model", g.model, "model name (gp|example43|example55) or TOML path");
  app.add_option("--out", g.out, "output directory");
  app.add_option("--config", g.config, "TOML config file (flags override)");
  auto* jobs_opt = app.add_option("--jobs", g.jobs, "worker threads (env TWAVE_JOBS)");
  app.add_option("--seed", g.seed, "seed for randomized initializations");

  CLI::App* sc_check = app.add_subcommand("check", "verify model assumptions");
  sc_check->fallthrough();

  double pr_c = 1.0, pr_xmax = 0.0;
  int pr_n = 4001;
  std::string pr_branch = "lower";
  CLI::App* sc_prof = app.add_subcommand("profile", "build a 1D wave and its invariants");
  sc_prof->fallthrough();
  auto* o_c = sc_prof->add_option("--c", pr_c, "wave speed");
  auto* o_n = sc_prof->add_option("--n", pr_n, "profile grid points (odd)");
  auto* o_xm = sc_prof->add_option("--x-max", pr_xmax, "half-width (0: automatic)");
  auto* o_br = sc_prof->add_option("--branch", pr_branch, "lower|upper turning branch");

  double d_cmin = 0.05, d_cmax = 1.35;
  int d_n = 201, d_pgrid = 257;
  CLI::App* sc_disp = app.add_subcommand("dispersion", "sweep speeds, build the envelope");
  sc_disp->fallthrough();
  auto* o_cmin = sc_disp->add_option("--c-min", d_cmin, "smallest speed");
  auto* o_cmax = sc_disp->add_option("--c-max", d_cmax, "largest speed");
  auto* o_dn = sc_disp->add_option("--n", d_n, "number of sweep speeds");
  auto* o_pg = sc_disp->add_option("--p-grid", d_pgrid, "envelope export grid size");

  double e_p = 0.0;
  int e_pgrid = 129;
  CLI::App* sc_emin = app.add_subcommand("emin1", "query the E1_min envelope");
  sc_emin->fallthrough();
  auto* o_ep = sc_emin->add_option("--p", e_p, "momentum to evaluate (optional)");
  auto* o_epg = sc_emin->add_option("--p-grid", e_pgrid, "envelope export grid size");

  double s_p = 1.0, s_xmax = 0.0, s_split = 0.3;
  std::string s_lambda = "0.05:4:geometric:12";
  int s_nx = 512, s_ny = 16, s_bisect = 0;
  long s_maxit = 8000;
  CLI::App* sc_scan = app.add_subcommand("scan2d", "2D strip minimization over lambda");
  sc_scan->fallthrough();
  auto* o_sp = sc_scan->add_option("--p", s_p, "target momentum in (0, pi]");
  auto* o_sl = sc_scan->add_option("--lambda", s_lambda, "min:max:[geometric|linear:]n");
  auto* o_snx = sc_scan->add_option("--nx", s_nx, "grid columns");
  auto* o_sny = sc_scan->add_option("--ny", s_ny, "grid rows");
  auto* o_sxm = sc_scan->add_option("--x-max", s_xmax, "half-width (0: automatic)");
  auto* o_smi = sc_scan->add_option("--max-iters", s_maxit, "iteration cap per run");
  auto* o_sb = sc_scan->add_option("--bisect", s_bisect, "bracket bisection steps");
  auto* o_ss = sc_scan->add_option("--split", s_split, "blend momentum split in (0,1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : exit_config;
  }

  try {
    if (!g.config.empty()) {
      const TomlTable t = toml_parse_file(g.config);
      merge_cfg(app.get_option("--model"), t, "model", g.model);
      merge_cfg(app.get_option("--out"), t, "out", g.out);
      merge_cfg(jobs_opt, t, "jobs", g.jobs);
      merge_cfg(app.get_option("--seed"), t, "seed", g.seed);
      merge_cfg(o_c, t, "profile.c", pr_c);
      merge_cfg(o_n, t, "profile.n", pr_n);
      merge_cfg(o_xm, t, "profile.x_max", pr_xmax);
      merge_cfg(o_br, t, "profile.branch", pr_branch);
      merge_cfg(o_cmin, t, "dispersion.c_min", d_cmin);
      merge_cfg(o_cmax, t, "dispersion.c_max", d_cmax);
      merge_cfg(o_dn, t, "dispersion.n", d_n);
      merge_cfg(o_pg, t, "dispersion.p_grid", d_pgrid);
      merge_cfg(o_ep, t, "emin1.p", e_p);
      merge_cfg(o_epg, t, "emin1.p_grid", e_pgrid);
      merge_cfg(o_sp, t, "scan2d.p", s_p);
      merge_cfg(o_sl, t, "scan2d.lambda", s_lambda);
      merge_cfg(o_snx, t, "scan2d.nx", s_nx);
      merge_cfg(o_sny, t, "scan2d.ny", s_ny);
      merge_cfg(o_sxm, t, "scan2d.x_max", s_xmax);
      merge_cfg(o_smi, t, "scan2d.max_iters", s_maxit);
      merge_cfg(o_sb, t, "scan2d.bisect", s_bisect);
      merge_cfg(o_ss, t, "scan2d.split", s_split);
    }

    if (sc_check->parsed()) return cmd_check(g);
    if (sc_prof->parsed()) return cmd_profile(g, pr_c, pr_n, pr_xmax, pr_branch);
    if (sc_disp->parsed()) return cmd_dispersion(g, d_cmin, d_cmax, d_n, d_pgrid);
    if (sc_emin->parsed()) return cmd_emin1(g, e_p, e_pgrid);
    if (sc_scan->parsed())
      return cmd_scan2d(g, s_p, s_lambda, s_nx, s_ny, s_xmax, s_maxit, s_bisect, s_split);
    std::fprintf(stderr, "no subcommand selected\n");
    return exit_config;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return exit_config;
  } catch (const BoundaryNotNormalized& e) {
    std::fprintf(stderr, "precondition: %s\n", e.what());
    return exit_precondition;
  } catch (const AmplitudeTooLarge& e) {
    std::fprintf(stderr, "precondition: %s\n", e.what());
    return exit_precondition;
  } catch (const PreconditionError& e) {
    std::fprintf(stderr, "precondition: %s\n", e.what());
    return exit_precondition;
  } catch (const NoTurningPoint& e) {
    std::fprintf(stderr, "no wave: %s\n", e.what());
    return exit_no_wave;
  } catch (const UndecidableFiniteness& e) {
    std::fprintf(stderr, "degenerate: %s\n", e.what());
    return exit_no_wave;
  } catch (const RhoUnderflow& e) {
    std::fprintf(stderr, "degenerate: %s\n", e.what());
    return exit_no_wave;
  } catch (const LiftingUnavailable& e) {
    std::fprintf(stderr, "degenerate: %s\n", e.what());
    return exit_no_wave;
  } catch (const InsufficientSamples& e) {
    std::fprintf(stderr, "degenerate: %s\n", e.what());
    return exit_no_wave;
  } catch (const MaxIterations& e) {
    std::fprintf(stderr, "no convergence: %s\n", e.what());
    return exit_no_convergence;
  } catch (const twave::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_no_convergence;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_no_convergence;
  }
}
