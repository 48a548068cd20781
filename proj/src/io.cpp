#include "twave/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "twave/version.hpp"

namespace twave {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);  // binary: no platform newline mangling
  if (!os) throw ConfigError("cannot open output file: " + path);
  return os;
}

void put_header(std::ofstream& os, const OutputHeader& h) {
  os << "# twave " << kVersion << "\n";
  os << "# model " << h.model_hash << "\n";
  os << "# config " << h.config_hash << "\n";
}

using json = nlohmann::json;

void dump_json(const std::string& path, const OutputHeader& h, json j) {
  j["meta"] = {{"version", kVersion}, {"model", h.model_hash}, {"config", h.config_hash}};
  std::ofstream os = open_out(path);
  os << j.dump(2) << "\n";
}

}  // namespace

std::string fmt_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

OutputHeader make_header(const Nonlinearity& m, const std::string& config_canonical) {
  OutputHeader h;
  h.model_hash = hash_hex(model_hash(m));
  h.config_hash = hash_hex(fnv1a64(config_canonical));
  return h;
}

void write_profile_csv(const std::string& path, const OutputHeader& h,
                       const WaveProfile1D& prof) {
  std::ofstream os = open_out(path);
  put_header(os, h);
  os << "x,rho,theta,re_psi,im_psi\n";
  for (std::size_t i = 0; i < prof.x.size(); ++i) {
    const double mod = std::sqrt(std::max(prof.rho[i], 0.0));
    os << fmt_double(prof.x[i]) << ',' << fmt_double(prof.rho[i]) << ','
       << fmt_double(prof.theta[i]) << ',' << fmt_double(mod * std::cos(prof.theta[i]))
       << ',' << fmt_double(mod * std::sin(prof.theta[i])) << "\n";
  }
}

void write_invariants_json(const std::string& path, const OutputHeader& h,
                           const WaveInvariants& w) {
  json j;
  j["c"] = w.c;
  j["energy"] = w.energy;
  j["energy_s"] = w.energy_s;
  j["momentum_valuation"] = w.momentum_valuation;
  j["momentum_s"] = w.momentum_s;
  j["momentum_canonical"] = w.momentum_canonical;
  j["abs_class"] = w.abs_class;
  j["decay_rate"] = w.decay_rate;
  j["decay_rate_expected"] = w.decay_rate_expected;
  j["finite_L"] = w.finite_L;
  dump_json(path, h, std::move(j));
}

void write_dispersion_csv(const std::string& path, const OutputHeader& h,
                          const DispersionCurve& curve) {
  std::ofstream os = open_out(path);
  put_header(os, h);
  os << "c,p,energy,finite_L\n";
  for (const DispersionPoint& s : curve.samples)
    os << fmt_double(s.c) << ',' << fmt_double(s.p) << ',' << fmt_double(s.energy)
       << ',' << (s.finite_L ? 1 : 0) << "\n";
}

void write_envelope_csv(const std::string& path, const OutputHeader& h,
                        const Envelope& env, int n_grid) {
  std::ofstream os = open_out(path);
  put_header(os, h);
  os << "p,emin1,slope_left,slope_right,flags\n";
  const int n = std::max(n_grid, 2);
  const auto& ch = env.chain;
  for (int i = 0; i < n; ++i) {
    const double p = kPi * i / (n - 1);
    const double e = emin1(env, p);
    const double sl = emin1_slope_left(env, p);
    const double sr = emin1_slope_right(env, p);
    // locate the containing chain segment to derive flags
    std::size_t k = 0;
    while (k + 2 < ch.size() && ch[k + 1].p <= p) ++k;
    std::string flags;
    auto add = [&](const char* t) {
      if (!flags.empty()) flags += '+';
      flags += t;
    };
    if (ch[k].capped_threshold || ch[k + 1].capped_threshold) add("cap_threshold");
    if (ch[k].capped_sqrt2 || ch[k + 1].capped_sqrt2) add("cap_sqrt2");
    if (ch[k + 1].interpolated) add("extension");
    const double gap = std::min(std::abs(p - ch[k].p), std::abs(ch[k + 1].p - p));
    if (gap > 0.02 && ch[k + 1].p - ch[k].p > 0.05) add("interp");
    if (flags.empty()) flags = "branch";
    os << fmt_double(p) << ',' << fmt_double(e) << ',' << fmt_double(sl) << ','
       << fmt_double(sr) << ',' << flags << "\n";
  }
}

void write_diagnostics_json(const std::string& path, const OutputHeader& h,
                            const CurveDiagnostics& d) {
  json j;
  j["concave"] = d.concave;
  j["worst_convexity"] = d.worst_convexity;
  j["lipschitz_constant"] = d.lipschitz_constant;
  j["subsonic_gap"] = d.subsonic_gap;
  j["p_floor"] = d.p_floor;
  j["threshold"] = d.threshold;
  j["slope_at_pi"] = d.slope_at_pi;
  j["cusp_gap_at_pi"] = d.cusp_gap_at_pi;
  json cusps = json::array();
  for (const CuspPoint& c : d.cusp_points)
    cusps.push_back({{"p", c.p},
                     {"slope_left", c.slope_left},
                     {"slope_right", c.slope_right},
                     {"speed_lo", c.speed_lo},
                     {"speed_hi", c.speed_hi}});
  j["cusp_points"] = std::move(cusps);
  dump_json(path, h, std::move(j));
}

void write_scan_csv(const std::string& path, const OutputHeader& h,
                    const LambdaScan& scan) {
  std::ofstream os = open_out(path);
  put_header(os, h);
  os << "lambda,energy,two_dimensionality,converged\n";
  for (const LambdaScanEntry& e : scan.entries)
    os << fmt_double(e.lam) << ',' << fmt_double(e.energy) << ','
       << fmt_double(e.two_dim) << ',' << (e.converged ? 1 : 0) << "\n";
}

void write_scan_json(const std::string& path, const OutputHeader& h,
                     const LambdaScan& scan) {
  json j;
  j["p"] = scan.p;
  j["e1_reference"] = scan.e1_reference;
  j["e1_grid"] = scan.e1_grid;
  j["grid_tol"] = scan.grid_tol;
  j["speed_1d"] = scan.speed_1d;
  j["lambda_lo"] = scan.lambda_lo;
  j["lambda_hi"] = scan.lambda_hi;
  j["lambda_s_estimate"] = scan.lambda_s_estimate;
  j["bracket_reliable"] = scan.bracket_reliable;
  json es = json::array();
  for (const LambdaScanEntry& e : scan.entries)
    es.push_back({{"lambda", e.lam},
                  {"energy", e.energy},
                  {"two_dimensionality", e.two_dim},
                  {"converged", e.converged},
                  {"init", e.init},
                  {"max_constraint_violation", e.max_constraint_violation}});
  j["entries"] = std::move(es);
  dump_json(path, h, std::move(j));
}

void write_field_csv(const std::string& path, const OutputHeader& h, const Field2D& f) {
  std::ofstream os = open_out(path);
  put_header(os, h);
  os << "x,y,rho,theta\n";
  for (int j = 0; j < f.ny; ++j)
    for (int i = 0; i < f.nx; ++i)
      os << fmt_double(f.x_of(i)) << ',' << fmt_double(f.y_of(j)) << ','
         << fmt_double(f.rho[f.idx(i, j)]) << ',' << fmt_double(f.theta[f.idx(i, j)])
         << "\n";
}

void write_assumptions_json(const std::string& path, const OutputHeader& h,
                            const AssumptionReport& rep) {
  json j;
  json checks = json::array();
  for (const AssumptionCheck& c : rep.checks)
    checks.push_back({{"id", c.id}, {"status", c.status}, {"witness", c.witness}});
  j["checks"] = std::move(checks);
  j["all_pass"] = rep.all_pass();
  dump_json(path, h, std::move(j));
}

}  // namespace twave
