#include "twave/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "twave/version.hpp"

namespace twave {

namespace {

using boost::math::quadrature::gauss_kronrod;

double quad(const std::function<double(double)>& f, double a, double b, double tol = 1e-10) {
  if (a == b) return 0.0;
  return gauss_kronrod<double, 31>::integrate(f, a, b, 15, tol);
}

// C^2 quintic smoothstep on [0,1]
double sstep(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}
double dsstep(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  double u = 1.0 - t;
  return 30.0 * t * t * u * u;
}

}  // namespace

double Nonlinearity::dV(double s) const {
  if (dv) return dv(s);
  double h = 1e-6 * (1.0 + std::fabs(s));
  return (v(s + h) - v(s - h)) / (2.0 * h);
}

double Nonlinearity::dg_ds(double s, double c) const {
  return 4.0 * V(s) + 4.0 * s * dV(s) + 2.0 * c * c * (1.0 - s);
}

double Nonlinearity::d2g_ds2(double s, double c) const {
  double h = 1e-6 * (1.0 + std::fabs(s));
  double vpp = (dV(s + h) - dV(s - h)) / (2.0 * h);
  return 8.0 * dV(s) + 4.0 * s * vpp - 2.0 * c * c;
}

double potential_h(const Nonlinearity& m, double s) {
  auto integrand = [&m](double t) { return std::sqrt(std::fabs(m.V(t * t))); };
  if (s >= 1.0) return quad(integrand, 1.0, s);
  return -quad(integrand, s, 1.0);
}

double vanishing_threshold(const Nonlinearity& m) {
  auto integrand = [&m](double t) { return std::sqrt(std::max(0.0, m.V(t * t))); };
  return 4.0 * quad(integrand, 0.0, 1.0, 1e-12);
}

Nonlinearity make_gp() {
  Nonlinearity m;
  m.name = "gp";
  m.kind = "gp";
  m.f = [](double s) { return 1.0 - s; };
  m.v = [](double s) { return 0.5 * (1.0 - s) * (1.0 - s); };
  m.dv = [](double s) { return s - 1.0; };
  return m;
}

namespace {

// all derived constants of the flat-contact model, captured by value in the
// V/dV closures below
struct Ex43 {
  double c0, s0, a, d1, d2;
  double A, B;    // middle->quadratic blend window
  double lA, lB;  // plateau->middle blend window
  double V0;      // plateau value

  double pright(double s) const { return 0.5 * (1.0 - s) * (1.0 - s); }
  double dpright(double s) const { return s - 1.0; }
  double pmid(double s) const {
    double q = c0 * c0 * (1.0 - s) * (1.0 - s) + a * a * std::pow(s - s0, 3);
    return q / (4.0 * s);
  }
  double dpmid(double s) const {
    double q = c0 * c0 * (1.0 - s) * (1.0 - s) + a * a * std::pow(s - s0, 3);
    double dq = -2.0 * c0 * c0 * (1.0 - s) + 3.0 * a * a * (s - s0) * (s - s0);
    return dq / (4.0 * s) - q / (4.0 * s * s);
  }

  double V(double s) const {
    if (s >= B) return pright(s);
    if (s >= A) {
      double t = (s - A) / (B - A), S = sstep(t);
      return (1.0 - S) * pmid(s) + S * pright(s);
    }
    if (s >= lB) return pmid(s);
    if (s >= lA) {
      double t = (s - lA) / (lB - lA), S = sstep(t);
      return (1.0 - S) * V0 + S * pmid(s);
    }
    return V0;
  }
  double dV(double s) const {
    if (s >= B) return dpright(s);
    if (s >= A) {
      double w = B - A, t = (s - A) / w;
      double S = sstep(t), dS = dsstep(t) / w;
      return (1.0 - S) * dpmid(s) + S * dpright(s) + dS * (pright(s) - pmid(s));
    }
    if (s >= lB) return dpmid(s);
    if (s >= lA) {
      double w = lB - lA, t = (s - lA) / w;
      double S = sstep(t), dS = dsstep(t) / w;
      return S * dpmid(s) + dS * (pmid(s) - V0);
    }
    return 0.0;
  }
};

}  // namespace

Nonlinearity make_example43(double c0, double s0, double a, double delta1, double delta2) {
  std::ostringstream why;
  if (!(c0 > 0.0 && a > 0.0 && delta1 > 0.0 && delta2 > 0.0))
    throw ConfigError("example43: c0, a, delta1, delta2 must be positive");
  if (!(s0 - delta2 > 0.0))
    throw ConfigError("example43: need s0 - delta2 > 0");
  if (!(s0 + delta2 < 1.0 - delta1))
    throw ConfigError("example43: need s0 + delta2 < 1 - delta1");
  if (!(c0 * c0 < 2.0 * (1.0 - delta1)))
    throw ConfigError("example43: need c0^2 < 2 (1 - delta1)");

  Ex43 p;
  p.c0 = c0;
  p.s0 = s0;
  p.a = a;
  p.d1 = delta1;
  p.d2 = delta2;
  p.B = 1.0 - delta1;
  // keep the quadratic-blend window above c0^2/2 so the blended discriminant
  // stays a positive combination of its two endpoint forms on (s0, 1)
  p.A = std::max(s0 + delta2, 0.5 * c0 * c0 + 0.25 * (p.B - 0.5 * c0 * c0));
  if (!(p.A < p.B)) throw ConfigError("example43: blend window collapsed; widen 1-delta1-c0^2/2");
  p.lB = s0 - delta2;
  p.lA = 0.5 * p.lB;
  p.V0 = p.pmid(p.lB);
  if (!(p.V0 > 0.0)) throw ConfigError("example43: plateau value not positive; reduce a or delta2");

  Nonlinearity m;
  m.name = "example43";
  m.kind = "example43";
  m.v = [p](double s) { return p.V(s); };
  m.dv = [p](double s) { return p.dV(s); };
  m.f = [p](double s) { return -p.dV(s); };
  m.c_crit = c0;
  m.params = {{"c0", c0}, {"s0", s0}, {"a", a}, {"delta1", delta1}, {"delta2", delta2}};

  // construction-time positivity audit (V > 0 below 1, g(., c0) >= 0 above s0)
  for (int k = 1; k < 2000; ++k) {
    double s = k / 2000.0;
    if (s < 1.0 && m.V(s) <= 0.0) {
      why << "example43: V(" << s << ") = " << m.V(s) << " <= 0";
      throw ConfigError(why.str());
    }
  }
  for (int k = 1; k < 1000; ++k) {
    double s = s0 + (1.0 - s0) * k / 1000.0;
    if (s < 0.9995 && m.g(s, c0) < -1e-12) {
      why << "example43: g(" << s << ", c0) = " << m.g(s, c0) << " < 0";
      throw ConfigError(why.str());
    }
  }
  return m;
}

Nonlinearity make_example55(double height, double delta) {
  if (!(height > 0.0) || !(delta > 0.0 && delta < 1.0))
    throw ConfigError("example55: need height > 0 and 0 < delta < 1");
  double edge = 1.0 - delta;
  Nonlinearity m;
  m.name = "example55";
  m.kind = "example55";
  m.v = [height, edge](double s) {
    double base = 0.5 * (1.0 - s) * (1.0 - s);
    if (s >= edge) return base;
    return base + height * (1.0 - sstep(s / edge));
  };
  m.dv = [height, edge](double s) {
    double base = s - 1.0;
    if (s >= edge) return base;
    return base - height * dsstep(s / edge) / edge;
  };
  m.f = [height, edge](double s) {
    double base = 1.0 - s;
    if (s >= edge) return base;
    return base + height * dsstep(s / edge) / edge;
  };
  m.params = {{"height", height}, {"delta", delta}};
  return m;
}

namespace {

// monotone cubic (Fritsch-Carlson) interpolation of the F samples, stored as
// per-interval polynomial coefficients so the antiderivative is exact
struct Pchip {
  std::vector<double> x;
  std::vector<double> c0, c1, c2, c3;  // F(x_k + t*h_k) = c0 + c1 t + c2 t^2 + c3 t^3
  std::vector<double> h;
  std::vector<double> cumV;  // cumV[k] = int_{x_k}^{x_last} F  (built right to left)

  double eval(double s) const {
    size_t n = x.size();
    if (s <= x.front()) return c0.front();
    if (s >= x.back()) {
      // linear continuation with the end slope
      size_t k = n - 2;
      double t = 1.0;
      double slope = (c1[k] + 2.0 * c2[k] * t + 3.0 * c3[k] * t * t) / h[k];
      return poly(k, 1.0) + slope * (s - x.back());
    }
    size_t k = interval(s);
    return poly(k, (s - x[k]) / h[k]);
  }

  double poly(size_t k, double t) const {
    return c0[k] + t * (c1[k] + t * (c2[k] + t * c3[k]));
  }
  double ipoly(size_t k, double t) const {  // int_0^t poly dt' * h_k
    return h[k] * t * (c0[k] + t * (c1[k] / 2.0 + t * (c2[k] / 3.0 + t * c3[k] / 4.0)));
  }
  size_t interval(double s) const {
    size_t lo = 0, hi = x.size() - 1;
    while (hi - lo > 1) {
      size_t mid = (lo + hi) / 2;
      (x[mid] <= s ? lo : hi) = mid;
    }
    return lo;
  }

  // int_s^{x_last} F
  double tail_integral(double s) const {
    if (s >= x.back()) {
      size_t k = x.size() - 2;
      double t = 1.0;
      double fend = poly(k, t);
      double slope = (c1[k] + 2.0 * c2[k] + 3.0 * c3[k]) / h[k];
      double d = s - x.back();
      return -(fend * d + 0.5 * slope * d * d);
    }
    if (s <= x.front()) return cumV.front() + c0.front() * (x.front() - s);
    size_t k = interval(s);
    double t = (s - x[k]) / h[k];
    return cumV[k + 1] + (ipoly(k, 1.0) - ipoly(k, t));
  }
};

Pchip build_pchip(const std::vector<double>& xs, const std::vector<double>& ys) {
  size_t n = xs.size();
  std::vector<double> h(n - 1), del(n - 1), slope(n);
  for (size_t k = 0; k + 1 < n; ++k) {
    h[k] = xs[k + 1] - xs[k];
    del[k] = (ys[k + 1] - ys[k]) / h[k];
  }
  for (size_t k = 1; k + 1 < n; ++k) {
    if (del[k - 1] * del[k] <= 0.0) {
      slope[k] = 0.0;
    } else {
      double w1 = 2.0 * h[k] + h[k - 1], w2 = h[k] + 2.0 * h[k - 1];
      slope[k] = (w1 + w2) / (w1 / del[k - 1] + w2 / del[k]);
    }
  }
  auto end_slope = [](double h0, double h1, double d0, double d1) {
    double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (m * d0 <= 0.0) return 0.0;
    if (d0 * d1 < 0.0 && std::fabs(m) > 3.0 * std::fabs(d0)) return 3.0 * d0;
    return m;
  };
  slope[0] = (n == 2) ? del[0] : end_slope(h[0], h[1], del[0], del[1]);
  slope[n - 1] = (n == 2) ? del[0] : end_slope(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);

  Pchip p;
  p.x = xs;
  p.h = h;
  p.c0.resize(n - 1);
  p.c1.resize(n - 1);
  p.c2.resize(n - 1);
  p.c3.resize(n - 1);
  for (size_t k = 0; k + 1 < n; ++k) {
    double y0 = ys[k], y1 = ys[k + 1];
    double m0 = slope[k] * h[k], m1 = slope[k + 1] * h[k];
    p.c0[k] = y0;
    p.c1[k] = m0;
    p.c2[k] = 3.0 * (y1 - y0) - 2.0 * m0 - m1;
    p.c3[k] = 2.0 * (y0 - y1) + m0 + m1;
  }
  // cumulative tail integrals, anchored so that V(1) = 0
  p.cumV.assign(n, 0.0);
  for (size_t k = n - 1; k-- > 0;) p.cumV[k] = p.cumV[k + 1] + p.ipoly(k, 1.0);
  double at1 = p.tail_integral(1.0);
  for (auto& cv : p.cumV) cv -= at1;
  return p;
}

}  // namespace

Nonlinearity make_table(const std::vector<double>& s, const std::vector<double>& fvals) {
  if (s.size() != fvals.size()) throw ConfigError("table model: s and f lengths differ");
  if (s.size() < 4) throw ConfigError("table model: need at least 4 samples");
  for (size_t k = 0; k + 1 < s.size(); ++k)
    if (!(s[k] < s[k + 1])) throw ConfigError("table model: s samples must be increasing");
  if (s.front() > 1e-9 || s.back() < 1.5)
    throw ConfigError("table model: samples must cover [0, 1.5]");

  Pchip p = build_pchip(s, fvals);
  // re-anchor tail integrals so V(1) = 0 exactly (done in build), and shift F
  // is left to the caller: we only *report* F(1) in check_assumptions.
  Nonlinearity m;
  m.name = "table";
  m.kind = "table";
  m.f = [p](double x) { return p.eval(x); };
  m.v = [p](double x) { return p.tail_integral(x); };
  m.dv = [p](double x) { return -p.eval(x); };
  m.v_analytic = false;
  m.s_max = std::min(50.0, s.back());
  m.table_s = s;
  m.table_f = fvals;
  return m;
}

Nonlinearity load_model(const TomlTable& t) {
  std::string kind = toml_str(t, "model.kind");
  Nonlinearity m;
  if (kind == "gp") {
    m = make_gp();
  } else if (kind == "example43") {
    m = make_example43(toml_real_or(t, "model.c0", 0.8), toml_real_or(t, "model.s0", 0.55),
                       toml_real_or(t, "model.a", 1.0), toml_real_or(t, "model.delta1", 0.1),
                       toml_real_or(t, "model.delta2", 0.1));
  } else if (kind == "example55") {
    m = make_example55(toml_real_or(t, "model.height", 4.0),
                       toml_real_or(t, "model.delta", 0.1));
  } else if (kind == "table") {
    m = make_table(toml_reals(t, "model.s"), toml_reals(t, "model.f"));
  } else {
    throw ConfigError("unknown model kind '" + kind + "'");
  }
  m.name = toml_str_or(t, "model.name", m.name);
  return m;
}

Nonlinearity load_model_file(const std::string& path) { return load_model(toml_parse_file(path)); }

Nonlinearity resolve_model(const std::string& name) {
  if (name == "gp") return make_gp();
  if (name == "example43") return make_example43();
  if (name == "example55") return make_example55();
  if (name.find('.') != std::string::npos || name.find('/') != std::string::npos)
    return load_model_file(name);
  throw ConfigError("unknown model '" + name + "' (builtin name or TOML path expected)");
}

std::string model_canonical_string(const Nonlinearity& m) {
  std::ostringstream os;
  os << "kind=" << m.kind << ";name=" << m.name;
  for (const auto& [k, vv] : m.params) os << ";" << k << "=" << fmt_g17(vv);
  if (m.kind == "table") {
    os << ";s=";
    for (double x : m.table_s) os << fmt_g17(x) << ",";
    os << ";f=";
    for (double x : m.table_f) os << fmt_g17(x) << ",";
  }
  return os.str();
}

std::uint64_t model_hash(const Nonlinearity& m) { return fnv1a64(model_canonical_string(m)); }

bool AssumptionReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const AssumptionCheck& c) { return c.status == "pass"; });
}

AssumptionReport check_assumptions(const Nonlinearity& m) {
  AssumptionReport rep;
  char buf[256];

  {  // normalization F(1) = 0
    double f1 = m.F(1.0);
    std::snprintf(buf, sizeof(buf), "F(1) = %.3e", f1);
    rep.checks.push_back({"F1-zero", std::fabs(f1) <= 1e-6 ? "pass" : "fail", buf});
  }
  {  // normalization F'(1) = -1
    double h = 1e-5;
    double fp = (m.F(1.0 + h) - m.F(1.0 - h)) / (2.0 * h);
    std::snprintf(buf, sizeof(buf), "F'(1) = %.8f", fp);
    rep.checks.push_back({"F1-slope", std::fabs(fp + 1.0) <= 1e-4 ? "pass" : "fail", buf});
  }
  {  // (A1) quadratic contact of V at 1: |V(1+h) - h^2/2| / h^2 -> 0
    double scales[4] = {0.1, 0.05, 0.02, 0.01};
    double r[4];
    for (int k = 0; k < 4; ++k) {
      double h = scales[k];
      double rp = std::fabs(m.V(1.0 + h) - 0.5 * h * h) / (h * h);
      double rmm = std::fabs(m.V(1.0 - h) - 0.5 * h * h) / (h * h);
      r[k] = std::max(rp, rmm);
    }
    bool ok = r[3] <= 0.05 && r[3] <= r[0] + 1e-12;
    std::snprintf(buf, sizeof(buf), "ratio at h=0.1: %.3e, at h=0.01: %.3e", r[0], r[3]);
    rep.checks.push_back({"A1-quadratic", ok ? "pass" : "fail", buf});
  }
  {  // (A2) polynomial growth: least squares of log|F| vs log s
    double lo = std::max(2.0, 1.0 + 0.1 * (m.s_max - 1.0));
    int n = 0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::vector<std::pair<double, double>> pts;
    for (int k = 0; k < 32; ++k) {
      double s = lo * std::pow(m.s_max / lo, k / 31.0);
      double fa = std::fabs(m.F(s));
      if (fa < 1e-14) continue;
      double X = std::log(s), Y = std::log(fa);
      pts.push_back({X, Y});
      sx += X; sy += Y; sxx += X * X; sxy += X * Y;
      ++n;
    }
    if (n < 10) {
      rep.checks.push_back({"A2-growth", "unknown", "too few nonzero samples of F"});
    } else {
      double p0 = (n * sxy - sx * sy) / (n * sxx - sx * sx);
      double icpt = (sy - p0 * sx) / n;
      double rss = 0;
      for (auto& [X, Y] : pts) {
        double e = Y - (icpt + p0 * X);
        rss += e * e;
      }
      double rms = std::sqrt(rss / n);
      std::snprintf(buf, sizeof(buf), "fit exponent p0 = %.4f, rms log-residual = %.4f", p0, rms);
      rep.checks.push_back({"A2-growth", rms < 0.1 ? "pass" : "fail", buf});
    }
  }
  {  // (B1) H(s) -> inf: increments of H must grow toward the horizon
    double s1 = m.s_max / 4.0, s2 = m.s_max / 2.0, s3 = m.s_max;
    double d1 = potential_h(m, s2) - potential_h(m, s1);
    double d2 = potential_h(m, s3) - potential_h(m, s2);
    double ratio = d1 > 0 ? d2 / d1 : 0.0;
    std::string st = ratio >= 1.2 ? "pass" : (ratio <= 0.8 ? "fail" : "unknown");
    std::snprintf(buf, sizeof(buf), "H increment ratio [%g..%g..%g] = %.3f", s1, s2, s3, ratio);
    rep.checks.push_back({"B1-coercive", st, buf});
  }
  {  // (B2) V(s) >= s^gamma beyond some s0, tried for gamma = 1 then 1/2
    double found_gamma = 0, found_s0 = 0;
    for (double gamma : {1.0, 0.5}) {
      double s_ok = -1;
      // smallest grid point beyond which V >= s^gamma holds up to the horizon
      const int N = 400;
      for (int k = N; k-- > 0;) {
        double s = 1.5 + (m.s_max - 1.5) * k / (N - 1.0);
        if (m.V(s) >= std::pow(s, gamma))
          s_ok = s;
        else
          break;
      }
      if (s_ok > 0 && s_ok < 0.9 * m.s_max) {
        found_gamma = gamma;
        found_s0 = s_ok;
        break;
      }
    }
    if (found_gamma > 0) {
      std::snprintf(buf, sizeof(buf), "V(s) >= s^%.1f for s >= %.3f", found_gamma, found_s0);
      rep.checks.push_back({"B2-lower", "pass", buf});
    } else {
      rep.checks.push_back({"B2-lower", "fail", "no power lower bound found below the horizon"});
    }
  }
  return rep;
}

}  // namespace twave
