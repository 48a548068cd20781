#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "twave/errors.hpp"
#include "twave/nonlinearity.hpp"
#include "twave/toml_lite.hpp"

using namespace twave;

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
}

TEST_CASE("quadratic model closed forms") {
  Nonlinearity m = make_gp();
  CHECK(m.kind == "gp");
  // F(rho) = 1 - rho, V(s) = (1 - s)^2 / 2
  CHECK(m.F(1.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(m.F(0.25) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(m.V(0.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(m.V(0.3) == doctest::Approx(0.5 * 0.7 * 0.7).epsilon(1e-14));
  CHECK(m.V(1.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(m.dV(0.3) == doctest::Approx(-0.7).epsilon(1e-12));

  // g(s, c) = (1 - s)^2 (2 s - c^2)
  for (double c : {0.3, 0.9, 1.2}) {
    for (double s : {0.1, 0.45, 0.8, 0.99}) {
      const double want = (1.0 - s) * (1.0 - s) * (2.0 * s - c * c);
      CHECK(m.g(s, c) == doctest::Approx(want).epsilon(1e-13));
    }
  }
  // dg/ds by central difference
  const double h = 1e-6;
  const double fd = (m.g(0.4 + h, 0.7) - m.g(0.4 - h, 0.7)) / (2 * h);
  CHECK(m.dg_ds(0.4, 0.7) == doctest::Approx(fd).epsilon(1e-8));
}

TEST_CASE("potential primitive H and the vanishing threshold") {
  Nonlinearity m = make_gp();
  // H(s) = int_1^s sqrt(V(t^2)) dt; quadratic model: sqrt(V(t^2)) = |1-t^2|/sqrt2
  CHECK(potential_h(m, 1.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(potential_h(m, 2.0) == doctest::Approx(0.9428090415820634).epsilon(1e-10));
  CHECK(potential_h(m, 0.0) == doctest::Approx(-0.4714045207910317).epsilon(1e-10));
  CHECK(vanishing_threshold(m) == doctest::Approx(1.8856180831641267).epsilon(1e-10));
  CHECK(vanishing_threshold(m) ==
        doctest::Approx(-4.0 * potential_h(m, 0.0)).epsilon(1e-12));
}

TEST_CASE("two-speed model: potential values and threshold") {
  Nonlinearity m = make_example43();
  CHECK(m.kind == "example43");
  CHECK(m.c_crit == doctest::Approx(0.8).epsilon(1e-15));
  // independently computed potential samples
  CHECK(m.V(0.2) == doctest::Approx(0.107).epsilon(1e-10));
  CHECK(m.V(0.5) == doctest::Approx(0.0799375).epsilon(1e-10));
  CHECK(m.V(0.75) == doctest::Approx(0.02084096).epsilon(1e-10));
  CHECK(m.V(0.95) == doctest::Approx(0.00125).epsilon(1e-10));
  CHECK(m.V(1.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(vanishing_threshold(m) == doctest::Approx(1.122854143148).epsilon(1e-9));
  // V stays nonnegative up to s = 1 and vanishes only there
  for (double s = 0.0; s < 0.999; s += 0.01) CHECK(m.V(s) > 0.0);
}

TEST_CASE("cusp model: potential values and threshold") {
  Nonlinearity m = make_example55();
  CHECK(m.kind == "example55");
  CHECK(m.V(0.0) == doctest::Approx(4.5).epsilon(1e-12));
  CHECK(m.V(0.5) == doctest::Approx(1.711749987299).epsilon(1e-9));
  CHECK(m.V(0.85) == doctest::Approx(0.017549852665).epsilon(1e-8));
  CHECK(vanishing_threshold(m) == doctest::Approx(6.188166252217).epsilon(1e-9));
  // the threshold exceeds sqrt2 * pi, which is what produces the interior-free
  // envelope with a corner only at the half-period
  CHECK(vanishing_threshold(m) > kSqrt2 * 3.141592653589793);
  // monotone decreasing potential on [0, 1)
  for (double s = 0.0; s < 0.99; s += 0.01) CHECK(m.dV(s) < 1e-6);
}

TEST_CASE("assumption checks pass for all builtin models") {
  for (const char* name : {"gp", "example43", "example55"}) {
    Nonlinearity m = resolve_model(name);
    AssumptionReport rep = check_assumptions(m);
    INFO("model ", name);
    CHECK(rep.all_pass());
    CHECK(rep.checks.size() >= 4);
    for (const AssumptionCheck& c : rep.checks) {
      INFO(c.id, ": ", c.witness);
      CHECK(c.status == "pass");
    }
  }
}

TEST_CASE("tabulated model approximates its analytic source") {
  Nonlinearity src = make_gp();
  std::vector<double> s, f;
  for (int k = 0; k <= 600; ++k) {
    s.push_back(4.0 * k / 600.0);
    f.push_back(src.f(s.back()));
  }
  Nonlinearity tab = make_table(s, f);
  CHECK(tab.kind == "table");
  CHECK_FALSE(tab.v_analytic);
  for (double x : {0.05, 0.3, 0.62, 0.97, 1.0, 1.5, 2.7}) {
    CHECK(tab.f(x) == doctest::Approx(src.f(x)).epsilon(1e-6));
    CHECK(tab.V(x) == doctest::Approx(src.V(x)).epsilon(1e-6));
  }
  // anchor: the tail integral vanishes at s = 1 by construction
  CHECK(std::abs(tab.V(1.0)) < 1e-12);
}

TEST_CASE("table model input validation") {
  std::vector<double> s{0.0, 0.5, 1.0, 1.6};
  std::vector<double> f{1.0, 0.5, 0.0, -0.6};
  CHECK_NOTHROW(make_table(s, f));
  CHECK_THROWS_AS(make_table({0.0, 0.5}, {1.0, 0.5}), ConfigError);
  CHECK_THROWS_AS(make_table({0.0, 0.5, 0.5, 1.6}, {1.0, 0.5, 0.4, -0.6}), ConfigError);
  CHECK_THROWS_AS(make_table({0.2, 0.5, 1.0, 1.6}, {1.0, 0.5, 0.0, -0.6}), ConfigError);
  CHECK_THROWS_AS(make_table({0.0, 0.5, 1.0, 1.2}, {1.0, 0.5, 0.0, -0.2}), ConfigError);
}

TEST_CASE("model loading from TOML tables") {
  TomlTable t = toml_parse("[model]\nkind = \"example43\"\nc0 = 0.75\ns0 = 0.5\n", "mem");
  Nonlinearity m = load_model(t);
  CHECK(m.kind == "example43");
  CHECK(m.c_crit == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(m.params.at("s0") == doctest::Approx(0.5).epsilon(1e-15));

  TomlTable bad = toml_parse("[model]\nkind = \"rational\"\n", "mem");
  CHECK_THROWS_AS(load_model(bad), ConfigError);

  CHECK(resolve_model("gp").kind == "gp");
  CHECK(resolve_model("example55").kind == "example55");
  CHECK_THROWS_AS(resolve_model("nosuchmodel"), ConfigError);
}

TEST_CASE("canonical string and hash distinguish models") {
  const std::string a = model_canonical_string(make_gp());
  const std::string b = model_canonical_string(make_example43());
  const std::string c = model_canonical_string(make_example43(0.75));
  CHECK(a != b);
  CHECK(b != c);
  CHECK(model_hash(make_gp()) == model_hash(make_gp()));
  CHECK(model_hash(make_gp()) != model_hash(make_example43()));
  CHECK(model_hash(make_example43()) != model_hash(make_example43(0.75)));
}
