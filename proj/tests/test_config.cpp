#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "twave/errors.hpp"
#include "twave/io.hpp"
#include "twave/nonlinearity.hpp"
#include "twave/toml_lite.hpp"
#include "twave/version.hpp"

using namespace twave;

TEST_CASE("scalar parsing across all value kinds") {
  TomlTable t = toml_parse(
      "# leading comment\n"
      "title = \"run A\"   # trailing comment\n"
      "count = 42\n"
      "ratio = -6.25e-1\n"
      "flag = true\n"
      "other = false\n",
      "mem");
  CHECK(toml_str(t, "title") == "run A");
  CHECK(toml_int_or(t, "count", 0) == 42);
  CHECK(toml_real(t, "ratio") == doctest::Approx(-0.625).epsilon(1e-15));
  CHECK(toml_bool_or(t, "flag", false));
  CHECK_FALSE(toml_bool_or(t, "other", true));
  CHECK(toml_has(t, "count"));
  CHECK_FALSE(toml_has(t, "missing"));
}

TEST_CASE("tables flatten into dotted keys") {
  TomlTable t = toml_parse(
      "top = 1\n"
      "[model]\n"
      "kind = \"gp\"\n"
      "scale = 2.5\n"
      "[scan2d]\n"
      "nx = 256\n",
      "mem");
  CHECK(toml_int_or(t, "top", 0) == 1);
  CHECK(toml_str(t, "model.kind") == "gp");
  CHECK(toml_real(t, "model.scale") == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(toml_int_or(t, "scan2d.nx", 0) == 256);
}

TEST_CASE("real arrays and integer promotion") {
  TomlTable t = toml_parse("xs = [0.0, 0.5, 1, 1.5]\nn = 7\n", "mem");
  std::vector<double> xs = toml_reals(t, "xs");
  REQUIRE(xs.size() == 4);
  CHECK(xs[2] == doctest::Approx(1.0).epsilon(1e-15));
  // integers read as reals where a real is expected
  CHECK(toml_real(t, "n") == doctest::Approx(7.0).epsilon(1e-15));
}

TEST_CASE("defaults apply only when the key is absent") {
  TomlTable t = toml_parse("a = 3\n", "mem");
  CHECK(toml_int_or(t, "a", 9) == 3);
  CHECK(toml_int_or(t, "b", 9) == 9);
  CHECK(toml_real_or(t, "c", 1.25) == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(toml_str_or(t, "d", "fallback") == "fallback");
}

TEST_CASE("malformed input reports the file and line") {
  try {
    toml_parse("ok = 1\nbad = \"unterminated\n", "somefile.toml");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("somefile.toml") != std::string::npos);
    CHECK(msg.find("2") != std::string::npos);
  }
  CHECK_THROWS_AS(toml_parse("novalue =\n", "mem"), ConfigError);
  CHECK_THROWS_AS(toml_parse("= 3\n", "mem"), ConfigError);
  CHECK_THROWS_AS(toml_real(toml_parse("s = \"text\"\n", "mem"), "s"), ConfigError);
  CHECK_THROWS_AS(toml_real(toml_parse("x = 1\n", "mem"), "missing"), ConfigError);
}

TEST_CASE("file loading and missing files") {
  const std::string path = std::filesystem::temp_directory_path() / "twave_cfg_test.toml";
  {
    std::ofstream out(path);
    out << "[model]\nkind = \"example55\"\nheight = 3.5\n";
  }
  TomlTable t = toml_parse_file(path);
  Nonlinearity m = load_model(t);
  CHECK(m.kind == "example55");
  CHECK(m.params.at("height") == doctest::Approx(3.5).epsilon(1e-15));
  std::filesystem::remove(path);
  CHECK_THROWS_AS(toml_parse_file("/nonexistent/definitely_missing.toml"), ConfigError);
}

TEST_CASE("shortest round-trip float formatting") {
  CHECK(fmt_double(0.0) == "0");
  CHECK(fmt_double(1.0) == "1");
  CHECK(fmt_double(0.5) == "0.5");
  CHECK(std::stod(fmt_double(1.0 / 3.0)) == 1.0 / 3.0);
  std::mt19937_64 rng(424242);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int k = 0; k < 1000; ++k) {
    const double x = u(rng) * std::pow(10.0, static_cast<int>(rng() % 13) - 6);
    CHECK(std::stod(fmt_double(x)) == x);
  }
}

TEST_CASE("output headers carry version, model hash, and config hash") {
  Nonlinearity m = make_gp();
  OutputHeader h1 = make_header(m, "cmd=profile|c=1");
  OutputHeader h2 = make_header(m, "cmd=profile|c=1.1");
  OutputHeader h3 = make_header(make_example43(), "cmd=profile|c=1");
  CHECK(h1.config_hash != h2.config_hash);
  CHECK(h1.model_hash != h3.model_hash);
  CHECK(h1.model_hash == make_header(m, "other").model_hash);
}

TEST_CASE("fnv hash is stable and order sensitive") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a64("ab") != fnv1a64("ba"));
  CHECK(hash_hex(fnv1a64("ab")).size() == 16);
}
