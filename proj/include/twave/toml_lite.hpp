// Minimal TOML reader covering the subset used by our model and run files:
// [table] headers (dotted allowed), key = value with string / bool / integer /
// float / homogeneous array values, and # comments.  Keys are flattened to
// "table.key" form.  Anything outside this subset is rejected with a
// ConfigError carrying the line number.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "twave/errors.hpp"

namespace twave {

struct TomlValue {
  enum class Kind { boolean, integer, real, str, array_real, array_str };
  Kind kind = Kind::real;
  bool b = false;
  long long i = 0;
  double d = 0.0;
  std::string s;
  std::vector<double> ad;
  std::vector<std::string> as;

  // integers promote to real transparently
  double as_real() const;
  bool is_number() const { return kind == Kind::integer || kind == Kind::real; }
};

using TomlTable = std::map<std::string, TomlValue>;

TomlTable toml_parse(const std::string& text, const std::string& origin = "<string>");
TomlTable toml_parse_file(const std::string& path);

// Typed getters.  The *_or variants fall back to a default; the plain ones
// throw ConfigError when the key is missing or has the wrong type.
double toml_real(const TomlTable& t, const std::string& key);
double toml_real_or(const TomlTable& t, const std::string& key, double def);
long long toml_int_or(const TomlTable& t, const std::string& key, long long def);
bool toml_bool_or(const TomlTable& t, const std::string& key, bool def);
std::string toml_str(const TomlTable& t, const std::string& key);
std::string toml_str_or(const TomlTable& t, const std::string& key, const std::string& def);
std::vector<double> toml_reals(const TomlTable& t, const std::string& key);
bool toml_has(const TomlTable& t, const std::string& key);

}  // namespace twave
