#include "twave/toml_lite.hpp"

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace twave {

double TomlValue::as_real() const {
  if (kind == Kind::real) return d;
  if (kind == Kind::integer) return static_cast<double>(i);
  throw ConfigError("value is not a number");
}

namespace {

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
  std::ostringstream os;
  os << origin << ":" << line << ": " << msg;
  throw ConfigError(os.str());
}

std::string strip(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

// removes a trailing comment that is not inside a string literal
std::string strip_comment(const std::string& s) {
  bool in_str = false;
  for (size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '"' && (i == 0 || s[i - 1] != '\\')) in_str = !in_str;
    if (c == '#' && !in_str) return s.substr(0, i);
  }
  return s;
}

bool valid_key(const std::string& k) {
  if (k.empty()) return false;
  for (char c : k) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.'))
      return false;
  }
  return k.front() != '.' && k.back() != '.';
}

std::string parse_string(const std::string& v, const std::string& origin, int line) {
  if (v.size() < 2 || v.back() != '"') fail(origin, line, "unterminated string");
  std::string out;
  for (size_t i = 1; i + 1 < v.size(); ++i) {
    char c = v[i];
    if (c == '\\') {
      if (i + 2 >= v.size()) fail(origin, line, "bad escape");
      char e = v[++i];
      switch (e) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        default: fail(origin, line, std::string("unsupported escape \\") + e);
      }
    } else {
      out += c;
    }
  }
  return out;
}

bool parse_number(const std::string& v, TomlValue& out) {
  // TOML permits underscores in numbers; drop them first.
  std::string t;
  t.reserve(v.size());
  for (char c : v)
    if (c != '_') t += c;
  if (t.empty()) return false;
  char* end = nullptr;
  errno = 0;
  long long iv = std::strtoll(t.c_str(), &end, 10);
  if (errno == 0 && end && *end == '\0' && t.find_first_of(".eE") == std::string::npos) {
    out.kind = TomlValue::Kind::integer;
    out.i = iv;
    return true;
  }
  errno = 0;
  double dv = std::strtod(t.c_str(), &end);
  if (errno == 0 && end && *end == '\0') {
    out.kind = TomlValue::Kind::real;
    out.d = dv;
    return true;
  }
  return false;
}

TomlValue parse_scalar(const std::string& v, const std::string& origin, int line) {
  TomlValue out;
  if (v == "true" || v == "false") {
    out.kind = TomlValue::Kind::boolean;
    out.b = (v == "true");
    return out;
  }
  if (!v.empty() && v.front() == '"') {
    out.kind = TomlValue::Kind::str;
    out.s = parse_string(v, origin, line);
    return out;
  }
  if (parse_number(v, out)) return out;
  fail(origin, line, "cannot parse value '" + v + "'");
}

// splits "a, b, c" at top level commas (strings may contain commas)
std::vector<std::string> split_items(const std::string& body, const std::string& origin, int line) {
  std::vector<std::string> items;
  std::string cur;
  bool in_str = false;
  for (size_t i = 0; i < body.size(); ++i) {
    char c = body[i];
    if (c == '"' && (i == 0 || body[i - 1] != '\\')) in_str = !in_str;
    if (c == ',' && !in_str) {
      items.push_back(strip(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (in_str) fail(origin, line, "unterminated string in array");
  std::string last = strip(cur);
  if (!last.empty()) items.push_back(last);
  return items;
}

TomlValue parse_array(const std::string& v, const std::string& origin, int line) {
  std::string body = strip(v.substr(1, v.size() - 2));
  TomlValue out;
  if (body.empty()) {
    out.kind = TomlValue::Kind::array_real;
    return out;
  }
  auto items = split_items(body, origin, line);
  bool strings = !items.empty() && !items[0].empty() && items[0][0] == '"';
  out.kind = strings ? TomlValue::Kind::array_str : TomlValue::Kind::array_real;
  for (const auto& it : items) {
    TomlValue elem = parse_scalar(it, origin, line);
    if (strings) {
      if (elem.kind != TomlValue::Kind::str) fail(origin, line, "mixed array element types");
      out.as.push_back(elem.s);
    } else {
      if (!elem.is_number()) fail(origin, line, "mixed array element types");
      out.ad.push_back(elem.as_real());
    }
  }
  return out;
}

}  // namespace

TomlTable toml_parse(const std::string& text, const std::string& origin) {
  TomlTable table;
  std::string prefix;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = strip(strip_comment(raw));
    if (s.empty()) continue;

    if (s.front() == '[') {
      if (s.back() != ']' || s.size() < 3) fail(origin, line, "malformed table header");
      if (s[1] == '[') fail(origin, line, "arrays of tables are not supported");
      prefix = strip(s.substr(1, s.size() - 2));
      if (!valid_key(prefix)) fail(origin, line, "bad table name '" + prefix + "'");
      continue;
    }

    size_t eq = std::string::npos;
    {
      bool in_str = false;
      for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) in_str = !in_str;
        if (s[i] == '=' && !in_str) {
          eq = i;
          break;
        }
      }
    }
    if (eq == std::string::npos) fail(origin, line, "expected key = value");
    std::string key = strip(s.substr(0, eq));
    std::string val = strip(s.substr(eq + 1));
    if (!valid_key(key)) fail(origin, line, "bad key '" + key + "'");
    if (val.empty()) fail(origin, line, "missing value for '" + key + "'");

    // multiline array: keep consuming lines until brackets balance
    if (val.front() == '[') {
      int depth = 0;
      bool in_str = false;
      auto count = [&](const std::string& chunk) {
        for (size_t i = 0; i < chunk.size(); ++i) {
          if (chunk[i] == '"' && (i == 0 || chunk[i - 1] != '\\')) in_str = !in_str;
          if (in_str) continue;
          if (chunk[i] == '[') ++depth;
          if (chunk[i] == ']') --depth;
        }
      };
      count(val);
      while (depth > 0 && std::getline(in, raw)) {
        ++line;
        std::string more = strip(strip_comment(raw));
        count(more);
        val += " " + more;
      }
      if (depth != 0) fail(origin, line, "unterminated array");
      val = strip(val);
    }

    std::string full = prefix.empty() ? key : prefix + "." + key;
    if (table.count(full)) fail(origin, line, "duplicate key '" + full + "'");
    if (val.front() == '[')
      table[full] = parse_array(val, origin, line);
    else
      table[full] = parse_scalar(val, origin, line);
  }
  return table;
}

TomlTable toml_parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return toml_parse(os.str(), path);
}

bool toml_has(const TomlTable& t, const std::string& key) { return t.count(key) != 0; }

static const TomlValue& need(const TomlTable& t, const std::string& key) {
  auto it = t.find(key);
  if (it == t.end()) throw ConfigError("missing key '" + key + "'");
  return it->second;
}

double toml_real(const TomlTable& t, const std::string& key) {
  const TomlValue& v = need(t, key);
  if (!v.is_number()) throw ConfigError("key '" + key + "' is not a number");
  return v.as_real();
}

double toml_real_or(const TomlTable& t, const std::string& key, double def) {
  auto it = t.find(key);
  if (it == t.end()) return def;
  if (!it->second.is_number()) throw ConfigError("key '" + key + "' is not a number");
  return it->second.as_real();
}

long long toml_int_or(const TomlTable& t, const std::string& key, long long def) {
  auto it = t.find(key);
  if (it == t.end()) return def;
  if (it->second.kind != TomlValue::Kind::integer)
    throw ConfigError("key '" + key + "' is not an integer");
  return it->second.i;
}

bool toml_bool_or(const TomlTable& t, const std::string& key, bool def) {
  auto it = t.find(key);
  if (it == t.end()) return def;
  if (it->second.kind != TomlValue::Kind::boolean)
    throw ConfigError("key '" + key + "' is not a boolean");
  return it->second.b;
}

std::string toml_str(const TomlTable& t, const std::string& key) {
  const TomlValue& v = need(t, key);
  if (v.kind != TomlValue::Kind::str) throw ConfigError("key '" + key + "' is not a string");
  return v.s;
}

std::string toml_str_or(const TomlTable& t, const std::string& key, const std::string& def) {
  auto it = t.find(key);
  if (it == t.end()) return def;
  if (it->second.kind != TomlValue::Kind::str)
    throw ConfigError("key '" + key + "' is not a string");
  return it->second.s;
}

std::vector<double> toml_reals(const TomlTable& t, const std::string& key) {
  const TomlValue& v = need(t, key);
  if (v.kind != TomlValue::Kind::array_real)
    throw ConfigError("key '" + key + "' is not a numeric array");
  return v.ad;
}

}  // namespace twave
