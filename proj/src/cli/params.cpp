#include "params.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>

#include "smallball/errors.hpp"

namespace smallball::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<std::string> split_list(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (ch == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
  for (const auto& item : out)
    if (item.empty()) throw ValidationError("empty item in list '" + text + "'");
  return out;
}

long long parse_integer(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(t.c_str(), &end, 10);
  if (t.empty() || *end != '\0' || errno == ERANGE)
    throw ValidationError("--" + key + " expects an integer, got '" + text + "'");
  return v;
}

double parse_real(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t.find('/') != std::string::npos) {
    try {
      return parse_rational(t).get_d();
    } catch (const ValidationError&) {
      throw ValidationError("--" + key + " expects a real number, got '" + text + "'");
    }
  }
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || *end != '\0' || errno == ERANGE)
    throw ValidationError("--" + key + " expects a real number, got '" + text + "'");
  return v;
}

bool Params::has(const std::string& key) const {
  auto it = values_.find(key);
  return it != values_.end() && !it->second.empty();
}

const std::string& Params::text(const std::string& key) const {
  static const std::string empty;
  auto it = values_.find(key);
  return it == values_.end() ? empty : it->second;
}

long long Params::integer(const std::string& key) const {
  if (!has(key)) throw ValidationError("--" + key + " is required");
  return parse_integer(key, text(key));
}

std::uint64_t Params::unsigned_integer(const std::string& key) const {
  if (!has(key)) throw ValidationError("--" + key + " is required");
  const std::string t = trim(text(key));
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(t.c_str(), &end, 10);
  if (t.empty() || t[0] == '-' || *end != '\0' || errno == ERANGE)
    throw ValidationError("--" + key + " expects a non-negative integer, got '" + text(key) + "'");
  return v;
}

Rational Params::rational(const std::string& key) const {
  if (!has(key)) throw ValidationError("--" + key + " is required");
  try {
    return parse_rational(trim(text(key)));
  } catch (const ValidationError& e) {
    throw ValidationError("--" + key + ": " + e.what());
  }
}

double Params::real(const std::string& key) const {
  if (!has(key)) throw ValidationError("--" + key + " is required");
  return parse_real(key, text(key));
}

std::vector<long long> Params::integer_list(const std::string& key) const {
  std::vector<long long> out;
  for (const auto& item : split_list(text(key))) out.push_back(parse_integer(key, item));
  return out;
}

std::vector<Rational> Params::rational_list(const std::string& key) const {
  std::vector<Rational> out;
  for (const auto& item : split_list(text(key))) {
    try {
      out.push_back(parse_rational(item));
    } catch (const ValidationError& e) {
      throw ValidationError("--" + key + ": " + e.what());
    }
  }
  return out;
}

std::vector<double> Params::real_list(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : split_list(text(key))) out.push_back(parse_real(key, item));
  return out;
}

void check_type(const ParamSpec& spec, const std::string& value) {
  if (value.empty()) return;
  switch (spec.type) {
    case ParamType::integer:
      parse_integer(spec.key, value);
      break;
    case ParamType::rational:
      try {
        parse_rational(trim(value));
      } catch (const ValidationError& e) {
        throw ValidationError("--" + spec.key + ": " + e.what());
      }
      break;
    case ParamType::real:
      parse_real(spec.key, value);
      break;
    case ParamType::text:
    case ParamType::path:
      break;
  }
}

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file '" + path + "'");
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ValidationError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
    std::string key = trim(t.substr(0, eq));
    if (key.rfind("--", 0) == 0) key = key.substr(2);
    if (key.empty()) throw ValidationError(path + ":" + std::to_string(lineno) + ": empty key");
    out.emplace_back(key, trim(t.substr(eq + 1)));
  }
  return out;
}

}  // namespace smallball::cli
