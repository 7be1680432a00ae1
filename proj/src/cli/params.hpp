#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "smallball/arith.hpp"

namespace smallball::cli {

enum class ParamType { integer, rational, real, text, path };

struct ParamSpec {
  std::string key;
  ParamType type = ParamType::text;
  std::string default_value;  // empty: no default
  std::string help;
};

/// Resolved key -> value map for one command run. Values are stored as text
/// and converted on access; every conversion failure names the key.
class Params {
 public:
  Params() = default;
  explicit Params(std::map<std::string, std::string> values) : values_(std::move(values)) {}

  bool has(const std::string& key) const;
  const std::string& text(const std::string& key) const;
  long long integer(const std::string& key) const;
  std::uint64_t unsigned_integer(const std::string& key) const;
  Rational rational(const std::string& key) const;
  double real(const std::string& key) const;
  /// Comma separated values of the given type.
  std::vector<long long> integer_list(const std::string& key) const;
  std::vector<Rational> rational_list(const std::string& key) const;
  std::vector<double> real_list(const std::string& key) const;

  const std::map<std::string, std::string>& values() const { return values_; }
  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }

 private:
  std::map<std::string, std::string> values_;
};

/// Checks that the text converts to the declared type.
void check_type(const ParamSpec& spec, const std::string& value);

long long parse_integer(const std::string& key, const std::string& text);
double parse_real(const std::string& key, const std::string& text);
std::vector<std::string> split_list(const std::string& text, char sep = ',');

/// Line-oriented `key = value` file. Blank lines and lines starting with '#'
/// are skipped. Repeated keys keep every value in order.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);

}  // namespace smallball::cli
