#pragma once

#include <functional>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "params.hpp"

namespace smallball::cli {

inline constexpr const char* kSchemaVersion = "1.0.0";
inline constexpr const char* kToolVersion = "0.1.0";

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct Outcome {
  nlohmann::json result;
  std::optional<Table> table;  // preferred CSV rendering, when tabular
  bool soundness_failed = false;
  std::string soundness_message;
};

struct Command {
  std::string name;
  std::string help;
  std::vector<ParamSpec> params;
  bool seeded = false;
  std::function<Outcome(const Params&, unsigned workers)> run;
};

const std::vector<Command>& commands();
const Command* find_command(const std::string& name);

/// CSV of a table, quoting cells that need it.
std::string render_csv(const Table& t);
/// Two-column key,value table of the scalar leaves of a JSON object.
Table flatten_to_table(const nlohmann::json& j);
/// Dotted-path scalar leaves in document order.
std::vector<std::pair<std::string, std::string>> flatten(const nlohmann::json& j);

}  // namespace smallball::cli
