#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <regex>

#include "commands.hpp"
#include "smallball/errors.hpp"
#include "smallball/parallel.hpp"

using nlohmann::json;
using namespace smallball;
using namespace smallball::cli;

namespace {

constexpr std::size_t kMaxSweepCells = 10'000;

enum Exit { kOk = 0, kInternal = 1, kValidation = 2, kBudget = 3, kSoundness = 4 };

struct Globals {
  std::string config;
  std::string output;
  std::string format = "json";
  unsigned workers = default_workers();
  bool timing = false;
};

// Global keys that may also appear in a config file.
const std::vector<std::string> kGlobalKeys = {"output", "format", "workers", "timing"};

bool is_global(const std::string& key) {
  return std::find(kGlobalKeys.begin(), kGlobalKeys.end(), key) != kGlobalKeys.end();
}

const ParamSpec* find_param(const Command& c, const std::string& key) {
  for (const auto& p : c.params)
    if (p.key == key) return &p;
  return nullptr;
}

std::map<std::string, std::string> defaults_of(const Command& c) {
  std::map<std::string, std::string> out;
  for (const auto& p : c.params) out[p.key] = p.default_value;
  return out;
}

void check_all(const Command& c, const std::map<std::string, std::string>& values) {
  for (const auto& [k, v] : values) {
    const ParamSpec* spec = find_param(c, k);
    if (!spec) throw ValidationError("unknown key '" + k + "' for " + c.name);
    check_type(*spec, v);
  }
}

void write_output(const Globals& g, const std::string& text) {
  if (g.output.empty() || g.output == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(g.output, std::ios::binary);
  if (!out) throw ValidationError("cannot write output file '" + g.output + "'");
  out << text;
}

std::string render(const Globals& g, const json& report, const Outcome& outcome) {
  if (g.format == "csv") return render_csv(outcome.table ? *outcome.table : flatten_to_table(outcome.result));
  return report.dump(2) + "\n";
}

json make_report(const Command& c, const std::map<std::string, std::string>& values, const Outcome& outcome) {
  json report = {{"schema_version", kSchemaVersion},
                 {"version", kToolVersion},
                 {"subcommand", c.name},
                 {"inputs", values},
                 {"seed", nullptr},
                 {"status", outcome.soundness_failed ? "soundness_failure" : "ok"},
                 {"result", outcome.result}};
  if (c.seeded) report["seed"] = Params(values).unsigned_integer("seed");
  if (outcome.soundness_failed) report["message"] = outcome.soundness_message;
  return report;
}

// Grid axis values: 'a:b[:step]' integer ranges, '|' separated lists, or
// ',' separated lists.
std::vector<std::string> axis_values(const std::string& spec) {
  if (spec.empty()) return {};
  if (spec.find('|') != std::string::npos) return split_list(spec, '|');
  static const std::regex range(R"(\s*(-?\d+)\s*:\s*(-?\d+)\s*(?::\s*(\d+)\s*)?)");
  std::smatch m;
  if (std::regex_match(spec, m, range)) {
    const long long lo = parse_integer("grid", m[1]), hi = parse_integer("grid", m[2]);
    const long long step = m[3].matched ? parse_integer("grid", m[3]) : 1;
    if (step < 1) throw ValidationError("grid step must be positive");
    std::vector<std::string> out;
    for (long long v = lo; v <= hi; v += step) {
      out.push_back(std::to_string(v));
      if (out.size() > kMaxSweepCells) throw BudgetError("grid axis has more than 10^4 values");
    }
    return out;
  }
  return split_list(spec, ',');
}

std::pair<std::string, std::string> split_assignment(const std::string& text, const std::string& what) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw ValidationError(what + " expects key=value, got '" + text + "'");
  std::string key = text.substr(0, eq);
  while (!key.empty() && key.back() == ' ') key.pop_back();
  std::string value = text.substr(eq + 1);
  while (!value.empty() && value.front() == ' ') value.erase(value.begin());
  return {key, value};
}

struct SweepArgs {
  std::string command;
  std::vector<std::string> grid;
  std::vector<std::string> set;
};

int run_sweep(const Globals& g, const SweepArgs& args, const std::vector<std::pair<std::string, std::string>>& file) {
  const Command* inner = find_command(args.command);
  if (!inner) throw ValidationError("--command: unknown subcommand '" + args.command + "'");

  std::map<std::string, std::string> base = defaults_of(*inner);
  for (const auto& [k, v] : file) base[k] = v;
  for (const auto& s : args.set) {
    auto [k, v] = split_assignment(s, "--set");
    base[k] = v;
  }
  check_all(*inner, base);

  std::vector<std::pair<std::string, std::vector<std::string>>> axes;
  for (const auto& spec : args.grid) {
    auto [k, v] = split_assignment(spec, "--grid");
    if (!find_param(*inner, k)) throw ValidationError("--grid: unknown key '" + k + "' for " + inner->name);
    axes.emplace_back(k, axis_values(v));
  }
  std::size_t cells = axes.empty() ? 0 : 1;
  for (const auto& [k, vals] : axes) {
    cells *= vals.size();
    if (cells > kMaxSweepCells) throw BudgetError("sweep grid exceeds 10^4 cells");
  }

  std::vector<std::string> header;
  for (const auto& [k, vals] : axes) header.push_back(k);
  header.push_back("status");
  header.push_back("message");
  const std::size_t fixed = header.size();

  std::vector<std::map<std::string, std::string>> results;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> idx(axes.size(), 0);
  for (std::size_t c = 0; c < cells; ++c) {
    auto values = base;
    std::vector<std::string> row;
    for (std::size_t a = 0; a < axes.size(); ++a) {
      values[axes[a].first] = axes[a].second[idx[a]];
      row.push_back(axes[a].second[idx[a]]);
    }
    std::string status = "ok", message;
    std::map<std::string, std::string> flat;
    try {
      check_all(*inner, values);
      const Outcome o = inner->run(Params(values), g.workers);
      if (o.soundness_failed) {
        status = "soundness_failure";
        message = o.soundness_message;
      }
      for (auto [k, v] : flatten(o.result)) {
        if (std::find(header.begin(), header.begin() + static_cast<long>(fixed), k) !=
            header.begin() + static_cast<long>(fixed))
          k = "result." + k;
        if (std::find(header.begin() + static_cast<long>(fixed), header.end(), k) == header.end()) header.push_back(k);
        flat[k] = v;
      }
    } catch (const ValidationError& e) {
      status = "validation_error";
      message = e.what();
    } catch (const BudgetError& e) {
      status = "budget_error";
      message = e.what();
    } catch (const QuadratureError& e) {
      status = "budget_error";
      message = e.what();
    } catch (const std::invalid_argument& e) {
      status = "validation_error";
      message = e.what();
    }
    row.push_back(status);
    row.push_back(message);
    rows.push_back(std::move(row));
    results.push_back(std::move(flat));
    for (std::size_t a = axes.size(); a-- > 0;) {
      if (++idx[a] < axes[a].second.size()) break;
      idx[a] = 0;
    }
  }

  Table t{header, {}};
  for (std::size_t r = 0; r < rows.size(); ++r) {
    auto row = rows[r];
    for (std::size_t h = fixed; h < header.size(); ++h) {
      auto it = results[r].find(header[h]);
      row.push_back(it == results[r].end() ? "" : it->second);
    }
    t.rows.push_back(std::move(row));
  }

  if (g.format == "json") {
    json rows_json = json::array();
    for (const auto& row : t.rows) {
      json o = json::object();
      for (std::size_t h = 0; h < header.size(); ++h) o[header[h]] = row[h];
      rows_json.push_back(o);
    }
    std::map<std::string, std::string> inputs = {{"command", args.command}};
    for (std::size_t i = 0; i < args.grid.size(); ++i) inputs["grid." + std::to_string(i)] = args.grid[i];
    for (const auto& [k, v] : base) inputs["set." + k] = v;
    json report = {{"schema_version", kSchemaVersion},
                   {"version", kToolVersion},
                   {"subcommand", "sweep"},
                   {"inputs", inputs},
                   {"seed", nullptr},
                   {"status", "ok"},
                   {"result", {{"command", args.command}, {"cells", cells}, {"columns", header}, {"rows", rows_json}}}};
    write_output(g, report.dump(2) + "\n");
  } else {
    write_output(g, render_csv(t));
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"smallball: exact small-ball probabilities, bounds and experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string("smallball ") + kToolVersion + "\nreport schema " + kSchemaVersion);

  Globals g;
  std::map<std::string, CLI::Option*> global_opts;
  global_opts["config"] = app.add_option("--config", g.config, "line-oriented 'key = value' file");
  global_opts["output"] = app.add_option("--output,-o", g.output, "output path (default stdout)");
  global_opts["format"] =
      app.add_option("--format", g.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  global_opts["workers"] = app.add_option("--workers", g.workers, "worker threads (default SMALLBALL_WORKERS or 1)");
  global_opts["timing"] = app.add_flag("--timing", g.timing, "add wall-clock seconds to the report");

  // Node-based maps keep option storage stable while CLI11 holds pointers.
  std::map<std::string, std::map<std::string, std::string>> storage;
  std::map<std::string, std::map<std::string, CLI::Option*>> opts;
  std::map<std::string, CLI::App*> subs;
  for (const auto& c : commands()) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    subs[c.name] = sub;
    for (const auto& p : c.params) {
      std::string help = p.help;
      if (!p.default_value.empty()) help += " [default: " + p.default_value + "]";
      opts[c.name][p.key] = sub->add_option("--" + p.key, storage[c.name][p.key], help);
    }
  }
  SweepArgs sweep;
  CLI::App* sweep_app = app.add_subcommand("sweep", "run a subcommand over a parameter grid, one CSV row per cell");
  sweep_app->add_option("--command", sweep.command, "subcommand to sweep")->required();
  sweep_app->add_option("--grid", sweep.grid, "axis 'key=a:b[:step]', 'key=v1,v2' or 'key=v1|v2' (repeatable)");
  sweep_app->add_option("--set", sweep.set, "fixed 'key=value' for every cell (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  }

  try {
    std::vector<std::pair<std::string, std::string>> file;
    bool format_from_file = false;
    if (!g.config.empty()) {
      for (auto& [k, v] : read_config_file(g.config)) {
        if (!is_global(k)) {
          file.emplace_back(k, v);
          continue;
        }
        if (global_opts[k]->count() > 0) continue;  // flags win
        if (k == "output") g.output = v;
        if (k == "format") {
          if (v != "json" && v != "csv") throw ValidationError("config format must be json or csv");
          g.format = v;
          format_from_file = true;
        }
        if (k == "workers") {
          const long long w = parse_integer("workers", v);
          if (w < 1) throw ValidationError("workers must be positive");
          g.workers = static_cast<unsigned>(w);
        }
        if (k == "timing") g.timing = v == "1" || v == "true" || v == "yes";
      }
    }
    if (g.workers == 0) throw ValidationError("--workers must be positive");

    if (sweep_app->parsed()) {
      // A sweep is a table; JSON only on request.
      if (global_opts["format"]->count() == 0 && !format_from_file) g.format = "csv";
      std::vector<std::pair<std::string, std::string>> inner_file;
      for (auto& [k, v] : file) {
        if (k == "command") {
          if (sweep.command.empty()) sweep.command = v;
        } else if (k == "grid") {
          if (sweep_app->get_option("--grid")->count() == 0) sweep.grid.push_back(v);
        } else if (k == "set") {
          if (sweep_app->get_option("--set")->count() == 0) sweep.set.push_back(v);
        } else {
          inner_file.emplace_back(k, v);
        }
      }
      return run_sweep(g, sweep, inner_file);
    }

    const Command* cmd = nullptr;
    for (const auto& c : commands())
      if (subs[c.name]->parsed()) cmd = &c;
    if (!cmd) throw ValidationError("no subcommand given");

    auto values = defaults_of(*cmd);
    for (const auto& [k, v] : file) {
      if (!find_param(*cmd, k)) throw ValidationError("unknown key '" + k + "' in config file for " + cmd->name);
      values[k] = v;
    }
    for (const auto& [k, opt] : opts[cmd->name])
      if (opt->count() > 0) values[k] = storage[cmd->name][k];
    check_all(*cmd, values);

    const auto start = std::chrono::steady_clock::now();
    const Outcome outcome = cmd->run(Params(values), g.workers);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

    json report = make_report(*cmd, values, outcome);
    if (g.timing) report["wall_clock"] = elapsed.count();
    write_output(g, render(g, report, outcome));
    if (outcome.soundness_failed) {
      std::cerr << "soundness check failed: " << outcome.soundness_message << "\n";
      return kSoundness;
    }
    return kOk;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const QuadratureError& e) {
    std::cerr << "quadrature did not converge: " << e.what() << "\n";
    return kBudget;
  } catch (const SoundnessError& e) {
    std::cerr << "soundness check failed: " << e.what() << "\n";
    return kSoundness;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}
