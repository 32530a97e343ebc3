#include "rcr_cli/app.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "rcr/errors.hpp"
#include "rcr_cli/commands.hpp"
#include "rcr_cli/config.hpp"

namespace rcr::cli {
namespace {

std::string dashed(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return key;
}

struct SubcommandState {
  Command command;
  CLI::App* app = nullptr;
  std::string config_path;
  bool check = false;
  std::map<std::string, std::string> values;
};

void register_options(SubcommandState& s) {
  s.app->add_option("--config", s.config_path, "flat key = value config file");
  s.app->add_flag("--check", s.check, "re-read the emitted CSV and verify it");
  for (const auto& key : known_keys()) {
    s.app->add_option("--" + dashed(key), s.values[key], "overrides '" + key + "'");
  }
}

void print_error(std::ostream& err, const std::string& kind, const std::string& what) {
  std::istringstream lines(what);
  std::string line;
  while (std::getline(lines, line)) err << "rcr: " << kind << ": " << line << '\n';
}

std::string render(const CommandOutput& result, OutputFormat format) {
  std::ostringstream buf;
  if (format == OutputFormat::csv) {
    write_csv(result.table, buf);
  } else {
    write_json(result.table, buf);
  }
  return buf.str();
}

int execute(const SubcommandState& s, std::ostream& out, std::ostream& err) {
  KeyValues file;
  if (!s.config_path.empty()) file = read_config_file(s.config_path);

  KeyValues overrides;
  for (const auto& [key, value] : s.values) {
    if (s.app->count("--" + dashed(key)) > 0) overrides[key] = value;
  }
  // Thread count: flag, then file, then RCR_THREADS.
  if (!overrides.count("threads") && !file.count("threads")) {
    if (const char* env = std::getenv("RCR_THREADS"); env != nullptr && *env != '\0') {
      overrides["threads"] = env;
    }
  }

  RunConfig cfg = build_run_config(s.command, file, overrides);
  cfg.check = s.check;
  if (cfg.check && cfg.format != OutputFormat::csv) throw ConfigError("check: only CSV output can be re-read");

  const CommandOutput result = run_command(cfg);
  const std::string text = render(result, cfg.format);

  if (cfg.out.empty()) {
    out << text << std::flush;
  } else {
    std::ofstream f(cfg.out, std::ios::binary);
    if (!(f << text) || !f.flush()) throw IoError("cannot write '" + cfg.out + "'");
  }

  for (const auto& w : result.warnings) {
    if (!w.empty()) print_error(err, "warning", w);
  }

  if (cfg.check) {
    std::string written = text;
    if (!cfg.out.empty()) {
      std::ifstream f(cfg.out, std::ios::binary);
      if (!f) throw IoError("cannot re-read '" + cfg.out + "'");
      std::ostringstream buf;
      buf << f.rdbuf();
      written = buf.str();
    }
    if (const std::string problem = check_round_trip(result.table, written); !problem.empty()) {
      throw IoError("check failed: " + problem);
    }
  }
  return result.nonconverged ? kExitNonConvergence : kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Regularized convex relaxation detector: asymptotic predictions and Monte-Carlo simulation", "rcr"};
  app.require_subcommand(1);

  const std::pair<Command, const char*> commands[] = {
      {Command::predict, "asymptotic MSE and SEP for each parameter point"},
      {Command::simulate, "Monte-Carlo MSE and SER for each parameter point"},
      {Command::sweep, "predictions and simulations along one axis"},
      {Command::opt_zeta, "regularization weight minimizing the predicted metric"},
      {Command::compare, "predictions against simulations with deviation columns"},
  };
  std::vector<SubcommandState> states;
  states.reserve(std::size(commands));
  for (const auto& [command, help] : commands) {
    SubcommandState& s = states.emplace_back();
    s.command = command;
    s.app = app.add_subcommand(std::string(to_string(command)), help);
    register_options(s);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    print_error(err, "config error", e.what());
    return kExitConfig;
  }

  const auto it = std::find_if(states.begin(), states.end(), [](const SubcommandState& s) { return s.app->parsed(); });
  try {
    return execute(*it, out, err);
  } catch (const ConfigError& e) {
    print_error(err, "config error", e.what());
    return kExitConfig;
  } catch (const InputError& e) {
    print_error(err, "config error", e.what());
    return kExitConfig;
  } catch (const IoError& e) {
    print_error(err, "io error", e.what());
    return kExitIo;
  } catch (const NumericalError& e) {
    print_error(err, "numerical error", e.what());
    return kExitNonConvergence;
  }
}

}  // namespace rcr::cli
