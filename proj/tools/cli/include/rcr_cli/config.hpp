#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rcr/detector.hpp"
#include "rcr/predictor.hpp"
#include "rcr/simulate.hpp"

namespace rcr::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNonConvergence = 2;
inline constexpr int kExitIo = 3;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { predict, simulate, sweep, opt_zeta, compare };
enum class OutputFormat { csv, json };

std::string_view to_string(Command c) noexcept;

/// Raw `key = value` pairs; values are kept as written (arrays included).
using KeyValues = std::map<std::string, std::string>;

/// Every key accepted in a config file; flags use the same names with '-'
/// in place of '_'.
const std::vector<std::string>& known_keys();

/// Parses the flat config format: one `key = value` per line, '#' comments,
/// optional quotes around strings, `[a, b, ...]` arrays. Throws ConfigError
/// naming the line and, for unknown keys, the key.
KeyValues parse_config_text(std::string_view text);
/// Throws IoError when the file cannot be read.
KeyValues read_config_file(const std::string& path);

/// Number lists: a scalar, `[a, b, c]`, `a, b, c`, or `lo:step:hi`.
std::vector<double> parse_number_list(std::string_view key, std::string_view value);

struct RunConfig {
  Command command = Command::predict;
  Constellation constellation = Constellation::psk(16);
  RelaxationSet relaxation = RelaxationSet::disk(1.0);
  std::vector<double> kappa{2.0};
  std::vector<double> snr_db{10.0};
  std::vector<double> zeta{0.0};
  int n = 128;
  int trials = 50;
  std::uint64_t seed = 1;
  int threads = 1;
  SolverSettings solver{};
  int quadrature_nodes = 64;
  ExpectationMethod expectation = ExpectationMethod::exact_reduction;
  double zeta_max = 1.0;
  ZetaMetric metric = ZetaMetric::mse;
  SepChoice sep = SepChoice::automatic;
  SweepAxis axis = SweepAxis::snr_db;
  std::string out;  // empty: stdout
  OutputFormat format = OutputFormat::csv;
  bool check = false;
  std::string predictions;  // compare: join these CSVs instead of running
  std::string empirical;

  PredictorParams predictor(double kappa_value, double snr_db_value, double zeta_value) const;
  ScenarioParams scenario(double kappa_value, double snr_db_value, double zeta_value) const;
};

/// Merges `file` and `overrides` (overrides win) and validates every field.
/// All invalid fields are reported together, one line each, in a single
/// ConfigError.
RunConfig build_run_config(Command command, const KeyValues& file, const KeyValues& overrides);

}  // namespace rcr::cli
