#include "rcr_cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rcr/errors.hpp"

namespace rcr::cli {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string unquote(std::string_view s) {
  s = trim(s);
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
    return std::string(s.substr(1, s.size() - 2));
  }
  return std::string(s);
}

bool parse_double(std::string_view text, double& out) {
  text = trim(text);
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc{} && ptr == end && std::isfinite(out);
}

template <class Int>
bool parse_int(std::string_view text, Int& out) {
  text = trim(text);
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return !text.empty() && ec == std::errc{} && ptr == end;
}

// Collects one line per invalid field.
class Problems {
 public:
  void add(std::string line) { lines_.push_back(std::move(line)); }
  bool empty() const { return lines_.empty(); }
  std::string joined() const {
    std::string s;
    for (const auto& l : lines_) {
      if (!s.empty()) s += '\n';
      s += l;
    }
    return s;
  }

 private:
  std::vector<std::string> lines_;
};

}  // namespace

std::string_view to_string(Command c) noexcept {
  switch (c) {
    case Command::predict: return "predict";
    case Command::simulate: return "simulate";
    case Command::sweep: return "sweep";
    case Command::opt_zeta: return "opt-zeta";
    case Command::compare: return "compare";
  }
  return "predict";
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "constellation", "relaxation", "kappa",    "snr_db",      "zeta",   "n",        "trials",
      "seed",          "threads",    "disk_radius", "box_halfwidth", "quadrature_nodes", "expectation",
      "max_iters",     "rel_tol",    "zeta_max", "metric",      "sep_method", "axis",  "out",
      "format",        "predictions", "empirical",
  };
  return keys;
}

KeyValues parse_config_text(std::string_view text) {
  KeyValues out;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  const auto& keys = known_keys();
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    bool in_quote = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') in_quote = !in_quote;
      if (line[i] == '#' && !in_quote) {
        line = line.substr(0, i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key(trim(line.substr(0, eq)));
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    out[key] = unquote(line.substr(eq + 1));
  }
  return out;
}

KeyValues read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::vector<double> parse_number_list(std::string_view key, std::string_view value) {
  std::string_view v = trim(value);
  const auto bad = [&] { return ConfigError(std::string(key) + ": cannot parse '" + std::string(value) + "' as a number list"); };

  if (!v.empty() && v.front() == '[') {
    if (v.back() != ']') throw bad();
    v = trim(v.substr(1, v.size() - 2));
    if (v.empty()) return {};
  }
  if (std::count(v.begin(), v.end(), ':') == 2 && v.find(',') == std::string_view::npos) {
    const auto c1 = v.find(':');
    const auto c2 = v.find(':', c1 + 1);
    double lo = 0, step = 0, hi = 0;
    if (!parse_double(v.substr(0, c1), lo) || !parse_double(v.substr(c1 + 1, c2 - c1 - 1), step) ||
        !parse_double(v.substr(c2 + 1), hi) || !(step > 0.0) || hi < lo) {
      throw bad();
    }
    std::vector<double> out;
    const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    for (long i = 0; i <= count; ++i) out.push_back(lo + static_cast<double>(i) * step);
    return out;
  }
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= v.size()) {
    const auto comma = v.find(',', start);
    const auto piece = v.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    double d = 0;
    if (!parse_double(piece, d)) throw bad();
    out.push_back(d);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

PredictorParams RunConfig::predictor(double kappa_value, double snr_db_value, double zeta_value) const {
  PredictorParams p;
  p.kappa = kappa_value;
  p.sigma_sq = std::pow(10.0, -snr_db_value / 10.0);
  p.zeta = zeta_value;
  p.constellation = constellation;
  p.relaxation = relaxation;
  p.quadrature_nodes = quadrature_nodes;
  p.expectation = expectation;
  return p;
}

ScenarioParams RunConfig::scenario(double kappa_value, double snr_db_value, double zeta_value) const {
  ScenarioParams s;
  s.n = n;
  s.kappa = kappa_value;
  s.snr_db = snr_db_value;
  s.zeta = zeta_value;
  s.constellation = constellation;
  s.relaxation = relaxation;
  s.trials = trials;
  s.master_seed = seed;
  s.solver = solver;
  return s;
}

RunConfig build_run_config(Command command, const KeyValues& file, const KeyValues& overrides) {
  KeyValues kv = file;
  for (const auto& [k, v] : overrides) kv[k] = v;

  Problems problems;
  const auto& keys = known_keys();
  for (const auto& [k, v] : kv) {
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) problems.add("unknown key '" + k + "'");
  }

  RunConfig cfg;
  cfg.command = command;
  auto get = [&](const std::string& key) -> const std::string* {
    const auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };
  auto guarded = [&](auto&& fn) {
    try {
      fn();
    } catch (const ConfigError& e) {
      problems.add(e.what());
    }
  };

  bool constellation_ok = true;
  if (const auto* v = get("constellation")) {
    guarded([&] {
      try {
        cfg.constellation = Constellation::from_name(*v);
      } catch (const ConfigError&) {
        constellation_ok = false;
        throw ConfigError("constellation: '" + *v + "' is not one of psk4, psk8, psk16, qam16, qam64");
      }
    });
  }
  cfg.relaxation = RelaxationSet::default_for(cfg.constellation);
  if (const auto* v = get("relaxation")) {
    guarded([&] {
      if (*v != "disk" && *v != "box" && *v != "none") {
        throw ConfigError("relaxation: '" + *v + "' is not one of disk, box, none");
      }
      cfg.relaxation = RelaxationSet::from_name(*v, cfg.constellation);
    });
  }
  if (const auto* v = get("disk_radius")) {
    guarded([&] {
      double r = 0;
      if (!parse_double(*v, r) || !(r > 0)) throw ConfigError("disk_radius: must be a positive number");
      if (cfg.relaxation.kind() != RelaxationKind::disk) throw ConfigError("disk_radius: relaxation is not disk");
      cfg.relaxation = RelaxationSet::disk(r);
    });
  }
  if (const auto* v = get("box_halfwidth")) {
    guarded([&] {
      double c = 0;
      if (!parse_double(*v, c) || !(c > 0)) throw ConfigError("box_halfwidth: must be a positive number");
      if (cfg.relaxation.kind() != RelaxationKind::box) throw ConfigError("box_halfwidth: relaxation is not box");
      cfg.relaxation = RelaxationSet::box(c);
    });
  }
  if (constellation_ok && !cfg.relaxation.contains_all(cfg.constellation)) {
    problems.add("relaxation: " + cfg.relaxation.name() + " does not contain every " + cfg.constellation.name() +
                 " point");
  }

  auto number_list = [&](const char* key, std::vector<double>& dst, auto valid, const char* rule) {
    if (const auto* v = get(key)) {
      guarded([&] {
        auto values = parse_number_list(key, *v);
        for (double x : values) {
          if (!valid(x)) throw ConfigError(std::string(key) + ": every value must be " + rule);
        }
        dst = std::move(values);
      });
    }
  };
  number_list("kappa", cfg.kappa, [](double x) { return x > 0; }, "positive");
  number_list("snr_db", cfg.snr_db, [](double x) { return x > -100 && x < 200; }, "within (-100, 200) dB");
  number_list("zeta", cfg.zeta, [](double x) { return x >= 0; }, "nonnegative");

  auto integer = [&](const char* key, auto& dst, long long min_value) {
    if (const auto* v = get(key)) {
      guarded([&] {
        long long x = 0;
        if (!parse_int(*v, x) || x < min_value) {
          throw ConfigError(std::string(key) + ": must be an integer >= " + std::to_string(min_value));
        }
        dst = static_cast<std::remove_reference_t<decltype(dst)>>(x);
      });
    }
  };
  integer("n", cfg.n, 1);
  integer("trials", cfg.trials, 1);
  integer("threads", cfg.threads, 1);
  integer("quadrature_nodes", cfg.quadrature_nodes, 8);
  integer("max_iters", cfg.solver.max_iters, 1);
  if (const auto* v = get("seed")) {
    guarded([&] {
      if (!parse_int(*v, cfg.seed)) throw ConfigError("seed: must be an unsigned 64-bit integer");
    });
  }

  auto positive = [&](const char* key, double& dst) {
    if (const auto* v = get(key)) {
      guarded([&] {
        if (!parse_double(*v, dst) || !(dst > 0)) throw ConfigError(std::string(key) + ": must be a positive number");
      });
    }
  };
  positive("rel_tol", cfg.solver.rel_tol);
  if (const auto* v = get("zeta_max")) {
    guarded([&] {
      if (!parse_double(*v, cfg.zeta_max) || cfg.zeta_max < 0) throw ConfigError("zeta_max: must be >= 0");
    });
  }

  auto choice = [&](const char* key, auto& dst, std::initializer_list<std::pair<const char*, std::remove_reference_t<decltype(dst)>>> options) {
    if (const auto* v = get(key)) {
      for (const auto& [name, value] : options) {
        if (*v == name) {
          dst = value;
          return;
        }
      }
      std::string legal;
      for (const auto& [name, value] : options) legal += (legal.empty() ? "" : ", ") + std::string(name);
      problems.add(std::string(key) + ": '" + *v + "' is not one of " + legal);
    }
  };
  choice("expectation", cfg.expectation,
         {{"exact", ExpectationMethod::exact_reduction}, {"tensor", ExpectationMethod::tensor_gauss_hermite}});
  choice("metric", cfg.metric, {{"mse", ZetaMetric::mse}, {"sep", ZetaMetric::sep}});
  choice("sep_method", cfg.sep,
         {{"auto", SepChoice::automatic},
          {"closed_form_psk", SepChoice::closed_form_psk},
          {"quadrature", SepChoice::quadrature},
          {"monte_carlo", SepChoice::monte_carlo}});
  choice("axis", cfg.axis, {{"snr_db", SweepAxis::snr_db}, {"zeta", SweepAxis::zeta}});
  choice("format", cfg.format, {{"csv", OutputFormat::csv}, {"json", OutputFormat::json}});

  if (const auto* v = get("out")) cfg.out = *v;
  if (const auto* v = get("predictions")) cfg.predictions = *v;
  if (const auto* v = get("empirical")) cfg.empirical = *v;
  if (cfg.predictions.empty() != cfg.empirical.empty()) {
    problems.add("predictions/empirical: both files are needed to join results");
  }
  if (command == Command::simulate || command == Command::sweep || command == Command::compare) {
    for (double k : cfg.kappa) {
      if (std::lround(k * cfg.n) < 1) problems.add("kappa: round(kappa * n) must be >= 1");
    }
  }

  if (!problems.empty()) throw ConfigError(problems.joined());
  return cfg;
}

}  // namespace rcr::cli
