#include "qst/scenario.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <thread>

#include "json.hpp"

#include "qst/errors.hpp"

namespace qst {

namespace {

using nlohmann::json;

const char* const kAllowedKeys[] = {"mode",   "M",          "omega0", "p",
                                    "gamma0", "lambda",     "N",      "t_max",
                                    "num_points", "dt", "kernel_variant",
                                    "output"};

int line_of_offset(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') ++line;
  }
  return line;
}

json parse_json_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError("config parse error at line " +
                          std::to_string(line_of_offset(text, e.byte)) + ": " +
                          e.what());
  }
}

double get_number(const json& doc, const char* key, double fallback) {
  if (!doc.contains(key)) return fallback;
  if (!doc.at(key).is_number()) {
    throw ValidationError(std::string(key) + " must be a number");
  }
  return doc.at(key).get<double>();
}

int get_integer(const json& doc, const char* key, int fallback) {
  if (!doc.contains(key)) return fallback;
  if (!doc.at(key).is_number_integer()) {
    throw ValidationError(std::string(key) + " must be an integer");
  }
  return doc.at(key).get<int>();
}

ScenarioConfig::Mode mode_from_name(const std::string& name) {
  if (name == "closed") return ScenarioConfig::Mode::closed;
  if (name == "open") return ScenarioConfig::Mode::open;
  if (name == "oracle") return ScenarioConfig::Mode::oracle;
  if (name == "compare") return ScenarioConfig::Mode::compare;
  if (name == "sweep") return ScenarioConfig::Mode::sweep;
  throw ValidationError("unknown mode \"" + name + "\"");
}

struct Peak {
  double value = 0.0;
  double time = 0.0;
};

Peak find_peak(const Eigen::VectorXd& times, const Eigen::VectorXd& values) {
  Eigen::Index best = 0;
  values.maxCoeff(&best);
  return {values(best), times(best)};
}

std::size_t thread_cap() {
  if (const char* env = std::getenv("QST_THREADS")) {
    const long parsed = std::strtol(env, nullptr, 10);
    if (parsed >= 1) return static_cast<std::size_t>(parsed);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

std::string format_value(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.12g", v);
  return buffer;
}

void check_finite(const ResultTable& table) {
  for (const auto& column : table.columns) {
    if (!column.allFinite()) {
      throw NumericError("non-finite value in result table");
    }
  }
}

// Output grid with an integer number of RK4 substeps per interval, so the
// recorded times land exactly on the requested grid.
IntegratorSettings snapped_settings(const ScenarioConfig& config) {
  const double interval = config.t_max / (config.num_points - 1);
  long substeps = static_cast<long>(std::ceil(interval / config.dt - 1e-9));
  if (substeps < 1) substeps = 1;
  IntegratorSettings settings;
  settings.dt = interval / substeps;
  settings.t_max = config.t_max;
  settings.record_stride = static_cast<int>(substeps);
  return settings;
}

AmplitudeTrajectory run_oracle(const ScenarioConfig& config,
                               const EnsembleConfig& ensemble) {
  const EigenAmplitudes init = initial_coefficients(ensemble, 1.0);
  return integrate_memory_kernel(ensemble, init, snapped_settings(config),
                                 config.kernel_variant);
}

}  // namespace

const char* mode_name(ScenarioConfig::Mode mode) {
  switch (mode) {
    case ScenarioConfig::Mode::closed: return "closed";
    case ScenarioConfig::Mode::open: return "open";
    case ScenarioConfig::Mode::oracle: return "oracle";
    case ScenarioConfig::Mode::compare: return "compare";
    case ScenarioConfig::Mode::sweep: return "sweep";
  }
  return "unknown";
}

void ScenarioConfig::validate() const {
  chain.validate();
  if (!(chain.omega0 > 0.0)) throw ValidationError("omega0 must be > 0");
  if (!(reservoir.gamma0 > 0.0)) throw ValidationError("gamma0 must be > 0");
  if (!(reservoir.spectral_width > 0.0)) {
    throw ValidationError("lambda must be > 0");
  }
  if (!(t_max > 0.0)) throw ValidationError("t_max must be > 0");
  if (num_points < 2) throw ValidationError("num_points must be >= 2");
  if (!(dt > 0.0)) throw ValidationError("dt must be > 0");
  if (mode == Mode::sweep) {
    if (sweep_chain_counts.empty()) {
      throw ValidationError("sweep mode needs a list of N values");
    }
    for (int n : sweep_chain_counts) {
      if (n < 1) throw ValidationError("N must be >= 1");
    }
  } else if (num_chains < 1) {
    throw ValidationError("N must be >= 1");
  }
}

EnsembleConfig ScenarioConfig::ensemble() const { return ensemble(num_chains); }

EnsembleConfig ScenarioConfig::ensemble(int n) const {
  EnsembleConfig config;
  config.chain = chain;
  config.reservoir = reservoir;
  config.num_chains = n;
  return config;
}

ScenarioConfig parse_config(const std::string& text) {
  const json doc = parse_json_document(text);
  if (!doc.is_object()) throw ValidationError("config must be a JSON object");
  for (const auto& item : doc.items()) {
    bool known = false;
    for (const char* key : kAllowedKeys) {
      if (item.key() == key) { known = true; break; }
    }
    if (!known) throw ValidationError("unknown config key \"" + item.key() + "\"");
  }

  ScenarioConfig config;
  if (!doc.contains("mode")) throw ValidationError("mode is required");
  if (!doc.at("mode").is_string()) throw ValidationError("mode must be a string");
  config.mode = mode_from_name(doc.at("mode").get<std::string>());

  if (!doc.contains("M")) throw ValidationError("M is required");
  config.chain.sites = get_integer(doc, "M", 0);
  if (config.chain.sites < 2) throw ValidationError("M must be >= 2");
  config.chain.omega0 = get_number(doc, "omega0", 1.0);
  config.chain.p = get_number(doc, "p", 0.5);
  config.reservoir.gamma0 = get_number(doc, "gamma0", 1.0);
  config.reservoir.spectral_width = get_number(doc, "lambda", 50.0);

  if (doc.contains("N") && doc.at("N").is_array()) {
    if (config.mode != ScenarioConfig::Mode::sweep) {
      throw ValidationError("N may be a list only in sweep mode");
    }
    for (const auto& entry : doc.at("N")) {
      if (!entry.is_number_integer()) {
        throw ValidationError("N list entries must be integers");
      }
      config.sweep_chain_counts.push_back(entry.get<int>());
    }
  } else {
    config.num_chains = get_integer(doc, "N", 1);
    if (config.mode == ScenarioConfig::Mode::sweep) {
      config.sweep_chain_counts = {config.num_chains};
    }
  }

  if (!doc.contains("t_max")) throw ValidationError("t_max is required");
  config.t_max = get_number(doc, "t_max", 0.0);
  if (!doc.contains("num_points")) throw ValidationError("num_points is required");
  config.num_points = get_integer(doc, "num_points", 0);
  config.dt = get_number(doc, "dt", 1e-4);

  if (doc.contains("kernel_variant")) {
    const auto& variant = doc.at("kernel_variant");
    if (!variant.is_string()) {
      throw ValidationError("kernel_variant must be a string");
    }
    const std::string name = variant.get<std::string>();
    if (name == "eq33") {
      config.kernel_variant = KernelVariant::eq33_consistent;
    } else if (name == "residue") {
      config.kernel_variant = KernelVariant::residue;
    } else {
      throw ValidationError("kernel_variant must be \"eq33\" or \"residue\"");
    }
  }

  if (doc.contains("output")) {
    if (!doc.at("output").is_string()) {
      throw ValidationError("output must be a string");
    }
    config.output = doc.at("output").get<std::string>();
  }

  config.validate();
  return config;
}

std::string serialize_config(const ScenarioConfig& config) {
  json doc;
  doc["mode"] = mode_name(config.mode);
  doc["M"] = config.chain.sites;
  doc["omega0"] = config.chain.omega0;
  doc["p"] = config.chain.p;
  doc["gamma0"] = config.reservoir.gamma0;
  doc["lambda"] = config.reservoir.spectral_width;
  if (config.mode == ScenarioConfig::Mode::sweep) {
    doc["N"] = config.sweep_chain_counts;
  } else {
    doc["N"] = config.num_chains;
  }
  doc["t_max"] = config.t_max;
  doc["num_points"] = config.num_points;
  doc["dt"] = config.dt;
  doc["kernel_variant"] =
      config.kernel_variant == KernelVariant::eq33_consistent ? "eq33"
                                                              : "residue";
  if (!config.output.empty()) doc["output"] = config.output;
  return doc.dump();
}

std::string apply_overrides(const std::string& text,
                            const std::vector<std::string>& overrides) {
  if (overrides.empty()) return text;
  json doc = parse_json_document(text);
  for (const std::string& entry : overrides) {
    const std::size_t eq = entry.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ValidationError("override must look like key=value: " + entry);
    }
    const std::string key = entry.substr(0, eq);
    const std::string value = entry.substr(eq + 1);
    json parsed;
    try {
      parsed = json::parse(value);
    } catch (const json::parse_error&) {
      parsed = value;  // bare strings are allowed unquoted
    }
    doc[key] = parsed;
  }
  return doc.dump();
}

ScenarioResult run_scenario(const ScenarioConfig& config) {
  config.validate();
  const Eigen::VectorXd grid =
      Eigen::VectorXd::LinSpaced(config.num_points, 0.0, config.t_max);

  ResultTable table;
  json summary;
  summary["mode"] = mode_name(config.mode);

  switch (config.mode) {
    case ScenarioConfig::Mode::closed: {
      const FidelitySeries series = closed_fidelity_series(config.chain, grid);
      Eigen::VectorXd law(grid.size());
      for (Eigen::Index k = 0; k < grid.size(); ++k) {
        law(k) = std::pow(std::abs(std::sin(grid(k))), config.chain.sites - 1);
      }
      table.headers = {"t", "fidelity", "sin_law"};
      table.columns = {series.times, series.values, law};
      const Peak peak = find_peak(series.times, series.values);
      summary["peaks"] = {{{"column", "fidelity"},
                           {"peak_fidelity", peak.value},
                           {"t_peak", peak.time}}};
      break;
    }
    case ScenarioConfig::Mode::open: {
      const FidelitySeries series = open_fidelity_series(config.ensemble(), grid);
      table.headers = {"t", "fidelity"};
      table.columns = {series.times, series.values};
      const Peak peak = find_peak(series.times, series.values);
      summary["peaks"] = {{{"column", "fidelity"},
                           {"peak_fidelity", peak.value},
                           {"t_peak", peak.time}}};
      break;
    }
    case ScenarioConfig::Mode::oracle: {
      const EnsembleConfig ensemble = config.ensemble();
      const AmplitudeTrajectory traj = run_oracle(config, ensemble);
      const FidelitySeries series =
          end_site_series(traj, orthonormal_basis(config.chain));
      table.headers = {"t", "fidelity_numeric"};
      table.columns = {series.times, series.values};
      const Peak peak = find_peak(series.times, series.values);
      summary["peaks"] = {{{"column", "fidelity_numeric"},
                           {"peak_fidelity", peak.value},
                           {"t_peak", peak.time}}};
      break;
    }
    case ScenarioConfig::Mode::compare: {
      const EnsembleConfig ensemble = config.ensemble();
      const AmplitudeTrajectory traj = run_oracle(config, ensemble);
      const FidelitySeries numeric =
          end_site_series(traj, orthonormal_basis(config.chain));
      const FidelitySeries analytic =
          open_fidelity_series(ensemble, numeric.times);
      const Eigen::VectorXd deviation =
          (analytic.values - numeric.values).cwiseAbs();
      table.headers = {"t", "fidelity_analytic", "fidelity_numeric",
                       "abs_deviation"};
      table.columns = {numeric.times, analytic.values, numeric.values,
                       deviation};
      const Peak peak = find_peak(analytic.times, analytic.values);
      summary["peaks"] = {{{"column", "fidelity_analytic"},
                           {"peak_fidelity", peak.value},
                           {"t_peak", peak.time}}};
      summary["max_abs_deviation"] = deviation.maxCoeff();
      break;
    }
    case ScenarioConfig::Mode::sweep: {
      const std::size_t count = config.sweep_chain_counts.size();
      std::vector<Eigen::VectorXd> results(count);
      std::atomic<std::size_t> next{0};
      const std::size_t workers = std::min(thread_cap(), count);
      auto work = [&]() {
        for (std::size_t idx = next.fetch_add(1); idx < count;
             idx = next.fetch_add(1)) {
          results[idx] =
              open_fidelity_series(
                  config.ensemble(config.sweep_chain_counts[idx]), grid)
                  .values;
        }
      };
      if (workers <= 1) {
        work();
      } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& thread : pool) thread.join();
      }
      table.headers = {"t"};
      table.columns = {grid};
      json peaks = json::array();
      for (std::size_t idx = 0; idx < count; ++idx) {
        const std::string header =
            "fidelity_N" + std::to_string(config.sweep_chain_counts[idx]);
        table.headers.push_back(header);
        table.columns.push_back(results[idx]);
        const Peak peak = find_peak(grid, results[idx]);
        peaks.push_back({{"column", header},
                         {"N", config.sweep_chain_counts[idx]},
                         {"peak_fidelity", peak.value},
                         {"t_peak", peak.time}});
      }
      summary["peaks"] = peaks;
      break;
    }
  }

  check_finite(table);
  ScenarioResult result;
  result.table = std::move(table);
  result.summary_json = summary.dump(2) + "\n";
  return result;
}

void emit_csv(const ResultTable& table, std::ostream& out) {
  if (table.headers.empty() || table.rows() == 0) {
    throw ValidationError("result table is empty");
  }
  if (table.headers.size() != table.columns.size()) {
    throw ValidationError("result table header/column mismatch");
  }
  for (std::size_t c = 0; c < table.headers.size(); ++c) {
    out << (c == 0 ? "" : ",") << table.headers[c];
  }
  out << '\n';
  for (Eigen::Index r = 0; r < table.rows(); ++r) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      out << (c == 0 ? "" : ",") << format_value(table.columns[c](r));
    }
    out << '\n';
  }
}

void emit_csv(const ResultTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open output file: " + path);
  emit_csv(table, out);
  out.flush();
  if (!out) throw IoError("failed writing output file: " + path);
}

std::string summary_path_for(const std::string& csv_path) {
  const std::string suffix = ".csv";
  if (csv_path.size() > suffix.size() &&
      csv_path.compare(csv_path.size() - suffix.size(), suffix.size(),
                       suffix) == 0) {
    return csv_path.substr(0, csv_path.size() - suffix.size()) +
           ".summary.json";
  }
  return csv_path + ".summary.json";
}

}  // namespace qst
