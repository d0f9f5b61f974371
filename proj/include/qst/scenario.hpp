#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qst/oracle.hpp"

namespace qst {

/// One batch run, parsed from a flat JSON document.  Defaults: p = 1/2,
/// gamma0 = 1, omega0 = 1, lambda = 50, dt = 1e-4, kernel_variant = eq33.
struct ScenarioConfig {
  enum class Mode { closed, open, oracle, compare, sweep };

  Mode mode = Mode::closed;
  ChainSpec chain;
  ReservoirSpec reservoir;
  int num_chains = 1;
  std::vector<int> sweep_chain_counts;  ///< N list, sweep mode only
  double t_max = 0.0;
  int num_points = 0;
  double dt = 1e-4;
  KernelVariant kernel_variant = KernelVariant::eq33_consistent;
  std::string output;  ///< empty: CSV goes to stdout

  void validate() const;
  EnsembleConfig ensemble() const;
  EnsembleConfig ensemble(int n) const;
};

/// Column-oriented result table; all scenario modes produce one.
struct ResultTable {
  std::vector<std::string> headers;
  std::vector<Eigen::VectorXd> columns;

  Eigen::Index rows() const { return columns.empty() ? 0 : columns[0].size(); }
};

struct ScenarioResult {
  ResultTable table;
  std::string summary_json;  ///< peak fidelities, deviations, warnings
};

const char* mode_name(ScenarioConfig::Mode mode);

/// Parses and validates a config document; throws ValidationError with the
/// offending line or field named.
ScenarioConfig parse_config(const std::string& text);

/// Canonical JSON for a config; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ScenarioConfig& config);

/// Applies "key=value" overrides to the raw document before validation.
std::string apply_overrides(const std::string& text,
                            const std::vector<std::string>& overrides);

/// Runs the scenario.  Sweep mode fans columns out over worker threads
/// (capped by the QST_THREADS environment variable); assembly order is
/// fixed, so output bytes do not depend on scheduling.
ScenarioResult run_scenario(const ScenarioConfig& config);

/// CSV with a header row and 12-significant-digit values, deterministic
/// byte-for-byte for identical configs.
void emit_csv(const ResultTable& table, std::ostream& out);
void emit_csv(const ResultTable& table, const std::string& path);

/// Path of the JSON summary written next to a CSV output.
std::string summary_path_for(const std::string& csv_path);

}  // namespace qst
