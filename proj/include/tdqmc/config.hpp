#pragma once

#include <map>
#include <string>
#include <vector>

#include "tdqmc/experiments.hpp"

namespace tdqmc {

/// Everything a CLI run needs. Text form is flat `section.key = value`
/// lines; `#` starts a comment.
struct RunConfig {
  SystemConfig system;
  std::string spins_text = "polarized";  // "polarized", "compensated" or labels like "ud"
  HFOptions hf;
  EngineOptions engine;

  OracleOptions oracle;
  bool oracle_grid_set = false;  // false: the oracle uses the system grid
  std::string oracle_symmetry = "auto";
  std::map<int, Grid1D> oracle_grids;  // series overrides per electron count
  std::string reference_file = "oracle_references.txt";

  ScanSpec scan;
  int series_max = 4;
  bool series_oracle = true;
  int oracle_max_electrons = 4;
  bool check_unfrozen = false;

  RunConfig();

  /// Resolves spins and validates; throws ConfigError with the field path.
  void finalize();
  SeriesOptions series_options() const;
  OracleOptions oracle_options() const;
  Symmetry resolved_symmetry() const;
};

/// Applies one `key = value` assignment; unknown keys throw ConfigError.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
/// Canonical text with every key; parse_config(to_text(c)) reproduces c.
std::string to_text(const RunConfig& config);

/// "a:b:n" (n evenly spaced values) or a comma-separated list.
std::vector<double> parse_values(const std::string& text, const std::string& field);

}  // namespace tdqmc
