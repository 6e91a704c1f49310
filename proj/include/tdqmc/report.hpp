#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "tdqmc/experiments.hpp"
#include "tdqmc/hartree_fock.hpp"
#include "tdqmc/manifest.hpp"

namespace tdqmc {

/// "%.10g"; NaN prints as "nan".
std::string csv_number(double v);

/// CSV with `#` metadata lines (manifest hash, command, seed, config
/// fingerprint), one header row, then data rows.
class CsvFile {
 public:
  CsvFile(const std::string& path, const RunManifest& manifest, const std::vector<std::string>& header);
  void row(const std::vector<std::string>& cells);

 private:
  std::ofstream out_;
  std::size_t columns_;
};

/// hf_report.csv (component, energy) and hf_orbitals.csv. Returns the paths.
std::vector<std::string> write_hf_outputs(const std::string& dir, const SystemConfig& config, const HFState& hf,
                                          const RunManifest& manifest);

/// fig3_scan_N{n}.csv: one row per scan point plus the fitted curve value.
std::string write_scan_csv(const std::string& dir, int n_electrons, const ScanResult& scan,
                           const RunManifest& manifest);

/// fig2a/b/c (polarized) or fig4a/b/c (compensated), plus the per-size scan
/// files. Returns the paths.
std::vector<std::string> write_series_outputs(const std::string& dir, const SeriesReport& report,
                                              const RunManifest& manifest);

/// Deterministic JSON summary (no timestamps) of a series or scan.
std::string write_series_summary(const std::string& path, const SeriesReport& report, const RunManifest& manifest);
std::string write_scan_summary(const std::string& path, int n_electrons, const ScanResult& scan,
                               const RunManifest& manifest);

}  // namespace tdqmc
