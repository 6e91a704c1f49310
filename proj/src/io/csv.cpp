#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "tdqmc/error.hpp"
#include "tdqmc/report.hpp"

namespace tdqmc {

std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

CsvFile::CsvFile(const std::string& path, const RunManifest& m, const std::vector<std::string>& header)
    : out_(path), columns_(header.size()) {
  if (!out_) throw Error("cannot write " + path);
  out_ << "# manifest=" << m.hash << '\n'
       << "# command=" << m.command << '\n'
       << "# seed=" << m.seed << '\n'
       << "# config=" << m.config_fingerprint << '\n';
  row(header);
}

void CsvFile::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw Error("csv row has the wrong number of columns");
  for (std::size_t c = 0; c < cells.size(); ++c) out_ << (c ? "," : "") << cells[c];
  out_ << '\n';
}

namespace {

std::string join_path(const std::string& dir, const std::string& name) {
  return dir.empty() || dir.back() == '/' ? dir + name : dir + "/" + name;
}

nlohmann::ordered_json number(double v) {
  return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
}

nlohmann::ordered_json manifest_json(const RunManifest& m) {
  return {{"manifest", m.hash}, {"config_fingerprint", m.config_fingerprint}, {"seed", m.seed},
          {"command", m.command}, {"version", m.version}};
}

nlohmann::ordered_json scan_json(const ScanResult& s) {
  nlohmann::ordered_json j;
  j["variable"] = s.spec.variable == ScanVariable::alpha ? "alpha" : "sigma";
  j["pairs"] = s.spec.pairs == ScanPairs::ground ? "ground" : "outer";
  j["values"] = s.spec.values;
  nlohmann::ordered_json e = nlohmann::ordered_json::array();
  for (const auto& p : s.points) e.push_back({number(p.energy.mean), number(p.energy.std_error)});
  j["energies"] = e;
  j["fit_coefficients"] = std::vector<double>(s.fit.data(), s.fit.data() + s.fit.size());
  j["fit_rms"] = number(s.fit_rms);
  j["median_se"] = number(s.median_se);
  j["fit_consistent"] = s.fit_consistent();
  j["minimum"] = {{"value", number(s.value_star)}, {"energy", number(s.energy_star)}};
  j["raw_minimum"] = {{"value", number(s.raw_min_value)}, {"energy", number(s.raw_min_energy)}};
  j["boundary_minimum"] = s.boundary_minimum;
  return j;
}

void dump(const std::string& path, const nlohmann::ordered_json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace

std::vector<std::string> write_hf_outputs(const std::string& dir, const SystemConfig& config, const HFState& hf,
                                          const RunManifest& m) {
  const std::string report = join_path(dir, "hf_report.csv");
  {
    CsvFile f(report, m, {"component", "energy"});
    const HFEnergyReport& r = hf.energy_report;
    f.row({"kinetic", csv_number(r.kinetic)});
    f.row({"external", csv_number(r.external)});
    f.row({"hartree", csv_number(r.hartree)});
    f.row({"exchange", csv_number(r.exchange)});
    f.row({"total", csv_number(r.total)});
  }
  const std::string orbitals = join_path(dir, "hf_orbitals.csv");
  {
    std::vector<std::string> header{"x"};
    for (std::size_t i = 0; i < hf.orbitals.size(); ++i) {
      header.push_back("re_phi" + std::to_string(i));
      header.push_back("im_phi" + std::to_string(i));
    }
    CsvFile f(orbitals, m, header);
    for (std::size_t g = 0; g < config.grid.size(); ++g) {
      std::vector<std::string> row{csv_number(config.grid.x(g))};
      for (const auto& phi : hf.orbitals) {
        row.push_back(csv_number(phi.values(static_cast<Eigen::Index>(g)).real()));
        row.push_back(csv_number(phi.values(static_cast<Eigen::Index>(g)).imag()));
      }
      f.row(row);
    }
  }
  return {report, orbitals};
}

std::string write_scan_csv(const std::string& dir, int n, const ScanResult& s, const RunManifest& m) {
  const std::string path = join_path(dir, "fig3_scan_N" + std::to_string(n) + ".csv");
  const std::string var = s.spec.variable == ScanVariable::alpha ? "alpha" : "sigma";
  CsvFile f(path, m, {var, "energy", "std_error", "fit", "entropy_identical", "entropy_identical_raw"});
  for (const auto& p : s.points)
    f.row({csv_number(p.value), csv_number(p.energy.mean), csv_number(p.energy.std_error),
           csv_number(polyval(s.fit, p.value)), csv_number(p.entropy_identical),
           csv_number(p.entropy_identical_raw)});
  return path;
}

std::vector<std::string> write_series_outputs(const std::string& dir, const SeriesReport& report,
                                              const RunManifest& m) {
  const bool pol = report.kind == SeriesKind::polarized;
  const std::string size = pol ? "N" : "shells";
  const std::string a = join_path(dir, pol ? "fig2a_energy.csv" : "fig4a_energy.csv");
  const std::string b = join_path(dir, pol ? "fig2b_entropy.csv" : "fig4b_entropy.csv");
  const std::string c = join_path(dir, pol ? "fig2c_alpha.csv" : "fig4c_sigma.csv");
  std::vector<std::string> paths{a, b, c};
  {
    CsvFile f(a, m, {size, "n_electrons", "e_tdqmc", "se_tdqmc", "e_hf", "e_oracle", "e_unfrozen"});
    for (const auto& r : report.rows)
      f.row({std::to_string(r.size), std::to_string(r.n_electrons), csv_number(r.e_tdqmc),
             csv_number(r.se_tdqmc), csv_number(r.e_hf), csv_number(r.e_oracle), csv_number(r.e_unfrozen)});
  }
  {
    CsvFile f(b, m, {size, "electron", "entropy_identical", "entropy_identical_raw", "entropy_oracle",
                     "entropy_distinguishable"});
    for (const auto& r : report.rows)
      for (std::size_t i = 0; i < r.entropy_distinguishable.size(); ++i)
        f.row({std::to_string(r.size), std::to_string(i), csv_number(r.entropy_identical),
               csv_number(r.entropy_identical_raw), csv_number(r.entropy_oracle),
               csv_number(r.entropy_distinguishable[i])});
  }
  {
    CsvFile f(c, m, {size, "alpha_star", "sigma_star", "boundary_minimum"});
    for (const auto& r : report.rows)
      f.row({std::to_string(r.size), csv_number(r.alpha_star), csv_number(r.sigma_star),
             r.boundary_minimum ? "1" : "0"});
  }
  for (const auto& r : report.rows)
    if (r.scan) paths.push_back(write_scan_csv(dir, r.n_electrons, *r.scan, m));
  return paths;
}

std::string write_series_summary(const std::string& path, const SeriesReport& report, const RunManifest& m) {
  nlohmann::ordered_json j = manifest_json(m);
  j["kind"] = report.kind == SeriesKind::polarized ? "polarized" : "compensated";
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : report.rows) {
    nlohmann::ordered_json row;
    row["size"] = r.size;
    row["n_electrons"] = r.n_electrons;
    row["e_tdqmc"] = number(r.e_tdqmc);
    row["se_tdqmc"] = number(r.se_tdqmc);
    row["e_hf"] = number(r.e_hf);
    row["e_oracle"] = number(r.e_oracle);
    row["entropy_identical"] = number(r.entropy_identical);
    row["entropy_identical_raw"] = number(r.entropy_identical_raw);
    row["entropy_oracle"] = number(r.entropy_oracle);
    row["entropy_distinguishable"] = r.entropy_distinguishable;
    row["alpha_star"] = number(r.alpha_star);
    row["sigma_star"] = number(r.sigma_star);
    row["boundary_minimum"] = r.boundary_minimum;
    row["e_unfrozen"] = number(r.e_unfrozen);
    row["within_hf_bound"] = r.e_tdqmc <= r.e_hf + 3.0 * r.se_tdqmc;
    if (r.scan) row["scan"] = scan_json(*r.scan);
    rows.push_back(row);
  }
  j["rows"] = rows;
  dump(path, j);
  return path;
}

std::string write_scan_summary(const std::string& path, int n, const ScanResult& s, const RunManifest& m) {
  nlohmann::ordered_json j = manifest_json(m);
  j["n_electrons"] = n;
  j["scan"] = scan_json(s);
  if (s.at_optimum) {
    j["at_optimum"] = {{"value", number(s.at_optimum->value)},
                       {"energy", number(s.at_optimum->energy.mean)},
                       {"std_error", number(s.at_optimum->energy.std_error)},
                       {"entropy_identical", number(s.at_optimum->entropy_identical)},
                       {"entropy_distinguishable", s.at_optimum->entropy_distinguishable}};
  }
  dump(path, j);
  return path;
}

}  // namespace tdqmc
