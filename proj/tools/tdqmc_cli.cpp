// Command-line front end: hf, scan, series, oracle, relax, resume.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tdqmc/checkpoint.hpp"
#include "tdqmc/config.hpp"
#include "tdqmc/entanglement.hpp"
#include "tdqmc/error.hpp"
#include "tdqmc/exact_oracle.hpp"
#include "tdqmc/manifest.hpp"
#include "tdqmc/report.hpp"

namespace fs = std::filesystem;
using namespace tdqmc;

namespace {

enum Exit { kOk = 0, kFailure = 1, kUsage = 2, kNumerical = 3, kCapacity = 4 };

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  int threads = 1;
};

struct Common {
  std::string config_path;
  std::vector<std::string> overrides;
};

RunConfig build_config(const Common& common, const Globals& g, const std::vector<std::string>& extra = {}) {
  std::string text;
  if (!common.config_path.empty()) {
    std::ifstream in(common.config_path);
    if (!in) throw ConfigError("config", "cannot read " + common.config_path);
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  for (const auto& kv : extra) text += "\n" + kv;
  for (const auto& kv : common.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set", "expected key=value, got '" + kv + "'");
    text += "\n" + kv;
  }
  // later assignments of the same key win over the file
  RunConfig merged;
  std::istringstream in(text);
  std::string line;
  std::map<std::string, std::string> ordered;
  std::vector<std::string> order;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos)
        throw ConfigError("config", "expected 'key = value', got '" + line + "'");
      continue;
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string{};
      return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    if (!ordered.count(key)) order.push_back(key);
    ordered[key] = trim(line.substr(eq + 1));
  }
  for (const auto& key : order) apply_setting(merged, key, ordered[key]);
  if (g.seed) merged.engine.seed = *g.seed;
  merged.engine.threads = g.threads;
  merged.finalize();
  return merged;
}

std::string out_path(const Globals& g, const std::string& name) { return (fs::path(g.out_dir) / name).string(); }

void finish(RunManifest& m, const Globals& g, std::vector<std::string> outputs) {
  m.finished = utc_timestamp();
  m.outputs = std::move(outputs);
  const std::string path = out_path(g, "manifest_" + m.command + ".json");
  write_manifest(path, m);
  std::cout << "manifest " << m.hash << " -> " << path << '\n';
}

int cmd_hf(const Common& c, const Globals& g) {
  RunConfig cfg = build_config(c, g);
  RunManifest m = begin_manifest(cfg, "hf");
  const HFState hf = hf_solve(cfg.system, cfg.hf);
  const auto& r = hf.energy_report;
  std::cout << "HF converged in " << hf.steps << " steps\n"
            << "  kinetic  " << csv_number(r.kinetic) << "\n  external " << csv_number(r.external)
            << "\n  hartree  " << csv_number(r.hartree) << "\n  exchange " << csv_number(r.exchange)
            << "\n  total    " << csv_number(r.total) << '\n';
  finish(m, g, write_hf_outputs(g.out_dir, cfg.system, hf, m));
  return kOk;
}

struct ScanFlags {
  std::string pairs;
  std::string alpha;
  std::string sigma;
  int fit_degree = -1;
  bool alpha_given = false;
  bool sigma_given = false;
};

int cmd_scan(const Common& c, const Globals& g, const ScanFlags& f) {
  if ((f.alpha_given && f.alpha.empty()) || (f.sigma_given && f.sigma.empty()))
    throw ConfigError("scan.values", "no scan points given");
  std::vector<std::string> extra;
  if (!f.pairs.empty()) extra.push_back("scan.pairs = " + f.pairs);
  if (!f.alpha.empty()) extra.push_back("scan.variable = alpha"), extra.push_back("scan.values = " + f.alpha);
  if (!f.sigma.empty()) extra.push_back("scan.variable = sigma"), extra.push_back("scan.values = " + f.sigma);
  if (f.fit_degree >= 0) extra.push_back("scan.fit_degree = " + std::to_string(f.fit_degree));
  RunConfig cfg = build_config(c, g, extra);
  if (cfg.scan.values.empty()) throw ConfigError("scan.values", "no scan points given");
  RunManifest m = begin_manifest(cfg, "scan");
  EngineOptions eo = cfg.engine;
  if (cfg.scan.pairs == ScanPairs::outer) {
    // inner shells stay at their HF orbitals
    eo.frozen.assign(static_cast<std::size_t>(cfg.system.n_electrons), false);
    for (int i = 0; i + 2 < cfg.system.n_electrons; ++i) eo.frozen[static_cast<std::size_t>(i)] = true;
  }
  const ScanResult s = alpha_scan(cfg.system, cfg.scan, eo, cfg.hf);
  const int n = cfg.system.n_electrons;
  std::cout << "scan minimum " << (cfg.scan.variable == ScanVariable::alpha ? "alpha" : "sigma") << "* = "
            << csv_number(s.value_star) << "  E* = " << csv_number(s.energy_star)
            << (s.boundary_minimum ? "  (boundary minimum)" : "") << '\n';
  std::vector<std::string> outputs{write_scan_csv(g.out_dir, n, s, m),
                                   write_scan_summary(out_path(g, "scan_summary.json"), n, s, m)};
  finish(m, g, outputs);
  return kOk;
}

int cmd_series(const Common& c, const Globals& g, const std::string& kind, int max) {
  if (kind != "polarized" && kind != "compensated") throw ConfigError("--kind", "expected polarized or compensated");
  std::vector<std::string> extra;
  if (max > 0) extra.push_back("series.max = " + std::to_string(max));
  RunConfig cfg = build_config(c, g, extra);
  RunManifest m = begin_manifest(cfg, "series-" + kind);
  const SeriesOptions opts = cfg.series_options();
  const SeriesReport report = kind == "polarized" ? spin_polarized_series(cfg.system, opts)
                                                  : spin_compensated_series(cfg.system, opts);
  for (const auto& r : report.rows)
    std::cout << (kind == "polarized" ? "N=" : "shells=") << r.size << "  E=" << csv_number(r.e_tdqmc) << " +- "
              << csv_number(r.se_tdqmc) << "  E_HF=" << csv_number(r.e_hf) << "  E_exact=" << csv_number(r.e_oracle)
              << "  S=" << csv_number(r.entropy_identical) << "  S_exact=" << csv_number(r.entropy_oracle) << '\n';
  auto outputs = write_series_outputs(g.out_dir, report, m);
  outputs.push_back(write_series_summary(out_path(g, "summary_" + kind + ".json"), report, m));
  finish(m, g, outputs);
  return kOk;
}

int cmd_oracle(const Common& c, const Globals& g) {
  RunConfig cfg = build_config(c, g);
  RunManifest m = begin_manifest(cfg, "oracle");
  const OracleOptions o = cfg.oracle_options();
  check_capacity(cfg.system.n_electrons, o.grid.size(), o.capacity);
  const Symmetry sym = cfg.resolved_symmetry();
  const OracleResult r = exact_ground_state(cfg.system, sym, o);
  const OracleReference ref = make_reference(cfg.system, o, sym, r);
  const std::string path = out_path(g, cfg.reference_file);
  append_reference(path, ref);
  std::cout << "exact energy " << csv_number(ref.energy) << " after " << r.steps << " steps\n"
            << "entropy (distinguishable) " << csv_number(ref.entropy_distinguishable)
            << "  entropy (identical) " << csv_number(ref.entropy_identical) << '\n'
            << "reference " << ref.fingerprint << " appended to " << path << '\n';
  finish(m, g, {path});
  return kOk;
}

std::string write_trace(const Globals& g, const RunManifest& m, const TDQMCState& s, const EnergyEstimate& e) {
  const std::string path = out_path(g, "relax_trace.csv");
  CsvFile f(path, m, {"step", "energy", "std_error"});
  for (const auto& t : s.energy_trace) f.row({std::to_string(t.step), csv_number(t.energy), csv_number(t.std_error)});
  f.row({"final", csv_number(e.mean), csv_number(e.std_error)});
  return path;
}

int continue_run(Checkpoint cp, const Globals& g, RunManifest m, long stop_after, const std::string& ck_path) {
  const Engine engine(cp.config, cp.options);
  TDQMCState& s = cp.state;
  long remaining = cp.target_steps - s.ensemble.step_index;
  if (stop_after >= 0 && stop_after < remaining) remaining = stop_after;
  engine.run(s, static_cast<int>(remaining));
  std::vector<std::string> outputs;
  if (s.ensemble.step_index < cp.target_steps) {
    // the closing point of an interrupted run is not part of the regular trace
    const int every = cp.options.trace_every;
    if (!s.energy_trace.empty() && every > 0 && s.energy_trace.back().step % every != 0) s.energy_trace.pop_back();
    if (ck_path.empty()) throw ConfigError("--checkpoint", "needed when stopping early");
    save_checkpoint(ck_path, cp);
    std::cout << "stopped at step " << s.ensemble.step_index << " of " << cp.target_steps << "; checkpoint "
              << ck_path << '\n';
    outputs.push_back(ck_path);
  } else {
    const EnergyEstimate e = engine.energy(s);
    std::cout << "E = " << csv_number(e.mean) << " +- " << csv_number(e.std_error) << " after "
              << s.ensemble.step_index << " steps\n";
    outputs.push_back(write_trace(g, m, s, e));
    if (!ck_path.empty()) {
      save_checkpoint(ck_path, cp);
      outputs.push_back(ck_path);
    }
  }
  finish(m, g, outputs);
  return kOk;
}

int cmd_relax(const Common& c, const Globals& g, const ScanFlags& f, long stop_after, const std::string& ck) {
  std::vector<std::string> extra;
  if (!f.pairs.empty()) extra.push_back("scan.pairs = " + f.pairs);
  RunConfig cfg = build_config(c, g, extra);
  if (!f.alpha.empty() && !f.sigma.empty()) throw ConfigError("--alpha", "give either --alpha or --sigma");
  if ((f.alpha_given && f.alpha.empty()) || (f.sigma_given && f.sigma.empty()))
    throw ConfigError(f.alpha_given ? "--alpha" : "--sigma", "needs a value");
  ScanSpec spec = cfg.scan;
  double value = kInfinity;
  if (!f.alpha.empty()) spec.variable = ScanVariable::alpha, value = parse_values(f.alpha, "--alpha").at(0);
  if (!f.sigma.empty()) spec.variable = ScanVariable::sigma, value = parse_values(f.sigma, "--sigma").at(0);
  RunManifest m = begin_manifest(cfg, "relax");
  const HFState hf = hf_solve(cfg.system, cfg.hf);
  Checkpoint cp;
  cp.config = cfg.system;
  cp.options = cfg.engine;
  const NonlocalityParams params = std::isinf(value) ? NonlocalityParams::mean_field(cfg.system.n_electrons)
                                                     : scan_params(cfg.system.n_electrons, spec, value);
  cp.state = Engine(cp.config, cp.options).initialize(hf, params);
  cp.target_steps = cfg.system.n_steps;
  cp.label = m.hash;
  return continue_run(std::move(cp), g, m, stop_after, ck);
}

int cmd_resume(const std::string& path, const Globals& g, long stop_after, const std::string& ck) {
  Checkpoint cp = load_checkpoint(path);
  cp.options.threads = g.threads;
  RunManifest m;
  m.command = "relax";
  m.seed = cp.options.seed;
  m.hash = cp.label;
  m.config_fingerprint = "checkpoint";
  m.started = utc_timestamp();
  return continue_run(std::move(cp), g, m, stop_after, ck.empty() ? path : ck);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-dependent quantum Monte Carlo for 1D quantum dots"};
  app.require_subcommand(1);
  Globals g;
  const char* env_out = std::getenv("TDQMC_OUT");
  g.out_dir = env_out && *env_out ? env_out : ".";
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "Master seed (overrides tdqmc.seed)");
  app.add_option("--out-dir", g.out_dir, "Output directory (default: $TDQMC_OUT or .)");
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);

  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", common.config_path, "Config file (key = value lines)");
    sub->add_option("--set", common.overrides, "Override a config key, key=value");
  };

  auto* hf = app.add_subcommand("hf", "Hartree-Fock ground state");
  add_common(hf);

  ScanFlags flags;
  auto* scan = app.add_subcommand("scan", "Energy scan over the nonlocality parameter");
  add_common(scan);
  scan->add_option("--pairs", flags.pairs, "ground | outer")->check(CLI::IsMember({"ground", "outer"}));
  auto* a = scan->add_option("--alpha", flags.alpha, "alpha values, start:stop:count or a,b,c");
  auto* s = scan->add_option("--sigma", flags.sigma, "sigma values, start:stop:count or a,b,c");
  a->excludes(s);
  scan->add_option("--fit-degree", flags.fit_degree, "Polynomial degree of the fit");

  std::string kind;
  int max = 0;
  auto* series = app.add_subcommand("series", "Spin-polarized or spin-compensated series");
  add_common(series);
  series->add_option("--kind", kind, "polarized | compensated")->required();
  series->add_option("--max", max, "Largest electron count (polarized) or shell count (compensated)");

  auto* oracle = app.add_subcommand("oracle", "Exact tensor-grid ground state");
  add_common(oracle);

  long stop_after = -1;
  std::string ck;
  auto* relax = app.add_subcommand("relax", "Single TDQMC relaxation with optional checkpoint");
  add_common(relax);
  relax->add_option("--pairs", flags.pairs, "ground | outer")->check(CLI::IsMember({"ground", "outer"}));
  auto* ra = relax->add_option("--alpha", flags.alpha, "alpha for the selected pairs (default: mean field)");
  auto* rs = relax->add_option("--sigma", flags.sigma, "sigma for the selected pairs");
  ra->excludes(rs);
  relax->add_option("--stop-after", stop_after, "Stop after this many steps and write the checkpoint");
  relax->add_option("--checkpoint", ck, "Checkpoint path");

  std::string resume_path;
  auto* resume = app.add_subcommand("resume", "Continue a relaxation from a checkpoint");
  resume->add_option("checkpoint", resume_path, "Checkpoint file")->required();
  resume->add_option("--stop-after", stop_after, "Stop after this many more steps");
  resume->add_option("--save", ck, "Where to write the next checkpoint (default: the input file)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  if (*seed_opt) g.seed = seed;
  flags.alpha_given = *a || *ra;
  flags.sigma_given = *s || *rs;

  try {
    fs::create_directories(g.out_dir);
    if (*hf) return cmd_hf(common, g);
    if (*scan) return cmd_scan(common, g, flags);
    if (*series) return cmd_series(common, g, kind, max);
    if (*oracle) return cmd_oracle(common, g);
    if (*relax) return cmd_relax(common, g, flags, stop_after, ck);
    if (*resume) return cmd_resume(resume_path, g, stop_after, ck);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << '\n';
    return kCapacity;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}
