#include "tdqmc/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "tdqmc/error.hpp"

namespace tdqmc {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& v, const std::string& field) {
  if (v == "inf" || v == "+inf") return kInfinity;
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    throw ConfigError(field, "expected a number, got '" + v + "'");
  return out;
}

long long to_int(const std::string& v, const std::string& field) {
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    throw ConfigError(field, "expected an integer, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& v, const std::string& field) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(field, "expected true or false, got '" + v + "'");
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + num(v[i]);
  return s;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"system.n_electrons", [](RunConfig& c, const std::string& v, const std::string& f) {
         c.system.n_electrons = static_cast<int>(to_int(v, f));
       }},
      {"system.spins", [](RunConfig& c, const std::string& v, const std::string&) { c.spins_text = v; }},
      {"system.omega", [](RunConfig& c, const std::string& v, const std::string& f) { c.system.omega = to_double(v, f); }},
      {"system.softening", [](RunConfig& c, const std::string& v, const std::string& f) {
         c.system.softening = to_double(v, f);
       }},
      {"system.coupling", [](RunConfig& c, const std::string& v, const std::string& f) {
         c.system.coupling = to_double(v, f);
       }},
      {"grid.half_width", [](RunConfig& c, const std::string& v, const std::string& f) {
         c.system.grid = Grid1D(to_double(v, f), c.system.grid.size());
       }},
      {"grid.points", [](RunConfig& c, const std::string& v, const std::string& f) {
         c.system.grid = Grid1D(c.system.grid.half_width(), static_cast<std::size_t>(to_int(v, f)));
       }},
      {"tdqmc.walkers", [](RunConfig& c, const std::string& v, const std::string& f) {
         const long long m = to_int(v, f);
         if (m < 0) throw ConfigError(f, "must be positive");
         c.system.n_walkers = static_cast<std::size_t>(m);
       }},
      {"tdqmc.dtau", [](RunConfig& c, const std::string& v, const std::string& f) { c.system.dtau = to_double(v, f); }},
      {"tdqmc.steps", [](RunConfig& c, const std::string& v, const std::string& f) {
         c.system.n_steps = static_cast<int>(to_int(v, f));
       }},
      {"tdqmc.seed", [](RunConfig& c, const std::string& v, const std::string& f) {
         c.engine.seed = static_cast<std::uint64_t>(to_int(v, f));
       }},
      {"tdqmc.sigma_update", [](RunConfig& c, const std::string& v, const std::string& f) {
         if (v == "per_step") c.engine.sigma_update = SigmaUpdate::per_step;
         else if (v == "frozen") c.engine.sigma_update = SigmaUpdate::frozen;
         else throw ConfigError(f, "expected per_step or frozen");
       }},
      {"tdqmc.trace_every", [](RunConfig& c, const std::string& v, const std::string& f) {
         c.engine.trace_every = static_cast<int>(to_int(v, f));
       }},
      {"tdqmc.drift_cap", [](RunConfig& c, const std::string& v, const std::string& f) {
         c.engine.drift_cap = to_double(v, f);
       }},
      {"tdqmc.nodal_floor", [](RunConfig& c, const std::string& v, const std::string& f) {
         c.engine.nodal_floor = to_double(v, f);
       }},
      {"tdqmc.energy_blocks", [](RunConfig& c, const std::string& v, const std::string& f) {
         c.engine.energy_blocks = static_cast<int>(to_int(v, f));
       }},
      {"hf.dtau", [](RunConfig& c, const std::string& v, const std::string& f) { c.hf.dtau = to_double(v, f); }},
      {"hf.max_steps", [](RunConfig& c, const std::string& v, const std::string& f) {
         c.hf.max_steps = static_cast<int>(to_int(v, f));
       }},
      {"hf.tolerance", [](RunConfig& c, const std::string& v, const std::string& f) { c.hf.tolerance = to_double(v, f); }},
      {"oracle.half_width", [](RunConfig& c, const std::string& v, const std::string& f) {
         c.oracle.grid = Grid1D(to_double(v, f), c.oracle_grid_set ? c.oracle.grid.size() : c.system.grid.size());
         c.oracle_grid_set = true;
       }},
      {"oracle.points", [](RunConfig& c, const std::string& v, const std::string& f) {
         const double half = c.oracle_grid_set ? c.oracle.grid.half_width() : c.system.grid.half_width();
         c.oracle.grid = Grid1D(half, static_cast<std::size_t>(to_int(v, f)));
         c.oracle_grid_set = true;
       }},
      {"oracle.dtau", [](RunConfig& c, const std::string& v, const std::string& f) { c.oracle.dtau = to_double(v, f); }},
      {"oracle.max_steps", [](RunConfig& c, const std::string& v, const std::string& f) {
         c.oracle.max_steps = static_cast<int>(to_int(v, f));
       }},
      {"oracle.tolerance", [](RunConfig& c, const std::string& v, const std::string& f) {
         c.oracle.tolerance = to_double(v, f);
       }},
      {"oracle.capacity", [](RunConfig& c, const std::string& v, const std::string& f) {
         c.oracle.capacity = static_cast<std::size_t>(to_int(v, f));
       }},
      {"oracle.symmetry", [](RunConfig& c, const std::string& v, const std::string& f) {
         if (v != "auto" && v != "symmetric" && v != "antisymmetric" && v != "none")
           throw ConfigError(f, "expected auto, symmetric, antisymmetric or none");
         c.oracle_symmetry = v;
       }},
      {"oracle.reference_file", [](RunConfig& c, const std::string& v, const std::string&) { c.reference_file = v; }},
      {"scan.pairs", [](RunConfig& c, const std::string& v, const std::string& f) {
         if (v == "ground") c.scan.pairs = ScanPairs::ground;
         else if (v == "outer") c.scan.pairs = ScanPairs::outer;
         else throw ConfigError(f, "expected ground or outer");
       }},
      {"scan.variable", [](RunConfig& c, const std::string& v, const std::string& f) {
         if (v == "alpha") c.scan.variable = ScanVariable::alpha;
         else if (v == "sigma") c.scan.variable = ScanVariable::sigma;
         else throw ConfigError(f, "expected alpha or sigma");
       }},
      {"scan.values", [](RunConfig& c, const std::string& v, const std::string& f) { c.scan.values = parse_values(v, f); }},
      {"scan.fit_degree", [](RunConfig& c, const std::string& v, const std::string& f) {
         c.scan.fit_degree = static_cast<int>(to_int(v, f));
       }},
      {"series.max", [](RunConfig& c, const std::string& v, const std::string& f) {
         c.series_max = static_cast<int>(to_int(v, f));
       }},
      {"series.oracle", [](RunConfig& c, const std::string& v, const std::string& f) { c.series_oracle = to_bool(v, f); }},
      {"series.oracle_max_electrons", [](RunConfig& c, const std::string& v, const std::string& f) {
         c.oracle_max_electrons = static_cast<int>(to_int(v, f));
       }},
      {"series.check_unfrozen", [](RunConfig& c, const std::string& v, const std::string& f) {
         c.check_unfrozen = to_bool(v, f);
       }},
  };
  return table;
}

// oracle.n<N>.points / oracle.n<N>.half_width
bool apply_oracle_override(RunConfig& c, const std::string& key, const std::string& value) {
  if (key.rfind("oracle.n", 0) != 0) return false;
  const auto dot = key.find('.', 8);
  if (dot == std::string::npos) return false;
  const std::string count = key.substr(8, dot - 8), leaf = key.substr(dot + 1);
  if (count.empty() || count.find_first_not_of("0123456789") != std::string::npos) return false;
  const int n = static_cast<int>(to_int(count, key));
  auto it = c.oracle_grids.find(n);
  Grid1D grid = it != c.oracle_grids.end() ? it->second : Grid1D(c.system.grid.half_width(), 64);
  if (leaf == "points") grid = Grid1D(grid.half_width(), static_cast<std::size_t>(to_int(value, key)));
  else if (leaf == "half_width") grid = Grid1D(to_double(value, key), grid.size());
  else return false;
  c.oracle_grids.insert_or_assign(n, grid);
  return true;
}

}  // namespace

RunConfig::RunConfig() {
  oracle.grid = system.grid;
  scan.values = parse_values("0.1:1.6:7", "scan.values");
}

std::vector<double> parse_values(const std::string& text, const std::string& field) {
  std::vector<double> out;
  const std::string t = trim(text);
  if (t.empty()) return out;
  if (t.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(t);
    std::string p;
    while (std::getline(ss, p, ':')) parts.push_back(trim(p));
    if (parts.size() != 3) throw ConfigError(field, "range must be start:stop:count");
    const double a = to_double(parts[0], field), b = to_double(parts[1], field);
    const long long n = to_int(parts[2], field);
    if (n < 1) throw ConfigError(field, "range needs at least one point");
    for (long long i = 0; i < n; ++i)
      out.push_back(n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    return out;
  }
  std::stringstream ss(t);
  std::string p;
  while (std::getline(ss, p, ',')) out.push_back(to_double(trim(p), field));
  return out;
}

void apply_setting(RunConfig& c, const std::string& key, const std::string& value) {
  const auto& table = setters();
  if (auto it = table.find(key); it != table.end()) {
    try {
      it->second(c, value, key);
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError(key, e.what());
    }
    return;
  }
  if (apply_oracle_override(c, key, value)) return;
  throw ConfigError(key, "unknown setting");
}

void RunConfig::finalize() {
  SystemConfig& s = system;
  if (s.n_electrons < 1) throw ConfigError("system.n_electrons", "must be at least 1");
  if (spins_text == "polarized") {
    s.spins.assign(static_cast<std::size_t>(s.n_electrons), Spin::up);
  } else if (spins_text == "compensated") {
    if (s.n_electrons % 2) throw ConfigError("system.spins", "compensated preset needs an even electron count");
    s.spins = SystemConfig::spin_compensated(s.n_electrons / 2).spins;
  } else {
    s.spins.clear();
    for (char ch : spins_text) {
      if (ch == ',' || ch == ' ') continue;
      if (ch == 'u' || ch == 'U') s.spins.push_back(Spin::up);
      else if (ch == 'd' || ch == 'D') s.spins.push_back(Spin::down);
      else throw ConfigError("system.spins", std::string("unknown spin label '") + ch + "'");
    }
  }
  s.validate();
  if (!oracle_grid_set) oracle.grid = s.grid;
  if (engine.trace_every < 1) throw ConfigError("tdqmc.trace_every", "must be at least 1");
  if (engine.energy_blocks < 2) throw ConfigError("tdqmc.energy_blocks", "must be at least 2");
  if (!(engine.drift_cap > 0.0)) throw ConfigError("tdqmc.drift_cap", "must be positive");
  if (!(hf.dtau > 0.0)) throw ConfigError("hf.dtau", "must be positive");
  if (!(oracle.dtau > 0.0)) throw ConfigError("oracle.dtau", "must be positive");
  if (series_max < 1) throw ConfigError("series.max", "must be at least 1");
}

SeriesOptions RunConfig::series_options() const {
  SeriesOptions o;
  o.max_size = series_max;
  o.scan = scan;
  o.engine = engine;
  o.hf = hf;
  o.run_oracle = series_oracle;
  o.oracle_max_electrons = oracle_max_electrons;
  o.oracle = oracle;
  o.oracle_grids = oracle_grids;
  o.check_unfrozen = check_unfrozen;
  return o;
}

OracleOptions RunConfig::oracle_options() const {
  OracleOptions o = oracle;
  if (!oracle_grid_set) o.grid = system.grid;
  return o;
}

Symmetry RunConfig::resolved_symmetry() const {
  if (oracle_symmetry == "symmetric") return Symmetry::symmetric;
  if (oracle_symmetry == "antisymmetric") return Symmetry::antisymmetric;
  if (oracle_symmetry == "none") return Symmetry::none;
  return natural_symmetry(system.spins);
}

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(number), "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (!seen.insert(key).second) throw ConfigError(key, "set more than once");
    apply_setting(c, key, trim(line.substr(eq + 1)));
  }
  c.finalize();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_text(const RunConfig& c) {
  std::ostringstream os;
  std::string spins;
  for (Spin s : c.system.spins) spins += spin_char(s);
  os << "system.n_electrons = " << c.system.n_electrons << '\n'
     << "system.spins = " << spins << '\n'
     << "system.omega = " << num(c.system.omega) << '\n'
     << "system.softening = " << num(c.system.softening) << '\n'
     << "system.coupling = " << num(c.system.coupling) << '\n'
     << "grid.half_width = " << num(c.system.grid.half_width()) << '\n'
     << "grid.points = " << c.system.grid.size() << '\n'
     << "tdqmc.walkers = " << c.system.n_walkers << '\n'
     << "tdqmc.dtau = " << num(c.system.dtau) << '\n'
     << "tdqmc.steps = " << c.system.n_steps << '\n'
     << "tdqmc.seed = " << c.engine.seed << '\n'
     << "tdqmc.sigma_update = " << (c.engine.sigma_update == SigmaUpdate::per_step ? "per_step" : "frozen") << '\n'
     << "tdqmc.trace_every = " << c.engine.trace_every << '\n'
     << "tdqmc.drift_cap = " << num(c.engine.drift_cap) << '\n'
     << "tdqmc.nodal_floor = " << num(c.engine.nodal_floor) << '\n'
     << "tdqmc.energy_blocks = " << c.engine.energy_blocks << '\n'
     << "hf.dtau = " << num(c.hf.dtau) << '\n'
     << "hf.max_steps = " << c.hf.max_steps << '\n'
     << "hf.tolerance = " << num(c.hf.tolerance) << '\n';
  const OracleOptions o = c.oracle_options();
  os << "oracle.half_width = " << num(o.grid.half_width()) << '\n'
     << "oracle.points = " << o.grid.size() << '\n'
     << "oracle.dtau = " << num(o.dtau) << '\n'
     << "oracle.max_steps = " << o.max_steps << '\n'
     << "oracle.tolerance = " << num(o.tolerance) << '\n'
     << "oracle.capacity = " << o.capacity << '\n'
     << "oracle.symmetry = " << c.oracle_symmetry << '\n'
     << "oracle.reference_file = " << c.reference_file << '\n';
  for (const auto& [n, g] : c.oracle_grids)
    os << "oracle.n" << n << ".half_width = " << num(g.half_width()) << '\n'
       << "oracle.n" << n << ".points = " << g.size() << '\n';
  os << "scan.pairs = " << (c.scan.pairs == ScanPairs::ground ? "ground" : "outer") << '\n'
     << "scan.variable = " << (c.scan.variable == ScanVariable::alpha ? "alpha" : "sigma") << '\n'
     << "scan.values = " << join(c.scan.values) << '\n'
     << "scan.fit_degree = " << c.scan.fit_degree << '\n'
     << "series.max = " << c.series_max << '\n'
     << "series.oracle = " << (c.series_oracle ? "true" : "false") << '\n'
     << "series.oracle_max_electrons = " << c.oracle_max_electrons << '\n'
     << "series.check_unfrozen = " << (c.check_unfrozen ? "true" : "false") << '\n';
  return os.str();
}

}  // namespace tdqmc
