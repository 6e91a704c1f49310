#include <cstdio>
#include <fstream>
#include <sstream>

#include "tdqmc/error.hpp"
#include "tdqmc/exact_oracle.hpp"
#include "tdqmc/hash.hpp"

namespace tdqmc {

namespace {

constexpr const char* kHeader = "# tdqmc-oracle-reference v1";

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* symmetry_name(Symmetry s) {
  switch (s) {
    case Symmetry::symmetric: return "symmetric";
    case Symmetry::antisymmetric: return "antisymmetric";
    default: return "none";
  }
}

std::string spin_string(const std::vector<Spin>& spins) {
  std::string s;
  for (Spin x : spins) s += spin_char(x);
  return s;
}

}  // namespace

std::string oracle_fingerprint(const SystemConfig& config, const OracleOptions& options,
                               Symmetry symmetry) {
  std::ostringstream os;
  os << "n=" << config.n_electrons << ";spins=" << spin_string(config.spins)
     << ";omega=" << fmt_double(config.omega) << ";a=" << fmt_double(config.softening)
     << ";e2=" << fmt_double(config.coupling) << ";L=" << fmt_double(options.grid.half_width())
     << ";G=" << options.grid.size() << ";dtau=" << fmt_double(options.dtau)
     << ";tol=" << fmt_double(options.tolerance) << ";sym=" << symmetry_name(symmetry);
  return hex64(fnv1a64(os.str()));
}

OracleReference make_reference(const SystemConfig& config, const OracleOptions& options,
                               Symmetry symmetry, const OracleResult& result) {
  OracleReference ref;
  ref.fingerprint = oracle_fingerprint(config, options, symmetry);
  ref.n_electrons = config.n_electrons;
  ref.spins = spin_string(config.spins);
  ref.label = "N" + std::to_string(config.n_electrons) + "_" + ref.spins;
  ref.energy = result.energy;
  ref.points = options.grid.size();
  const DensityMatrix rho = exact_one_body_rdm(result.psi, 0);
  ref.entropy_distinguishable = linear_entropy_distinguishable(rho);
  // electron 0 is spin up in every configuration the experiments build
  const int n_up = config.count(config.spins.empty() ? Spin::up : config.spins.front());
  ref.entropy_identical = linear_entropy_identical(rho, n_up).raw;
  return ref;
}

void append_reference(const std::string& path, const OracleReference& ref) {
  bool fresh = true;
  {
    std::ifstream probe(path);
    fresh = !probe.good() || probe.peek() == std::ifstream::traits_type::eof();
  }
  std::ofstream out(path, std::ios::app);
  if (!out) throw Error("cannot open oracle reference file " + path);
  if (fresh) out << kHeader << '\n';
  out << "fingerprint=" << ref.fingerprint << " label=" << ref.label << " n=" << ref.n_electrons
      << " spins=" << ref.spins << " points=" << ref.points << " energy=" << fmt_double(ref.energy)
      << " s_dist=" << fmt_double(ref.entropy_distinguishable)
      << " s_ident=" << fmt_double(ref.entropy_identical) << '\n';
}

std::vector<OracleReference> read_references(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open oracle reference file " + path);
  std::string line;
  if (!std::getline(in, line) || line != kHeader)
    throw Error("unsupported oracle reference file format in " + path);
  std::vector<OracleReference> out;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tok;
    OracleReference ref;
    while (ls >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) throw Error("malformed oracle reference entry: " + line);
      const std::string key = tok.substr(0, eq), value = tok.substr(eq + 1);
      if (key == "fingerprint") ref.fingerprint = value;
      else if (key == "label") ref.label = value;
      else if (key == "n") ref.n_electrons = std::stoi(value);
      else if (key == "spins") ref.spins = value;
      else if (key == "points") ref.points = std::stoul(value);
      else if (key == "energy") ref.energy = std::stod(value);
      else if (key == "s_dist") ref.entropy_distinguishable = std::stod(value);
      else if (key == "s_ident") ref.entropy_identical = std::stod(value);
    }
    out.push_back(std::move(ref));
  }
  return out;
}

}  // namespace tdqmc
