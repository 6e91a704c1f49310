#include "tdqmc/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "tdqmc/error.hpp"

namespace tdqmc {

namespace {

constexpr char kMagic[8] = {'T', 'D', 'Q', 'M', 'C', 'C', 'K', 'P'};
constexpr std::uint32_t kVersion = 1;

class Writer {
 public:
  explicit Writer(std::ostream& os) : os_(os) {}
  template <class T>
  void pod(const T& v) {
    os_.write(reinterpret_cast<const char*>(&v), sizeof v);
  }
  void str(const std::string& s) {
    pod<std::uint64_t>(s.size());
    os_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }
  template <class Matrix>
  void matrix(const Matrix& m) {
    pod<std::int64_t>(m.rows());
    pod<std::int64_t>(m.cols());
    os_.write(reinterpret_cast<const char*>(m.data()),
              static_cast<std::streamsize>(sizeof(typename Matrix::Scalar) * m.size()));
  }

 private:
  std::ostream& os_;
};

class Reader {
 public:
  explicit Reader(std::istream& is) : is_(is) {}
  template <class T>
  T pod() {
    T v{};
    is_.read(reinterpret_cast<char*>(&v), sizeof v);
    check();
    return v;
  }
  std::string str() {
    const auto n = pod<std::uint64_t>();
    if (n > (1ull << 32)) throw Error("checkpoint string length is implausible");
    std::string s(n, '\0');
    is_.read(s.data(), static_cast<std::streamsize>(n));
    check();
    return s;
  }
  template <class Matrix>
  Matrix matrix() {
    const auto rows = pod<std::int64_t>();
    const auto cols = pod<std::int64_t>();
    if (rows < 0 || cols < 0 || rows * cols > (1ll << 34)) throw Error("checkpoint matrix shape is invalid");
    Matrix m(rows, cols);
    is_.read(reinterpret_cast<char*>(m.data()),
             static_cast<std::streamsize>(sizeof(typename Matrix::Scalar) * m.size()));
    check();
    return m;
  }

 private:
  void check() {
    if (!is_) throw Error("checkpoint is truncated");
  }
  std::istream& is_;
};

void write_params(Writer& w, const NonlocalityParams& p) {
  w.pod<std::int32_t>(p.size());
  for (int j = 0; j < p.size(); ++j)
    for (int i = 0; i < p.size(); ++i) {
      w.pod<std::uint8_t>(static_cast<std::uint8_t>(p(j, i).kind));
      w.pod<double>(p(j, i).value);
    }
}

NonlocalityParams read_params(Reader& r) {
  const int n = r.pod<std::int32_t>();
  if (n < 0 || n > 4096) throw Error("checkpoint parameter table is invalid");
  NonlocalityParams p(n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      p(j, i).kind = static_cast<PairWidth::Kind>(r.pod<std::uint8_t>());
      p(j, i).value = r.pod<double>();
    }
  return p;
}

void write_spins(Writer& w, const std::vector<Spin>& spins) {
  std::string s;
  for (Spin x : spins) s += spin_char(x);
  w.str(s);
}

std::vector<Spin> read_spins(Reader& r) {
  std::vector<Spin> out;
  for (char c : r.str()) out.push_back(c == 'u' ? Spin::up : Spin::down);
  return out;
}

}  // namespace

void save_checkpoint(const std::string& path, const Checkpoint& cp) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("cannot write checkpoint " + path);
  os.write(kMagic, sizeof kMagic);
  Writer w(os);
  w.pod(kVersion);
  w.str(cp.label);
  w.pod<std::int64_t>(cp.target_steps);

  const SystemConfig& c = cp.config;
  w.pod<std::int32_t>(c.n_electrons);
  write_spins(w, c.spins);
  w.pod(c.omega);
  w.pod(c.softening);
  w.pod(c.coupling);
  w.pod<std::uint64_t>(c.n_walkers);
  w.pod(c.grid.half_width());
  w.pod<std::uint64_t>(c.grid.size());
  w.pod(c.dtau);
  w.pod<std::int32_t>(c.n_steps);

  const EngineOptions& o = cp.options;
  w.pod(o.seed);
  w.pod<std::uint8_t>(static_cast<std::uint8_t>(o.sigma_update));
  std::string frozen;
  for (bool f : o.frozen) frozen += f ? '1' : '0';
  w.str(frozen);
  w.pod<std::int32_t>(o.trace_every);
  w.pod<std::int32_t>(o.threads);
  w.pod(o.noise_scale);
  w.pod(o.drift_cap);
  w.pod(o.nodal_floor);
  w.pod<std::int32_t>(o.energy_blocks);

  const TDQMCState& s = cp.state;
  write_params(w, s.params);
  w.pod<std::uint64_t>(s.reference_std.size());
  for (double v : s.reference_std) w.pod(v);
  w.pod<std::int64_t>(s.ensemble.step_index);
  write_spins(w, s.ensemble.spins);
  w.matrix(s.ensemble.positions);
  w.pod<std::uint64_t>(s.ensemble.streams.size());
  for (const auto& rng : s.ensemble.streams) w.str(rng.serialize());
  w.pod(s.guides.grid.half_width());
  w.pod<std::uint64_t>(s.guides.grid.size());
  w.pod<std::uint64_t>(s.guides.waves.size());
  for (const auto& wave : s.guides.waves) w.matrix(wave);
  w.pod<std::uint64_t>(s.energy_trace.size());
  for (const auto& t : s.energy_trace) {
    w.pod<std::int64_t>(t.step);
    w.pod(t.energy);
    w.pod(t.std_error);
  }
  if (!os) throw Error("failed writing checkpoint " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open checkpoint " + path);
  char magic[sizeof kMagic];
  is.read(magic, sizeof magic);
  if (!is || std::memcmp(magic, kMagic, sizeof kMagic) != 0) throw Error(path + " is not a checkpoint");
  Reader r(is);
  const auto version = r.pod<std::uint32_t>();
  if (version != kVersion) throw Error("unsupported checkpoint version " + std::to_string(version));

  Checkpoint cp;
  cp.label = r.str();
  cp.target_steps = r.pod<std::int64_t>();

  SystemConfig& c = cp.config;
  c.n_electrons = r.pod<std::int32_t>();
  c.spins = read_spins(r);
  c.omega = r.pod<double>();
  c.softening = r.pod<double>();
  c.coupling = r.pod<double>();
  c.n_walkers = r.pod<std::uint64_t>();
  {
    const double half = r.pod<double>();
    const auto n = r.pod<std::uint64_t>();
    c.grid = Grid1D(half, n);
  }
  c.dtau = r.pod<double>();
  c.n_steps = r.pod<std::int32_t>();

  EngineOptions& o = cp.options;
  o.seed = r.pod<std::uint64_t>();
  o.sigma_update = static_cast<SigmaUpdate>(r.pod<std::uint8_t>());
  o.frozen.clear();
  for (char f : r.str()) o.frozen.push_back(f == '1');
  o.trace_every = r.pod<std::int32_t>();
  o.threads = r.pod<std::int32_t>();
  o.noise_scale = r.pod<double>();
  o.drift_cap = r.pod<double>();
  o.nodal_floor = r.pod<double>();
  o.energy_blocks = r.pod<std::int32_t>();

  TDQMCState& s = cp.state;
  s.params = read_params(r);
  s.reference_std.resize(r.pod<std::uint64_t>());
  for (double& v : s.reference_std) v = r.pod<double>();
  s.ensemble.step_index = r.pod<std::int64_t>();
  s.ensemble.spins = read_spins(r);
  s.ensemble.positions = r.matrix<Eigen::MatrixXd>();
  const auto n_streams = r.pod<std::uint64_t>();
  s.ensemble.streams.reserve(n_streams);
  for (std::uint64_t k = 0; k < n_streams; ++k) s.ensemble.streams.push_back(RandomStream::deserialize(r.str()));
  {
    const double half = r.pod<double>();
    const auto n = r.pod<std::uint64_t>();
    s.guides.grid = Grid1D(half, n);
  }
  s.guides.waves.resize(r.pod<std::uint64_t>());
  for (auto& wave : s.guides.waves) wave = r.matrix<Eigen::MatrixXcd>();
  s.energy_trace.resize(r.pod<std::uint64_t>());
  for (auto& t : s.energy_trace) {
    t.step = r.pod<std::int64_t>();
    t.energy = r.pod<double>();
    t.std_error = r.pod<double>();
  }
  return cp;
}

}  // namespace tdqmc
