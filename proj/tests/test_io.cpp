#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "tdqmc/checkpoint.hpp"
#include "tdqmc/config.hpp"
#include "tdqmc/error.hpp"
#include "tdqmc/manifest.hpp"
#include "tdqmc/report.hpp"

using namespace tdqmc;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("tdqmc_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::string field_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<no error>";
}

}  // namespace

TEST(Config, DefaultsRoundTrip) {
  RunConfig c;
  c.finalize();
  const std::string text = to_text(c);
  RunConfig back = parse_config(text);
  back.finalize();
  EXPECT_EQ(to_text(back), text);
}

TEST(Config, CustomValuesRoundTrip) {
  const RunConfig c = parse_config(
      "# comment\n"
      "system.n_electrons = 4\n"
      "system.spins = compensated\n"
      "system.coupling = 0.5\n"
      "grid.points = 128\n"
      "tdqmc.walkers = 700\n"
      "tdqmc.seed = 9\n"
      "tdqmc.sigma_update = frozen\n"
      "scan.values = 0.1,0.2,0.5,0.9,1.4\n"
      "scan.pairs = ground\n"
      "scan.variable = alpha\n"
      "oracle.n3.points = 90\n");
  RunConfig f = c;
  f.finalize();
  EXPECT_EQ(f.system.spins, (std::vector<Spin>{Spin::up, Spin::down, Spin::up, Spin::down}));
  EXPECT_EQ(f.system.grid.size(), 128u);
  EXPECT_EQ(f.engine.seed, 9u);
  EXPECT_EQ(f.engine.sigma_update, SigmaUpdate::frozen);
  EXPECT_EQ(f.scan.values.size(), 5u);
  EXPECT_EQ(f.oracle_grids.at(3).size(), 90u);
  RunConfig back = parse_config(to_text(f));
  back.finalize();
  EXPECT_EQ(to_text(back), to_text(f));
  EXPECT_EQ(config_fingerprint(back), config_fingerprint(f));
}

TEST(Config, ErrorsNameTheField) {
  EXPECT_EQ(field_of([] { parse_config("bogus.key = 1\n"); }), "bogus.key");
  EXPECT_EQ(field_of([] { parse_config("system.omega = fast\n"); }), "system.omega");
  EXPECT_EQ(field_of([] { parse_config("system.omega = 1\nsystem.omega = 2\n"); }), "system.omega");
  EXPECT_EQ(field_of([] {
              RunConfig c = parse_config("system.n_electrons = 3\nsystem.spins = ud\n");
              c.finalize();
            }),
            "system.spins");
  EXPECT_EQ(field_of([] {
              RunConfig c = parse_config("scan.values = 0.1,0.2\n");
              c.finalize();
              c.scan.validate();
            }),
            "scan.values");
  EXPECT_THROW(parse_config("no equals sign\n"), ConfigError);
}

TEST(Config, ParseValues) {
  const auto range = parse_values("0.2:2.0:10", "scan.values");
  ASSERT_EQ(range.size(), 10u);
  EXPECT_DOUBLE_EQ(range.front(), 0.2);
  EXPECT_DOUBLE_EQ(range.back(), 2.0);
  EXPECT_NEAR(range[1] - range[0], 0.2, 1e-15);
  EXPECT_EQ(parse_values("1,2.5,4", "x"), (std::vector<double>{1.0, 2.5, 4.0}));
  EXPECT_THROW(parse_values("0.2:2.0:0", "scan.values"), ConfigError);
  EXPECT_THROW(parse_values("0.2:x:4", "scan.values"), ConfigError);
  EXPECT_TRUE(parse_values("", "scan.values").empty());
}

TEST(Manifest, HashDependsOnCommandAndSeed) {
  RunConfig c;
  c.finalize();
  const RunManifest a = begin_manifest(c, "hf");
  const RunManifest b = begin_manifest(c, "scan");
  EXPECT_NE(a.hash, b.hash);
  EXPECT_EQ(a.config_fingerprint, b.config_fingerprint);
  c.engine.seed = 43;
  EXPECT_NE(begin_manifest(c, "hf").hash, a.hash);
  EXPECT_EQ(begin_manifest(c, "hf").hash, begin_manifest(c, "hf").hash);
}

TEST(Manifest, JsonFields) {
  RunConfig c;
  c.finalize();
  RunManifest m = begin_manifest(c, "hf");
  m.outputs = {"a.csv", "b.csv"};
  m.finished = utc_timestamp();
  const fs::path dir = scratch_dir("manifest");
  write_manifest((dir / "m.json").string(), m);
  const auto j = nlohmann::json::parse(slurp(dir / "m.json"));
  EXPECT_EQ(j.at("hash"), m.hash);
  EXPECT_EQ(j.at("seed"), m.seed);
  EXPECT_EQ(j.at("command"), "hf");
  EXPECT_EQ(j.at("outputs").size(), 2u);
  EXPECT_EQ(j.at("version"), kCodeVersion);
  EXPECT_TRUE(j.contains("started"));
  EXPECT_TRUE(j.contains("finished"));
}

TEST(Csv, NumbersAndMetadata) {
  EXPECT_EQ(csv_number(0.5), "0.5");
  EXPECT_EQ(csv_number(std::nan("")), "nan");
  RunConfig c;
  c.finalize();
  const RunManifest m = begin_manifest(c, "hf");
  const fs::path dir = scratch_dir("csv");
  {
    CsvFile f((dir / "t.csv").string(), m, {"a", "b"});
    f.row({"1", "2"});
    EXPECT_THROW(f.row({"1"}), Error);
  }
  std::istringstream in(slurp(dir / "t.csv"));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "# manifest=" + m.hash);
  int meta = 1;
  while (std::getline(in, line) && line.rfind("#", 0) == 0) ++meta;
  EXPECT_EQ(meta, 4);
  EXPECT_EQ(line, "a,b");
  std::getline(in, line);
  EXPECT_EQ(line, "1,2");
}

class CheckpointTest : public ::testing::Test {
 protected:
  SystemConfig config = [] {
    SystemConfig c = SystemConfig::spin_polarized(2);
    c.n_walkers = 150;
    c.n_steps = 30;
    return c;
  }();
  EngineOptions options;
  HFState hf = hf_solve(config);
  NonlocalityParams params = NonlocalityParams::ground_level(2, 0.6);
};

TEST_F(CheckpointTest, BitExactRoundTrip) {
  const Engine engine(config, options);
  TDQMCState s = engine.initialize(hf, params);
  engine.run(s, 7);
  const fs::path dir = scratch_dir("ckpt");
  const Checkpoint out{config, options, s, 30, "unit"};
  save_checkpoint((dir / "a.ckp").string(), out);
  const Checkpoint in = load_checkpoint((dir / "a.ckp").string());
  EXPECT_EQ(in.state.ensemble.positions, s.ensemble.positions);
  EXPECT_EQ(in.state.ensemble.step_index, 7);
  for (int i = 0; i < 2; ++i) EXPECT_EQ(in.state.guides.waves[i], s.guides.waves[i]);
  for (std::size_t k = 0; k < s.ensemble.streams.size(); ++k) EXPECT_EQ(in.state.ensemble.streams[k], s.ensemble.streams[k]);
  EXPECT_EQ(in.state.params, params);
  EXPECT_EQ(in.state.reference_std, s.reference_std);
  EXPECT_EQ(in.state.energy_trace.size(), s.energy_trace.size());
  EXPECT_EQ(in.target_steps, 30);
  EXPECT_EQ(in.label, "unit");
  EXPECT_EQ(in.config.grid, config.grid);
  EXPECT_EQ(in.options.seed, options.seed);
  save_checkpoint((dir / "b.ckp").string(), in);
  EXPECT_EQ(slurp(dir / "a.ckp"), slurp(dir / "b.ckp"));
}

TEST_F(CheckpointTest, ResumeMatchesUninterruptedRun) {
  const Engine engine(config, options);
  TDQMCState full = engine.initialize(hf, params);
  engine.run(full, 30);

  TDQMCState part = engine.initialize(hf, params);
  engine.run(part, 12);
  const fs::path dir = scratch_dir("resume");
  save_checkpoint((dir / "p.ckp").string(), {config, options, part, 30, "resume"});
  Checkpoint loaded = load_checkpoint((dir / "p.ckp").string());
  const Engine resumed(loaded.config, loaded.options);
  resumed.run(loaded.state, 18);
  EXPECT_EQ(loaded.state.ensemble.positions, full.ensemble.positions);
  EXPECT_EQ(loaded.state.guides.waves[1], full.guides.waves[1]);
  EXPECT_EQ(engine.energy(loaded.state).mean, engine.energy(full).mean);
}

TEST(Checkpoint, RejectsGarbage) {
  const fs::path dir = scratch_dir("garbage");
  std::ofstream(dir / "x.ckp") << "definitely not a checkpoint";
  EXPECT_ANY_THROW(load_checkpoint((dir / "x.ckp").string()));
  EXPECT_ANY_THROW(load_checkpoint((dir / "missing.ckp").string()));
}
