#include "tdqmc/manifest.hpp"

#include <chrono>
#include <ctime>
#include <fstream>

#include <json.hpp>

#include "tdqmc/error.hpp"
#include "tdqmc/hash.hpp"

namespace tdqmc {

std::string config_fingerprint(const RunConfig& config) { return hex64(fnv1a64(to_text(config))); }

RunManifest begin_manifest(const RunConfig& config, const std::string& command) {
  RunManifest m;
  m.config_fingerprint = config_fingerprint(config);
  m.seed = config.engine.seed;
  m.command = command;
  m.hash = hex64(fnv1a64(to_text(config) + "command=" + command + "\nseed=" + std::to_string(m.seed) + "\n"));
  m.started = utc_timestamp();
  return m;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_manifest(const std::string& path, const RunManifest& m) {
  nlohmann::ordered_json j;
  j["hash"] = m.hash;
  j["config_fingerprint"] = m.config_fingerprint;
  j["seed"] = m.seed;
  j["command"] = m.command;
  j["started"] = m.started;
  j["finished"] = m.finished;
  j["outputs"] = m.outputs;
  j["version"] = m.version;
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace tdqmc
