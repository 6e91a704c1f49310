#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tdqmc/config.hpp"

namespace tdqmc {

inline constexpr const char* kCodeVersion = "1.0.0";

struct RunManifest {
  std::string hash;                // identifies config + command + seed
  std::string config_fingerprint;  // config text alone
  std::uint64_t seed = 0;
  std::string command;
  std::string started;   // UTC, ISO 8601
  std::string finished;
  std::vector<std::string> outputs;
  std::string version = kCodeVersion;
};

std::string config_fingerprint(const RunConfig& config);
/// Fills hash, fingerprint, seed, command and the start time.
RunManifest begin_manifest(const RunConfig& config, const std::string& command);
std::string utc_timestamp();
/// JSON with every manifest field.
void write_manifest(const std::string& path, const RunManifest& manifest);

}  // namespace tdqmc
