#pragma once

#include <string>

#include "tdqmc/engine.hpp"

namespace tdqmc {

/// Everything needed to continue a relaxation where it stopped.
struct Checkpoint {
  SystemConfig config;
  EngineOptions options;
  TDQMCState state;
  long target_steps = 0;  // step_index at which the run is complete
  std::string label;
};

/// Binary snapshot, little-endian host layout, magic "TDQMCCKP" + version.
/// Round-trips bit-exactly.
void save_checkpoint(const std::string& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace tdqmc
