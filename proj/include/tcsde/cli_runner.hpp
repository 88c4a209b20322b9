#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tcsde/config.hpp"

namespace tcsde {

struct CliOptions {
  std::string command;                 // sample | validate | converge | audit
  std::string config_path;             // optional config file
  std::vector<std::string> overrides;  // --set key=value, applied in order
  bool seed_set = false;
  std::uint64_t seed = 0;
  bool out_set = false;
  std::string out_dir;
  bool workers_set = false;
  long workers = 0;
};

// Layers the effective configuration: built-in defaults, then the
// TCSDE_OUT_DIR environment variable, then the config file, then --set
// overrides, then explicit flags.  Rejects unknown keys for the command.
Config effective_config(const CliOptions& opts);

// Runs the command and writes its report files under out_dir.  Returns 0
// on pass and 1 on a statistical failure; anything malformed or outside a
// domain throws, and the entry point maps that to exit code 2.
int run_command(const CliOptions& opts);

}  // namespace tcsde
