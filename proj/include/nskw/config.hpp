#pragma once

#include <cstdint>
#include <string>

#include "nskw/dynamics.hpp"

namespace nskw {

// Everything a run needs beyond the core solver parameters: initial data,
// seeding, output location, and the experiment knobs.
struct RunConfig {
  SimConfig sim;
  InitSpec init;
  std::uint64_t seed = 0;
  std::string outdir = "out";
  bool svg = false;
  int refine = 4;  // grid refinement factor for the fine reference run
  std::string version = "0.1.0";
};

// Line-oriented `key = value` UTF-8 files; `#` starts a comment anywhere on a
// line. Unknown and duplicate keys are rejected with the offending line
// number; all physical parameters are validated on the way out, so a parsed
// configuration is always runnable. parse_config reads a file, parse_config_text
// parses an in-memory string (`name` only labels error messages).
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& name = "<config>");

// Every key with its current value, full float64 precision, in a fixed order.
// Feeding the result back through parse_config_text reproduces the RunConfig
// exactly, which is what makes manifests replayable.
std::string manifest_text(const RunConfig& rc);

}  // namespace nskw
