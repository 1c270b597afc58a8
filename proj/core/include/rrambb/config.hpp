#pragma once

// Run configuration in a small TOML subset: `[section]` headers,
// `key = value` lines, `#` comments. Values are strings in double quotes,
// booleans, integers, floats (inf and nan allowed) and single-line arrays
// of numbers. Unknown sections and keys are rejected.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rrambb/latency_theory.hpp"
#include "rrambb/pipeline.hpp"

namespace rrambb {

class ConfigParseError : public ConfigError {
 public:
  ConfigParseError(int line, const std::string& what)
      : ConfigError("", "line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

struct RunConfig {
  FrameConfig frame;
  std::string device_preset = "ta_taox_pt";

  std::vector<double> snr_values = {10, 15, 20, 25, 30};
  std::vector<double> antenna_values = {2, 4, 8, 16, 32};
  int trials = 20;
  int jobs = 1;

  std::vector<double> bound_sizes = {2, 4, 8, 16, 32};
  int bound_trials = 200;
  latency::McMode bound_mode = latency::McMode::analytic;

  std::string output_dir = ".";

  bool operator==(const RunConfig&) const = default;
};

/// Parses text; throws ConfigParseError for syntax and ConfigError (naming
/// the key) for invalid values.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

/// Emits every field; parse_config_text(emit_config(c)) == c.
std::string emit_config(const RunConfig& config);

}  // namespace rrambb
