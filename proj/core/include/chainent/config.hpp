#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chainent/bose_hubbard.hpp"
#include "chainent/chain_model.hpp"
#include "chainent/entanglement.hpp"
#include "chainent/time_grid.hpp"

namespace chainent {

enum class ModelMode { oscillator, bose_hubbard };

/// A validated run description; the document format is described in README.md.
struct RunConfig {
  ModelMode mode = ModelMode::oscillator;
  ChainSpec chain;                // always populated (mapped in Bose-Hubbard mode)
  BoseHubbardSpec bose_hubbard;   // meaningful in Bose-Hubbard mode only
  ChainQuench quench;
  bool second_half = true;
  std::vector<int> traced;        // zero-based
  double t_max = 100.0;
  double dt = 0.01;
  std::vector<int> alphas{1};
  std::string output_path;        // empty: standard output
  int precision = 12;             // significant digits in CSV output

  Partition partition() const;
  TimeGrid grid() const { return TimeGrid::span(t_max, dt); }
};

/// Parses and validates a JSON document. Throws ConfigError naming the
/// offending field for unknown keys, missing keys, type mismatches and
/// invariant violations.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Compact JSON with sorted keys and every default made explicit, plus the
/// library version. Parsing the echo reproduces the run (the output path is
/// deliberately omitted so that the echo depends only on the physics).
std::string canonical_json(const RunConfig& config);

/// Returns `text` with the dotted `key` (e.g. "model.post.omega") set to the
/// JSON value `value`; intermediate objects are created as needed.
std::string with_override(std::string_view text, const std::string& key,
                          const std::string& value);

const char* library_version();

}  // namespace chainent
