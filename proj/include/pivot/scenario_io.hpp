#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pivot/sim.hpp"

namespace pivot {

/// Scenario with the documented defaults (the 0.6 x 0.4 x 0.2 m, 1.4 kg box).
Scenario make_default_scenario();

/// Parse a scenario file (JSON). Throws ParseError with position diagnostics
/// for malformed input or unknown keys, ValidationError listing every
/// violated invariant.
Scenario parse_scenario(const std::string& path);

/// Same, from an in-memory document.
Scenario parse_scenario_text(const std::string& text,
                             const std::string& origin = "<memory>");

/// Canonical JSON echo of the effective configuration; parsing it again
/// reproduces the scenario exactly.
std::string serialize_scenario(const Scenario& sc);

/// Throws ValidationError with the full list of violated invariants.
void validate_scenario(const Scenario& sc);

/// One CLI run request.
struct RunManifest {
  std::string scenario_path;
  std::string out_dir = "out";
  std::vector<std::string> overrides;  // dotted.key=value, value a JSON literal
  std::optional<std::uint64_t> seed;
  int verbosity = 0;
};

/// Parse + apply overrides (keys must already exist) + optional seed
/// replacement + validation.
Scenario load_scenario(const RunManifest& manifest);

/// Per-control-step table; column order is frozen (see docs/log_formats.md).
std::string log_csv(const SimLog& log);

/// Touchdown footprints: step index, vertex label, x, y.
std::string footprints_csv(const SimLog& log);

/// Structured run summary (no wall-clock fields; byte-reproducible).
std::string summary_json(const SimLog& log);

/// Writes log.csv, footprints.csv, summary.json and effective_config.json.
void write_run_artifacts(const SimLog& log, const Scenario& sc,
                         const std::string& out_dir);

}  // namespace pivot
