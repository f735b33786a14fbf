#pragma once

// Runs a parsed experiment config end to end and writes its artifacts to an
// output directory. This layer is shared by the `run`, `sweep` and
// `reproduce` commands so a figure preset and a hand-written config take the
// same path.
//
// Output layout (documented interface):
//   manifest.json           config echo + resolved seed/stride (+ preset id)
//   config.txt              the exact config text, when the caller has it
//   success_prob.csv        per-snapshot fraction of replications at success
//   mean_f.csv              per-snapshot mean objective over live replications
//   replications.csv        per-replication first hit / swaps / final value
//   summary.json            the same summary as one JSON document
//   trace.csv               full trajectory (single-replication runs only)
// Sweeps write the per-run files into one subdirectory per cell, named by
// the cell label (e.g. "temperature=0.5"), plus a top-level cells.csv
// ranking the cells. CSV and JSON files are suppressed when the config's
// [output] formats excludes them. All artifacts are deterministic functions
// of the config and seed: no timestamps, hostnames or absolute paths.

#include <cstdint>
#include <optional>
#include <string>

#include "replicax/config.hpp"

namespace replicax {

struct ExecutionOptions {
  std::string out_dir;
  int jobs = 1;
  std::optional<std::uint64_t> seed_override;    // replaces [experiment] seed
  std::optional<std::int64_t> stride_override;   // replaces [output] stride
  std::optional<std::string> config_text;        // echoed as config.txt
  std::optional<std::string> preset_id;          // recorded in manifest.json
};

// Executes the config and writes artifacts under options.out_dir (created if
// needed). Throws std::invalid_argument for validation failures and lets
// DivergenceError escape when a single-trajectory run diverges; multi-
// replication runs record divergent replications in the summary instead.
void execute_config(const ParsedConfig& config, const ExecutionOptions& options);

}  // namespace replicax
