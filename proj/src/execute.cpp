#include "replicax/execute.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "replicax/harness.hpp"

namespace replicax {

namespace {

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  out << body;
}

// Echo of the config plus the values resolved at execution time. Contains no
// timestamps, paths or host details so reruns are byte-identical.
std::string manifest_json(const ParsedConfig& config,
                          const ExecutionOptions& options) {
  nlohmann::json j;
  j["config"] = nlohmann::json::array();
  for (const auto& [section, key, value] : config.entries) {
    j["config"].push_back(
        {{"section", section}, {"key", key}, {"value", value}});
  }
  const RunConfig& run = config.spec.run;
  j["resolved"]["seed"] = config.spec.base_seed;
  j["resolved"]["stride"] = run.snapshot_stride > 0
                                ? run.snapshot_stride
                                : default_snapshot_stride(run.iterations);
  j["resolved"]["replications"] = config.spec.replications;
  j["resolved"]["mode"] = to_string(run.mode);
  j["resolved"]["objective"] = config.objective_kind;
  j["resolved"]["dim"] = config.objective_dim;
  if (options.preset_id) j["preset"] = *options.preset_id;
  return j.dump(2) + "\n";
}

void write_run_artifacts(const Summary& summary,
                         const std::filesystem::path& dir,
                         const OutputOptions& output) {
  if (output.csv) write_summary_csv(summary, dir.string());
  if (output.json) write_file(dir / "summary.json", summary_to_json(summary));
}

std::size_t hit_count(const Summary& summary) {
  return static_cast<std::size_t>(
      std::count_if(summary.replications.begin(), summary.replications.end(),
                    [](const ReplicationResult& r) {
                      return r.first_hit.has_value();
                    }));
}

std::string cells_csv(const SweepResult& result) {
  std::string text = "label";
  for (const std::string& name : result.axis_names) text += "," + name;
  text += ",hits,hit_rate,median_first_hit\n";
  for (const SweepCell& cell : result.cells) {
    text += cell.label;
    for (const double value : cell.values) text += "," + format_g17(value);
    const std::size_t hits = hit_count(cell.summary);
    const std::size_t reps = cell.summary.replications.size();
    text += "," + std::to_string(hits);
    text += "," + format_g17(reps == 0 ? 0.0
                                       : static_cast<double>(hits) /
                                             static_cast<double>(reps));
    const std::optional<double> median = median_first_hit(cell.summary);
    text += ",";
    if (median) text += format_g17(*median);
    text += "\n";
  }
  return text;
}

}  // namespace

void execute_config(const ParsedConfig& config,
                    const ExecutionOptions& options) {
  if (options.out_dir.empty()) {
    throw std::invalid_argument("no output directory resolved");
  }
  if (options.jobs < 1) {
    throw std::invalid_argument("jobs must be >= 1");
  }

  ParsedConfig cfg = config;
  if (options.seed_override) cfg.spec.base_seed = *options.seed_override;
  if (options.stride_override) {
    if (*options.stride_override < 0) {
      throw std::invalid_argument("stride must be >= 0");
    }
    cfg.output.stride = *options.stride_override;
    cfg.spec.run.snapshot_stride = *options.stride_override;
  }

  const std::filesystem::path root(options.out_dir);
  std::filesystem::create_directories(root);
  write_file(root / "manifest.json", manifest_json(cfg, options));
  if (options.config_text) write_file(root / "config.txt", *options.config_text);

  if (cfg.spec.axes.empty()) {
    const Summary summary = run_replications(cfg.spec, options.jobs);
    write_run_artifacts(summary, root, cfg.output);
    // Single-trajectory runs also get the full trace. Divergence is fatal
    // here (there is no trajectory to write), reported with its iteration.
    if (cfg.spec.replications == 1) {
      const ReplicationResult& only = summary.replications.front();
      if (only.diverged) {
        throw DivergenceError(only.diverged_at.value_or(0),
                              "run diverged; no trajectory written");
      }
      if (cfg.output.csv) {
        const Trace trace = rerun_replication(cfg.spec, 0);
        std::ostringstream out;
        trace.write_csv(out);
        write_file(root / "trace.csv", out.str());
      }
    }
  } else {
    const SweepResult result = sweep(cfg.spec, options.jobs);
    for (const SweepCell& cell : result.cells) {
      const std::filesystem::path dir = root / cell.label;
      std::filesystem::create_directories(dir);
      write_run_artifacts(cell.summary, dir, cfg.output);
    }
    if (cfg.output.csv) write_file(root / "cells.csv", cells_csv(result));
  }
}

}  // namespace replicax
