#pragma once

// Preset experiment configurations for the benchmark study: single-trajectory
// portraits of the hybrid optimizers on the 25-mode mixture, baseline runs
// that show where plain descent or a lone Langevin chain struggles,
// temperature and step-size sweeps, the online kernel-density runs, and the
// Rastrigin/Griewank scaling studies. Each preset expands to one or more
// config files in the format understood by parse_config_text, so `reproduce`
// shares the whole execution path with user-written configs.

#include <string>
#include <utility>
#include <vector>

namespace replicax {

// A preset: one or more named experiment configs (single-config presets use
// the preset id as the name; comparison presets name their panels).
struct FigurePreset {
  std::string id;
  std::string summary;  // one line describing what the preset demonstrates
  std::vector<std::pair<std::string, std::string>> configs;  // (name, text)
};

// All preset ids, in presentation order.
std::vector<std::string> figure_ids();

// Throws std::invalid_argument for an unknown id.
const FigurePreset& figure_preset(const std::string& id);

}  // namespace replicax
