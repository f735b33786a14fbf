#include "replicax/figures.hpp"

#include <stdexcept>

#include "replicax/core.hpp"

namespace replicax {

namespace {

// The offline presets share one mixture landscape (weight seed 50656) so
// trajectories are comparable across presets; the draw has a clearly
// dominant global mode, which keeps the success test unambiguous. The
// online presets use weight seed 35811, whose global mode lies well inside
// the exchange bound ball (norm 3.6 < 5) so the gate does not suppress
// exchanges near the optimum.

constexpr const char* kHybridOfflineTrajectory = R"([objective]
kind = mixture25
weight_seed = 50656

[run]
mode = gdxld
step_size = 0.1
temperature = 1
iterations = 1000
x0 = 0, 0
y0 = 1, 1

[experiment]
replications = 1
seed = 4

[output]
stride = 1
)";

constexpr const char* kIndependentHybridTrajectory = R"([objective]
kind = mixture25
weight_seed = 50656

[run]
mode = ngdxld
step_size = 0.1
temperature = 1
iterations = 1000
x0 = 0, 0
y0 = 1, 1

[experiment]
replications = 1
seed = 5

[output]
stride = 1
)";

constexpr const char* kPlainDescentTrajectory = R"([objective]
kind = mixture25
weight_seed = 50656

[run]
mode = gd
step_size = 0.1
iterations = 1000
x0 = 0, 0

[experiment]
replications = 1
seed = 4

[output]
stride = 1
)";

constexpr const char* kLoneLangevinTemperatures = R"([objective]
kind = mixture25
weight_seed = 50656

[run]
mode = ld
step_size = 0.1
temperature = 1
iterations = 200000
x0 = 0, 0

[experiment]
replications = 1
seed = 5
success_tol = 0.1
sweep.temperature = 1, 0.01

[output]
stride = 200
)";

constexpr const char* kTemperatureSweep = R"([objective]
kind = mixture25
weight_seed = 50656

[run]
mode = gdxld
step_size = 0.1
temperature = 1
iterations = 2000
x0 = 0, 0
y0 = 1, 1

[experiment]
replications = 100
seed = 7
sweep.temperature = 0.1, 0.5, 1, 2.5, 5, 10, 100

[output]
stride = 10
)";

constexpr const char* kStepSizeSweep = R"([objective]
kind = mixture25
weight_seed = 50656

[run]
mode = gdxld
step_size = 0.1
temperature = 1
iterations = 2000
x0 = 0, 0
y0 = 1, 1

[experiment]
replications = 100
seed = 8
sweep.step_size = 0.05, 0.1, 0.5, 1, 1.5

[output]
stride = 10
)";

constexpr const char* kHybridOnlineTrajectory = R"([objective]
kind = kde25
weight_seed = 35811
bandwidth = 0.01

[run]
mode = sgdxsgld
step_size = 0.1
temperature = 1
swap_margin = 0.05
iterations = 5000
batch_size = 1000
exchange_bound = 5
x0 = 0, 0
y0 = 1, 1

[experiment]
replications = 1
seed = 9
success_tol = 0.1

[output]
stride = 1
)";

constexpr const char* kStochasticDescentTrajectory = R"([objective]
kind = kde25
weight_seed = 35811
bandwidth = 0.01

[run]
mode = sgd
step_size = 0.1
iterations = 5000
batch_size = 1000
x0 = 0, 0

[experiment]
replications = 1
seed = 10
success_tol = 0.1

[output]
stride = 1
)";

constexpr const char* kStochasticLangevinTrajectory = R"([objective]
kind = kde25
weight_seed = 35811
bandwidth = 0.01

[run]
mode = sgld
step_size = 0.1
temperature = 0.01
iterations = 5000
batch_size = 1000
x0 = 0, 0

[experiment]
replications = 1
seed = 1012
success_tol = 0.1

[output]
stride = 1
)";

std::string rastrigin_config(int dim, double step, long long iterations,
                             long long stride) {
  std::string text = R"([objective]
kind = rastrigin
dim = )";
  text += std::to_string(dim);
  text += R"(

[run]
mode = gdxld
step_size = )";
  text += format_g17(step);
  text += R"(
temperature = 5
iterations = )";
  text += std::to_string(iterations);
  text += R"(
x0 = uniform
y0 = uniform

[experiment]
replications = 20
seed = 11

[output]
stride = )";
  text += std::to_string(stride);
  text += "\n";
  return text;
}

std::string griewank_config(int dim) {
  std::string text = R"([objective]
kind = griewank
dim = )";
  text += std::to_string(dim);
  text += R"(

[run]
mode = gdxld
step_size = 0.1
temperature = 5
iterations = 20000
x0 = uniform
y0 = uniform

[experiment]
replications = 20
seed = 12

[output]
stride = 100
)";
  return text;
}

std::vector<FigurePreset> build_presets() {
  std::vector<FigurePreset> presets;
  presets.push_back(
      {"fig2",
       "hybrid descent/Langevin pair escaping local modes of the 25-mode "
       "mixture (swapping update)",
       {{"fig2", kHybridOfflineTrajectory}}});
  presets.push_back(
      {"fig3",
       "hybrid pair with the non-swapping update on the same landscape",
       {{"fig3", kIndependentHybridTrajectory}}});
  presets.push_back({"fig4",
                     "plain gradient descent trapped in the nearest mode",
                     {{"fig4", kPlainDescentTrajectory}}});
  presets.push_back(
      {"fig5",
       "single Langevin chain at high and low temperature: either noisy at "
       "the minimum or slow to find it",
       {{"fig5", kLoneLangevinTemperatures}}});
  presets.push_back(
      {"fig7",
       "success probability of the hybrid pair across exploration "
       "temperatures on one fixed landscape",
       {{"fig7", kTemperatureSweep}}});
  presets.push_back(
      {"fig8",
       "success probability of the hybrid pair across step sizes",
       {{"fig8", kStepSizeSweep}}});
  presets.push_back(
      {"fig9",
       "online hybrid pair on the kernel-density objective with mini-batch "
       "estimates",
       {{"fig9", kHybridOnlineTrajectory}}});
  presets.push_back(
      {"fig10",
       "single-chain online baselines on the kernel-density objective",
       {{"sgd", kStochasticDescentTrajectory},
        {"sgld", kStochasticLangevinTrajectory}}});
  presets.push_back({"fig11",
                     "hybrid pair on Rastrigin across dimensions, uniform "
                     "random starts",
                     {{"d2", rastrigin_config(2, 0.005, 20000, 100)},
                      {"d3", rastrigin_config(3, 0.005, 20000, 100)},
                      {"d5", rastrigin_config(5, 0.005, 100000, 500)},
                      {"d10", rastrigin_config(10, 0.001, 200000, 1000)},
                      {"d20", rastrigin_config(20, 0.001, 200000, 1000)},
                      {"d30", rastrigin_config(30, 0.001, 200000, 1000)}}});
  presets.push_back({"fig12",
                     "hybrid pair on Griewank across dimensions, uniform "
                     "random starts",
                     {{"d5", griewank_config(5)},
                      {"d25", griewank_config(25)},
                      {"d50", griewank_config(50)}}});
  return presets;
}

const std::vector<FigurePreset>& presets() {
  static const std::vector<FigurePreset> all = build_presets();
  return all;
}

}  // namespace

std::vector<std::string> figure_ids() {
  std::vector<std::string> ids;
  ids.reserve(presets().size());
  for (const FigurePreset& preset : presets()) ids.push_back(preset.id);
  return ids;
}

const FigurePreset& figure_preset(const std::string& id) {
  for (const FigurePreset& preset : presets()) {
    if (preset.id == id) return preset;
  }
  throw std::invalid_argument("unknown figure id '" + id +
                              "' (see `replicax reproduce --list`)");
}

}  // namespace replicax
