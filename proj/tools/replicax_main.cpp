// Command-line front end for the replica-exchange optimizer benchmark
// harness.
//
//   replicax run       --config FILE [--out DIR] [--jobs N] [--seed S] [--stride K]
//   replicax sweep     --config FILE ...            (alias of run; configs with
//                                                    sweep axes write one
//                                                    subdirectory per cell)
//   replicax reproduce ID [--out DIR] [--jobs N] [--seed S] [--stride K]
//   replicax reproduce --list
//   replicax bounds    [--config FILE] [--preset quadratic] [field flags...]
//
// Exit codes: 0 success; 1 usage, unreadable file or config syntax error;
// 2 validation error; 3 divergence at runtime.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>

#include <CLI11.hpp>
#include <json.hpp>

#include "replicax/config.hpp"
#include "replicax/execute.hpp"
#include "replicax/figures.hpp"
#include "replicax/theory.hpp"

namespace {

using namespace replicax;

struct CommonOpts {
  std::string config_path;
  std::string out;
  int jobs = 1;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> stride;
};

void add_execution_flags(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--out", opts.out, "output directory");
  cmd->add_option("--jobs", opts.jobs, "worker threads for replications")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", opts.seed, "override the [experiment] seed");
  cmd->add_option("--stride", opts.stride,
                  "override the [output] snapshot stride");
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// --out beats the config's [output] directory beats $REPLICAX_OUT/<name>
// beats ./out/<name>.
std::string default_out_root(const std::string& name) {
  const char* env = std::getenv("REPLICAX_OUT");
  if (env != nullptr && *env != '\0') {
    return (std::filesystem::path(env) / name).string();
  }
  return (std::filesystem::path("out") / name).string();
}

int cmd_run(const CommonOpts& opts) {
  const ParsedConfig config = load_config_file(opts.config_path);
  ExecutionOptions exec;
  exec.jobs = opts.jobs;
  exec.seed_override = opts.seed;
  exec.stride_override = opts.stride;
  exec.config_text = slurp(opts.config_path);
  if (!opts.out.empty()) {
    exec.out_dir = opts.out;
  } else if (!config.output.directory.empty()) {
    exec.out_dir = config.output.directory;
  } else {
    exec.out_dir = default_out_root(
        std::filesystem::path(opts.config_path).stem().string());
  }
  execute_config(config, exec);
  std::cout << "wrote " << exec.out_dir << "\n";
  return 0;
}

struct ReproduceOpts {
  CommonOpts common;
  std::string id;
  bool list = false;
};

int cmd_reproduce(const ReproduceOpts& opts) {
  if (opts.list) {
    for (const std::string& id : figure_ids()) {
      std::printf("%-7s %s\n", id.c_str(), figure_preset(id).summary.c_str());
    }
    return 0;
  }
  if (opts.id.empty()) {
    std::cerr << "reproduce needs a figure id (or --list)\n";
    return 1;
  }
  const FigurePreset* preset = nullptr;
  try {
    preset = &figure_preset(opts.id);
  } catch (const std::invalid_argument& err) {
    std::cerr << err.what() << "\n";
    return 1;  // unknown id is a usage error
  }

  const std::string root =
      opts.common.out.empty() ? default_out_root(preset->id) : opts.common.out;
  for (const auto& [name, text] : preset->configs) {
    const ParsedConfig config = parse_config_text(text);
    ExecutionOptions exec;
    exec.jobs = opts.common.jobs;
    exec.seed_override = opts.common.seed;
    exec.stride_override = opts.common.stride;
    exec.config_text = text;
    exec.preset_id = preset->id;
    exec.out_dir = preset->configs.size() == 1
                       ? root
                       : (std::filesystem::path(root) / name).string();
    execute_config(config, exec);
    std::cout << "wrote " << exec.out_dir << "\n";
  }
  return 0;
}

struct BoundsOpts {
  std::string config_path;
  std::string preset;
  std::optional<double> smoothness, coercivity_slope, coercivity_offset,
      strong_convexity, hessian_bound, valley_level, inner_radius,
      outer_radius;
  std::optional<int> dim;
  std::optional<double> gamma, h, delta, eps, drift_radius, v0;
};

std::string trimmed(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_number(int line, const std::string& key, const std::string& text) {
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0') {
    throw ParseError(line, "key '" + key + "' expects a number, got '" + text +
                               "'");
  }
  return value;
}

// key = value lines naming TheoryParams fields and run inputs:
// L, lambda_c, M_c, m, M, r0, r_l, r_u, dim, gamma, h, delta, eps, D, v0.
void apply_bounds_file(const std::string& path, TheoryParams& params,
                       BoundsOpts& inputs) {
  if (!std::filesystem::exists(path)) {
    throw std::system_error(
        std::make_error_code(std::errc::no_such_file_or_directory),
        "params file '" + path + "'");
  }
  std::ifstream in(path, std::ios::binary);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    line = trimmed(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError(line_no, "expected 'key = value', got '" + line + "'");
    }
    const std::string key = trimmed(line.substr(0, eq));
    const double value = parse_number(line_no, key, trimmed(line.substr(eq + 1)));
    if (key == "L") {
      params.smoothness = value;
    } else if (key == "lambda_c") {
      params.coercivity_slope = value;
    } else if (key == "M_c") {
      params.coercivity_offset = value;
    } else if (key == "m") {
      params.strong_convexity = value;
    } else if (key == "M") {
      params.hessian_bound = value;
    } else if (key == "r0") {
      params.valley_level = value;
    } else if (key == "r_l") {
      params.inner_radius = value;
    } else if (key == "r_u") {
      params.outer_radius = value;
    } else if (key == "dim") {
      params.dim = static_cast<int>(value);
    } else if (key == "gamma") {
      inputs.gamma = value;
    } else if (key == "h") {
      inputs.h = value;
    } else if (key == "delta") {
      inputs.delta = value;
    } else if (key == "eps") {
      inputs.eps = value;
    } else if (key == "D") {
      inputs.drift_radius = value;
    } else if (key == "v0") {
      inputs.v0 = value;
    } else {
      throw ParseError(line_no, "unknown key '" + key + "'");
    }
  }
}

int cmd_bounds(const BoundsOpts& opts) {
  TheoryParams params{};
  BoundsOpts inputs;  // gamma/h/delta/eps/D/v0 accumulated file-then-flags
  if (!opts.preset.empty()) {
    if (opts.preset != "quadratic") {
      std::cerr << "unknown preset '" << opts.preset
                << "' (available: quadratic)\n";
      return 1;
    }
    params = quadratic_theory_params(opts.dim.value_or(2));
  }
  if (!opts.config_path.empty()) {
    apply_bounds_file(opts.config_path, params, inputs);
  }
  if (opts.smoothness) params.smoothness = *opts.smoothness;
  if (opts.coercivity_slope) params.coercivity_slope = *opts.coercivity_slope;
  if (opts.coercivity_offset) {
    params.coercivity_offset = *opts.coercivity_offset;
  }
  if (opts.strong_convexity) params.strong_convexity = *opts.strong_convexity;
  if (opts.hessian_bound) params.hessian_bound = *opts.hessian_bound;
  if (opts.valley_level) params.valley_level = *opts.valley_level;
  if (opts.inner_radius) params.inner_radius = *opts.inner_radius;
  if (opts.outer_radius) params.outer_radius = *opts.outer_radius;
  if (opts.dim) params.dim = *opts.dim;
  if (opts.gamma) inputs.gamma = opts.gamma;
  if (opts.h) inputs.h = opts.h;
  if (opts.delta) inputs.delta = opts.delta;
  if (opts.eps) inputs.eps = opts.eps;
  if (opts.drift_radius) inputs.drift_radius = opts.drift_radius;
  if (opts.v0) inputs.v0 = opts.v0;

  if (!inputs.gamma || !inputs.h || !inputs.delta || !inputs.eps ||
      !inputs.drift_radius) {
    throw std::invalid_argument(
        "bounds needs gamma, h, delta, eps and D (via flags or --config)");
  }
  BoundInputs in;
  in.params = params;
  in.gamma = *inputs.gamma;
  in.h = *inputs.h;
  in.delta = *inputs.delta;
  in.eps = *inputs.eps;
  in.drift_radius = *inputs.drift_radius;
  in.v0 = inputs.v0.value_or(2.0);
  const BoundReport report = compute_bound_report(in);

  const auto row = [](const char* label, double value) {
    std::printf("%-36s %s\n", label, format_g17(value).c_str());
  };
  row("drift constant (C_V)", report.c_v);
  row("confinement level (R_V)", report.r_v);
  row("exponent ceiling (eta_max)", report.eta_max);
  row("landing probability bound (alpha)", report.alpha_lower);
  row("landing attempts (K)", report.trials);
  row("valley iterations (k_eps)", report.iters_in_valley);
  row("hitting-time bound (T)", report.hitting_time);
  row("total iterations (T + k_eps)", report.total);
  std::printf("%-36s %.0f\n", "total, rounded up", std::ceil(report.total));

  nlohmann::json j;
  j["inputs"] = {{"L", params.smoothness},
                 {"lambda_c", params.coercivity_slope},
                 {"M_c", params.coercivity_offset},
                 {"m", params.strong_convexity},
                 {"M", params.hessian_bound},
                 {"r0", params.valley_level},
                 {"r_l", params.inner_radius},
                 {"r_u", params.outer_radius},
                 {"dim", params.dim},
                 {"gamma", in.gamma},
                 {"h", in.h},
                 {"delta", in.delta},
                 {"eps", in.eps},
                 {"D", in.drift_radius},
                 {"v0", in.v0}};
  j["report"] = {{"c_v", report.c_v},
                 {"r_v", report.r_v},
                 {"eta_max", report.eta_max},
                 {"alpha_lower", report.alpha_lower},
                 {"trials", report.trials},
                 {"iters_in_valley", report.iters_in_valley},
                 {"hitting_time", report.hitting_time},
                 {"total", report.total},
                 {"total_ceil", std::ceil(report.total)}};
  std::cout << "\n" << j.dump(2) << "\n";
  return 0;
}

template <typename Fn>
int dispatch(Fn&& fn) {
  try {
    return fn();
  } catch (const ParseError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return 1;
  } catch (const std::system_error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  } catch (const DivergenceError& err) {
    std::cerr << "divergence: " << err.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& err) {
    std::cerr << "validation error: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"replica-exchange hybrid optimizer benchmark harness"};
  app.require_subcommand(1);

  CommonOpts run_opts;
  CLI::App* run_cmd =
      app.add_subcommand("run", "execute one experiment config");
  run_cmd->add_option("--config", run_opts.config_path, "experiment config")
      ->required();
  add_execution_flags(run_cmd, run_opts);

  CommonOpts sweep_opts;
  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "execute a config's sweep axes (without axes, same as run)");
  sweep_cmd->add_option("--config", sweep_opts.config_path, "experiment config")
      ->required();
  add_execution_flags(sweep_cmd, sweep_opts);

  ReproduceOpts repro_opts;
  CLI::App* repro_cmd = app.add_subcommand(
      "reproduce", "run a built-in benchmark study preset");
  repro_cmd->add_option("id", repro_opts.id, "preset id (fig2..fig12)");
  repro_cmd->add_flag("--list", repro_opts.list, "list available presets");
  add_execution_flags(repro_cmd, repro_opts.common);

  BoundsOpts bounds_opts;
  CLI::App* bounds_cmd = app.add_subcommand(
      "bounds", "print the iteration-complexity certificate");
  bounds_cmd->add_option("--config", bounds_opts.config_path,
                         "key = value params file");
  bounds_cmd->add_option("--preset", bounds_opts.preset,
                         "constant preset (quadratic)");
  bounds_cmd->add_option("--L", bounds_opts.smoothness,
                         "gradient Lipschitz constant");
  bounds_cmd->add_option("--lambda-c", bounds_opts.coercivity_slope,
                         "coercivity slope");
  bounds_cmd->add_option("--M-c", bounds_opts.coercivity_offset,
                         "coercivity offset");
  bounds_cmd->add_option("--m", bounds_opts.strong_convexity,
                         "valley strong convexity");
  bounds_cmd->add_option("--M", bounds_opts.hessian_bound,
                         "valley Hessian bound");
  bounds_cmd->add_option("--r0", bounds_opts.valley_level, "valley level");
  bounds_cmd->add_option("--r-l", bounds_opts.inner_radius,
                         "valley inner radius");
  bounds_cmd->add_option("--r-u", bounds_opts.outer_radius,
                         "valley outer radius");
  bounds_cmd->add_option("--dim", bounds_opts.dim, "dimension");
  bounds_cmd->add_option("--gamma", bounds_opts.gamma,
                         "exploration temperature");
  bounds_cmd->add_option("--step", bounds_opts.h, "step size h");
  bounds_cmd->add_option("--delta", bounds_opts.delta,
                         "failure probability budget");
  bounds_cmd->add_option("--eps", bounds_opts.eps, "target valley level");
  bounds_cmd->add_option("--D", bounds_opts.drift_radius,
                         "drift radius (max drifted distance to minimizer)");
  bounds_cmd->add_option("--v0", bounds_opts.v0,
                         "initial Lyapunov mass V(X0) + V(Y0)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 1;  // stable usage-error code
  }

  if (run_cmd->parsed()) return dispatch([&] { return cmd_run(run_opts); });
  if (sweep_cmd->parsed()) {
    return dispatch([&] { return cmd_run(sweep_opts); });
  }
  if (repro_cmd->parsed()) {
    return dispatch([&] { return cmd_reproduce(repro_opts); });
  }
  if (bounds_cmd->parsed()) {
    return dispatch([&] { return cmd_bounds(bounds_opts); });
  }
  return 1;
}
