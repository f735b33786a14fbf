#include "replicax/harness.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace replicax {

namespace {

// Stream roles hashed into every derived seed; chosen once, never reordered.
constexpr std::uint64_t kCellTag = 0;
constexpr std::uint64_t kRunTag = 1;
constexpr std::uint64_t kInitTag = 2;
constexpr std::uint64_t kRealizationTag = 3;
constexpr std::uint64_t kExperimentRealizationTag = 4;

std::uint64_t cell_seed(std::uint64_t base_seed, std::size_t cell) {
  return mix_seed(base_seed, cell, kCellTag);
}

const std::vector<std::string>& known_axes() {
  static const std::vector<std::string> names{
      "step_size", "temperature", "swap_margin", "exchange_bound",
      "iterations"};
  return names;
}

void apply_axis(RunConfig& config, const std::string& name, double value) {
  if (name == "step_size") {
    config.step_size = value;
  } else if (name == "temperature") {
    config.temperature = value;
  } else if (name == "swap_margin") {
    config.swap_margin = value;
  } else if (name == "exchange_bound") {
    config.exchange_bound = value;
  } else if (name == "iterations") {
    if (value < 1.0 || value != std::floor(value)) {
      throw std::invalid_argument(
          "sweep axis 'iterations' needs a positive integer, got " +
          format_g17(value));
    }
    config.iterations = static_cast<std::int64_t>(value);
  } else {
    throw std::invalid_argument("unknown sweep axis '" + name + "'");
  }
}

std::string axis_label(const std::string& name, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s=%g", name.c_str(), value);
  return buf;
}

// Everything one replication produces; aggregated after all reps finish so
// thread scheduling cannot affect the summary.
struct RepOutput {
  ReplicationResult result;
  std::vector<std::int64_t> grid;
  std::vector<std::uint8_t> success;
  std::vector<double> f;
  EvalCounts evals;
};

// Objective bundle and fully derived RunConfig for one replication. The
// bundle is returned by value (its closures share immutable state, so the
// copy is cheap) so callers own it whether or not the experiment shares one
// realization across replications.
std::pair<ObjectiveBundle, RunConfig> prepare_replication(
    const ExperimentSpec& spec, const RunConfig& cell_config,
    const ObjectiveBundle* shared_bundle, std::size_t cell, std::size_t rep) {
  ObjectiveBundle bundle =
      shared_bundle != nullptr
          ? *shared_bundle
          : spec.factory(
                replication_realization_seed(spec.base_seed, cell, rep));
  if (bundle.success.x_star.empty() && !bundle.success.f_star) {
    throw std::invalid_argument(
        "run_replications: bundle has an empty success criterion");
  }

  RunConfig config = cell_config;
  config.seed = replication_run_seed(spec.base_seed, cell, rep);
  if (spec.uniform_init) {
    if (!bundle.objective.box) {
      throw std::invalid_argument(
          "run_replications: uniform_init needs an objective box");
    }
    RngStream init(replication_init_seed(spec.base_seed, cell, rep));
    config.x0 = uniform_in_box(*bundle.objective.box, init);
    if (is_coupled(config.mode)) {
      config.y0 = uniform_in_box(*bundle.objective.box, init);
    }
  }
  if (is_online(config.mode) && bundle.oracle == nullptr) {
    throw std::invalid_argument(
        "run_replications: online mode needs a bundle with an oracle");
  }
  return {std::move(bundle), std::move(config)};
}

RepOutput run_one(const ExperimentSpec& spec, const RunConfig& cell_config,
                  const ObjectiveBundle* shared_bundle, std::size_t cell,
                  std::size_t rep) {
  const auto [bundle, config] =
      prepare_replication(spec, cell_config, shared_bundle, cell, rep);

  RepOutput out;
  RngStream stream(config.seed);
  Trace trace;
  try {
    trace = is_online(config.mode) ? run(*bundle.oracle, config, stream)
                                   : run(bundle.objective, config, stream);
  } catch (const DivergenceError& err) {
    out.result.diverged = true;
    out.result.diverged_at = err.iteration();
    return out;  // no trace: the rep contributes no curves or tallies
  }

  out.evals = trace.evals;
  for (const TraceRecord& record : trace.records) {
    if (record.swapped) ++out.result.swap_count;
  }
  out.grid.reserve(trace.snapshots.size());
  out.success.reserve(trace.snapshots.size());
  out.f.reserve(trace.snapshots.size());
  for (const TraceSnapshot& snap : trace.snapshots) {
    const double f = bundle.objective.eval(snap.x);
    const bool hit = success_satisfied(bundle.success, snap.x, f);
    out.grid.push_back(snap.n);
    out.success.push_back(hit ? 1 : 0);
    out.f.push_back(f);
    if (hit && !out.result.first_hit) out.result.first_hit = snap.n;
  }
  out.result.final_f = out.f.back();
  return out;
}

Summary run_cell(const ExperimentSpec& spec, const RunConfig& cell_config,
                 const ObjectiveBundle* shared_bundle, std::size_t cell,
                 int jobs) {
  if (jobs < 1) {
    throw std::invalid_argument("run_replications: jobs must be >= 1");
  }
  const int reps = spec.replications;
  std::vector<RepOutput> outputs(reps);
  const int workers = std::min(jobs, reps);
  if (workers == 1) {
    for (int rep = 0; rep < reps; ++rep) {
      outputs[rep] = run_one(spec, cell_config, shared_bundle, cell, rep);
    }
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (int rep = w; rep < reps; rep += workers) {
            outputs[rep] = run_one(spec, cell_config, shared_bundle, cell, rep);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (std::thread& t : pool) t.join();
    for (const std::exception_ptr& err : errors) {
      if (err) std::rethrow_exception(err);
    }
  }

  Summary summary;
  // The snapshot grid is a pure function of (iterations, stride), so the
  // curves keep their full length even when every replication diverges.
  const std::int64_t stride =
      cell_config.snapshot_stride > 0
          ? cell_config.snapshot_stride
          : default_snapshot_stride(cell_config.iterations);
  summary.curve_iters.push_back(0);
  for (std::int64_t n = stride; n <= cell_config.iterations; n += stride) {
    summary.curve_iters.push_back(n);
  }
  if (summary.curve_iters.back() != cell_config.iterations) {
    summary.curve_iters.push_back(cell_config.iterations);
  }
  const std::size_t points = summary.curve_iters.size();
  std::vector<std::int64_t> hits(points, 0);
  std::vector<double> f_sum(points, 0.0);
  std::int64_t alive = 0;
  for (const RepOutput& out : outputs) {
    summary.replications.push_back(out.result);
    summary.total_evals += out.evals;
    if (out.result.diverged) continue;
    if (out.grid != summary.curve_iters) {
      throw std::logic_error(
          "run_replications: replications disagree on the snapshot grid");
    }
    ++alive;
    for (std::size_t s = 0; s < points; ++s) {
      hits[s] += out.success[s];
      f_sum[s] += out.f[s];
    }
  }
  summary.success_prob.resize(points);
  summary.mean_f.resize(points);
  for (std::size_t s = 0; s < points; ++s) {
    summary.success_prob[s] = static_cast<double>(hits[s]) / reps;
    summary.mean_f[s] = alive > 0
                            ? f_sum[s] / static_cast<double>(alive)
                            : std::numeric_limits<double>::quiet_NaN();
  }
  return summary;
}

}  // namespace

void ExperimentSpec::validate() const {
  if (!factory) {
    throw std::invalid_argument("ExperimentSpec: objective factory is empty");
  }
  if (replications < 1) {
    throw std::invalid_argument("ExperimentSpec: replications must be >= 1");
  }
  if (axes.size() > 2) {
    throw std::invalid_argument("ExperimentSpec: at most two sweep axes");
  }
  for (const SweepAxis& axis : axes) {
    if (std::find(known_axes().begin(), known_axes().end(), axis.name) ==
        known_axes().end()) {
      throw std::invalid_argument("ExperimentSpec: unknown sweep axis '" +
                                  axis.name + "'");
    }
    if (axis.values.empty()) {
      throw std::invalid_argument("ExperimentSpec: sweep axis '" + axis.name +
                                  "' has no values");
    }
  }
}

bool success_satisfied(const SuccessCriterion& crit, const Point& x,
                       std::optional<double> f) {
  bool configured = false;
  if (!crit.x_star.empty()) {
    configured = true;
    if (euclidean_distance(x, crit.x_star) > crit.tol) return false;
  }
  if (crit.f_star && f) {
    configured = true;
    if (*f - *crit.f_star > crit.f_tol) return false;
  }
  return configured;
}

std::optional<std::int64_t> first_hit(const Trace& trace,
                                      const SuccessCriterion& crit) {
  for (const TraceSnapshot& snap : trace.snapshots) {
    if (success_satisfied(crit, snap.x)) return snap.n;
  }
  return std::nullopt;
}

std::uint64_t replication_run_seed(std::uint64_t base_seed, std::size_t cell,
                                   std::size_t rep) {
  return mix_seed(cell_seed(base_seed, cell), rep, kRunTag);
}

std::uint64_t replication_init_seed(std::uint64_t base_seed, std::size_t cell,
                                    std::size_t rep) {
  return mix_seed(cell_seed(base_seed, cell), rep, kInitTag);
}

std::uint64_t replication_realization_seed(std::uint64_t base_seed,
                                           std::size_t cell,
                                           std::size_t rep) {
  return mix_seed(cell_seed(base_seed, cell), rep, kRealizationTag);
}

std::uint64_t experiment_realization_seed(std::uint64_t base_seed) {
  return mix_seed(base_seed, 0, kExperimentRealizationTag);
}

Summary run_replications(const ExperimentSpec& spec, int jobs) {
  spec.validate();
  ObjectiveBundle shared;
  const ObjectiveBundle* shared_ptr = nullptr;
  if (!spec.fresh_objective_per_replication) {
    shared = spec.factory(experiment_realization_seed(spec.base_seed));
    shared_ptr = &shared;
  }
  return run_cell(spec, spec.run, shared_ptr, 0, jobs);
}

Trace rerun_replication(const ExperimentSpec& spec, std::size_t rep) {
  spec.validate();
  if (rep >= static_cast<std::size_t>(spec.replications)) {
    throw std::invalid_argument("rerun_replication: replication index " +
                                std::to_string(rep) + " out of range");
  }
  ObjectiveBundle shared;
  const ObjectiveBundle* shared_ptr = nullptr;
  if (!spec.fresh_objective_per_replication) {
    shared = spec.factory(experiment_realization_seed(spec.base_seed));
    shared_ptr = &shared;
  }
  const auto [bundle, config] =
      prepare_replication(spec, spec.run, shared_ptr, 0, rep);
  RngStream stream(config.seed);
  return is_online(config.mode) ? run(*bundle.oracle, config, stream)
                                : run(bundle.objective, config, stream);
}

SweepResult sweep(const ExperimentSpec& spec, int jobs) {
  spec.validate();
  ObjectiveBundle shared;
  const ObjectiveBundle* shared_ptr = nullptr;
  if (!spec.fresh_objective_per_replication) {
    shared = spec.factory(experiment_realization_seed(spec.base_seed));
    shared_ptr = &shared;
  }

  SweepResult result;
  for (const SweepAxis& axis : spec.axes) result.axis_names.push_back(axis.name);

  const std::size_t outer = spec.axes.empty() ? 1 : spec.axes[0].values.size();
  const std::size_t inner =
      spec.axes.size() < 2 ? 1 : spec.axes[1].values.size();
  std::size_t cell = 0;
  for (std::size_t i = 0; i < outer; ++i) {
    for (std::size_t j = 0; j < inner; ++j, ++cell) {
      SweepCell out;
      RunConfig config = spec.run;
      if (!spec.axes.empty()) {
        out.values.push_back(spec.axes[0].values[i]);
        apply_axis(config, spec.axes[0].name, out.values.back());
        out.label = axis_label(spec.axes[0].name, out.values.back());
      }
      if (spec.axes.size() == 2) {
        out.values.push_back(spec.axes[1].values[j]);
        apply_axis(config, spec.axes[1].name, out.values.back());
        out.label += "," + axis_label(spec.axes[1].name, out.values.back());
      }
      if (out.label.empty()) out.label = "all";
      out.summary = run_cell(spec, config, shared_ptr, cell, jobs);
      result.cells.push_back(std::move(out));
    }
  }
  return result;
}

std::size_t hits_within(const Summary& summary, std::int64_t n) {
  std::size_t count = 0;
  for (const ReplicationResult& rep : summary.replications) {
    if (rep.first_hit && *rep.first_hit <= n) ++count;
  }
  return count;
}

std::optional<double> median_first_hit(const Summary& summary) {
  std::vector<double> values;
  values.reserve(summary.replications.size());
  for (const ReplicationResult& rep : summary.replications) {
    values.push_back(rep.first_hit
                         ? static_cast<double>(*rep.first_hit)
                         : std::numeric_limits<double>::infinity());
  }
  if (values.empty()) return std::nullopt;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  double median;
  if (n % 2 == 1) {
    median = values[n / 2];
  } else {
    median = 0.5 * (values[n / 2 - 1] + values[n / 2]);
  }
  if (!std::isfinite(median)) return std::nullopt;
  return median;
}

double estimate_noise_scale(const StochasticOracle& oracle,
                            const Objective& exact,
                            const std::vector<Point>& probes, int trials,
                            RngStream& rng) {
  if (trials < 2) {
    throw std::invalid_argument("estimate_noise_scale: trials must be >= 2");
  }
  if (probes.empty()) {
    throw std::invalid_argument("estimate_noise_scale: no probe points");
  }
  double worst = 0.0;
  for (const Point& x : probes) {
    if (static_cast<int>(x.size()) != exact.dim) {
      throw std::invalid_argument(
          "estimate_noise_scale: probe dimension mismatch");
    }
    const double truth = exact.eval(x);
    double sum = 0.0, sum2 = 0.0;
    for (int t = 0; t < trials; ++t) {
      const double err = oracle.sample_value(x, rng) - truth;
      sum += err;
      sum2 += err * err;
    }
    const double var = (sum2 - sum * sum / trials) / (trials - 1);
    worst = std::max(worst, var);
  }
  return worst;
}

Point polish_minimum(const Objective& obj, Point start, double h, int iters) {
  if (h <= 0.0 || iters < 0) {
    throw std::invalid_argument("polish_minimum: need h > 0 and iters >= 0");
  }
  for (int k = 0; k < iters; ++k) {
    start = gd_step(obj, start, h);
    guard_divergence(start, 0.0, k + 1);
  }
  return start;
}

Point locate_global_minimizer(const Objective& obj,
                              const std::vector<Point>& starts, double h,
                              int iters) {
  if (starts.empty()) {
    throw std::invalid_argument("locate_global_minimizer: no start points");
  }
  Point best;
  double best_f = std::numeric_limits<double>::infinity();
  for (const Point& start : starts) {
    Point candidate = polish_minimum(obj, start, h, iters);
    const double f = obj.eval(candidate);
    if (f < best_f) {
      best_f = f;
      best = std::move(candidate);
    }
  }
  return best;
}

namespace {

ObjectiveBundle known_minimizer_bundle(Objective objective) {
  ObjectiveBundle bundle;
  bundle.success.x_star = *objective.minimizer;
  bundle.objective = std::move(objective);
  return bundle;
}

}  // namespace

namespace {

// Polishes from every component mean, annotates the winner as the global
// minimizer, and uses it as the default success target.
void annotate_mixture_minimizer(ObjectiveBundle& bundle,
                                const GaussianMixtureSpec& spec) {
  std::vector<Point> starts;
  starts.reserve(spec.components.size());
  for (const MixtureComponent& comp : spec.components) {
    starts.push_back(comp.mean);
  }
  Point x_star = locate_global_minimizer(bundle.objective, starts, 0.1, 1000);
  bundle.objective.min_value = bundle.objective.eval(x_star);
  bundle.objective.minimizer = x_star;
  bundle.success.x_star = std::move(x_star);
}

}  // namespace

ObjectiveBundle make_mixture_bundle(std::uint64_t weight_seed) {
  return make_mixture_bundle(meshgrid25_spec(weight_seed));
}

ObjectiveBundle make_mixture_bundle(const GaussianMixtureSpec& spec) {
  ObjectiveBundle bundle;
  bundle.objective = make_gaussian_mixture(spec);
  annotate_mixture_minimizer(bundle, spec);
  return bundle;
}

ObjectiveBundle make_kde_bundle(std::uint64_t weight_seed, double bandwidth,
                                int batch_size) {
  return make_kde_bundle(meshgrid25_spec(weight_seed), bandwidth, batch_size);
}

ObjectiveBundle make_kde_bundle(const GaussianMixtureSpec& data_law,
                                double bandwidth, int batch_size) {
  KdeObjective kde = make_kde_objective(data_law, bandwidth, batch_size);
  ObjectiveBundle bundle;
  bundle.objective = std::move(kde.exact);
  bundle.oracle = std::move(kde.oracle);
  annotate_mixture_minimizer(bundle, data_law);
  return bundle;
}

ObjectiveBundle make_rastrigin_bundle(int dim) {
  return known_minimizer_bundle(make_rastrigin(dim));
}

ObjectiveBundle make_griewank_bundle(int dim) {
  return known_minimizer_bundle(make_griewank(dim));
}

ObjectiveBundle make_quadratic_bundle(int dim) {
  return known_minimizer_bundle(make_quadratic(dim));
}

namespace {

std::string csv_double(double value) {
  return std::isnan(value) ? std::string() : format_g17(value);
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  out << body;
}

}  // namespace

void write_summary_csv(const Summary& summary, const std::string& dir) {
  const std::filesystem::path root(dir);
  std::filesystem::create_directories(root);

  std::string success = "n,success_prob\n";
  std::string mean_f = "n,mean_f\n";
  for (std::size_t s = 0; s < summary.curve_iters.size(); ++s) {
    const std::string n = std::to_string(summary.curve_iters[s]);
    success += n + "," + format_g17(summary.success_prob[s]) + "\n";
    mean_f += n + "," + csv_double(summary.mean_f[s]) + "\n";
  }
  write_file(root / "success_prob.csv", success);
  write_file(root / "mean_f.csv", mean_f);

  std::string reps = "rep,first_hit,swap_count,diverged,final_f\n";
  for (std::size_t r = 0; r < summary.replications.size(); ++r) {
    const ReplicationResult& rep = summary.replications[r];
    reps += std::to_string(r) + ",";
    if (rep.first_hit) reps += std::to_string(*rep.first_hit);
    reps += "," + std::to_string(rep.swap_count) + ",";
    reps += rep.diverged ? "1" : "0";
    reps += ",";
    if (rep.final_f) reps += format_g17(*rep.final_f);
    reps += "\n";
  }
  write_file(root / "replications.csv", reps);
}

std::string summary_to_json(const Summary& summary) {
  nlohmann::json j;
  j["replications"] = summary.replications.size();
  j["curve"]["n"] = summary.curve_iters;
  j["curve"]["success_prob"] = summary.success_prob;
  j["curve"]["mean_f"] = summary.mean_f;

  nlohmann::json reps = nlohmann::json::array();
  std::size_t hit_count = 0;
  for (std::size_t r = 0; r < summary.replications.size(); ++r) {
    const ReplicationResult& rep = summary.replications[r];
    nlohmann::json item;
    item["rep"] = r;
    item["first_hit"] =
        rep.first_hit ? nlohmann::json(*rep.first_hit) : nlohmann::json();
    item["swap_count"] = rep.swap_count;
    item["diverged"] = rep.diverged;
    item["diverged_at"] =
        rep.diverged_at ? nlohmann::json(*rep.diverged_at) : nlohmann::json();
    item["final_f"] =
        rep.final_f ? nlohmann::json(*rep.final_f) : nlohmann::json();
    reps.push_back(std::move(item));
    if (rep.first_hit) ++hit_count;
  }
  j["per_replication"] = std::move(reps);

  j["evals"]["exact_evals"] = summary.total_evals.exact_evals;
  j["evals"]["exact_grads"] = summary.total_evals.exact_grads;
  j["evals"]["oracle_value_samples"] =
      summary.total_evals.oracle_value_samples;
  j["evals"]["oracle_grad_samples"] = summary.total_evals.oracle_grad_samples;

  j["hits"] = hit_count;
  j["hit_rate"] = summary.replications.empty()
                      ? 0.0
                      : static_cast<double>(hit_count) /
                            static_cast<double>(summary.replications.size());
  const std::optional<double> median = median_first_hit(summary);
  j["median_first_hit"] = median ? nlohmann::json(*median) : nlohmann::json();
  return j.dump(2) + "\n";
}

}  // namespace replicax
