#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "replicax/core.hpp"
#include "replicax/objectives.hpp"
#include "replicax/optimizers.hpp"

namespace replicax {

// Everything a replication needs: the (exact) objective to optimize and
// measure against, the sampling oracle for online modes (null offline), and
// the success test calibrated to this realization's true minimizer.
struct ObjectiveBundle {
  Objective objective;
  std::shared_ptr<const StochasticOracle> oracle;
  SuccessCriterion success;
};

// Builds a bundle from a realization seed (random mixture weights, etc.).
using ObjectiveFactory = std::function<ObjectiveBundle(std::uint64_t)>;

struct SweepAxis {
  std::string name;  // a RunConfig field: step_size, temperature,
                     // swap_margin, exchange_bound, or iterations
  std::vector<double> values;
};

struct ExperimentSpec {
  ObjectiveFactory factory;
  // When true each replication draws its own objective realization; when
  // false one realization (derived from base_seed alone) is shared by every
  // replication and sweep cell.
  bool fresh_objective_per_replication = false;
  RunConfig run;  // template; x0/y0 may be left empty with uniform_init
  // Draw x0 (and y0 for coupled modes) uniformly from the objective's box,
  // independently per replication.
  bool uniform_init = false;
  int replications = 1;
  std::uint64_t base_seed = 0;
  std::vector<SweepAxis> axes;  // used by sweep(); at most two

  void validate() const;  // throws std::invalid_argument
};

struct ReplicationResult {
  std::optional<std::int64_t> first_hit;
  std::int64_t swap_count = 0;
  bool diverged = false;
  std::optional<std::int64_t> diverged_at;
  std::optional<double> final_f;  // exact F(X_N); absent when diverged
};

struct Summary {
  std::vector<std::int64_t> curve_iters;  // shared snapshot grid
  std::vector<double> success_prob;  // P(success at n), denominator = R
  std::vector<double> mean_f;  // exact E[F(X_n)] over non-diverged reps
  std::vector<ReplicationResult> replications;
  EvalCounts total_evals;  // algorithm consumption only, summed over reps
};

// Replications whose first hit occurs at or before iteration n.
std::size_t hits_within(const Summary& summary, std::int64_t n);

// Median of first-hit iterations with misses counted as +infinity; empty
// when the median itself is a miss. Even counts average the two middle
// order statistics.
std::optional<double> median_first_hit(const Summary& summary);

// True when x passes every configured test: the Euclidean ball around
// x_star when x_star is non-empty, and the value gap against f_star when
// both f_star and f are present. False when nothing is configured.
bool success_satisfied(const SuccessCriterion& crit, const Point& x,
                       std::optional<double> f = std::nullopt);

// Smallest snapshot iteration whose position satisfies the criterion
// (position test only; value-gap tests need the exact objective and are
// applied by run_replications).
std::optional<std::int64_t> first_hit(const Trace& trace,
                                      const SuccessCriterion& crit);

// Deterministic seed derivation for replications and sweep cells: every
// stream is a fixed hash of (base seed, cell index, replication index, role),
// so execution order and parallelism cannot change results.
std::uint64_t replication_run_seed(std::uint64_t base_seed, std::size_t cell,
                                   std::size_t rep);
std::uint64_t replication_init_seed(std::uint64_t base_seed, std::size_t cell,
                                    std::size_t rep);
std::uint64_t replication_realization_seed(std::uint64_t base_seed,
                                           std::size_t cell, std::size_t rep);
std::uint64_t experiment_realization_seed(std::uint64_t base_seed);

// Runs spec.replications independent replications (cell 0) on up to `jobs`
// threads. Divergence in a replication is recorded in its slot, not fatal.
Summary run_replications(const ExperimentSpec& spec, int jobs = 1);

// Re-runs replication `rep` of the no-sweep experiment with exactly the
// seeds run_replications derives for it and returns the full trace (position
// snapshots included), for writing trajectory files. Unlike
// run_replications, divergence propagates as DivergenceError.
Trace rerun_replication(const ExperimentSpec& spec, std::size_t rep);

struct SweepCell {
  std::vector<double> values;  // one per axis, same order as axis_names
  std::string label;           // e.g. "temperature=0.5"
  Summary summary;
};

struct SweepResult {
  std::vector<std::string> axis_names;
  std::vector<SweepCell> cells;  // row-major over the axis value lists
};

// Cartesian product over spec.axes; each cell is a full run_replications
// with cell-specific seeds. No axes yields the single cell "all".
SweepResult sweep(const ExperimentSpec& spec, int jobs = 1);

// Max over probe points of the empirical variance of the oracle's value
// error against the exact objective, over `trials` fresh batches per probe.
double estimate_noise_scale(const StochasticOracle& oracle,
                            const Objective& exact,
                            const std::vector<Point>& probes, int trials,
                            RngStream& rng);

// Plain gradient-descent polish used to locate true minimizers to
// high accuracy before measuring success.
Point polish_minimum(const Objective& obj, Point start, double h, int iters);

// Polishes from every start and returns the lowest-value endpoint.
Point locate_global_minimizer(const Objective& obj,
                              const std::vector<Point>& starts, double h,
                              int iters);

// Standard bundles for the benchmark objectives. Success defaults to the
// Euclidean 1e-3 ball around the located/known minimizer; callers adjust
// fields as needed. The seed-based forms draw the 25-mode meshgrid weights
// from the seed; the spec-based forms accept any diagonal Gaussian mixture.
ObjectiveBundle make_mixture_bundle(std::uint64_t weight_seed);
ObjectiveBundle make_mixture_bundle(const GaussianMixtureSpec& spec);
ObjectiveBundle make_kde_bundle(std::uint64_t weight_seed, double bandwidth,
                                int batch_size);
ObjectiveBundle make_kde_bundle(const GaussianMixtureSpec& data_law,
                                double bandwidth, int batch_size);
ObjectiveBundle make_rastrigin_bundle(int dim);
ObjectiveBundle make_griewank_bundle(int dim);
ObjectiveBundle make_quadratic_bundle(int dim);

// success_prob.csv, mean_f.csv and replications.csv under `dir` (created if
// missing).
void write_summary_csv(const Summary& summary, const std::string& dir);

// Full summary as a JSON document (curves, per-replication results, eval
// tallies, hit statistics).
std::string summary_to_json(const Summary& summary);

}  // namespace replicax
