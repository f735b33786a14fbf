#pragma once

// Single-chain and replica-exchange optimizers. The coupled modes run a
// gradient-descent exploiter chain X against a Langevin explorer chain Y and
// move X to the explorer's proposal whenever the explorer finds a strictly
// lower objective value (minus a swap margin). The "swapping" style trades
// the two positions; the "non-swapping" style re-centers both chains on the
// explorer's proposal. Online modes replace exact values/gradients with
// mini-batch oracle estimates and gate swaps inside a norm bound.

#include <cstdint>
#include <limits>
#include <string>

#include "replicax/core.hpp"
#include "replicax/objectives.hpp"

namespace replicax {

enum class Mode {
  gd,         // gradient descent
  ld,         // Langevin dynamics
  gdxld,      // replica exchange, swapping
  ngdxld,     // replica exchange, non-swapping
  sgd,        // stochastic gradient descent
  sgld,       // stochastic-gradient Langevin dynamics
  sgdxsgld,   // online replica exchange, swapping
  nsgdxsgld,  // online replica exchange, non-swapping
};

bool is_online(Mode mode);
bool is_coupled(Mode mode);
bool uses_langevin_noise(Mode mode);  // any mode with an LD/SGLD update
std::string to_string(Mode mode);
Mode mode_from_string(const std::string& name);

struct RunConfig {
  Mode mode = Mode::gdxld;
  double step_size = 0.0;    // h
  double temperature = 0.0;  // gamma: explorer noise scale
  double swap_margin = 0.0;  // t0: explorer must beat the exploiter by this
  std::int64_t iterations = 0;
  int batch_size = 0;  // theta (online modes); must match the oracle's
  double exchange_bound =
      std::numeric_limits<double>::infinity();  // online swap norm gate
  Point x0;
  Point y0;  // coupled modes only
  std::uint64_t seed = 0;
  std::int64_t snapshot_stride = 0;  // 0: default max(1, N/1000)

  void validate(int dim) const;  // throws std::invalid_argument
};

enum class ExchangeStyle { swapping, non_swapping };

struct ExchangeResult {
  Point x;
  Point y;
  double f_x = 0.0;  // objective value carried by the new X (no re-evaluation)
  double f_y = 0.0;
  bool swapped = false;
};

// Offline rule: swap iff f_y_prop < f_x_prop - t0 (strict).
ExchangeResult exchange_offline(double f_x_prop, double f_y_prop, double t0,
                                ExchangeStyle style, Point x_prop,
                                Point y_prop);

// Online rule: additionally requires ||x_prop|| <= bound and
// ||y_prop|| <= bound.
ExchangeResult exchange_online(double f_x_prop, double f_y_prop, double t0,
                               double bound, ExchangeStyle style, Point x_prop,
                               Point y_prop);

// x - h grad F(x).
Point gd_step(const Objective& objective, const Point& x, double h);

// x - h grad F(x) + sqrt(2 gamma h) Z with Z ~ N(0, I); draws exactly dim
// normals from the stream, after the gradient.
Point ld_step(const Objective& objective, const Point& x, double h,
              double gamma, RngStream& rng);

// Mini-batch versions of the two steps.
Point sgd_step(const StochasticOracle& oracle, const Point& x, double h,
               RngStream& rng);
Point sgld_step(const StochasticOracle& oracle, const Point& x, double h,
                double gamma, RngStream& rng);

// Offline driver (modes gd, ld, gdxld, ngdxld). Per iteration: advance the
// chains, evaluate both proposals exactly, apply the exchange rule, record.
// Aborts with DivergenceError when an iterate leaves [-1e12, 1e12] or an
// objective value turns non-finite.
Trace run(const Objective& objective, const RunConfig& config, RngStream& rng);

// Online driver (modes sgd, sgld, sgdxsgld, nsgdxsgld). Per iteration each
// chain consumes its own fresh gradient batch; one further fresh value batch
// evaluates BOTH proposals (common random numbers) for the exchange test and
// the trace record. Value and gradient batches are mutually independent.
// Draw order per iteration: X gradient batch, Y gradient batch, explorer
// noise, value batch.
Trace run(const StochasticOracle& oracle, const RunConfig& config,
          RngStream& rng);

}  // namespace replicax
