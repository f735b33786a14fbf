#include "replicax/optimizers.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace replicax {

bool is_online(Mode mode) {
  switch (mode) {
    case Mode::sgd:
    case Mode::sgld:
    case Mode::sgdxsgld:
    case Mode::nsgdxsgld:
      return true;
    default:
      return false;
  }
}

bool is_coupled(Mode mode) {
  switch (mode) {
    case Mode::gdxld:
    case Mode::ngdxld:
    case Mode::sgdxsgld:
    case Mode::nsgdxsgld:
      return true;
    default:
      return false;
  }
}

bool uses_langevin_noise(Mode mode) {
  return mode != Mode::gd && mode != Mode::sgd;
}

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::gd: return "gd";
    case Mode::ld: return "ld";
    case Mode::gdxld: return "gdxld";
    case Mode::ngdxld: return "ngdxld";
    case Mode::sgd: return "sgd";
    case Mode::sgld: return "sgld";
    case Mode::sgdxsgld: return "sgdxsgld";
    case Mode::nsgdxsgld: return "nsgdxsgld";
  }
  throw std::invalid_argument("to_string: unknown mode");
}

Mode mode_from_string(const std::string& name) {
  for (Mode m : {Mode::gd, Mode::ld, Mode::gdxld, Mode::ngdxld, Mode::sgd,
                 Mode::sgld, Mode::sgdxsgld, Mode::nsgdxsgld}) {
    if (to_string(m) == name) return m;
  }
  throw std::invalid_argument("unknown mode '" + name +
                              "' (expected gd, ld, gdxld, ngdxld, sgd, sgld, "
                              "sgdxsgld, or nsgdxsgld)");
}

void RunConfig::validate(int dim) const {
  if (dim < 1) throw std::invalid_argument("RunConfig: dimension must be >= 1");
  if (!(step_size > 0.0)) {
    throw std::invalid_argument("RunConfig: step size h must be positive");
  }
  if (iterations < 1) {
    throw std::invalid_argument("RunConfig: iterations must be >= 1");
  }
  if (uses_langevin_noise(mode) && !(temperature > 0.0)) {
    throw std::invalid_argument(
        "RunConfig: gamma must be positive for mode " + to_string(mode));
  }
  if (swap_margin < 0.0) {
    throw std::invalid_argument("RunConfig: swap margin t0 must be >= 0");
  }
  if (is_online(mode) && is_coupled(mode) && swap_margin == 0.0) {
    throw std::invalid_argument(
        "RunConfig: online exchange requires a positive swap margin t0");
  }
  if (is_online(mode) && batch_size < 1) {
    throw std::invalid_argument(
        "RunConfig: online modes need batch size theta >= 1");
  }
  if (!(exchange_bound > 0.0)) {
    throw std::invalid_argument("RunConfig: exchange bound must be positive");
  }
  if (static_cast<int>(x0.size()) != dim) {
    throw std::invalid_argument("RunConfig: x0 has dimension " +
                                std::to_string(x0.size()) + ", objective has " +
                                std::to_string(dim));
  }
  if (is_coupled(mode) && static_cast<int>(y0.size()) != dim) {
    throw std::invalid_argument(
        "RunConfig: coupled modes need y0 of dimension " + std::to_string(dim));
  }
  if (snapshot_stride < 0) {
    throw std::invalid_argument("RunConfig: snapshot stride must be >= 0");
  }
}

namespace {

ExchangeResult apply_exchange(bool swap, ExchangeStyle style, double f_x_prop,
                              double f_y_prop, Point&& x_prop, Point&& y_prop) {
  ExchangeResult r;
  r.swapped = swap;
  if (!swap) {
    r.x = std::move(x_prop);
    r.y = std::move(y_prop);
    r.f_x = f_x_prop;
    r.f_y = f_y_prop;
    return r;
  }
  if (style == ExchangeStyle::swapping) {
    r.x = std::move(y_prop);
    r.y = std::move(x_prop);
    r.f_x = f_y_prop;
    r.f_y = f_x_prop;
  } else {
    r.x = y_prop;  // both chains re-center on the explorer's proposal
    r.y = std::move(y_prop);
    r.f_x = f_y_prop;
    r.f_y = f_y_prop;
  }
  return r;
}

}  // namespace

ExchangeResult exchange_offline(double f_x_prop, double f_y_prop, double t0,
                                ExchangeStyle style, Point x_prop,
                                Point y_prop) {
  const bool swap = f_y_prop < f_x_prop - t0;
  return apply_exchange(swap, style, f_x_prop, f_y_prop, std::move(x_prop),
                        std::move(y_prop));
}

ExchangeResult exchange_online(double f_x_prop, double f_y_prop, double t0,
                               double bound, ExchangeStyle style, Point x_prop,
                               Point y_prop) {
  const bool within = norm(x_prop) <= bound && norm(y_prop) <= bound;
  const bool swap = within && f_y_prop < f_x_prop - t0;
  return apply_exchange(swap, style, f_x_prop, f_y_prop, std::move(x_prop),
                        std::move(y_prop));
}

Point gd_step(const Objective& objective, const Point& x, double h) {
  const Point g = objective.grad(x);
  Point out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) out[j] = x[j] - h * g[j];
  return out;
}

Point ld_step(const Objective& objective, const Point& x, double h,
              double gamma, RngStream& rng) {
  const Point g = objective.grad(x);
  const double scale = std::sqrt(2.0 * gamma * h);
  Point out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    out[j] = x[j] - h * g[j] + scale * rng.normal();
  }
  return out;
}

Point sgd_step(const StochasticOracle& oracle, const Point& x, double h,
               RngStream& rng) {
  const Point g = oracle.sample_grad(x, rng);
  Point out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) out[j] = x[j] - h * g[j];
  return out;
}

Point sgld_step(const StochasticOracle& oracle, const Point& x, double h,
                double gamma, RngStream& rng) {
  const Point g = oracle.sample_grad(x, rng);
  const double scale = std::sqrt(2.0 * gamma * h);
  Point out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    out[j] = x[j] - h * g[j] + scale * rng.normal();
  }
  return out;
}

namespace {

struct TraceBuilder {
  Trace trace;
  std::int64_t stride = 1;

  TraceBuilder(const RunConfig& config, const Point& x0) {
    trace.iterations = config.iterations;
    trace.records.reserve(static_cast<std::size_t>(config.iterations));
    stride = config.snapshot_stride > 0
                 ? config.snapshot_stride
                 : default_snapshot_stride(config.iterations);
    trace.snapshots.push_back({0, x0});
  }

  void record(std::int64_t n, double f_x, double f_y, bool swapped,
              const Point& x, std::int64_t total) {
    trace.records.push_back({n, f_x, f_y, swapped});
    if (n % stride == 0 || n == total) trace.snapshots.push_back({n, x});
  }
};

}  // namespace

Trace run(const Objective& objective, const RunConfig& config, RngStream& rng) {
  if (is_online(config.mode)) {
    throw std::invalid_argument("run: mode " + to_string(config.mode) +
                                " needs a stochastic oracle, not an exact "
                                "objective");
  }
  config.validate(objective.dim);
  guard_divergence(config.x0, 0.0, 0);

  const bool coupled = is_coupled(config.mode);
  const ExchangeStyle style = config.mode == Mode::ngdxld
                                  ? ExchangeStyle::non_swapping
                                  : ExchangeStyle::swapping;
  Point x = config.x0;
  Point y;
  if (coupled) {
    guard_divergence(config.y0, 0.0, 0);
    y = config.y0;
  }

  TraceBuilder builder(config, x);
  EvalCounts& evals = builder.trace.evals;

  for (std::int64_t n = 1; n <= config.iterations; ++n) {
    if (coupled) {
      Point x_prop = gd_step(objective, x, config.step_size);
      Point y_prop =
          ld_step(objective, y, config.step_size, config.temperature, rng);
      evals.exact_grads += 2;
      const double f_x_prop = objective.eval(x_prop);
      const double f_y_prop = objective.eval(y_prop);
      evals.exact_evals += 2;
      guard_divergence(x_prop, f_x_prop, n);
      guard_divergence(y_prop, f_y_prop, n);
      ExchangeResult res =
          exchange_offline(f_x_prop, f_y_prop, config.swap_margin, style,
                           std::move(x_prop), std::move(y_prop));
      x = std::move(res.x);
      y = std::move(res.y);
      builder.record(n, res.f_x, res.f_y, res.swapped, x, config.iterations);
    } else {
      Point x_prop =
          config.mode == Mode::gd
              ? gd_step(objective, x, config.step_size)
              : ld_step(objective, x, config.step_size, config.temperature,
                        rng);
      evals.exact_grads += 1;
      const double f = objective.eval(x_prop);
      evals.exact_evals += 1;
      guard_divergence(x_prop, f, n);
      x = std::move(x_prop);
      builder.record(n, f, f, false, x, config.iterations);
    }
  }

  builder.trace.x_final = std::move(x);
  builder.trace.y_final = coupled ? std::move(y) : builder.trace.x_final;
  return builder.trace;
}

Trace run(const StochasticOracle& oracle, const RunConfig& config,
          RngStream& rng) {
  if (!is_online(config.mode)) {
    throw std::invalid_argument("run: mode " + to_string(config.mode) +
                                " needs an exact objective, not a stochastic "
                                "oracle");
  }
  config.validate(oracle.dim());
  if (config.batch_size != oracle.batch_size()) {
    throw std::invalid_argument(
        "run: config batch size " + std::to_string(config.batch_size) +
        " does not match the oracle's " + std::to_string(oracle.batch_size()));
  }
  guard_divergence(config.x0, 0.0, 0);

  const bool coupled = is_coupled(config.mode);
  const ExchangeStyle style = config.mode == Mode::nsgdxsgld
                                  ? ExchangeStyle::non_swapping
                                  : ExchangeStyle::swapping;
  const int theta = oracle.batch_size();
  Point x = config.x0;
  Point y;
  if (coupled) {
    guard_divergence(config.y0, 0.0, 0);
    y = config.y0;
  }

  TraceBuilder builder(config, x);
  EvalCounts& evals = builder.trace.evals;

  for (std::int64_t n = 1; n <= config.iterations; ++n) {
    if (coupled) {
      Point x_prop = sgd_step(oracle, x, config.step_size, rng);
      Point y_prop =
          sgld_step(oracle, y, config.step_size, config.temperature, rng);
      evals.oracle_grad_samples += 2 * theta;
      const ValueBatch batch = oracle.draw_value_batch(rng);
      evals.oracle_value_samples += theta;
      const double f_x_prop = oracle.value_with_batch(batch, x_prop);
      const double f_y_prop = oracle.value_with_batch(batch, y_prop);
      guard_divergence(x_prop, f_x_prop, n);
      guard_divergence(y_prop, f_y_prop, n);
      ExchangeResult res = exchange_online(
          f_x_prop, f_y_prop, config.swap_margin, config.exchange_bound, style,
          std::move(x_prop), std::move(y_prop));
      x = std::move(res.x);
      y = std::move(res.y);
      builder.record(n, res.f_x, res.f_y, res.swapped, x, config.iterations);
    } else {
      Point x_prop =
          config.mode == Mode::sgd
              ? sgd_step(oracle, x, config.step_size, rng)
              : sgld_step(oracle, x, config.step_size, config.temperature,
                          rng);
      evals.oracle_grad_samples += theta;
      const ValueBatch batch = oracle.draw_value_batch(rng);
      evals.oracle_value_samples += theta;
      const double f = oracle.value_with_batch(batch, x_prop);
      guard_divergence(x_prop, f, n);
      x = std::move(x_prop);
      builder.record(n, f, f, false, x, config.iterations);
    }
  }

  builder.trace.x_final = std::move(x);
  builder.trace.y_final = coupled ? std::move(y) : builder.trace.x_final;
  return builder.trace;
}

}  // namespace replicax
