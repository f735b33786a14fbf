#pragma once

// Benchmark objectives and stochastic oracles: Gaussian mixtures with
// quadratic edge penalties, Rastrigin/Griewank/quadratic test functions, the
// kernel-density online objective (mini-batch estimates plus an exact
// smoothed-mixture companion), and the constant bundles consumed by the
// complexity-bound calculators.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "replicax/core.hpp"

namespace replicax {

// Axis-aligned box. Objectives confine their search to a box via a quadratic
// edge penalty; the harness also uses it for uniform initializers and random
// probe points.
struct Box {
  Point lower;
  Point upper;

  void validate() const;  // matching dims, lower < upper coordinate-wise
  bool contains(const Point& x) const;
};

// Quadratic penalty outside the box: sum_j (x_j - lower_j)^2 when
// x_j <= lower_j plus (x_j - upper_j)^2 when x_j >= upper_j. Zero inside,
// continuous with continuous gradient across each face.
double box_penalty(const Box& box, const Point& x);
void add_box_penalty_grad(const Box& box, const Point& x, Point& grad);

Point uniform_in_box(const Box& box, RngStream& rng);

// A smooth objective F: R^d -> R with analytic gradient. Value semantics;
// eval/grad closures share immutable state, so copies are cheap and
// thread-safe.
struct Objective {
  int dim = 0;
  std::function<double(const Point&)> eval;
  std::function<Point(const Point&)> grad;
  std::optional<Point> minimizer;   // known global minimizer, if analytic
  std::optional<double> min_value;  // F at the minimizer
  std::optional<Box> box;           // domain of interest
};

struct MixtureComponent {
  double weight = 0.0;  // positive; spec weights sum to 1
  Point mean;
  Point cov_diag;  // positive diagonal covariance
};

struct GaussianMixtureSpec {
  std::vector<MixtureComponent> components;
  Box box;

  int dim() const;
  void validate() const;  // consistent dims, positive covs, normalized weights
};

// Rescales weights to sum to 1 (rejects non-positive weights).
void normalize_weights(GaussianMixtureSpec& spec);

// The 25-mode benchmark: component means on the meshgrid {0,1,2,3,4}^2,
// covariance 0.1*I each, weights iid Uniform(0.5, 1.5) drawn from
// `weight_seed` and normalized, box [-1,5]^2.
GaussianMixtureSpec meshgrid25_spec(std::uint64_t weight_seed);

// F(x) = -sum_i w_i * N(x; m_i, C_i) + box_penalty(x): the negated mixture
// density, so the global minimizer sits at the highest mode.
Objective make_gaussian_mixture(const GaussianMixtureSpec& spec);

// F(x) = 0.5 * ||x||^2; minimizer 0 with value 0.
Objective make_quadratic(int dim);

// Rastrigin: 10 d + sum_i (x_i^2 - 10 cos(2 pi x_i)) plus box penalty on
// [-5,5]^d; minimizer 0 with value 0.
Objective make_rastrigin(int dim);

// Griewank: sum_i x_i^2 / 4000 - prod_i cos(x_i / sqrt(i)) + 1 plus box
// penalty on [-5,5]^d; minimizer 0 with value 0.
Objective make_griewank(int dim);

// F_lambda(x) = F(x) + lambda * ||x||^2 with gradient grad F + 2 lambda x.
// Keeps the minimizer annotation only when it is the origin (where the
// regularizer vanishes and cannot move the argmin).
Objective add_l2_regularizer(const Objective& objective, double lambda);

// One batch of draws, reusable to estimate the objective at several points
// with common random numbers (the online exchange step compares the two
// proposals on a single shared batch). Stored flat — count*dim coordinates —
// because batches are drawn once per iteration in the hot loop.
struct ValueBatch {
  int dim = 0;
  std::vector<double> flat;

  int count() const {
    return dim == 0 ? 0 : static_cast<int>(flat.size()) / dim;
  }
  bool empty() const { return flat.empty(); }
};

// Mini-batch value / gradient oracle. Implementations are immutable and
// thread-safe: all randomness comes from the caller's RngStream, so a seeded
// run is reproducible and replications can share one oracle.
class StochasticOracle {
 public:
  virtual ~StochasticOracle() = default;

  virtual int dim() const = 0;
  virtual int batch_size() const = 0;

  virtual ValueBatch draw_value_batch(RngStream& rng) const = 0;
  virtual double value_with_batch(const ValueBatch& batch,
                                  const Point& x) const = 0;

  // Gradient estimate from a fresh batch (independent of any value batch).
  virtual Point sample_grad(const Point& x, RngStream& rng) const = 0;

  // Value estimate from a fresh batch.
  double sample_value(const Point& x, RngStream& rng) const;
};

// Kernel-density-estimate objective: data stream s ~ mixture, Gaussian kernel
// kappa(x, s) = (2 pi sigma)^{-d/2} exp(-||x - s||^2 / (2 sigma)) with
// variance-scale bandwidth sigma. A batch estimates
//   F_hat(x) = -(1/theta) sum_i kappa(x, s_i) + box_penalty(x),
// an unbiased estimate of the exact smoothed objective
//   F(x) = -sum_i w_i N(x; m_i, C_i + sigma I) + box_penalty(x).
class KdeOracle final : public StochasticOracle {
 public:
  KdeOracle(GaussianMixtureSpec data_law, double bandwidth, int batch_size);

  int dim() const override;
  int batch_size() const override { return batch_size_; }

  ValueBatch draw_value_batch(RngStream& rng) const override;
  double value_with_batch(const ValueBatch& batch,
                          const Point& x) const override;
  Point sample_grad(const Point& x, RngStream& rng) const override;

  // One data draw s ~ mixture: component by cumulative weight, then
  // independent normal coordinates.
  Point draw_data_sample(RngStream& rng) const;

  double kernel(const Point& x, const Point& s) const;
  double bandwidth() const { return bandwidth_; }
  const GaussianMixtureSpec& data_law() const { return law_; }

 private:
  GaussianMixtureSpec law_;
  double bandwidth_;
  int batch_size_;
  double kernel_norm_;  // (2 pi sigma)^{-d/2}
  std::vector<double> cum_weights_;
  std::vector<Point> sqrt_cov_;
};

struct KdeObjective {
  Objective exact;  // smoothed mixture (covariances inflated by sigma I)
  std::shared_ptr<const KdeOracle> oracle;
};

KdeObjective make_kde_objective(const GaussianMixtureSpec& data_law,
                                double bandwidth, int batch_size);

// Exact objective plus additive Gaussian noise on values and gradients; used
// to calibrate the online drivers against closed-form stationary laws. With
// both noise scales zero it consumes no randomness, so an online run on it is
// draw-for-draw identical to the matching offline run.
class GaussianNoiseOracle final : public StochasticOracle {
 public:
  GaussianNoiseOracle(Objective base, double value_noise_sd,
                      double grad_noise_sd);

  int dim() const override { return base_.dim; }
  int batch_size() const override { return 1; }

  ValueBatch draw_value_batch(RngStream& rng) const override;
  double value_with_batch(const ValueBatch& batch,
                          const Point& x) const override;
  Point sample_grad(const Point& x, RngStream& rng) const override;

 private:
  Objective base_;
  double value_sd_;
  double grad_sd_;
};

// Constants describing an objective to the complexity-bound calculators.
struct TheoryParams {
  double smoothness = 0.0;         // L: gradient Lipschitz constant
  double coercivity_slope = 0.0;   // lambda_c in ||grad F||^2 >= lambda_c F - M_c
  double coercivity_offset = 0.0;  // M_c
  double strong_convexity = 0.0;   // m within the valley (0 if merely convex)
  double hessian_bound = 0.0;      // M: Hessian upper bound within the valley
  double valley_level = 0.0;       // r0: F-level set defining the valley
  double inner_radius = 0.0;       // r_l: ball of this radius sits inside the valley
  double outer_radius = 0.0;       // r_u: valley sits inside ball of this radius
  int dim = 0;

  void validate() const;
};

// F(x) = 0.5 ||x||^2: grad F = x and Hessian = I give L = m = M = 1;
// ||grad F||^2 = 2 F gives coercivity slope 2 with offset 0. With valley
// level r0 = 1 the level set is the ball of radius sqrt(2), so inner and
// outer radii are both sqrt(2).
TheoryParams quadratic_theory_params(int dim);

}  // namespace replicax
