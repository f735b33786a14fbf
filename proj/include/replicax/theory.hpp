#pragma once

#include <optional>

#include "replicax/core.hpp"
#include "replicax/objectives.hpp"

namespace replicax {

// Drift constants of the exponential Lyapunov function V(x) = exp(eta F(x))
// for the temperature-gamma explorer chain: one noisy step contracts E[V]
// outside the sublevel set {F <= R_V} whenever eta <= eta_max.
struct LyapunovConstants {
  double c_v = 0.0;      // additive drift constant M_c/4 + 4 gamma L d
  double r_v = 0.0;      // contraction region boundary 8 C_V / lambda_c
  double eta_max = 0.0;  // largest admissible Lyapunov exponent 1/(8 gamma)
};

// Requires h <= 1/(2 L) and gamma > 0.
LyapunovConstants lyapunov_constants(const TheoryParams& params, double gamma,
                                     double h);

// Volume of the d-dimensional unit ball, pi^{d/2} / Gamma(d/2 + 1).
double unit_ball_volume(int dim);

// Lower bound on the one-step probability that the explorer lands inside the
// r-ball of the minimizer, given that its drifted position stays within
// distance big_d of the minimizer:
//   S_d r^d (4 gamma h pi)^{-d/2} exp(-(big_d^2 + r^2) / (2 gamma h)),
// clamped into [0, 1]. Requires r > 0 and gamma h > 0.
double smallset_alpha(double r, double big_d, double gamma, double h, int dim);

// Iterations for the exploiter to shrink the valley level from r0 to eps
// under m-strong convexity: (log eps - log r0) / log(1 - mh).
// Requires 0 < eps <= r0 and 0 < m h < 1.
double iters_strongconvex(double eps, double r0, double m, double h);

// Convex counterpart: (1/eps - 1/r0) r_u^2 / h. Requires 0 < eps <= r0.
double iters_convex(double eps, double r0, double r_u, double h);

// Number of independent landing attempts needed so that at least one
// succeeds with probability 1 - delta/2: log(delta/2) / log(1 - alpha).
// Requires delta in (0,1) and alpha in (0,1) exclusive.
double geometric_trials(double delta, double alpha);

// High-probability bound on the iteration at which the exploiter first
// enters the valley:
//   -log(delta/2)/(h eta C_V) + 2K + K R_V/(h C_V) + log(V0)/(h eta C_V)
// where V0 = V(X_0) + V(Y_0). All inputs positive, delta < 1.
double hitting_time_bound(double delta, double trials, double eta, double h,
                          double c_v, double r_v, double v0);

// V(x) = exp(eta F(x)). Throws if the exponent overflows a double.
double lyapunov_value(const Objective& obj, const Point& x, double eta);

// Coarse grid estimate of D = max ||x - h grad F(x) - x*|| over the sublevel
// set {F <= r_v} intersected with `box`, sampling points_per_dim points per
// axis. Returns 0 when no grid point lies in the sublevel set.
double estimate_drift_radius(const Objective& obj, const Box& box,
                             const Point& x_star, double h, double r_v,
                             int points_per_dim);

// Inputs for the full certificate: objective constants plus run parameters.
// drift_radius is the D above; supply it directly or let the report
// estimator compute it from the objective.
struct BoundInputs {
  TheoryParams params;
  double gamma = 0.0;
  double h = 0.0;
  double delta = 0.0;         // failure probability budget
  double eps = 0.0;           // target valley level
  double drift_radius = 0.0;  // D
  double v0 = 2.0;            // V(X_0) + V(Y_0); 2 when both start at F = 0
};

// End-to-end complexity certificate. Counts are real-valued thresholds; use
// std::ceil for integer iteration budgets.
struct BoundReport {
  double c_v = 0.0;
  double r_v = 0.0;
  double eta_max = 0.0;
  double alpha_lower = 0.0;   // small-set landing probability bound
  double trials = 0.0;        // K(delta)
  double iters_in_valley = 0.0;  // k(eps)
  double hitting_time = 0.0;  // T(delta)
  double total = 0.0;         // N = T(delta) + k(eps)
};

// Composes the constants into the iteration-complexity certificate. Uses the
// strongly convex valley count when params.strong_convexity > 0 and the
// merely convex count otherwise.
BoundReport compute_bound_report(const BoundInputs& inputs);

}  // namespace replicax
