#include "replicax/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace replicax {

LyapunovConstants lyapunov_constants(const TheoryParams& params, double gamma,
                                     double h) {
  params.validate();
  if (gamma <= 0.0) {
    throw std::invalid_argument("lyapunov_constants: gamma must be > 0");
  }
  if (h <= 0.0 || h > 1.0 / (2.0 * params.smoothness)) {
    throw std::invalid_argument(
        "lyapunov_constants: need 0 < h <= 1/(2L) for the drift bound");
  }
  LyapunovConstants out;
  out.c_v = params.coercivity_offset / 4.0 +
            4.0 * gamma * params.smoothness * params.dim;
  out.r_v = 8.0 * out.c_v / params.coercivity_slope;
  out.eta_max = 1.0 / (8.0 * gamma);
  return out;
}

double unit_ball_volume(int dim) {
  if (dim < 1) throw std::invalid_argument("unit_ball_volume: dim must be >= 1");
  const double half = static_cast<double>(dim) / 2.0;
  return std::pow(kPi, half) / std::tgamma(half + 1.0);
}

double smallset_alpha(double r, double big_d, double gamma, double h,
                      int dim) {
  if (r <= 0.0) throw std::invalid_argument("smallset_alpha: r must be > 0");
  if (big_d < 0.0) {
    throw std::invalid_argument("smallset_alpha: D must be >= 0");
  }
  const double gh = gamma * h;
  if (gh <= 0.0) {
    throw std::invalid_argument("smallset_alpha: gamma*h must be > 0");
  }
  const double d = dim;
  // Work in log space: the factors overflow/underflow separately long before
  // the product leaves double range.
  const double log_alpha = std::log(unit_ball_volume(dim)) + d * std::log(r) -
                           0.5 * d * std::log(4.0 * gh * kPi) -
                           (big_d * big_d + r * r) / (2.0 * gh);
  return std::exp(std::min(log_alpha, 0.0));
}

double iters_strongconvex(double eps, double r0, double m, double h) {
  if (!(eps > 0.0 && eps <= r0)) {
    throw std::invalid_argument("iters_strongconvex: need 0 < eps <= r0");
  }
  const double mh = m * h;
  if (!(mh > 0.0 && mh < 1.0)) {
    throw std::invalid_argument("iters_strongconvex: need 0 < m*h < 1");
  }
  // + 0.0 normalizes the -0.0 arising at eps == r0
  return (std::log(eps) - std::log(r0)) / std::log(1.0 - mh) + 0.0;
}

double iters_convex(double eps, double r0, double r_u, double h) {
  if (!(eps > 0.0 && eps <= r0)) {
    throw std::invalid_argument("iters_convex: need 0 < eps <= r0");
  }
  if (r_u <= 0.0 || h <= 0.0) {
    throw std::invalid_argument("iters_convex: need r_u > 0 and h > 0");
  }
  return (1.0 / eps - 1.0 / r0) * r_u * r_u / h;
}

double geometric_trials(double delta, double alpha) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("geometric_trials: need 0 < delta < 1");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("geometric_trials: need 0 < alpha < 1");
  }
  return std::log(delta / 2.0) / std::log(1.0 - alpha);
}

double hitting_time_bound(double delta, double trials, double eta, double h,
                          double c_v, double r_v, double v0) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("hitting_time_bound: need 0 < delta < 1");
  }
  if (trials <= 0.0 || eta <= 0.0 || h <= 0.0 || c_v <= 0.0 || r_v <= 0.0 ||
      v0 <= 0.0) {
    throw std::invalid_argument("hitting_time_bound: inputs must be positive");
  }
  const double hec = h * eta * c_v;
  return -std::log(delta / 2.0) / hec + 2.0 * trials +
         trials * r_v / (h * c_v) + std::log(v0) / hec;
}

double lyapunov_value(const Objective& obj, const Point& x, double eta) {
  if (eta <= 0.0) {
    throw std::invalid_argument("lyapunov_value: eta must be > 0");
  }
  const double exponent = eta * obj.eval(x);
  // exp overflows a double just above 709.78.
  if (exponent > 709.0) {
    throw std::overflow_error(
        "lyapunov_value: eta * F(x) too large for a double");
  }
  return std::exp(exponent);
}

double estimate_drift_radius(const Objective& obj, const Box& box,
                             const Point& x_star, double h, double r_v,
                             int points_per_dim) {
  box.validate();
  if (static_cast<int>(box.lower.size()) != obj.dim ||
      static_cast<int>(x_star.size()) != obj.dim) {
    throw std::invalid_argument(
        "estimate_drift_radius: box/x_star dimension mismatch");
  }
  if (points_per_dim < 2) {
    throw std::invalid_argument(
        "estimate_drift_radius: need at least 2 points per dimension");
  }
  if (h <= 0.0) {
    throw std::invalid_argument("estimate_drift_radius: h must be > 0");
  }
  const int d = obj.dim;
  std::vector<int> index(d, 0);
  Point x(d);
  double best = 0.0;
  while (true) {
    for (int j = 0; j < d; ++j) {
      const double t =
          static_cast<double>(index[j]) / (points_per_dim - 1);
      x[j] = box.lower[j] + t * (box.upper[j] - box.lower[j]);
    }
    if (obj.eval(x) <= r_v) {
      const Point g = obj.grad(x);
      double dist2 = 0.0;
      for (int j = 0; j < d; ++j) {
        const double delta = x[j] - h * g[j] - x_star[j];
        dist2 += delta * delta;
      }
      best = std::max(best, std::sqrt(dist2));
    }
    int j = 0;
    while (j < d && ++index[j] == points_per_dim) {
      index[j] = 0;
      ++j;
    }
    if (j == d) break;
  }
  return best;
}

BoundReport compute_bound_report(const BoundInputs& inputs) {
  const TheoryParams& p = inputs.params;
  const LyapunovConstants lc =
      lyapunov_constants(p, inputs.gamma, inputs.h);
  BoundReport report;
  report.c_v = lc.c_v;
  report.r_v = lc.r_v;
  report.eta_max = lc.eta_max;
  report.alpha_lower = smallset_alpha(p.inner_radius, inputs.drift_radius,
                                      inputs.gamma, inputs.h, p.dim);
  report.trials = geometric_trials(inputs.delta, report.alpha_lower);
  report.iters_in_valley =
      p.strong_convexity > 0.0
          ? iters_strongconvex(inputs.eps, p.valley_level,
                               p.strong_convexity, inputs.h)
          : iters_convex(inputs.eps, p.valley_level, p.outer_radius,
                         inputs.h);
  report.hitting_time =
      hitting_time_bound(inputs.delta, report.trials, report.eta_max,
                         inputs.h, report.c_v, report.r_v, inputs.v0);
  report.total = report.hitting_time + report.iters_in_valley;
  return report;
}

}  // namespace replicax
