#include "replicax/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace replicax {

namespace {

void check_dim(const Point& x, int dim, const char* who) {
  if (static_cast<int>(x.size()) != dim) {
    throw std::invalid_argument(std::string(who) + ": expected dimension " +
                                std::to_string(dim) + ", got " +
                                std::to_string(x.size()));
  }
}

}  // namespace

void Box::validate() const {
  if (lower.empty() || lower.size() != upper.size()) {
    throw std::invalid_argument("Box: lower/upper dimension mismatch");
  }
  for (std::size_t j = 0; j < lower.size(); ++j) {
    if (!(lower[j] < upper[j])) {
      throw std::invalid_argument("Box: lower must be strictly below upper");
    }
  }
}

bool Box::contains(const Point& x) const {
  check_dim(x, static_cast<int>(lower.size()), "Box::contains");
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] < lower[j] || x[j] > upper[j]) return false;
  }
  return true;
}

double box_penalty(const Box& box, const Point& x) {
  check_dim(x, static_cast<int>(box.lower.size()), "box_penalty");
  double p = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] <= box.lower[j]) {
      const double d = x[j] - box.lower[j];
      p += d * d;
    } else if (x[j] >= box.upper[j]) {
      const double d = x[j] - box.upper[j];
      p += d * d;
    }
  }
  return p;
}

void add_box_penalty_grad(const Box& box, const Point& x, Point& grad) {
  check_dim(x, static_cast<int>(box.lower.size()), "add_box_penalty_grad");
  check_dim(grad, static_cast<int>(box.lower.size()), "add_box_penalty_grad");
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] <= box.lower[j]) {
      grad[j] += 2.0 * (x[j] - box.lower[j]);
    } else if (x[j] >= box.upper[j]) {
      grad[j] += 2.0 * (x[j] - box.upper[j]);
    }
  }
}

Point uniform_in_box(const Box& box, RngStream& rng) {
  Point x(box.lower.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    x[j] = box.lower[j] + rng.uniform() * (box.upper[j] - box.lower[j]);
  }
  return x;
}

int GaussianMixtureSpec::dim() const {
  return components.empty() ? 0
                            : static_cast<int>(components.front().mean.size());
}

void GaussianMixtureSpec::validate() const {
  if (components.empty()) {
    throw std::invalid_argument("GaussianMixtureSpec: no components");
  }
  box.validate();
  const std::size_t d = box.lower.size();
  double total = 0.0;
  for (const MixtureComponent& c : components) {
    if (c.mean.size() != d || c.cov_diag.size() != d) {
      throw std::invalid_argument(
          "GaussianMixtureSpec: component dimension mismatch");
    }
    if (!(c.weight > 0.0)) {
      throw std::invalid_argument(
          "GaussianMixtureSpec: weights must be positive");
    }
    for (double v : c.cov_diag) {
      if (!(v > 0.0)) {
        throw std::invalid_argument(
            "GaussianMixtureSpec: covariance diagonal must be positive");
      }
    }
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument(
        "GaussianMixtureSpec: weights must sum to 1 (got " + format_g17(total) +
        "); call normalize_weights");
  }
}

void normalize_weights(GaussianMixtureSpec& spec) {
  double total = 0.0;
  for (const MixtureComponent& c : spec.components) {
    if (!(c.weight > 0.0)) {
      throw std::invalid_argument("normalize_weights: weights must be positive");
    }
    total += c.weight;
  }
  for (MixtureComponent& c : spec.components) c.weight /= total;
}

GaussianMixtureSpec meshgrid25_spec(std::uint64_t weight_seed) {
  GaussianMixtureSpec spec;
  spec.box = Box{{-1.0, -1.0}, {5.0, 5.0}};
  RngStream rng(weight_seed);
  for (int gx = 0; gx <= 4; ++gx) {
    for (int gy = 0; gy <= 4; ++gy) {
      MixtureComponent c;
      c.weight = 0.5 + rng.uniform();  // Uniform(0.5, 1.5), normalized below
      c.mean = {static_cast<double>(gx), static_cast<double>(gy)};
      c.cov_diag = {0.1, 0.1};
      spec.components.push_back(std::move(c));
    }
  }
  normalize_weights(spec);
  return spec;
}

namespace {

// Flattened mixture coefficients shared by the eval/grad closures.
struct MixtureState {
  int dim = 0;
  int count = 0;
  Box box;
  std::vector<double> means;       // count * dim
  std::vector<double> inv_cov;     // count * dim
  std::vector<double> norm_const;  // w_i * (2 pi)^{-d/2} det(C_i)^{-1/2}
};

std::shared_ptr<const MixtureState> build_mixture_state(
    const GaussianMixtureSpec& spec) {
  spec.validate();
  auto st = std::make_shared<MixtureState>();
  st->dim = spec.dim();
  st->count = static_cast<int>(spec.components.size());
  st->box = spec.box;
  st->means.reserve(st->count * st->dim);
  st->inv_cov.reserve(st->count * st->dim);
  for (const MixtureComponent& c : spec.components) {
    double det = 1.0;
    for (int j = 0; j < st->dim; ++j) {
      st->means.push_back(c.mean[j]);
      st->inv_cov.push_back(1.0 / c.cov_diag[j]);
      det *= c.cov_diag[j];
    }
    st->norm_const.push_back(
        c.weight * std::pow(2.0 * kPi, -0.5 * st->dim) / std::sqrt(det));
  }
  return st;
}

}  // namespace

Objective make_gaussian_mixture(const GaussianMixtureSpec& spec) {
  auto st = build_mixture_state(spec);
  Objective obj;
  obj.dim = st->dim;
  obj.box = spec.box;
  obj.eval = [st](const Point& x) {
    check_dim(x, st->dim, "gaussian_mixture eval");
    double density = 0.0;
    for (int i = 0; i < st->count; ++i) {
      const double* mean = &st->means[i * st->dim];
      const double* ic = &st->inv_cov[i * st->dim];
      double q = 0.0;
      for (int j = 0; j < st->dim; ++j) {
        const double d = x[j] - mean[j];
        q += d * d * ic[j];
      }
      density += st->norm_const[i] * std::exp(-0.5 * q);
    }
    return -density + box_penalty(st->box, x);
  };
  obj.grad = [st](const Point& x) {
    check_dim(x, st->dim, "gaussian_mixture grad");
    Point g(st->dim, 0.0);
    for (int i = 0; i < st->count; ++i) {
      const double* mean = &st->means[i * st->dim];
      const double* ic = &st->inv_cov[i * st->dim];
      double q = 0.0;
      for (int j = 0; j < st->dim; ++j) {
        const double d = x[j] - mean[j];
        q += d * d * ic[j];
      }
      const double phi = st->norm_const[i] * std::exp(-0.5 * q);
      for (int j = 0; j < st->dim; ++j) {
        g[j] += phi * ic[j] * (x[j] - mean[j]);
      }
    }
    add_box_penalty_grad(st->box, x, g);
    return g;
  };
  return obj;
}

Objective make_quadratic(int dim) {
  if (dim < 1) throw std::invalid_argument("make_quadratic: dim must be >= 1");
  Objective obj;
  obj.dim = dim;
  obj.eval = [dim](const Point& x) {
    check_dim(x, dim, "quadratic eval");
    double s = 0.0;
    for (double v : x) s += v * v;
    return 0.5 * s;
  };
  obj.grad = [dim](const Point& x) {
    check_dim(x, dim, "quadratic grad");
    return x;
  };
  obj.minimizer = Point(dim, 0.0);
  obj.min_value = 0.0;
  // No penalty term (the quadratic is already coercive); the box only marks
  // the region used for probes and uniform initializers.
  obj.box = Box{Point(dim, -5.0), Point(dim, 5.0)};
  return obj;
}

Objective make_rastrigin(int dim) {
  if (dim < 1) throw std::invalid_argument("make_rastrigin: dim must be >= 1");
  const Box box{Point(dim, -5.0), Point(dim, 5.0)};
  Objective obj;
  obj.dim = dim;
  obj.box = box;
  obj.eval = [dim, box](const Point& x) {
    check_dim(x, dim, "rastrigin eval");
    double s = 10.0 * dim;
    for (double v : x) s += v * v - 10.0 * std::cos(2.0 * kPi * v);
    return s + box_penalty(box, x);
  };
  obj.grad = [dim, box](const Point& x) {
    check_dim(x, dim, "rastrigin grad");
    Point g(dim);
    for (int j = 0; j < dim; ++j) {
      g[j] = 2.0 * x[j] + 20.0 * kPi * std::sin(2.0 * kPi * x[j]);
    }
    add_box_penalty_grad(box, x, g);
    return g;
  };
  obj.minimizer = Point(dim, 0.0);
  obj.min_value = 0.0;
  return obj;
}

Objective make_griewank(int dim) {
  if (dim < 1) throw std::invalid_argument("make_griewank: dim must be >= 1");
  const Box box{Point(dim, -5.0), Point(dim, 5.0)};
  // Coordinate scales 1/sqrt(i) with 1-based i.
  std::vector<double> scale(dim);
  for (int j = 0; j < dim; ++j) scale[j] = 1.0 / std::sqrt(j + 1.0);
  Objective obj;
  obj.dim = dim;
  obj.box = box;
  obj.eval = [dim, box, scale](const Point& x) {
    check_dim(x, dim, "griewank eval");
    double quad = 0.0;
    double prod = 1.0;
    for (int j = 0; j < dim; ++j) {
      quad += x[j] * x[j];
      prod *= std::cos(x[j] * scale[j]);
    }
    return quad / 4000.0 - prod + 1.0 + box_penalty(box, x);
  };
  obj.grad = [dim, box, scale](const Point& x) {
    check_dim(x, dim, "griewank grad");
    std::vector<double> cosv(dim);
    for (int j = 0; j < dim; ++j) cosv[j] = std::cos(x[j] * scale[j]);
    // prefix[j] = prod_{k<j} cos_k, suffix accumulated right-to-left, so the
    // leave-one-out products need no division (cos may vanish).
    std::vector<double> prefix(dim, 1.0);
    for (int j = 1; j < dim; ++j) prefix[j] = prefix[j - 1] * cosv[j - 1];
    double suffix = 1.0;
    Point g(dim);
    for (int j = dim - 1; j >= 0; --j) {
      const double others = prefix[j] * suffix;
      g[j] = x[j] / 2000.0 +
             others * std::sin(x[j] * scale[j]) * scale[j];
      suffix *= cosv[j];
    }
    add_box_penalty_grad(box, x, g);
    return g;
  };
  obj.minimizer = Point(dim, 0.0);
  obj.min_value = 0.0;
  return obj;
}

Objective add_l2_regularizer(const Objective& objective, double lambda) {
  if (!(lambda >= 0.0)) {
    throw std::invalid_argument("add_l2_regularizer: lambda must be >= 0");
  }
  Objective obj = objective;
  const auto base_eval = objective.eval;
  const auto base_grad = objective.grad;
  obj.eval = [base_eval, lambda](const Point& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return base_eval(x) + lambda * s;
  };
  obj.grad = [base_grad, lambda](const Point& x) {
    Point g = base_grad(x);
    for (std::size_t j = 0; j < x.size(); ++j) g[j] += 2.0 * lambda * x[j];
    return g;
  };
  // The regularizer vanishes exactly at the origin and is positive elsewhere,
  // so a minimizer at the origin survives; any other annotation is dropped.
  const bool at_origin =
      objective.minimizer.has_value() &&
      std::all_of(objective.minimizer->begin(), objective.minimizer->end(),
                  [](double v) { return v == 0.0; });
  if (!at_origin) {
    obj.minimizer.reset();
    obj.min_value.reset();
  }
  return obj;
}

double StochasticOracle::sample_value(const Point& x, RngStream& rng) const {
  return value_with_batch(draw_value_batch(rng), x);
}

KdeOracle::KdeOracle(GaussianMixtureSpec data_law, double bandwidth,
                     int batch_size)
    : law_(std::move(data_law)), bandwidth_(bandwidth),
      batch_size_(batch_size) {
  law_.validate();
  if (!(bandwidth_ > 0.0)) {
    throw std::invalid_argument("KdeOracle: bandwidth must be positive");
  }
  if (batch_size_ < 1) {
    throw std::invalid_argument("KdeOracle: batch size must be >= 1");
  }
  kernel_norm_ = std::pow(2.0 * kPi * bandwidth_, -0.5 * law_.dim());
  double cum = 0.0;
  for (const MixtureComponent& c : law_.components) {
    cum += c.weight;
    cum_weights_.push_back(cum);
    Point s(c.cov_diag.size());
    for (std::size_t j = 0; j < s.size(); ++j) s[j] = std::sqrt(c.cov_diag[j]);
    sqrt_cov_.push_back(std::move(s));
  }
  cum_weights_.back() = 1.0;  // guard against rounding in the final bin
}

int KdeOracle::dim() const { return law_.dim(); }

Point KdeOracle::draw_data_sample(RngStream& rng) const {
  const double u = rng.uniform();
  std::size_t i =
      std::lower_bound(cum_weights_.begin(), cum_weights_.end(), u) -
      cum_weights_.begin();
  if (i >= cum_weights_.size()) i = cum_weights_.size() - 1;
  const MixtureComponent& c = law_.components[i];
  const Point& sc = sqrt_cov_[i];
  Point s(c.mean.size());
  for (std::size_t j = 0; j < s.size(); ++j) {
    s[j] = c.mean[j] + sc[j] * rng.normal();
  }
  return s;
}

ValueBatch KdeOracle::draw_value_batch(RngStream& rng) const {
  const int d = dim();
  ValueBatch batch;
  batch.dim = d;
  batch.flat.resize(static_cast<std::size_t>(batch_size_) * d);
  double* out = batch.flat.data();
  for (int i = 0; i < batch_size_; ++i) {
    // Same draw order as draw_data_sample: one uniform, then d normals.
    const double u = rng.uniform();
    std::size_t c =
        std::lower_bound(cum_weights_.begin(), cum_weights_.end(), u) -
        cum_weights_.begin();
    if (c >= cum_weights_.size()) c = cum_weights_.size() - 1;
    const MixtureComponent& comp = law_.components[c];
    const Point& sc = sqrt_cov_[c];
    for (int j = 0; j < d; ++j) {
      *out++ = comp.mean[j] + sc[j] * rng.normal();
    }
  }
  return batch;
}

double KdeOracle::kernel(const Point& x, const Point& s) const {
  check_dim(x, dim(), "KdeOracle::kernel");
  check_dim(s, dim(), "KdeOracle::kernel");
  double sq = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double d = x[j] - s[j];
    sq += d * d;
  }
  return kernel_norm_ * std::exp(-sq / (2.0 * bandwidth_));
}

double KdeOracle::value_with_batch(const ValueBatch& batch,
                                   const Point& x) const {
  if (batch.empty() || batch.dim != dim()) {
    throw std::invalid_argument(
        "KdeOracle::value_with_batch: empty batch or dimension mismatch");
  }
  check_dim(x, dim(), "KdeOracle::value_with_batch");
  const int d = dim();
  const int count = batch.count();
  const double inv_two_bw = 1.0 / (2.0 * bandwidth_);
  double acc = 0.0;
  const double* s = batch.flat.data();
  for (int i = 0; i < count; ++i, s += d) {
    double sq = 0.0;
    for (int j = 0; j < d; ++j) {
      const double diff = x[j] - s[j];
      sq += diff * diff;
    }
    acc += std::exp(-sq * inv_two_bw);
  }
  return -kernel_norm_ * acc / static_cast<double>(count) +
         box_penalty(law_.box, x);
}

Point KdeOracle::sample_grad(const Point& x, RngStream& rng) const {
  check_dim(x, dim(), "KdeOracle::sample_grad");
  const int d = dim();
  const double inv_two_bw = 1.0 / (2.0 * bandwidth_);
  Point g(d, 0.0);
  Point s(d);
  for (int i = 0; i < batch_size_; ++i) {
    const double u = rng.uniform();
    std::size_t c =
        std::lower_bound(cum_weights_.begin(), cum_weights_.end(), u) -
        cum_weights_.begin();
    if (c >= cum_weights_.size()) c = cum_weights_.size() - 1;
    const MixtureComponent& comp = law_.components[c];
    const Point& sc = sqrt_cov_[c];
    double sq = 0.0;
    for (int j = 0; j < d; ++j) {
      s[j] = comp.mean[j] + sc[j] * rng.normal();
      const double diff = x[j] - s[j];
      sq += diff * diff;
    }
    const double kappa = std::exp(-sq * inv_two_bw);
    for (int j = 0; j < d; ++j) g[j] += kappa * (x[j] - s[j]);
  }
  const double inv =
      kernel_norm_ / (static_cast<double>(batch_size_) * bandwidth_);
  for (int j = 0; j < d; ++j) g[j] *= inv;
  add_box_penalty_grad(law_.box, x, g);
  return g;
}

KdeObjective make_kde_objective(const GaussianMixtureSpec& data_law,
                                double bandwidth, int batch_size) {
  // Convolving the data law with the Gaussian kernel inflates every component
  // covariance by the bandwidth, so the exact objective is itself a mixture.
  GaussianMixtureSpec smoothed = data_law;
  for (MixtureComponent& c : smoothed.components) {
    for (double& v : c.cov_diag) v += bandwidth;
  }
  KdeObjective result;
  result.exact = make_gaussian_mixture(smoothed);
  result.oracle =
      std::make_shared<const KdeOracle>(data_law, bandwidth, batch_size);
  return result;
}

GaussianNoiseOracle::GaussianNoiseOracle(Objective base, double value_noise_sd,
                                         double grad_noise_sd)
    : base_(std::move(base)), value_sd_(value_noise_sd),
      grad_sd_(grad_noise_sd) {
  if (!base_.eval || !base_.grad) {
    throw std::invalid_argument("GaussianNoiseOracle: objective lacks eval/grad");
  }
  if (!(value_sd_ >= 0.0) || !(grad_sd_ >= 0.0)) {
    throw std::invalid_argument("GaussianNoiseOracle: noise sd must be >= 0");
  }
}

ValueBatch GaussianNoiseOracle::draw_value_batch(RngStream& rng) const {
  // Zero noise consumes no randomness so a zero-noise online run is
  // draw-for-draw identical to its offline counterpart.
  if (value_sd_ == 0.0) return {};
  return ValueBatch{1, {rng.normal()}};
}

double GaussianNoiseOracle::value_with_batch(const ValueBatch& batch,
                                             const Point& x) const {
  const double noise = batch.empty() ? 0.0 : value_sd_ * batch.flat.front();
  return base_.eval(x) + noise;
}

Point GaussianNoiseOracle::sample_grad(const Point& x, RngStream& rng) const {
  Point g = base_.grad(x);
  if (grad_sd_ > 0.0) {
    for (double& v : g) v += grad_sd_ * rng.normal();
  }
  return g;
}

void TheoryParams::validate() const {
  if (!(smoothness > 0.0)) {
    throw std::invalid_argument("TheoryParams: smoothness L must be positive");
  }
  if (!(coercivity_slope > 0.0)) {
    throw std::invalid_argument(
        "TheoryParams: coercivity slope lambda_c must be positive");
  }
  if (!(coercivity_offset >= 0.0)) {
    throw std::invalid_argument(
        "TheoryParams: coercivity offset M_c must be >= 0");
  }
  if (!(strong_convexity >= 0.0)) {
    throw std::invalid_argument("TheoryParams: m must be >= 0");
  }
  if (!(hessian_bound >= strong_convexity)) {
    throw std::invalid_argument("TheoryParams: M must be >= m");
  }
  if (!(valley_level > 0.0)) {
    throw std::invalid_argument("TheoryParams: valley level r0 must be positive");
  }
  if (!(inner_radius > 0.0) || !(inner_radius <= outer_radius)) {
    throw std::invalid_argument("TheoryParams: need 0 < r_l <= r_u");
  }
  if (dim < 1) {
    throw std::invalid_argument("TheoryParams: dim must be >= 1");
  }
}

TheoryParams quadratic_theory_params(int dim) {
  TheoryParams p;
  p.smoothness = 1.0;
  p.coercivity_slope = 2.0;
  p.coercivity_offset = 0.0;
  p.strong_convexity = 1.0;
  p.hessian_bound = 1.0;
  p.valley_level = 1.0;
  p.inner_radius = std::sqrt(2.0);
  p.outer_radius = std::sqrt(2.0);
  p.dim = dim;
  return p;
}

}  // namespace replicax
