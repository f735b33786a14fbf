#include "replicax/core.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace replicax {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

std::uint64_t splitmix_finalize(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

DivergenceError::DivergenceError(std::int64_t iteration, const std::string& detail)
    : std::runtime_error("divergence at iteration " + std::to_string(iteration) +
                         ": " + detail),
      iteration_(iteration) {}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = splitmix_finalize(base + kGolden);
  s = splitmix_finalize(s + kGolden * (a + 1));
  s = splitmix_finalize(s + kGolden * (b + 1));
  return s;
}

RngStream::RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

double RngStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::normal() {
  // Box-Muller with u1 in (0,1] so the log is always finite.
  const double u1 = static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

RngStream RngStream::split(std::uint64_t stream_index) const {
  return RngStream(mix_seed(seed_, stream_index, 0x53504c4954ull));
}

Point gaussian_draw(RngStream& rng, int dim) {
  if (dim < 1) {
    throw std::invalid_argument("gaussian_draw: dim must be >= 1, got " +
                                std::to_string(dim));
  }
  Point z(static_cast<std::size_t>(dim));
  for (double& zi : z) zi = rng.normal();
  return z;
}

double norm(const Point& p) {
  double s = 0.0;
  for (double v : p) s += v * v;
  return std::sqrt(s);
}

double euclidean_distance(const Point& a, const Point& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument(
        "euclidean_distance: dimension mismatch (" + std::to_string(a.size()) +
        " vs " + std::to_string(b.size()) + ")");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

EvalCounts& EvalCounts::operator+=(const EvalCounts& other) {
  exact_evals += other.exact_evals;
  exact_grads += other.exact_grads;
  oracle_value_samples += other.oracle_value_samples;
  oracle_grad_samples += other.oracle_grad_samples;
  return *this;
}

std::int64_t default_snapshot_stride(std::int64_t iterations) {
  return std::max<std::int64_t>(1, iterations / 1000);
}

void guard_divergence(const Point& x, double f, std::int64_t iteration) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || std::abs(x[i]) > kDivergenceBound) {
      throw DivergenceError(iteration, "coordinate " + std::to_string(i) +
                                           " = " + format_g17(x[i]));
    }
  }
  if (!std::isfinite(f)) {
    throw DivergenceError(iteration, "objective value = " + format_g17(f));
  }
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void Trace::write_csv(std::ostream& out) const {
  const std::size_t dim = snapshots.empty() ? 0 : snapshots.front().x.size();
  out << "n,fX,fY,swapped";
  for (std::size_t j = 0; j < dim; ++j) out << ",x" << j;
  out << '\n';

  std::size_t ri = 0;
  std::size_t si = 0;
  while (ri < records.size() || si < snapshots.size()) {
    std::int64_t n = 0;
    if (ri < records.size() && si < snapshots.size()) {
      n = std::min(records[ri].n, snapshots[si].n);
    } else if (ri < records.size()) {
      n = records[ri].n;
    } else {
      n = snapshots[si].n;
    }

    out << n;
    if (ri < records.size() && records[ri].n == n) {
      const TraceRecord& r = records[ri++];
      out << ',' << format_g17(r.f_x) << ',' << format_g17(r.f_y) << ','
          << (r.swapped ? 1 : 0);
    } else {
      out << ",,,";
    }
    if (si < snapshots.size() && snapshots[si].n == n) {
      const TraceSnapshot& s = snapshots[si++];
      for (double v : s.x) out << ',' << format_g17(v);
    } else {
      for (std::size_t j = 0; j < dim; ++j) out << ',';
    }
    out << '\n';
  }
}

}  // namespace replicax
