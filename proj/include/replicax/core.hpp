#pragma once

// Core vocabulary for the replica-exchange optimization library: points,
// reproducible random streams, run traces, success criteria, and the
// divergence guard shared by every optimizer driver.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace replicax {

using Point = std::vector<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Any iterate with a coordinate beyond this bound (or a non-finite objective
// value) aborts the run with DivergenceError.
inline constexpr double kDivergenceBound = 1e12;

class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(std::int64_t iteration, const std::string& detail);
  std::int64_t iteration() const noexcept { return iteration_; }

 private:
  std::int64_t iteration_;
};

// Deterministic seed derivation (splitmix64 finalizer chain). Used to assign
// independent sub-streams to replications, sweep cells, and objective
// realizations from one base seed.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

// Reproducible pseudo-random stream. Built on std::mt19937_64, whose output
// sequence is pinned bit-for-bit by the C++ standard, with an explicit
// Box-Muller transform for normal draws (std::normal_distribution is
// implementation-defined and therefore not portable across toolchains).
// Every draw is a pure function of the stream state, so identical seeds give
// identical traces on every platform.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed = 0);

  std::uint64_t seed() const noexcept { return seed_; }

  // Uniform draw on [0, 1) with 53 random bits.
  double uniform();

  // Standard normal draw. Consumes exactly two engine words per draw so the
  // stream position never depends on previously returned values.
  double normal();

  // Independent child stream derived from this stream's seed (not its
  // current state); drawing from a child never perturbs the parent.
  RngStream split(std::uint64_t stream_index) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

// Vector of `dim` independent N(0,1) coordinates. Throws std::invalid_argument
// if dim < 1.
Point gaussian_draw(RngStream& rng, int dim);

double norm(const Point& p);
double euclidean_distance(const Point& a, const Point& b);

// Target used by the experiment harness to score a run: distance of X_n to
// x_star within tol; optionally an F-gap test against f_star.
struct SuccessCriterion {
  Point x_star;
  double tol = 1e-3;
  std::optional<double> f_star;
  double f_tol = 1e-3;
};

// Per-iteration scalar record. f_x / f_y are the objective values the
// algorithm computed for the exploiter (X) and explorer (Y) chains after the
// exchange step; single-chain modes duplicate f_x into f_y.
struct TraceRecord {
  std::int64_t n = 0;
  double f_x = 0.0;
  double f_y = 0.0;
  bool swapped = false;
};

struct TraceSnapshot {
  std::int64_t n = 0;
  Point x;
};

struct EvalCounts {
  std::int64_t exact_evals = 0;
  std::int64_t exact_grads = 0;
  std::int64_t oracle_value_samples = 0;
  std::int64_t oracle_grad_samples = 0;

  EvalCounts& operator+=(const EvalCounts& other);
};

// Full record of one optimizer run: one TraceRecord per iteration 1..N,
// position snapshots of the X chain every `stride` iterations (always
// including n = 0 and n = N), terminal positions, and evaluation tallies.
struct Trace {
  std::vector<TraceRecord> records;
  std::vector<TraceSnapshot> snapshots;
  Point x_final;
  Point y_final;
  std::int64_t iterations = 0;
  EvalCounts evals;

  // CSV with header n,fX,fY,swapped plus x0..x{d-1} columns filled on
  // snapshot rows. Values carry 17 significant digits so doubles round-trip
  // exactly.
  void write_csv(std::ostream& out) const;
};

// Default snapshot stride: max(1, iterations / 1000).
std::int64_t default_snapshot_stride(std::int64_t iterations);

// Throws DivergenceError if any coordinate exceeds kDivergenceBound in
// magnitude or the objective value is non-finite.
void guard_divergence(const Point& x, double f, std::int64_t iteration);

// Shortest decimal form that round-trips a double (up to 17 significant
// digits).
std::string format_g17(double v);

}  // namespace replicax
