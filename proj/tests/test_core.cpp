#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "replicax/core.hpp"

using namespace replicax;

TEST_CASE("mix_seed is deterministic and sensitive to every argument") {
  // Frozen values pin the seed-derivation scheme itself: changing the mixing
  // chain silently reseeds every experiment, so it must fail loudly here.
  CHECK(mix_seed(1, 2, 3) == 9613205829653846581ULL);
  CHECK(mix_seed(0, 0, 0) == 2558736989570252433ULL);
  CHECK(mix_seed(1, 2, 3) == mix_seed(1, 2, 3));
  CHECK(mix_seed(1, 2, 3) != mix_seed(2, 2, 3));
  CHECK(mix_seed(1, 2, 3) != mix_seed(1, 3, 3));
  CHECK(mix_seed(1, 2, 3) != mix_seed(1, 2, 4));
  CHECK(mix_seed(5, 7) == mix_seed(5, 7, 0));
}

TEST_CASE("RngStream draws are pinned bit-for-bit") {
  // mt19937_64's output sequence is specified by the standard and the
  // Box-Muller transform below is explicit arithmetic, so these constants
  // hold on every conforming platform.
  RngStream u(42);
  CHECK(u.uniform() == 0.75515553295453897);
  RngStream n(42);
  CHECK(n.normal() == -0.48121769980184492);
}

TEST_CASE("identical seeds reproduce identical sequences") {
  RngStream a(123), b(123);
  for (int i = 0; i < 200; ++i) {
    CHECK(a.normal() == b.normal());
    CHECK(a.uniform() == b.uniform());
  }
  RngStream c(124);
  RngStream d(123);
  d.normal();  // desynchronize
  bool all_equal = true;
  RngStream e(123);
  e.normal();
  for (int i = 0; i < 50; ++i) {
    if (c.normal() != e.normal()) all_equal = false;
  }
  CHECK_FALSE(all_equal);
}

TEST_CASE("split streams are independent of parent state and of each other") {
  RngStream parent(99);
  // Reference sequence: parent alone.
  RngStream ref(99);
  std::vector<double> expected;
  for (int i = 0; i < 10; ++i) expected.push_back(ref.normal());

  // Interleave child draws; the parent sequence must be unchanged.
  std::vector<double> got;
  for (int i = 0; i < 5; ++i) got.push_back(parent.normal());
  RngStream child = parent.split(0);
  for (int i = 0; i < 7; ++i) (void)child.normal();
  for (int i = 0; i < 5; ++i) got.push_back(parent.normal());
  CHECK(got == expected);

  // Children with distinct indices start from distinct seeds.
  RngStream c0 = parent.split(0);
  RngStream c1 = parent.split(1);
  CHECK(c0.seed() != c1.seed());
  CHECK(c0.seed() != parent.seed());
  // Splitting is a pure function of the parent seed.
  CHECK(RngStream(99).split(0).seed() == c0.seed());
}

TEST_CASE("normal draws have standard moments over 1e6 samples") {
  RngStream rng(7);
  const int n = 1000000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    s += z;
    s2 += z * z;
  }
  const double mean = s / n;
  const double var = s2 / n - mean * mean;
  CHECK(std::abs(mean) < 0.005);
  CHECK(std::abs(var - 1.0) < 0.01);
}

TEST_CASE("uniform draws live in [0,1) with mean near 1/2") {
  RngStream rng(3);
  const int n = 200000;
  double s = 0.0;
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    s += u;
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(std::abs(s / n - 0.5) < 0.005);
  CHECK(lo < 0.01);
  CHECK(hi > 0.99);
}

TEST_CASE("gaussian_draw validates dimension and fills iid coordinates") {
  RngStream rng(11);
  const Point z = gaussian_draw(rng, 3);
  CHECK(z.size() == 3);
  RngStream rng2(11);
  CHECK(z[0] == rng2.normal());
  CHECK(z[1] == rng2.normal());
  CHECK(z[2] == rng2.normal());
  CHECK_THROWS_AS(gaussian_draw(rng, 0), std::invalid_argument);
  CHECK_THROWS_AS(gaussian_draw(rng, -2), std::invalid_argument);
}

TEST_CASE("euclidean_distance and norm") {
  CHECK(euclidean_distance({0.0, 0.0}, {3.0, 4.0}) == 5.0);
  CHECK(euclidean_distance({1.0}, {1.0}) == 0.0);
  CHECK(norm({3.0, 4.0}) == 5.0);
  CHECK(norm({}) == 0.0);
  CHECK_THROWS_AS(euclidean_distance({1.0}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("default snapshot stride is max(1, N/1000)") {
  CHECK(default_snapshot_stride(10) == 1);
  CHECK(default_snapshot_stride(999) == 1);
  CHECK(default_snapshot_stride(1000) == 1);
  CHECK(default_snapshot_stride(5000) == 5);
  CHECK(default_snapshot_stride(1000000) == 1000);
}

TEST_CASE("divergence guard trips on huge coordinates and non-finite values") {
  guard_divergence({1.0, -2.0}, 0.5, 3);  // in bounds: no throw

  CHECK_THROWS_AS(guard_divergence({2e12, 0.0}, 0.0, 7), DivergenceError);
  CHECK_THROWS_AS(
      guard_divergence({std::nan(""), 0.0}, 0.0, 7), DivergenceError);
  CHECK_THROWS_AS(guard_divergence({0.0}, std::nan(""), 7), DivergenceError);
  CHECK_THROWS_AS(
      guard_divergence({0.0}, std::numeric_limits<double>::infinity(), 7),
      DivergenceError);

  try {
    guard_divergence({0.0}, std::nan(""), 12345);
    FAIL("expected DivergenceError");
  } catch (const DivergenceError& err) {
    CHECK(err.iteration() == 12345);
    CHECK(std::string(err.what()).find("12345") != std::string::npos);
  }
}

TEST_CASE("format_g17 round-trips doubles exactly") {
  CHECK(format_g17(0.5) == "0.5");
  CHECK(format_g17(0.1) == "0.10000000000000001");
  for (double v : {0.1, 1.0 / 3.0, kPi, 1e-300, -123.456789012345678, 2e12}) {
    const std::string s = format_g17(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
}

TEST_CASE("trace CSV layout: records plus snapshot coordinate columns") {
  Trace t;
  t.iterations = 2;
  t.records = {{1, 0.5, 0.25, false}, {2, 0.125, 0.5, true}};
  t.snapshots = {{0, {1.0, 2.0}}, {2, {0.5, -1.0}}};
  std::ostringstream out;
  t.write_csv(out);
  CHECK(out.str() ==
        "n,fX,fY,swapped,x0,x1\n"
        "0,,,,1,2\n"
        "1,0.5,0.25,0,,\n"
        "2,0.125,0.5,1,0.5,-1\n");
}

TEST_CASE("trace CSV without snapshots has no coordinate columns") {
  Trace t;
  t.iterations = 1;
  t.records = {{1, 2.0, 3.0, false}};
  std::ostringstream out;
  t.write_csv(out);
  CHECK(out.str() == "n,fX,fY,swapped\n1,2,3,0\n");
}

TEST_CASE("eval counts accumulate") {
  EvalCounts a{1, 2, 3, 4};
  const EvalCounts b{10, 20, 30, 40};
  a += b;
  CHECK(a.exact_evals == 11);
  CHECK(a.exact_grads == 22);
  CHECK(a.oracle_value_samples == 33);
  CHECK(a.oracle_grad_samples == 44);
}

TEST_CASE("success criterion defaults") {
  SuccessCriterion c;
  CHECK(c.tol == 1e-3);
  CHECK_FALSE(c.f_star.has_value());
  CHECK(c.f_tol == 1e-3);
}
