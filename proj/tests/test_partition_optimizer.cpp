#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "subspace_bounds/bound_functions.hpp"
#include "subspace_bounds/errors.hpp"
#include "subspace_bounds/partition_optimizer.hpp"

using namespace sbounds;
using doctest::Approx;

namespace {

constexpr DenominatorKind kKinds[] = {DenominatorKind::generic, DenominatorKind::off_diagonal};

double half_asin_step(DenominatorKind kind, double a, double b) {
  return 0.5 * std::asin(std::min(1.0, kPi * (b - a) / denominator(kind, a)));
}

// Dense scan over the interior point of a two-step partition. The endpoints
// are included: the infimum may sit on a collapsed step.
double brute_force_two_steps(double x, DenominatorKind kind) {
  double best = std::numeric_limits<double>::infinity();
  constexpr int kSamples = 200000;
  for (int i = 0; i <= kSamples; ++i) {
    const double t = x * i / kSamples;
    if (kPi * t / denominator(kind, 0.0) > 1.0) break;
    if (kPi * (x - t) / denominator(kind, t) > 1.0) continue;
    best = std::min(best, half_asin_step(kind, 0.0, t) + half_asin_step(kind, t, x));
  }
  return best;
}

}  // namespace

TEST_CASE("denominator values and derivatives") {
  CHECK(denominator(DenominatorKind::generic, 0.0) == 1.0);
  CHECK(denominator(DenominatorKind::off_diagonal, 0.0) == 1.0);
  CHECK(denominator(DenominatorKind::generic, 0.25) == 0.5);
  CHECK(denominator(DenominatorKind::off_diagonal, 0.5) == Approx(2.0 - std::sqrt(2.0)).epsilon(1e-15));
  CHECK(std::abs(denominator(DenominatorKind::off_diagonal, kSqrt3Over2)) <= 1e-15);
  CHECK(kappa_max(DenominatorKind::generic) == 0.5);
  CHECK(kappa_max(DenominatorKind::off_diagonal) == kSqrt3Over2);

  for (DenominatorKind kind : kKinds) {
    for (int i = 1; i < 40; ++i) {
      const double k = kappa_max(kind) * i / 40.0;
      const double h = 1e-5;
      const double fd1 = (denominator(kind, k + h) - denominator(kind, k - h)) / (2 * h);
      const double fd2 =
          (denominator(kind, k + h) - 2 * denominator(kind, k) + denominator(kind, k - h)) / (h * h);
      CHECK(denominator_slope(kind, k) == Approx(fd1).epsilon(1e-8));
      CHECK(std::abs(denominator_curvature(kind, k) - fd2) <= 1e-4);
      // Near the singular end the cancellation-free form must still agree
      // with the direct one to a few ulps of the terms involved.
      if (kind == DenominatorKind::off_diagonal)
        CHECK(std::abs(denominator(kind, k) - (2.0 - std::sqrt(1.0 + 4.0 * k * k))) <= 1e-15);
    }
  }
}

TEST_CASE("PartitionPoints validation") {
  CHECK_NOTHROW(PartitionPoints({0.0, 0.1, 0.2}, DenominatorKind::generic));
  CHECK_THROWS_AS(PartitionPoints({0.1, 0.2}, DenominatorKind::generic), DomainError);
  CHECK_THROWS_AS(PartitionPoints({0.0}, DenominatorKind::generic), DomainError);
  CHECK_THROWS_AS(PartitionPoints({0.0, 0.2, 0.1}, DenominatorKind::generic), DomainError);
  CHECK_THROWS_AS(PartitionPoints({0.0, 0.1, 0.1, 0.2}, DenominatorKind::generic), DomainError);
  // Step 0.4 from 0 exceeds 1/pi.
  CHECK_THROWS_AS(PartitionPoints({0.0, 0.4}, DenominatorKind::generic), DomainError);
  CHECK_THROWS_AS(PartitionPoints({0.0, 0.3, 0.5}, DenominatorKind::generic), DomainError);
  const PartitionPoints p({0.0, 0.15, 0.3}, DenominatorKind::generic);
  CHECK(p.steps() == 2);
  CHECK(p.target() == 0.3);
}

TEST_CASE("objective examples") {
  const double single = 0.5 * std::asin(0.2 * kPi);
  CHECK(objective(PartitionPoints({0.0, 0.2}, DenominatorKind::generic)) == Approx(single).epsilon(1e-15));
  CHECK(objective(PartitionPoints({0.0, 0.2}, DenominatorKind::off_diagonal)) == Approx(single).epsilon(1e-15));
  CHECK(objective(PartitionPoints({0.0, 1.0 / kPi}, DenominatorKind::generic)) ==
        Approx(kPi / 4).epsilon(1e-15));
  const double two = half_asin_step(DenominatorKind::generic, 0.0, 0.15) +
                     half_asin_step(DenominatorKind::generic, 0.15, 0.3);
  CHECK(objective(PartitionPoints({0.0, 0.15, 0.3}, DenominatorKind::generic)) == Approx(two).epsilon(1e-15));
}

TEST_CASE("minimal_steps and seed_partition") {
  CHECK(minimal_steps(0.2, DenominatorKind::generic) == 1);
  CHECK(minimal_steps(1.0 / kPi, DenominatorKind::generic) == 1);
  CHECK(minimal_steps(0.33, DenominatorKind::generic) == 2);
  for (DenominatorKind kind : kKinds)
    for (double x : {0.1, 0.3, 0.45, admissible_max(kind) * 0.999}) {
      const int n = minimal_steps(x, kind);
      CHECK(PartitionPoints::feasible(seed_partition(x, n, kind), kind));
      CHECK(PartitionPoints::feasible(seed_partition(x, n + 3, kind), kind));
      if (n > 1) CHECK_THROWS_AS(seed_partition(x, n - 1, kind), DomainError);
    }
}

TEST_CASE("optimize_fixed_n examples") {
  const auto one = optimize_fixed_n(0.2, 1, DenominatorKind::generic);
  CHECK(one.value == Approx(generic_sin2theta(0.2)).epsilon(1e-15));
  REQUIRE(one.partition.size() == 2);
  CHECK(one.partition.back() == 0.2);

  const auto two = optimize_fixed_n(0.3, 2, DenominatorKind::generic);
  CHECK(two.value <= objective(PartitionPoints({0.0, 0.15, 0.3}, DenominatorKind::generic)));
  const auto three = optimize_fixed_n(0.3, 3, DenominatorKind::generic);
  const auto best = estimating_function(0.3, DenominatorKind::generic);
  CHECK(best.value <= two.value + 1e-15);
  CHECK(best.value <= three.value + 1e-15);
  CHECK_THROWS_AS(optimize_fixed_n(0.45, 1, DenominatorKind::generic), DomainError);
}

TEST_CASE("two-step optimum matches a dense scan") {
  for (DenominatorKind kind : kKinds)
    for (double x : {0.1, 0.25, 0.33, 0.4}) {
      CAPTURE(x);
      const auto r = optimize_fixed_n(x, 2, kind);
      const double scan = brute_force_two_steps(x, kind);
      CHECK(r.value <= scan + 1e-9);
      CHECK(r.value >= scan - 1e-9);
      CHECK(PartitionPoints::feasible(r.partition, kind));
    }
}

TEST_CASE("estimating_function basic properties") {
  for (DenominatorKind kind : kKinds) {
    CHECK(estimating_function(0.0, kind).value == 0.0);
    CHECK_THROWS_AS(estimating_function(-0.01, kind), DomainError);
    CHECK_THROWS_AS(estimating_function(kappa_max(kind), kind), DomainError);
    for (int i = 1; i <= 20; ++i) {
      const double x = (1.0 / kPi) * i / 20.0;
      const auto r = estimating_function(x, kind);
      CHECK(r.value <= 0.5 * std::asin(std::min(1.0, kPi * x)) + 1e-15);
      CHECK(r.value >= 0.0);
      CHECK(r.converged);
      CHECK(PartitionPoints::feasible(r.partition, kind));
      CHECK(r.n == static_cast<int>(r.partition.size()) - 1);
    }
  }
}

TEST_CASE("estimating_function matches or beats the grid oracle") {
  for (DenominatorKind kind : kKinds)
    for (int i = 1; i <= 12; ++i) {
      const double x = admissible_max(kind) * i / 13.0;
      CAPTURE(x);
      EstimateOptions opts;
      opts.oracle_grid = 4000;
      const auto r = estimating_function(x, kind, opts);
      REQUIRE(r.dp_value.has_value());
      CHECK(r.value <= *r.dp_value + 1e-8);
      // Grid resolution: the oracle should not be far above the smooth optimum.
      CHECK(*r.dp_value - r.value <= 1e-3);
    }
}

TEST_CASE("dp_oracle nesting, determinism and errors") {
  for (DenominatorKind kind : kKinds)
    for (double x : {0.2, 0.4, 0.8 * kappa_max(kind)}) {
      const double coarse = dp_oracle(x, kind, 2000);
      const double fine = dp_oracle(x, kind, 4000);
      CHECK(fine <= coarse + 1e-9);
      CHECK(dp_oracle_serial(x, kind, 4000) == fine);
    }
  CHECK(dp_oracle(0.0, DenominatorKind::generic, 1000) == 0.0);
  CHECK_THROWS_AS(dp_oracle(0.2, DenominatorKind::generic, 10), DomainError);
}

TEST_CASE("monotone in x on a 500-point grid") {
  for (DenominatorKind kind : kKinds) {
    double prev = 0.0;
    bool monotone = true;
    for (int i = 1; i <= 500; ++i) {
      const double x = admissible_max(kind) * i / 500.0;
      const double v = estimating_function(x, kind).value;
      monotone &= prev <= v + 1e-9;
      prev = v;
    }
    CHECK(monotone);
  }
}

TEST_CASE("off-diagonal never exceeds generic") {
  for (int i = 1; i <= 40; ++i) {
    const double x = admissible_max(DenominatorKind::generic) * i / 40.0;
    CHECK(estimating_function(x, DenominatorKind::off_diagonal).value <=
          estimating_function(x, DenominatorKind::generic).value + 1e-12);
  }
}

TEST_CASE("step cap") {
  EstimateOptions capped;
  capped.max_steps = 1;
  CHECK(std::isinf(estimating_function(0.4, DenominatorKind::generic, capped).value));
  capped.max_steps = kCappedSteps;
  const double full = estimating_function(0.6, DenominatorKind::off_diagonal).value;
  const double restricted = estimating_function(0.6, DenominatorKind::off_diagonal, capped).value;
  CHECK(full <= restricted + 1e-15);
}

TEST_CASE("bisect_crossing") {
  const auto f = [](double x) { return x * x; };
  CHECK(bisect_crossing(f, 0.0, 2.0, 2.0, 1e-12) == Approx(std::sqrt(2.0)).epsilon(1e-11));
  CHECK_THROWS_AS(bisect_crossing(f, 0.0, 1.0, 2.0, 1e-12), DomainError);
  CHECK_THROWS_AS(bisect_crossing(f, 1.5, 2.0, 2.0, 1e-12), DomainError);
}

TEST_CASE("thresholds") {
  const double generic = solve_threshold(DenominatorKind::generic, kHalfPi);
  CHECK(generic >= 0.44);
  CHECK(generic <= 0.4549);
  CHECK(std::abs(generic - generic_rotation_constant()) <= 5e-3);

  const double off = solve_threshold(DenominatorKind::off_diagonal, kHalfPi);
  CHECK(off >= 0.6920);
  CHECK(off > 0.67598);
  CHECK(off < kSqrt3Over2);
  CHECK(estimating_function(off - 1e-5, DenominatorKind::off_diagonal).value < kHalfPi);
  CHECK(estimating_function(off + 1e-5, DenominatorKind::off_diagonal).value >= kHalfPi);

  ThresholdOptions capped;
  capped.estimate.max_steps = kCappedSteps;
  const double restricted = solve_threshold(DenominatorKind::off_diagonal, kHalfPi, capped);
  CHECK(std::abs(restricted - 0.692834) <= 2e-3);
  CHECK(restricted <= off + 1e-6);

  CHECK_THROWS_AS(solve_threshold(DenominatorKind::generic, 0.0), DomainError);
  CHECK_THROWS_AS(solve_threshold(DenominatorKind::generic, 2.0), DomainError);
}
