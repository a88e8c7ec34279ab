#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace sbounds {

/// Lower bound g(kappa) on the normalized gap along the path H_t = A + tV:
///   generic       g(k) = 1 - 2k,             kappa_max = 1/2
///   off_diagonal  g(k) = 2 - sqrt(1 + 4k^2), kappa_max = sqrt(3)/2
enum class DenominatorKind { generic, off_diagonal };

double denominator(DenominatorKind kind, double kappa);
double denominator_slope(DenominatorKind kind, double kappa);
double denominator_curvature(DenominatorKind kind, double kappa);
double kappa_max(DenominatorKind kind);
/// Largest target accepted by the optimizer: kappa_max - 1e-6.
double admissible_max(DenominatorKind kind);

/// 0 = k_0 < k_1 < ... < k_n = x with every step obeying
/// (k_{j+1} - k_j) / g(k_j) <= 1/pi.
class PartitionPoints {
 public:
  PartitionPoints(std::vector<double> points, DenominatorKind kind);

  /// Checks the invariants without throwing.
  static bool feasible(std::span<const double> points, DenominatorKind kind);

  double target() const { return points_.back(); }
  std::size_t steps() const { return points_.size() - 1; }
  DenominatorKind kind() const { return kind_; }
  std::span<const double> points() const { return points_; }

 private:
  std::vector<double> points_;
  DenominatorKind kind_;
};

/// 1/2 sum_j asin(pi (k_{j+1} - k_j) / g(k_j)).
double objective(const PartitionPoints& partition);

struct OptimizationResult {
  /// Minimized half-sum; +inf when no admissible n exists (step-capped mode).
  double value = 0.0;
  std::vector<double> partition;
  int n = 0;
  /// Grid oracle value when requested.
  std::optional<double> dp_value;
  bool converged = true;

  /// value capped at pi/2; past the cap the bound carries no information.
  double reported() const;
  bool capped() const;
};

/// Smallest n admitting a feasible partition of [0, x] (greedy maximal steps).
int minimal_steps(double x, DenominatorKind kind);

/// Seed with steps proportional to g(k_j), scaled so the n-th point lands on x.
std::vector<double> seed_partition(double x, int n, DenominatorKind kind);

/// Local minimum over the n-1 interior points. Cyclic coordinate descent
/// (one-dimensional Brent search on the feasible interval of each point)
/// alternates with damped Newton steps on the tridiagonal Hessian; the result
/// is accepted once a full coordinate cycle improves the objective by less
/// than 1e-11. Throws DomainError for n < minimal_steps(x).
OptimizationResult optimize_fixed_n(double x, int n, DenominatorKind kind);

struct EstimateOptions {
  /// Outer sweep covers n_min .. n_min + extra_steps.
  int extra_steps = 25;
  /// Stop once this many consecutive n fail to improve by stall_tolerance.
  int stall_limit = 3;
  double stall_tolerance = 1e-10;
  /// Optional hard cap on n.
  std::optional<int> max_steps;
  /// When set, also runs dp_oracle with this grid and stores it in dp_value.
  std::optional<int> oracle_grid;
};

/// Infimum over n and partitions of the chained half-sum (M_gen or M_off).
/// Throws DomainError for x outside [0, admissible_max(kind)].
OptimizationResult estimating_function(double x, DenominatorKind kind, const EstimateOptions& options = {});

/// Paper-comparable restricted optimum: n <= 5.
inline constexpr int kCappedSteps = 5;

/// Exact minimum over constraint-feasible monotone paths on the nodes
/// x * i / grid_size, i = 0..grid_size. Grids with grid_size dividing another
/// are nested. Throws ConvergenceError when no feasible path exists.
double dp_oracle(double x, DenominatorKind kind, int grid_size);
/// Single-threaded reference for dp_oracle; bitwise identical results.
double dp_oracle_serial(double x, DenominatorKind kind, int grid_size);

/// Bisection for the first x with f(x) >= target on [lo, hi], assuming f is
/// nondecreasing, f(lo) < target <= f(hi). Stops when hi - lo <= tolerance.
double bisect_crossing(const std::function<double(double)>& f, double lo, double hi, double target,
                       double tolerance);

struct ThresholdOptions {
  double tolerance = 1e-6;
  /// Points of the monotonicity pre-check grid.
  int monotonicity_points = 16;
  EstimateOptions estimate;
};

/// Root of estimating_function(x) = target on [0, kappa_max - 1e-6].
double solve_threshold(DenominatorKind kind, double target, const ThresholdOptions& options = {});

}  // namespace sbounds
