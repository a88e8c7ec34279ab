#include "subspace_bounds/partition_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>

#include <boost/math/tools/minima.hpp>

#include "subspace_bounds/bound_functions.hpp"
#include "subspace_bounds/errors.hpp"

namespace sbounds {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Step ratios this close to 1 make asin' blow up; Newton steps are skipped there.
constexpr double kNewtonSingularity = 1e-12;
constexpr double kStepSlack = 1e-12;
constexpr double kStationarity = 1e-11;

double step_ratio(DenominatorKind kind, double a, double b) { return kPi * (b - a) / denominator(kind, a); }

// asin of a step ratio; +inf when the step constraint is violated beyond roundoff.
double step_cost(DenominatorKind kind, double a, double b) {
  const double u = step_ratio(kind, a, b);
  if (!(u <= 1.0 + kStepSlack)) return kInf;
  return std::asin(std::clamp(u, 0.0, 1.0));
}

double chain_sum(DenominatorKind kind, std::span<const double> k) {
  double s = 0.0;
  for (std::size_t j = 0; j + 1 < k.size(); ++j) s += step_cost(kind, k[j], k[j + 1]);
  return 0.5 * s;
}

// Smallest kappa with kappa + g(kappa)/pi >= b; kappa + g(kappa)/pi is increasing.
double reach_inverse(DenominatorKind kind, double b) {
  if (kind == DenominatorKind::generic) return std::max(0.0, (b - 1.0 / kPi) / (1.0 - 2.0 / kPi));
  const auto reach = [&](double t) { return t + denominator(kind, t) / kPi; };
  if (reach(0.0) >= b) return 0.0;
  double lo = 0.0;
  double hi = b;
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (reach(mid) >= b ? hi : lo) = mid;
  }
  return hi;
}

void require_target(double x, DenominatorKind kind, bool allow_zero) {
  const bool ok = allow_zero ? x >= 0.0 : x > 0.0;
  if (!ok || !(x <= admissible_max(kind))) {
    std::ostringstream msg;
    msg << "target " << x << " outside [0, " << admissible_max(kind) << "]";
    throw DomainError(msg.str());
  }
}

// One cycle of coordinate descent; returns the decrease of the objective.
double coordinate_cycle(DenominatorKind kind, std::vector<double>& k) {
  double decrease = 0.0;
  const std::size_t n = k.size() - 1;
  for (std::size_t j = 1; j < n; ++j) {
    const double a = k[j - 1];
    const double b = k[j + 1];
    const double width = b - a;
    double lo = std::max(reach_inverse(kind, b), a + 1e-13 * width);
    double hi = std::min(a + denominator(kind, a) / kPi, b - 1e-13 * width);
    if (!(lo < hi)) continue;
    const auto local = [&](double t) { return step_cost(kind, a, t) + step_cost(kind, t, b); };
    const double before = local(k[j]);
    std::uintmax_t iterations = 200;
    const auto [t, after] = boost::math::tools::brent_find_minima(local, lo, hi, 30, iterations);
    if (after < before) {
      k[j] = t;
      decrease += 0.5 * (before - after);
    }
  }
  return decrease;
}

struct TermDerivatives {
  double da, db, daa, dbb, dab;
};

// Derivatives of asin(pi (b - a) / g(a)) with respect to its endpoints.
TermDerivatives term_derivatives(DenominatorKind kind, double a, double b) {
  const double g = denominator(kind, a);
  const double g1 = denominator_slope(kind, a);
  const double g2 = denominator_curvature(kind, a);
  const double delta = b - a;
  const double u = kPi * delta / g;
  const double w = 1.0 - u * u;
  const double s1 = 1.0 / std::sqrt(w);
  const double s2 = u / (w * std::sqrt(w));

  const double ub = kPi / g;
  const double ua = -kPi / g - kPi * delta * g1 / (g * g);
  const double uab = -kPi * g1 / (g * g);
  const double uaa = 2.0 * kPi * g1 / (g * g) - kPi * delta * g2 / (g * g) + 2.0 * kPi * delta * g1 * g1 / (g * g * g);

  return {s1 * ua, s1 * ub, s2 * ua * ua + s1 * uaa, s2 * ub * ub, s2 * ua * ub + s1 * uab};
}

// Damped Newton step on the interior points. Returns the accepted decrease, or
// 0 when the Hessian is not positive definite or no damped step improves.
double newton_step(DenominatorKind kind, std::vector<double>& k, double& value) {
  const std::size_t n = k.size() - 1;
  const std::size_t m = n - 1;
  if (m == 0) return 0.0;
  for (std::size_t j = 0; j < n; ++j)
    if (step_ratio(kind, k[j], k[j + 1]) >= 1.0 - kNewtonSingularity) return 0.0;

  std::vector<double> grad(m, 0.0), diag(m, 0.0), upper(m, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const auto t = term_derivatives(kind, k[j], k[j + 1]);
    // Term j couples k[j] (variable j-1) and k[j+1] (variable j).
    if (j >= 1) {
      grad[j - 1] += 0.5 * t.da;
      diag[j - 1] += 0.5 * t.daa;
    }
    if (j + 1 <= m) {
      grad[j] += 0.5 * t.db;
      diag[j] += 0.5 * t.dbb;
    }
    if (j >= 1 && j + 1 <= m) upper[j - 1] = 0.5 * t.dab;
  }

  // Thomas algorithm; a non-positive pivot means the Hessian is not SPD.
  std::vector<double> c(m, 0.0), r(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const double lower = i > 0 ? upper[i - 1] : 0.0;
    const double pivot = diag[i] - (i > 0 ? lower * c[i - 1] : 0.0);
    if (!(pivot > 0.0) || !std::isfinite(pivot)) return 0.0;
    c[i] = upper[i] / pivot;
    r[i] = (-grad[i] - (i > 0 ? lower * r[i - 1] : 0.0)) / pivot;
  }
  std::vector<double> step(m);
  for (std::size_t i = m; i-- > 0;) step[i] = r[i] - (i + 1 < m ? c[i] * step[i + 1] : 0.0);

  std::vector<double> trial = k;
  double alpha = 1.0;
  for (int halving = 0; halving < 60; ++halving, alpha *= 0.5) {
    for (std::size_t i = 0; i < m; ++i) trial[i + 1] = k[i + 1] + alpha * step[i];
    bool ok = true;
    for (std::size_t j = 0; j < n && ok; ++j)
      ok = trial[j + 1] > trial[j] && step_ratio(kind, trial[j], trial[j + 1]) < 1.0;
    if (!ok) continue;
    const double candidate = chain_sum(kind, trial);
    if (candidate < value) {
      const double decrease = value - candidate;
      k.swap(trial);
      value = candidate;
      return decrease;
    }
  }
  return 0.0;
}

}  // namespace

double denominator(DenominatorKind kind, double kappa) {
  if (kind == DenominatorKind::generic) return 1.0 - 2.0 * kappa;
  // 2 - sqrt(1 + 4k^2) rewritten without the cancellation near sqrt(3)/2; the
  // fma keeps 3 - 4k^2 accurate to one rounding.
  return std::fma(-4.0 * kappa, kappa, 3.0) / (2.0 + std::sqrt(1.0 + 4.0 * kappa * kappa));
}

double denominator_slope(DenominatorKind kind, double kappa) {
  return kind == DenominatorKind::generic ? -2.0 : -4.0 * kappa / std::sqrt(1.0 + 4.0 * kappa * kappa);
}

double denominator_curvature(DenominatorKind kind, double kappa) {
  if (kind == DenominatorKind::generic) return 0.0;
  const double s = 1.0 + 4.0 * kappa * kappa;
  return -4.0 / (s * std::sqrt(s));
}

double kappa_max(DenominatorKind kind) { return kind == DenominatorKind::generic ? 0.5 : kSqrt3Over2; }

double admissible_max(DenominatorKind kind) { return kappa_max(kind) - kSingularGuard; }

PartitionPoints::PartitionPoints(std::vector<double> points, DenominatorKind kind)
    : points_(std::move(points)), kind_(kind) {
  if (!feasible(points_, kind_)) throw DomainError("partition violates ordering or step constraint");
}

bool PartitionPoints::feasible(std::span<const double> points, DenominatorKind kind) {
  if (points.size() < 2 || points.front() != 0.0) return false;
  const double x = points.back();
  if (!(x > 0.0) || !(x <= admissible_max(kind))) return false;
  for (std::size_t j = 0; j + 1 < points.size(); ++j) {
    if (!(points[j + 1] > points[j])) return false;
    if (!(step_ratio(kind, points[j], points[j + 1]) <= 1.0 + kStepSlack)) return false;
  }
  return true;
}

double objective(const PartitionPoints& partition) { return chain_sum(partition.kind(), partition.points()); }

double OptimizationResult::reported() const { return std::min(value, kHalfPi); }

bool OptimizationResult::capped() const { return value >= kHalfPi; }

int minimal_steps(double x, DenominatorKind kind) {
  require_target(x, kind, true);
  int n = 0;
  for (double k = 0.0; k < x; ++n) {
    k = std::min(x, k + denominator(kind, k) / kPi);
    if (n > 100000) throw ConvergenceError("minimal_steps: no progress");
  }
  return n;
}

std::vector<double> seed_partition(double x, int n, DenominatorKind kind) {
  require_target(x, kind, false);
  if (n < 1) throw DomainError("seed_partition: n must be >= 1");
  const auto chain_end = [&](double s) {
    double k = 0.0;
    for (int j = 0; j < n; ++j) k += s * denominator(kind, k);
    return k;
  };
  double lo = 0.0;
  double hi = 1.0 / kPi;
  if (chain_end(hi) < x) {
    std::ostringstream msg;
    msg << "no feasible partition of [0, " << x << "] with " << n << " steps";
    throw DomainError(msg.str());
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (chain_end(mid) >= x ? hi : lo) = mid;
  }
  std::vector<double> k(static_cast<std::size_t>(n) + 1, 0.0);
  for (int j = 0; j < n; ++j) k[j + 1] = k[j] + hi * denominator(kind, k[j]);
  k.back() = x;
  return k;
}

namespace {

// Polishes a feasible seed in place and reports convergence.
OptimizationResult polish(DenominatorKind kind, std::vector<double> k) {
  OptimizationResult result;
  result.n = static_cast<int>(k.size()) - 1;
  double value = chain_sum(kind, k);
  if (result.n > 1) {
    result.converged = false;
    for (int round = 0; round < 60; ++round) {
      double newton_gain = 0.0;
      for (int it = 0; it < 100; ++it) {
        const double gain = newton_step(kind, k, value);
        newton_gain += gain;
        if (gain < 1e-16) break;
      }
      const double cycle_gain = coordinate_cycle(kind, k);
      value = chain_sum(kind, k);
      if (cycle_gain < kStationarity) {
        result.converged = true;
        break;
      }
      if (newton_gain == 0.0)
        for (int extra = 0; extra < 20; ++extra) coordinate_cycle(kind, k);
      value = chain_sum(kind, k);
    }
  }
  result.value = value;
  result.partition = std::move(k);
  return result;
}

// Seed for n + 1 steps: the n-step partition with its first step halved.
std::vector<double> split_first_step(std::span<const double> k) {
  std::vector<double> out(k.begin(), k.end());
  out.insert(out.begin() + 1, 0.5 * k[1]);
  return out;
}

}  // namespace

OptimizationResult optimize_fixed_n(double x, int n, DenominatorKind kind) {
  require_target(x, kind, false);
  const int n_min = minimal_steps(x, kind);
  if (n < n_min) {
    std::ostringstream msg;
    msg << "n = " << n << " is infeasible for x = " << x << " (minimum " << n_min << ")";
    throw DomainError(msg.str());
  }
  return polish(kind, seed_partition(x, n, kind));
}

OptimizationResult estimating_function(double x, DenominatorKind kind, const EstimateOptions& options) {
  require_target(x, kind, true);
  OptimizationResult best;
  if (x == 0.0) {
    best.partition = {0.0};
    if (options.oracle_grid) best.dp_value = 0.0;
    return best;
  }
  const int n_min = minimal_steps(x, kind);
  int n_max = n_min + options.extra_steps;
  if (options.max_steps) n_max = std::min(n_max, *options.max_steps);

  best.value = kInf;
  int stall = 0;
  std::vector<double> previous;
  for (int n = n_min; n <= n_max; ++n) {
    OptimizationResult r = optimize_fixed_n(x, n, kind);
    if (!previous.empty()) {
      OptimizationResult warm = polish(kind, split_first_step(previous));
      if (warm.value < r.value) r = std::move(warm);
    }
    previous = r.partition;
    const bool improved = r.value < best.value - options.stall_tolerance;
    if (r.value < best.value) best = std::move(r);
    stall = improved ? 0 : stall + 1;
    if (stall >= options.stall_limit) break;
  }
  if (options.oracle_grid) best.dp_value = dp_oracle(x, kind, *options.oracle_grid);
  return best;
}

namespace {

template <bool Parallel>
double dp_oracle_impl(double x, DenominatorKind kind, int grid_size) {
  if (grid_size < 100) throw DomainError("dp_oracle: grid_size must be >= 100");
  require_target(x, kind, true);
  if (x == 0.0) return 0.0;

  const auto m = static_cast<std::size_t>(grid_size);
  std::vector<double> node(m + 1), g(m + 1), best(m + 1, kInf);
  for (std::size_t i = 0; i <= m; ++i) {
    node[i] = x * static_cast<double>(i) / static_cast<double>(grid_size);
    g[i] = denominator(kind, node[i]);
  }
  best[0] = 0.0;
  std::size_t first = 0;
  for (std::size_t i = 1; i <= m; ++i) {
    // Feasible predecessors form a suffix [first, i) and `first` only moves right.
    while (first < i && kPi * (node[i] - node[first]) / g[first] > 1.0) ++first;
    double acc = kInf;
    const auto lo = static_cast<std::ptrdiff_t>(first);
    const auto hi = static_cast<std::ptrdiff_t>(i);
    if constexpr (Parallel) {
#pragma omp parallel for reduction(min : acc) schedule(static)
      for (std::ptrdiff_t j = lo; j < hi; ++j) {
        const double u = kPi * (node[i] - node[j]) / g[j];
        if (u <= 1.0) acc = std::min(acc, best[j] + std::asin(u));
      }
    } else {
      for (std::ptrdiff_t j = lo; j < hi; ++j) {
        const double u = kPi * (node[i] - node[j]) / g[j];
        if (u <= 1.0) acc = std::min(acc, best[j] + std::asin(u));
      }
    }
    best[i] = acc;
  }
  if (!std::isfinite(best[m])) {
    std::ostringstream msg;
    msg << "dp_oracle: no feasible path to x = " << x << " on a grid of " << grid_size
        << " (increase grid_size)";
    throw ConvergenceError(msg.str());
  }
  return 0.5 * best[m];
}

}  // namespace

double dp_oracle(double x, DenominatorKind kind, int grid_size) { return dp_oracle_impl<true>(x, kind, grid_size); }

double dp_oracle_serial(double x, DenominatorKind kind, int grid_size) {
  return dp_oracle_impl<false>(x, kind, grid_size);
}

double bisect_crossing(const std::function<double(double)>& f, double lo, double hi, double target,
                       double tolerance) {
  if (!(f(lo) < target)) throw DomainError("bisect_crossing: f(lo) already reaches the target");
  if (!(f(hi) >= target)) throw DomainError("bisect_crossing: target not attained on the interval");
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (f(mid) >= target ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

double solve_threshold(DenominatorKind kind, double target, const ThresholdOptions& options) {
  if (!(target > 0.0 && target <= kHalfPi)) throw DomainError("solve_threshold: target must lie in (0, pi/2]");
  const auto f = [&](double x) { return estimating_function(x, kind, options.estimate).value; };

  const double x_hi = admissible_max(kind);
  const int points = std::max(2, options.monotonicity_points);
  std::vector<double> grid(static_cast<std::size_t>(points)), values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid[i] = x_hi * static_cast<double>(i) / static_cast<double>(points - 1);
    values[i] = f(grid[i]);
    if (i > 0 && values[i] < values[i - 1] - 1e-9) {
      std::ostringstream msg;
      msg << "solve_threshold: estimating function decreases between x = " << grid[i - 1] << " and " << grid[i];
      throw ConvergenceError(msg.str());
    }
  }
  if (!(values.back() >= target)) throw DomainError("solve_threshold: target not attained in the domain");

  std::size_t upper = 1;
  while (values[upper] < target) ++upper;
  return bisect_crossing(f, grid[upper - 1], grid[upper], target, options.tolerance);
}

}  // namespace sbounds
