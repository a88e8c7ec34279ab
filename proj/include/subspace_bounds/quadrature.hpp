#pragma once

#include <functional>

namespace sbounds {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long evaluations = 0;
};

/// Adaptive Simpson rule with interval bisection and Richardson correction.
/// A subinterval is accepted when |S_left + S_right - S| <= 15 * tol_local,
/// where tol_local halves with each bisection. Throws ConvergenceError when a
/// subinterval still fails at max_depth.
QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  double abs_tol = 1e-12, int max_depth = 60);

}  // namespace sbounds
