#include "subspace_bounds/quadrature.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "subspace_bounds/errors.hpp"

namespace sbounds {

namespace {

struct Simpson {
  const std::function<double(double)>& f;
  int max_depth;
  long evaluations = 0;
  double error = 0.0;

  double eval(double x) {
    ++evaluations;
    return f(x);
  }

  double refine(double a, double fa, double m, double fm, double b, double fb, double whole, double tol,
                int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = eval(lm);
    const double frm = eval(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    // The roundoff floor stops refinement once the difference is noise.
    const double noise = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(left + right);
    if (std::abs(delta) <= 15.0 * tol || std::abs(delta) <= noise || !(m - a > 0.0) || !(b - m > 0.0)) {
      error += std::abs(delta) / 15.0;
      return left + right + delta / 15.0;
    }
    if (depth >= max_depth) {
      std::ostringstream msg;
      msg << "adaptive Simpson: no convergence on [" << a << ", " << b << "] at depth " << depth;
      throw ConvergenceError(msg.str());
    }
    return refine(a, fa, lm, flm, m, fm, left, 0.5 * tol, depth + 1) +
           refine(m, fm, rm, frm, b, fb, right, 0.5 * tol, depth + 1);
  }
};

}  // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b, double abs_tol,
                                  int max_depth) {
  if (a == b) return {};
  Simpson s{f, max_depth};
  const double fa = s.eval(a);
  const double fb = s.eval(b);
  const double m = 0.5 * (a + b);
  const double fm = s.eval(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double value = s.refine(a, fa, m, fm, b, fb, whole, abs_tol, 0);
  return {value, s.error, s.evaluations};
}

}  // namespace sbounds
