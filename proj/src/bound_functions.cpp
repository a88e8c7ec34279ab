#include "subspace_bounds/bound_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "subspace_bounds/errors.hpp"
#include "subspace_bounds/partition_optimizer.hpp"
#include "subspace_bounds/quadrature.hpp"

namespace sbounds {

namespace {

void require_in_domain(BoundKind kind, double x) {
  if (!domain(kind).contains(x)) {
    std::ostringstream msg;
    msg << to_string(kind) << ": argument " << x << " outside domain [0, " << domain(kind).supremum << ")";
    throw DomainError(msg.str());
  }
}

BoundValue saturating_asin(double arg) {
  if (arg >= 1.0) return {kHalfPi, true};
  return {std::asin(arg), false};
}

}  // namespace

std::string_view to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::dk_sin2: return "dk_sin2";
    case BoundKind::generic_sin2: return "generic_sin2";
    case BoundKind::dk_tan2: return "dk_tan2";
    case BoundKind::apriori_tan: return "apriori_tan";
    case BoundKind::kmm: return "kmm";
    case BoundKind::ms: return "ms";
    case BoundKind::gen_opt: return "gen_opt";
    case BoundKind::off_opt: return "off_opt";
  }
  return "unknown";
}

std::optional<BoundKind> parse_bound_kind(std::string_view name) {
  for (BoundKind k : kAllBoundKinds)
    if (to_string(k) == name) return k;
  return std::nullopt;
}

Domain domain(BoundKind kind) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (kind) {
    case BoundKind::dk_sin2: return {0.5, 0.5 - kDomainGuard};
    case BoundKind::generic_sin2: return {1.0 / kPi, 1.0 / kPi};
    case BoundKind::dk_tan2: return {inf, std::numeric_limits<double>::max()};
    case BoundKind::apriori_tan: return {std::numbers::sqrt2, std::numbers::sqrt2 - kDomainGuard};
    case BoundKind::kmm: return {kSqrt3Over2, kSqrt3Over2 - kDomainGuard};
    case BoundKind::ms: return {kSqrt3Over2, kSqrt3Over2 - kSingularGuard};
    case BoundKind::gen_opt: return {0.5, admissible_max(DenominatorKind::generic)};
    case BoundKind::off_opt: return {kSqrt3Over2, admissible_max(DenominatorKind::off_diagonal)};
  }
  return {0.0, -1.0};
}

double dk_sin2theta(double x) {
  require_in_domain(BoundKind::dk_sin2, x);
  return 0.5 * std::asin(2.0 * x);
}

double generic_sin2theta(double x) {
  require_in_domain(BoundKind::generic_sin2, x);
  return 0.5 * std::asin(std::min(1.0, kPi * x));
}

double dk_tan2theta(double x) {
  require_in_domain(BoundKind::dk_tan2, x);
  return 0.5 * std::atan(2.0 * x);
}

double apriori_tantheta(double x) {
  require_in_domain(BoundKind::apriori_tan, x);
  return std::atan(x);
}

BoundValue m_kmm(double x) {
  require_in_domain(BoundKind::kmm, x);
  return saturating_asin(kPi * x / (3.0 - std::sqrt(1.0 + 4.0 * x * x)));
}

double ms_integral(double x) {
  require_in_domain(BoundKind::ms, x);
  const auto integrand = [](double t) { return 1.0 / denominator(DenominatorKind::off_diagonal, t); };
  return adaptive_simpson(integrand, 0.0, x, 1e-12, 60).value;
}

BoundValue m_ms(double x) {
  const double integral = ms_integral(x);
  if (integral >= 1.0) return {kHalfPi, true};
  return {kHalfPi * integral, false};
}

BoundValue evaluate(BoundKind kind, double x) {
  switch (kind) {
    case BoundKind::dk_sin2: return {dk_sin2theta(x), false};
    case BoundKind::generic_sin2: return {generic_sin2theta(x), false};
    case BoundKind::dk_tan2: return {dk_tan2theta(x), false};
    case BoundKind::apriori_tan: return {apriori_tantheta(x), false};
    case BoundKind::kmm: return m_kmm(x);
    case BoundKind::ms: return m_ms(x);
    case BoundKind::gen_opt:
    case BoundKind::off_opt: {
      require_in_domain(kind, x);
      const auto dk = kind == BoundKind::gen_opt ? DenominatorKind::generic : DenominatorKind::off_diagonal;
      const auto r = estimating_function(x, dk);
      return {r.reported(), r.capped()};
    }
  }
  throw DomainError("unknown bound kind");
}

ShiftBound epsilon_shift(double norm_v, double d) {
  if (!(d > 0.0) || !std::isfinite(d)) throw DomainError("epsilon_shift: d must be positive");
  if (!(norm_v >= 0.0) || !std::isfinite(norm_v)) throw DomainError("epsilon_shift: ||V|| must be >= 0");
  return {norm_v, d, norm_v * std::tan(0.5 * std::atan(2.0 * norm_v / d))};
}

double generic_rotation_constant() {
  const double t = 1.0 - std::sqrt(3.0) / kPi;
  return 0.5 - 0.5 * t * t * t;
}

double kmm_saturation_point() {
  // (4 - pi^2) x^2 + 6 pi x - 8 = 0; the leading coefficient is negative, and
  // the smaller positive root is the first crossing.
  const double a = 4.0 - kPi * kPi;
  const double b = 6.0 * kPi;
  const double c = -8.0;
  const double disc = std::sqrt(b * b - 4.0 * a * c);
  // Cancellation-free form of (-b + disc) / (2a).
  return 2.0 * c / (-b - disc);
}

double ms_saturation_point(double tolerance) {
  return bisect_crossing(ms_integral, 0.0, domain(BoundKind::ms).admissible_max, 1.0, tolerance);
}

}  // namespace sbounds
