#pragma once

#include <array>
#include <numbers>
#include <optional>
#include <string_view>

namespace sbounds {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kHalfPi = std::numbers::pi / 2.0;
inline constexpr double kSqrt3Over2 = 0.86602540378443864676;

/// Guard band at the right end of half-open closed-form domains.
inline constexpr double kDomainGuard = 1e-9;
/// Guard band for the quadrature- and optimization-defined functions, whose
/// integrand or step constraint degenerates at sqrt(3)/2 (resp. 1/2).
inline constexpr double kSingularGuard = 1e-6;

/// The estimating functions M in theta(P, Q) <= M(||V|| / d).
enum class BoundKind {
  dk_sin2,       // Davis-Kahan sin 2theta: 1/2 asin(2x), one set in a gap of the other
  generic_sin2,  // 1/2 asin(pi x), x <= 1/pi, any disposition
  dk_tan2,       // Davis-Kahan tan 2theta: 1/2 atan(2x), off-diagonal, subordinated sets
  apriori_tan,   // atan(x), off-diagonal, sigma in a finite gap
  kmm,           // off-diagonal, generic disposition
  ms,            // off-diagonal, generic disposition
  gen_opt,       // optimized chained sin2theta bound, generic perturbation
  off_opt,       // optimized chained bound, off-diagonal perturbation
};

inline constexpr std::array<BoundKind, 8> kAllBoundKinds = {
    BoundKind::dk_sin2, BoundKind::generic_sin2, BoundKind::dk_tan2, BoundKind::apriori_tan,
    BoundKind::kmm,     BoundKind::ms,           BoundKind::gen_opt, BoundKind::off_opt};

std::string_view to_string(BoundKind kind);
std::optional<BoundKind> parse_bound_kind(std::string_view name);

/// [0, supremum) or [0, supremum]; `admissible_max` is the largest accepted argument.
struct Domain {
  double supremum;
  double admissible_max;

  bool contains(double x) const { return x >= 0.0 && x <= admissible_max; }
};

Domain domain(BoundKind kind);

struct BoundValue {
  double value = 0.0;
  /// True when the formula saturated and value == pi/2 (no subspace information).
  bool capped = false;
};

/// Dispatches to the evaluator of `kind`. Throws DomainError outside domain(kind).
BoundValue evaluate(BoundKind kind, double x);

double dk_sin2theta(double x);
double generic_sin2theta(double x);
double dk_tan2theta(double x);
double apriori_tantheta(double x);

/// asin(min{1, pi x / (3 - sqrt(1 + 4x^2))}).
BoundValue m_kmm(double x);

/// int_0^x dtau / (2 - sqrt(1 + 4 tau^2)) by adaptive Simpson (abs tol 1e-12).
double ms_integral(double x);

/// (pi/2) * min{1, ms_integral(x)}; saturates at x = 0.675989...
BoundValue m_ms(double x);

/// Maximal shift of off-diagonally perturbed spectral sets.
struct ShiftBound {
  double norm_v = 0.0;
  double d = 0.0;
  double epsilon = 0.0;
};

/// epsilon = ||V|| tan(1/2 atan(2||V||/d)). Throws DomainError for d <= 0 or ||V|| < 0.
ShiftBound epsilon_shift(double norm_v, double d);

/// 1/2 - 1/2 (1 - sqrt(3)/pi)^3.
double generic_rotation_constant();

/// Positive root of (4 - pi^2) x^2 + 6 pi x - 8 = 0, where m_kmm reaches pi/2.
double kmm_saturation_point();

/// Root of ms_integral(x) = 1, i.e. where m_ms reaches pi/2, by bisection to
/// the given absolute tolerance in x.
double ms_saturation_point(double tolerance = 1e-10);

}  // namespace sbounds
