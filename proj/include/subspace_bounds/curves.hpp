#pragma once

#include <optional>
#include <string>
#include <vector>

#include "subspace_bounds/bound_functions.hpp"

namespace sbounds {

/// Abscissae x_min + (x_max - x_min) * i / (points - 1), i = 0..points-1.
struct CurveGrid {
  double x_min = 0.0;
  double x_max = 0.69;
  int points = 200;
  std::vector<BoundKind> functions{BoundKind::kmm, BoundKind::ms, BoundKind::off_opt};

  /// Throws ConfigurationError unless 0 <= x_min < x_max <= sqrt(3)/2 - 1e-6,
  /// points >= 2 and at least one function is requested.
  void validate() const;
  double abscissa(int i) const;
};

struct CurveTable {
  std::vector<BoundKind> functions;
  std::vector<double> x;
  /// columns[f][i]; nullopt where x lies outside the function's domain.
  std::vector<std::vector<std::optional<BoundValue>>> columns;
};

/// Rows are evaluated in parallel; each cell is an independent evaluation, so
/// the table equals evaluate_curves_serial bit for bit.
CurveTable evaluate_curves(const CurveGrid& grid);
CurveTable evaluate_curves_serial(const CurveGrid& grid);

/// Header `x,<name>,...`, 17 significant digits, LF line endings. With
/// scale_to_unit the values are multiplied by 2/pi and a capped value is
/// written as exactly 1. Out-of-domain cells are left empty.
std::string to_csv(const CurveTable& table, bool scale_to_unit = true);

}  // namespace sbounds
