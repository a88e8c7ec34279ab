#include "subspace_bounds/curves.hpp"

#include <cstdio>
#include <sstream>

#include "subspace_bounds/errors.hpp"

namespace sbounds {

namespace {

std::optional<BoundValue> cell(BoundKind kind, double x) {
  if (!domain(kind).contains(x)) return std::nullopt;
  return evaluate(kind, x);
}

template <bool Parallel>
CurveTable evaluate_impl(const CurveGrid& grid) {
  grid.validate();
  CurveTable t;
  t.functions = grid.functions;
  t.x.resize(static_cast<std::size_t>(grid.points));
  for (int i = 0; i < grid.points; ++i) t.x[i] = grid.abscissa(i);
  t.columns.assign(grid.functions.size(), std::vector<std::optional<BoundValue>>(t.x.size()));

  const auto cells = static_cast<std::ptrdiff_t>(t.x.size() * grid.functions.size());
  const auto rows = static_cast<std::ptrdiff_t>(t.x.size());
  if constexpr (Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t c = 0; c < cells; ++c) t.columns[c / rows][c % rows] = cell(grid.functions[c / rows], t.x[c % rows]);
  } else {
    for (std::ptrdiff_t c = 0; c < cells; ++c) t.columns[c / rows][c % rows] = cell(grid.functions[c / rows], t.x[c % rows]);
  }
  return t;
}

}  // namespace

void CurveGrid::validate() const {
  const double hi = kSqrt3Over2 - kSingularGuard;
  if (!(x_min >= 0.0 && x_min < x_max && x_max <= hi)) {
    std::ostringstream msg;
    msg << "curve grid needs 0 <= x_min < x_max <= " << hi << " (got [" << x_min << ", " << x_max << "])";
    throw ConfigurationError(msg.str());
  }
  if (points < 2) throw ConfigurationError("curve grid needs at least 2 points");
  if (functions.empty()) throw ConfigurationError("curve grid needs at least one function");
}

double CurveGrid::abscissa(int i) const {
  if (i == points - 1) return x_max;
  return x_min + (x_max - x_min) * static_cast<double>(i) / static_cast<double>(points - 1);
}

CurveTable evaluate_curves(const CurveGrid& grid) { return evaluate_impl<true>(grid); }

CurveTable evaluate_curves_serial(const CurveGrid& grid) { return evaluate_impl<false>(grid); }

std::string to_csv(const CurveTable& table, bool scale_to_unit) {
  std::string out = "x";
  for (BoundKind k : table.functions) {
    out += ',';
    out += to_string(k);
  }
  out += '\n';
  char buf[64];
  for (std::size_t i = 0; i < table.x.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", table.x[i]);
    out += buf;
    for (const auto& column : table.columns) {
      out += ',';
      const auto& v = column[i];
      if (!v) continue;
      double value = v->value;
      if (scale_to_unit) value = v->capped ? 1.0 : value / kHalfPi;
      std::snprintf(buf, sizeof buf, "%.17g", value);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace sbounds
