#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "subspace_bounds/curves.hpp"
#include "subspace_bounds/errors.hpp"

using namespace sbounds;
using doctest::Approx;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("grid validation") {
  CurveGrid g;
  CHECK_NOTHROW(g.validate());
  CHECK(g.abscissa(0) == 0.0);
  CHECK(g.abscissa(199) == Approx(0.69));
  g.x_max = 0.9;
  CHECK_THROWS_AS(g.validate(), ConfigurationError);
  g.x_max = 0.5;
  g.x_min = 0.5;
  CHECK_THROWS_AS(g.validate(), ConfigurationError);
  g.x_min = -0.1;
  CHECK_THROWS_AS(g.validate(), ConfigurationError);
  g = CurveGrid{};
  g.points = 1;
  CHECK_THROWS_AS(g.validate(), ConfigurationError);
  g = CurveGrid{};
  g.functions.clear();
  CHECK_THROWS_AS(g.validate(), ConfigurationError);
}

TEST_CASE("default table: zero row, ordering, monotone columns, kmm saturation") {
  const CurveTable t = evaluate_curves(CurveGrid{});
  REQUIRE(t.functions.size() == 3);
  REQUIRE(t.x.size() == 200);
  for (const auto& col : t.columns) {
    REQUIRE(col[0].has_value());
    CHECK(col[0]->value == 0.0);
    for (std::size_t i = 1; i < col.size(); ++i) CHECK(col[i]->value >= col[i - 1]->value);
  }
  const auto& kmm = t.columns[0];
  const auto& ms = t.columns[1];
  const auto& off = t.columns[2];
  for (std::size_t i = 0; i < t.x.size(); ++i) {
    CHECK(off[i]->value <= ms[i]->value + 1e-9);
    CHECK(ms[i]->value <= kmm[i]->value + 1e-9);
  }
  for (std::size_t i = 0; i < t.x.size(); ++i)
    CHECK(kmm[i]->capped == (t.x[i] >= kmm_saturation_point()));
}

TEST_CASE("parallel equals serial") {
  CurveGrid g;
  g.points = 40;
  g.functions = {BoundKind::gen_opt, BoundKind::off_opt, BoundKind::dk_sin2};
  const auto a = evaluate_curves(g);
  const auto b = evaluate_curves_serial(g);
  CHECK(to_csv(a) == to_csv(b));
  CHECK(to_csv(a, false) == to_csv(b, false));
}

TEST_CASE("CSV format") {
  CurveGrid g;
  g.points = 5;
  g.x_max = 0.6;
  g.functions = {BoundKind::kmm, BoundKind::dk_sin2};
  const auto t = evaluate_curves(g);
  const std::string csv = to_csv(t);
  CHECK(csv.find('\r') == std::string::npos);
  const auto rows = parse_csv(csv);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0] == std::vector<std::string>{"x", "kmm", "dk_sin2"});
  CHECK(rows[1][1] == "0");
  // x = 0.6 is past the kmm saturation and outside the dk_sin2 domain.
  CHECK(rows[5][1] == "1");
  CHECK(rows[5][2].empty());
  const double x = std::stod(rows[2][0]);
  CHECK(x == 0.15);
  CHECK(std::stod(rows[2][1]) == Approx(m_kmm(0.15).value / kHalfPi).epsilon(1e-15));

  const auto raw = parse_csv(to_csv(t, false));
  CHECK(std::stod(raw[2][1]) == m_kmm(0.15).value);
  CHECK(std::stod(raw[5][1]) == kHalfPi);
}
