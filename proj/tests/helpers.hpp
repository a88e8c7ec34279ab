#pragma once

#include <cmath>
#include <vector>

#include "subspace_bounds/matrix.hpp"

namespace testing {

inline double max_entry_diff(const sbounds::ComplexMatrix& a, const sbounds::ComplexMatrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

inline sbounds::HermitianMatrix real_symmetric(const std::vector<std::vector<double>>& rows) {
  sbounds::ComplexMatrix m(rows.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
  return sbounds::HermitianMatrix(m);
}

}  // namespace testing
