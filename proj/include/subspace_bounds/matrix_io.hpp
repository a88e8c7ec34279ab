#pragma once

#include <filesystem>
#include <iosfwd>

#include "subspace_bounds/matrix.hpp"

namespace sbounds {

// Text format: first line `dim`, then dim*dim lines `i j re im` with zero-based
// indices, every entry exactly once. Blank lines and lines starting with '#'
// are ignored. Writers emit 17 significant digits, so a write/read cycle is exact.

/// Parses a matrix file body and validates Hermitian symmetry.
/// Throws std::runtime_error with a line number on malformed input.
HermitianMatrix read_matrix(std::istream& in);
HermitianMatrix read_matrix_file(const std::filesystem::path& path);

void write_matrix(std::ostream& out, const HermitianMatrix& m);
void write_matrix_file(const std::filesystem::path& path, const HermitianMatrix& m);

}  // namespace sbounds
