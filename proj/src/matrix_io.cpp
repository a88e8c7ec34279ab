#include "subspace_bounds/matrix_io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sbounds {

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  std::ostringstream msg;
  msg << "matrix file, line " << line << ": " << what;
  throw std::runtime_error(msg.str());
}

bool next_content_line(std::istream& in, std::string& line, std::size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    return true;
  }
  return false;
}

}  // namespace

HermitianMatrix read_matrix(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!next_content_line(in, line, line_no)) fail(line_no, "missing dimension line");

  long long dim = 0;
  {
    std::istringstream ls(line);
    std::string extra;
    if (!(ls >> dim) || (ls >> extra)) fail(line_no, "expected a single integer dimension");
  }
  if (dim < 1 || dim > 4096) fail(line_no, "dimension out of range");

  const auto n = static_cast<std::size_t>(dim);
  ComplexMatrix m(n, n);
  std::vector<bool> seen(n * n, false);
  for (std::size_t count = 0; count < n * n; ++count) {
    if (!next_content_line(in, line, line_no)) fail(line_no, "unexpected end of file");
    std::istringstream ls(line);
    long long i = -1;
    long long j = -1;
    double re = 0.0;
    double im = 0.0;
    std::string extra;
    if (!(ls >> i >> j >> re >> im) || (ls >> extra)) fail(line_no, "expected `i j re im`");
    if (i < 0 || j < 0 || i >= dim || j >= dim) fail(line_no, "index out of range");
    const auto k = static_cast<std::size_t>(i) * n + static_cast<std::size_t>(j);
    if (seen[k]) fail(line_no, "duplicate entry");
    seen[k] = true;
    m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = Complex{re, im};
  }
  if (next_content_line(in, line, line_no)) fail(line_no, "trailing content after last entry");
  return HermitianMatrix(std::move(m));
}

HermitianMatrix read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open matrix file " + path.string());
  return read_matrix(in);
}

void write_matrix(std::ostream& out, const HermitianMatrix& m) {
  const std::size_t n = m.dim();
  out << n << '\n';
  char buf[96];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::snprintf(buf, sizeof buf, "%zu %zu %.17g %.17g\n", i, j, m(i, j).real(), m(i, j).imag());
      out << buf;
    }
}

void write_matrix_file(const std::filesystem::path& path, const HermitianMatrix& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write matrix file " + path.string());
  write_matrix(out, m);
}

}  // namespace sbounds
