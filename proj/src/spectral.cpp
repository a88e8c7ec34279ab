#include "subspace_bounds/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "subspace_bounds/errors.hpp"

namespace sbounds {

namespace {

double off_diagonal_mass(const ComplexMatrix& a) {
  double s = 0.0;
  const std::size_t n = a.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

// One rotation annihilating a(p,q). The 2x2 unitary is D*R with
// D = diag(1, conj(e)) removing the phase e of a(p,q) and R the real Jacobi
// rotation of the resulting symmetric block.
void rotate(ComplexMatrix& a, ComplexMatrix* v, std::size_t p, std::size_t q, double skip_below) {
  const Complex apq = a(p, q);
  const double r = std::abs(apq);
  if (r <= skip_below) return;
  const Complex e = apq / r;
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double theta = (aqq - app) / (2.0 * r);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;

  const double upp = c;
  const double upq = s;
  const Complex uqp = -s * std::conj(e);
  const Complex uqq = c * std::conj(e);

  // Column update A U; the row update U^* (A U) mirrors it because A stays
  // exactly Hermitian, and the 2x2 block is set explicitly below.
  const std::size_t n = a.rows();
  for (std::size_t i = 0; i < n; ++i) {
    if (i == p || i == q) continue;
    const Complex aip = a(i, p);
    const Complex aiq = a(i, q);
    a(i, p) = aip * upp + aiq * uqp;
    a(i, q) = aip * upq + aiq * uqq;
    a(p, i) = std::conj(a(i, p));
    a(q, i) = std::conj(a(i, q));
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = app - t * r;
  a(q, q) = aqq + t * r;

  if (v != nullptr) {
    for (std::size_t i = 0; i < n; ++i) {
      const Complex vip = (*v)(i, p);
      const Complex viq = (*v)(i, q);
      (*v)(i, p) = vip * upp + viq * uqp;
      (*v)(i, q) = vip * upq + viq * uqq;
    }
  }
}

}  // namespace

EigenDecomposition eigen_decompose(const HermitianMatrix& m, const JacobiOptions& options) {
  const std::size_t n = m.dim();
  ComplexMatrix a = m.matrix();
  ComplexMatrix v;
  if (options.compute_vectors) v = ComplexMatrix::identity(n);

  const double threshold = options.tolerance * a.frobenius_norm();
  // Entries this small cannot keep the off-diagonal mass above threshold on their own.
  const double skip_below = threshold / (2.0 * static_cast<double>(std::max<std::size_t>(n, 1)));
  int sweep = 0;
  for (;; ++sweep) {
    if (off_diagonal_mass(a) <= threshold) break;
    if (sweep >= options.max_sweeps) {
      std::ostringstream msg;
      msg << "Jacobi eigensolver did not converge in " << options.max_sweeps << " sweeps (dim " << n << ")";
      throw ConvergenceError(msg.str());
    }
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) rotate(a, options.compute_vectors ? &v : nullptr, p, q, skip_below);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  EigenDecomposition ed;
  ed.sweeps = sweep;
  ed.eigenvalues.resize(n);
  for (std::size_t k = 0; k < n; ++k) ed.eigenvalues[k] = a(order[k], order[k]).real();
  if (options.compute_vectors) {
    ed.eigenvectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i) ed.eigenvectors(i, k) = v(i, order[k]);
  }
  return ed;
}

std::vector<double> eigenvalues(const HermitianMatrix& m) {
  JacobiOptions options;
  options.compute_vectors = false;
  return eigen_decompose(m, options).eigenvalues;
}

double operator_norm(const HermitianMatrix& m) {
  const auto ev = eigenvalues(m);
  return std::max(std::abs(ev.front()), std::abs(ev.back()));
}

OrthogonalProjection OrthogonalProjection::complement() const {
  const std::size_t n = dim();
  OrthogonalProjection c{ComplexMatrix::identity(n), n - rank};
  c.matrix -= matrix;
  return c;
}

OrthogonalProjection projection_onto_columns(const ComplexMatrix& u, std::span<const std::size_t> columns) {
  const std::size_t n = u.rows();
  for (std::size_t k : columns)
    if (k >= u.cols()) throw std::out_of_range("projection index out of range");
  std::vector<std::size_t> sorted(columns.begin(), columns.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("duplicate projection index");

  OrthogonalProjection p{ComplexMatrix(n, n), sorted.size()};
  for (std::size_t i = 0; i < n; ++i) {
    double diag = 0.0;
    for (std::size_t k : sorted) diag += std::norm(u(i, k));
    p.matrix(i, i) = diag;
    for (std::size_t j = i + 1; j < n; ++j) {
      Complex s{};
      for (std::size_t k : sorted) s += u(i, k) * std::conj(u(j, k));
      p.matrix(i, j) = s;
      p.matrix(j, i) = std::conj(s);
    }
  }
  return p;
}

OrthogonalProjection spectral_projection(const EigenDecomposition& ed, std::span<const std::size_t> indices) {
  if (ed.eigenvectors.rows() != ed.dim())
    throw std::invalid_argument("spectral_projection: eigendecomposition carries no eigenvectors");
  return projection_onto_columns(ed.eigenvectors, indices);
}

double maximal_angle(const OrthogonalProjection& p, const OrthogonalProjection& q) {
  if (p.dim() != q.dim()) throw std::invalid_argument("maximal_angle: dimension mismatch");
  // Fix the subtraction order so that (p, q) and (q, p) run identical arithmetic.
  const auto pd = p.matrix.data();
  const auto qd = q.matrix.data();
  const bool swap = std::lexicographical_compare(qd.begin(), qd.end(), pd.begin(), pd.end(),
                                                 [](const Complex& x, const Complex& y) {
                                                   return x.real() < y.real() ||
                                                          (x.real() == y.real() && x.imag() < y.imag());
                                                 });
  const ComplexMatrix diff = swap ? q.matrix - p.matrix : p.matrix - q.matrix;
  const double sine = operator_norm(HermitianMatrix(diff));
  // (P - Q)^2 + (P + Q - I)^2 = I, so the smallest |eigenvalue| of P + Q - I is
  // the cosine of the same angle. Pairing the two keeps full accuracy near
  // pi/2, where asin alone loses half the digits.
  ComplexMatrix sum = swap ? q.matrix + p.matrix : p.matrix + q.matrix;
  for (std::size_t i = 0; i < sum.rows(); ++i) sum(i, i) -= 1.0;
  double cosine = std::numeric_limits<double>::infinity();
  for (double l : eigenvalues(HermitianMatrix(sum))) cosine = std::min(cosine, std::abs(l));
  return std::atan2(std::clamp(sine, 0.0, 1.0), std::clamp(cosine, 0.0, 1.0));
}

double set_distance(std::span<const double> a, std::span<const double> b) {
  double d = std::numeric_limits<double>::infinity();
  for (double x : a)
    for (double y : b) d = std::min(d, std::abs(x - y));
  return d;
}

IndexSet select_perturbed_indices(std::span<const double> eigenvalues, std::span<const double> sigma_values,
                                  double radius) {
  if (!(radius > 0.0)) throw DomainError("select_perturbed_indices: radius must be positive");
  IndexSet out;
  for (std::size_t k = 0; k < eigenvalues.size(); ++k) {
    const double lambda = eigenvalues[k];
    if (set_distance(std::span<const double>(&lambda, 1), sigma_values) <= radius) out.push_back(k);
  }
  return out;
}

IndexSet select_perturbed_indices(const EigenDecomposition& ed, std::span<const double> sigma_values,
                                  double radius) {
  return select_perturbed_indices(ed.eigenvalues, sigma_values, radius);
}

SpectralPartition::SpectralPartition(std::span<const double> eigenvalues, IndexSet sigma) {
  const std::size_t n = eigenvalues.size();
  if (!std::is_sorted(eigenvalues.begin(), eigenvalues.end()))
    throw std::invalid_argument("SpectralPartition: eigenvalues must be ascending");
  std::sort(sigma.begin(), sigma.end());
  if (std::adjacent_find(sigma.begin(), sigma.end()) != sigma.end())
    throw std::invalid_argument("SpectralPartition: duplicate sigma index");
  for (std::size_t k : sigma)
    if (k >= n) throw std::out_of_range("SpectralPartition: sigma index out of range");
  if (sigma.empty() || sigma.size() == n)
    throw std::invalid_argument("SpectralPartition: sigma and its complement must both be non-empty");

  std::vector<bool> in_sigma(n, false);
  for (std::size_t k : sigma) in_sigma[k] = true;
  for (std::size_t k = 0; k < n; ++k) {
    if (in_sigma[k]) {
      sigma_.push_back(k);
      sigma_values_.push_back(eigenvalues[k]);
    } else {
      complement_.push_back(k);
      complement_values_.push_back(eigenvalues[k]);
    }
  }
  d_ = set_distance(sigma_values_, complement_values_);

  const double scale = std::max(std::abs(eigenvalues.front()), std::abs(eigenvalues.back()));
  if (!(d_ > kClusterTolerance * scale) || d_ == 0.0) {
    std::ostringstream msg;
    msg << "SpectralPartition: sigma splits an eigenvalue cluster (dist = " << d_ << ")";
    throw ConfigurationError(msg.str());
  }
}

}  // namespace sbounds
