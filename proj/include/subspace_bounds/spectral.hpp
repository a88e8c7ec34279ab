#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "subspace_bounds/matrix.hpp"

namespace sbounds {

/// Zero-based indices into an ascending eigenvalue list.
using IndexSet = std::vector<std::size_t>;

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // column k belongs to eigenvalues[k]; empty if not requested
  int sweeps = 0;

  std::size_t dim() const { return eigenvalues.size(); }
};

struct JacobiOptions {
  /// Converged once the off-diagonal Frobenius mass is below tolerance * ||M||_F.
  double tolerance = 1e-13;
  int max_sweeps = 100;
  bool compute_vectors = true;
};

/// Cyclic complex Jacobi eigensolver. Each rotation is a 2x2 unitary that
/// annihilates one off-diagonal pair. Throws ConvergenceError when the sweep
/// budget is exhausted.
EigenDecomposition eigen_decompose(const HermitianMatrix& m, const JacobiOptions& options = {});

/// Eigenvalues only (no eigenvector accumulation), ascending.
std::vector<double> eigenvalues(const HermitianMatrix& m);

/// ||M|| = max(|min spec M|, |max spec M|).
double operator_norm(const HermitianMatrix& m);

/// Hermitian idempotent, stored exactly Hermitian.
struct OrthogonalProjection {
  ComplexMatrix matrix;
  std::size_t rank = 0;

  std::size_t dim() const { return matrix.rows(); }
  /// I - P.
  OrthogonalProjection complement() const;
};

/// Sum over k in indices of u_k u_k^*. An empty index set yields the zero projection.
OrthogonalProjection spectral_projection(const EigenDecomposition& ed, std::span<const std::size_t> indices);

/// Projection onto the span of the given orthonormal columns of u.
OrthogonalProjection projection_onto_columns(const ComplexMatrix& u, std::span<const std::size_t> columns);

/// Maximal angle arcsin(||P - Q||) in [0, pi/2], evaluated as an atan2 of the
/// sine and cosine. Symmetric in its arguments bit for bit.
double maximal_angle(const OrthogonalProjection& p, const OrthogonalProjection& q);

/// Indices k with dist(lambda_k, sigma_values) <= radius.
IndexSet select_perturbed_indices(std::span<const double> eigenvalues, std::span<const double> sigma_values,
                                  double radius);
IndexSet select_perturbed_indices(const EigenDecomposition& ed, std::span<const double> sigma_values,
                                  double radius);

/// Distance between two finite point sets; +inf if either is empty.
double set_distance(std::span<const double> a, std::span<const double> b);

/// Relative width below which neighbouring eigenvalues form one cluster.
inline constexpr double kClusterTolerance = 1e-10;

/// Split of an ascending spectrum into sigma and its complement Sigma.
class SpectralPartition {
 public:
  /// Rejects out-of-range or duplicate indices, an empty sigma or Sigma, and
  /// splits of an eigenvalue cluster (eigenvalues closer than
  /// kClusterTolerance * max|lambda| in different sets).
  SpectralPartition(std::span<const double> eigenvalues, IndexSet sigma);

  const IndexSet& sigma() const { return sigma_; }
  const IndexSet& complement() const { return complement_; }
  const std::vector<double>& sigma_values() const { return sigma_values_; }
  const std::vector<double>& complement_values() const { return complement_values_; }
  /// dist(sigma, Sigma) > 0.
  double distance() const { return d_; }
  std::size_t dim() const { return sigma_.size() + complement_.size(); }

 private:
  IndexSet sigma_;
  IndexSet complement_;
  std::vector<double> sigma_values_;
  std::vector<double> complement_values_;
  double d_ = 0.0;
};

}  // namespace sbounds
