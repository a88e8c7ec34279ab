#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "subspace_bounds/matrix.hpp"
#include "subspace_bounds/rng.hpp"
#include "subspace_bounds/spectral.hpp"

namespace sbounds {

/// Mutual position of the isolated part sigma and the rest Sigma of spec(A).
enum class Layout {
  ground_state,  // sigma = {E0} below all of Sigma
  finite_gap,    // sigma inside a bounded gap (max Sigma-, min Sigma+)
  interlaced,    // sigma and Sigma alternate
  subordinated,  // max sigma < min Sigma
};

enum class PerturbationKind { generic, off_diagonal };

std::string_view to_string(Layout layout);
std::string_view to_string(PerturbationKind kind);
/// Accepts the CLI spellings: ground-state, finite-gap, interlaced, subordinated.
std::optional<Layout> parse_layout(std::string_view name);
/// Accepts generic, off-diagonal.
std::optional<PerturbationKind> parse_perturbation_kind(std::string_view name);

/// Smallest dimension able to carry the layout (interlaced needs E0 < E1 < E2
/// plus one level of Sigma above).
std::size_t minimum_dim(Layout layout);

/// Supremum of admissible ||V|| / d: 1/2 for generic perturbations, sqrt(3)/2
/// for off-diagonal interlaced, sqrt(2) for off-diagonal finite gap, +inf for
/// off-diagonal subordinated and ground state.
double strength_cap(Layout layout, PerturbationKind kind);

/// Upper end of the log-uniform strength range for regimes without a finite cap.
inline constexpr double kUnboundedStrengthRange = 10.0;

enum class StrengthSampling { fixed, log_uniform };

struct ScenarioSpec {
  Layout layout = Layout::ground_state;
  PerturbationKind kind = PerturbationKind::generic;
  /// Prescribed levels; when both are empty they are drawn per trial.
  std::vector<double> sigma_levels;
  std::vector<double> complement_levels;
  /// ||V|| / d for fixed sampling.
  double strength = 0.0;
  /// log_uniform draws ||V|| / d from [0.01, 0.98] * strength_cap (or
  /// kUnboundedStrengthRange when the cap is infinite).
  StrengthSampling sampling = StrengthSampling::fixed;
  /// Dimension range for drawn levels; ignored for prescribed levels.
  std::size_t dim_min = 2;
  std::size_t dim_max = 40;
  std::uint64_t seed = 0;

  bool prescribed_levels() const { return !sigma_levels.empty() || !complement_levels.empty(); }
};

/// Throws ConfigurationError if the spec cannot produce valid instances:
/// layout violations in prescribed levels, strength at or past the cap,
/// negative strength, or an empty dimension range.
void validate(const ScenarioSpec& spec);

/// Checks that sigma and Sigma realize the layout; throws ConfigurationError.
void validate_layout(Layout layout, std::span<const double> sigma, std::span<const double> complement);

/// Layout read off from level order. A single sigma level below Sigma is
/// reported as subordinated (ground_state is only a generation layout).
/// Anything that is neither subordinated (either order) nor a finite gap is
/// reported as interlaced.
Layout classify_layout(std::span<const double> sigma, std::span<const double> complement);

struct LevelSet {
  std::vector<double> sigma;
  std::vector<double> complement;
};

/// Random levels for a layout with total size dim. The nearest pair across
/// sigma and Sigma is at distance d0 drawn from [0.5, 2], and the top of Sigma
/// carries a cluster of 5 to 10 levels spaced d0/100 (fewer when dim is small).
LevelSet random_levels(Layout layout, std::size_t dim, Rng& rng);

struct Unperturbed {
  HermitianMatrix a;
  ComplexMatrix basis;         // columns are eigenvectors of a, in level order
  std::vector<double> levels;  // ascending
  SpectralPartition partition;
  OrthogonalProjection p;      // spectral projection for sigma
  std::optional<double> gap_length;  // finite gap only: min Sigma+ - max Sigma-
};

/// A = U diag(levels) U^* with U = random_unitary; P is read off from the
/// columns of U, so it is exact up to the orthonormality of U.
Unperturbed build_unperturbed(const LevelSet& levels, Rng& rng);

/// ||V|| = norm. Generic: a rescaled random_hermitian draw. Off-diagonal:
/// V = P W P' + P' W P for a random_hermitian W, rescaled. norm = 0 gives the
/// zero matrix.
HermitianMatrix build_perturbation(PerturbationKind kind, const OrthogonalProjection& p, double norm, Rng& rng);

/// ||V (P - P') + (P - P') V||.
double anticommutator_residual(const HermitianMatrix& v, const OrthogonalProjection& p);

}  // namespace sbounds
