#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "subspace_bounds/bound_functions.hpp"
#include "subspace_bounds/scenario.hpp"

namespace sbounds {

/// Roundoff allowance for bound margins (bound - theta).
inline constexpr double kMarginTolerance = 1e-9;
/// Eigenvalue tolerance for enclosures, relative to max|spec A| + ||V||.
inline constexpr double kEnclosureTolerance = 1e-10;

/// Bounds asserted for a regime at x = ||V|| / d, restricted to those whose
/// domain contains x. Generic: dk_sin2 (not for interlaced), generic_sin2,
/// gen_opt. Off-diagonal adds the regime's own bound (dk_tan2 subordinated and
/// ground state, apriori_tan finite gap, kmm/ms/off_opt interlaced); every
/// generic bound and kmm/ms/off_opt remain valid for off-diagonal V and are
/// asserted as well.
std::vector<BoundKind> applicable_bounds(Layout layout, PerturbationKind kind, double x);

struct BoundCheck {
  BoundKind kind;
  double value = 0.0;
  bool capped = false;
  double margin = 0.0;  // value - theta
  bool passed() const { return margin >= -kMarginTolerance; }
};

/// A spectral enclosure or emptiness check. slack >= 0 means it holds.
struct EnclosureCheck {
  std::string name;
  double slack = 0.0;
  bool passed = true;
};

struct TrialRecord {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  Layout layout = Layout::ground_state;
  PerturbationKind kind = PerturbationKind::generic;
  std::size_t dim = 0;
  std::size_t sigma_rank = 0;
  std::size_t omega_rank = 0;
  double d = 0.0;
  double norm_v = 0.0;
  double ratio = 0.0;
  double epsilon = 0.0;
  double theta = 0.0;
  std::optional<double> gap_length;
  double anticommutator = 0.0;
  std::vector<BoundCheck> bounds;
  std::vector<EnclosureCheck> checks;
  /// Set when the trial threw; such a trial counts as failed.
  std::string error;

  bool passed() const;
  /// Applicable bound with the smallest value.
  const BoundCheck* tightest() const;
};

/// A perturbed problem with known unperturbed spectral data.
struct Instance {
  HermitianMatrix a;
  HermitianMatrix v;
  std::vector<double> levels;  // ascending spectrum of a
  IndexSet sigma;
  OrthogonalProjection p;      // spectral projection of a for sigma
  PerturbationKind kind = PerturbationKind::generic;
  Layout layout = Layout::ground_state;
  std::optional<double> gap_length;
};

/// Eigendecomposes H = A + V, selects the perturbed set omega for the regime,
/// computes theta = arcsin ||P - Q||, evaluates every applicable bound and runs
/// the enclosure checks.
///
/// Selection of omega: generic V takes spec(H) within ||V|| of sigma (d/2 when
/// V = 0); off-diagonal interlaced takes the eps_V neighbourhood; off-diagonal
/// finite gap takes spec(H) inside the open gap of Sigma; off-diagonal
/// subordinated takes spec(H) on sigma's side of the gap. Throws
/// ConfigurationError when a radius captures eigenvalues of both sets.
TrialRecord assess(const Instance& instance);

struct Aggregates {
  std::size_t trials = 0;
  std::size_t failures = 0;
  std::size_t bound_violations = 0;
  std::size_t errors = 0;
  std::map<std::string, std::size_t> check_violations;
  double min_margin = 0.0;
  double max_theta = 0.0;
  double max_ratio = 0.0;
};

struct VerificationReport {
  ScenarioSpec spec;
  std::vector<TrialRecord> records;  // ordered by trial index
  Aggregates aggregates;

  bool passed() const { return aggregates.failures == 0 && aggregates.trials > 0; }
};

/// Trial i of the scenario, drawn from derive_seed(spec.seed, i).
Instance build_instance(const ScenarioSpec& spec, std::size_t trial);
/// assess(build_instance(spec, trial)); exceptions land in TrialRecord::error.
TrialRecord run_trial(const ScenarioSpec& spec, std::size_t trial);

/// Trials run in parallel with OpenMP; records are merged by trial index, so
/// the report is identical to verify_bounds_serial.
VerificationReport verify_bounds(const ScenarioSpec& spec, std::size_t trials);
VerificationReport verify_bounds_serial(const ScenarioSpec& spec, std::size_t trials);

Aggregates aggregate(const std::vector<TrialRecord>& records);

/// max |arcsin ||P - Q|| - arccos |<psi0, psi0'>|| over random ground-state
/// instances of dimension 2..dim_max under generic perturbations.
double ground_state_identity_check(std::size_t trials, std::size_t dim_max, std::uint64_t seed);

nlohmann::json to_json(const TrialRecord& record);
/// schema_version 1: scenario, seed, trials, records, aggregates.
nlohmann::json to_json(const VerificationReport& report);
/// One row per trial with a header line; LF line endings.
std::string to_csv(const VerificationReport& report);

}  // namespace sbounds
