#include "subspace_bounds/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "subspace_bounds/errors.hpp"

namespace sbounds {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// `count` ascending levels starting exactly at `start`. The top of the list is
// a cluster of up to 10 levels spaced d0/100 standing in for a continuum.
std::vector<double> ascending_with_cluster(double start, std::size_t count, double d0, Rng& rng) {
  std::vector<double> out;
  if (count == 0) return out;
  out.push_back(start);
  const std::size_t rest = count - 1;
  std::size_t cluster = 0;
  if (rest >= 5)
    cluster = rng.uniform_index(5, std::min<std::size_t>(10, rest));
  else
    cluster = rest;
  for (std::size_t i = 0; i + cluster < rest; ++i) out.push_back(out.back() + d0 * rng.uniform(0.2, 1.5));
  if (cluster > 0) {
    out.push_back(out.back() + d0 * rng.uniform(0.2, 1.5));
    for (std::size_t i = 1; i < cluster; ++i) out.push_back(out.back() + d0 / 100.0);
  }
  return out;
}

// `count` levels descending from `top`, returned in ascending order.
std::vector<double> descending_from(double top, std::size_t count, double d0, Rng& rng) {
  std::vector<double> out;
  double level = top;
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(level);
    level -= d0 * rng.uniform(0.2, 1.5);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

void require(bool ok, const char* layout, const char* what) {
  if (!ok) {
    std::ostringstream msg;
    msg << layout << " layout: " << what;
    throw ConfigurationError(msg.str());
  }
}

}  // namespace

std::string_view to_string(Layout layout) {
  switch (layout) {
    case Layout::ground_state: return "ground-state";
    case Layout::finite_gap: return "finite-gap";
    case Layout::interlaced: return "interlaced";
    case Layout::subordinated: return "subordinated";
  }
  return "unknown";
}

std::string_view to_string(PerturbationKind kind) {
  return kind == PerturbationKind::generic ? "generic" : "off-diagonal";
}

std::optional<Layout> parse_layout(std::string_view name) {
  for (Layout l : {Layout::ground_state, Layout::finite_gap, Layout::interlaced, Layout::subordinated})
    if (to_string(l) == name) return l;
  return std::nullopt;
}

std::optional<PerturbationKind> parse_perturbation_kind(std::string_view name) {
  if (name == "generic") return PerturbationKind::generic;
  if (name == "off-diagonal") return PerturbationKind::off_diagonal;
  return std::nullopt;
}

std::size_t minimum_dim(Layout layout) {
  switch (layout) {
    case Layout::ground_state:
    case Layout::subordinated: return 2;
    case Layout::finite_gap: return 3;
    case Layout::interlaced: return 4;
  }
  return 2;
}

double strength_cap(Layout layout, PerturbationKind kind) {
  if (kind == PerturbationKind::generic) return 0.5;
  switch (layout) {
    case Layout::interlaced: return std::numbers::sqrt3 / 2.0;
    case Layout::finite_gap: return std::numbers::sqrt2;
    case Layout::ground_state:
    case Layout::subordinated: return kInf;
  }
  return 0.0;
}

void validate_layout(Layout layout, std::span<const double> sigma, std::span<const double> complement) {
  const char* name = to_string(layout).data();
  require(!sigma.empty() && !complement.empty(), name, "sigma and Sigma must both be non-empty");
  for (double v : sigma) require(std::isfinite(v), name, "levels must be finite");
  for (double v : complement) require(std::isfinite(v), name, "levels must be finite");
  require(set_distance(sigma, complement) > 0.0, name, "sigma and Sigma must be disjoint");

  const auto [smin, smax] = std::minmax_element(sigma.begin(), sigma.end());
  const auto [cmin, cmax] = std::minmax_element(complement.begin(), complement.end());
  switch (layout) {
    case Layout::ground_state:
      require(sigma.size() == 1, name, "sigma must be a single level");
      require(*smax < *cmin, name, "the sigma level must lie below all of Sigma");
      return;
    case Layout::subordinated:
      require(*smax < *cmin, name, "max sigma must be below min Sigma");
      return;
    case Layout::finite_gap: {
      bool below = false, above = false, inside = false;
      for (double c : complement) {
        below |= c < *smin;
        above |= c > *smax;
        inside |= c >= *smin && c <= *smax;
      }
      require(below && above && !inside, name, "sigma must sit inside a bounded gap of Sigma");
      return;
    }
    case Layout::interlaced: {
      require(sigma.size() >= 2, name, "sigma needs at least two levels");
      std::vector<double> s(sigma.begin(), sigma.end()), c(complement.begin(), complement.end());
      std::sort(s.begin(), s.end());
      std::sort(c.begin(), c.end());
      // E0 < E1 < ... < E_2k with sigma on the even positions, then the rest of Sigma.
      require(c.size() >= s.size(), name, "Sigma needs a level between each pair of sigma levels and one above");
      for (std::size_t i = 0; i + 1 < s.size(); ++i)
        require(s[i] < c[i] && c[i] < s[i + 1], name, "sigma must occupy the even-numbered levels");
      require(c[s.size() - 1] > s.back(), name, "Sigma must continue above the last sigma level");
      return;
    }
  }
}

Layout classify_layout(std::span<const double> sigma, std::span<const double> complement) {
  const auto [smin, smax] = std::minmax_element(sigma.begin(), sigma.end());
  const auto [cmin, cmax] = std::minmax_element(complement.begin(), complement.end());
  if (*smax < *cmin || *cmax < *smin) return Layout::subordinated;
  bool below = false, above = false, inside = false;
  for (double c : complement) {
    below |= c < *smin;
    above |= c > *smax;
    inside |= c >= *smin && c <= *smax;
  }
  if (below && above && !inside) return Layout::finite_gap;
  return Layout::interlaced;
}

void validate(const ScenarioSpec& spec) {
  const double cap = strength_cap(spec.layout, spec.kind);
  if (spec.sampling == StrengthSampling::fixed && !(spec.strength >= 0.0 && spec.strength < cap)) {
    std::ostringstream msg;
    msg << "strength " << spec.strength << " outside [0, " << cap << ") for " << to_string(spec.kind) << " "
        << to_string(spec.layout);
    throw ConfigurationError(msg.str());
  }
  if (spec.prescribed_levels()) {
    validate_layout(spec.layout, spec.sigma_levels, spec.complement_levels);
    return;
  }
  if (spec.dim_max < minimum_dim(spec.layout) || spec.dim_min > spec.dim_max) {
    std::ostringstream msg;
    msg << "dimension range [" << spec.dim_min << ", " << spec.dim_max << "] cannot carry the "
        << to_string(spec.layout) << " layout (minimum " << minimum_dim(spec.layout) << ")";
    throw ConfigurationError(msg.str());
  }
}

LevelSet random_levels(Layout layout, std::size_t dim, Rng& rng) {
  if (dim < minimum_dim(layout)) throw ConfigurationError("random_levels: dimension too small for the layout");
  const double d0 = rng.uniform(0.5, 2.0);
  LevelSet out;
  switch (layout) {
    case Layout::ground_state:
    case Layout::subordinated: {
      const std::size_t k = layout == Layout::ground_state ? 1 : rng.uniform_index(1, std::max<std::size_t>(1, dim / 2));
      out.sigma = descending_from(-d0, k, d0, rng);
      out.complement = ascending_with_cluster(0.0, dim - k, d0, rng);
      break;
    }
    case Layout::finite_gap: {
      const std::size_t k = rng.uniform_index(1, std::max<std::size_t>(1, (dim - 2) / 2));
      const std::size_t below = rng.uniform_index(1, std::max<std::size_t>(1, (dim - k - 1) / 2));
      const std::size_t above = dim - k - below;
      out.sigma = ascending_with_cluster(0.0, 1, d0, rng);
      for (std::size_t i = 1; i < k; ++i) out.sigma.push_back(out.sigma.back() + d0 * rng.uniform(0.2, 1.5));
      const bool tight_below = rng.uniform(0.0, 1.0) < 0.5;
      const double d_below = tight_below ? d0 : d0 * rng.uniform(1.0, 2.0);
      const double d_above = tight_below ? d0 * rng.uniform(1.0, 2.0) : d0;
      out.complement = descending_from(-d_below, below, d0, rng);
      const auto upper = ascending_with_cluster(out.sigma.back() + d_above, above, d0, rng);
      out.complement.insert(out.complement.end(), upper.begin(), upper.end());
      break;
    }
    case Layout::interlaced: {
      const std::size_t k = rng.uniform_index(1, (dim - 2) / 2);
      std::vector<double> gaps(2 * k);
      for (double& g : gaps) g = d0 * rng.uniform(1.0, 2.0);
      gaps[rng.uniform_index(0, gaps.size() - 1)] = d0;
      double level = 0.0;
      for (std::size_t i = 0; i <= 2 * k; ++i) {
        (i % 2 == 0 ? out.sigma : out.complement).push_back(level);
        if (i < 2 * k) level += gaps[i];
      }
      const auto upper = ascending_with_cluster(level + d0 * rng.uniform(1.0, 2.0), dim - (2 * k + 1), d0, rng);
      out.complement.insert(out.complement.end(), upper.begin(), upper.end());
      break;
    }
  }
  return out;
}

Unperturbed build_unperturbed(const LevelSet& levels, Rng& rng) {
  std::vector<std::pair<double, bool>> tagged;
  for (double v : levels.sigma) tagged.emplace_back(v, true);
  for (double v : levels.complement) tagged.emplace_back(v, false);
  std::stable_sort(tagged.begin(), tagged.end(), [](const auto& x, const auto& y) { return x.first < y.first; });

  std::vector<double> values;
  IndexSet sigma;
  for (std::size_t i = 0; i < tagged.size(); ++i) {
    values.push_back(tagged[i].first);
    if (tagged[i].second) sigma.push_back(i);
  }
  SpectralPartition partition(values, sigma);
  ComplexMatrix u = random_unitary(values.size(), rng);
  HermitianMatrix a = unitary_congruence(u, values);
  OrthogonalProjection p = projection_onto_columns(u, partition.sigma());

  std::optional<double> gap;
  if (classify_layout(levels.sigma, levels.complement) == Layout::finite_gap) {
    const double smin = *std::min_element(levels.sigma.begin(), levels.sigma.end());
    double lo = -kInf, hi = kInf;
    for (double c : levels.complement) {
      if (c < smin) lo = std::max(lo, c);
      else hi = std::min(hi, c);
    }
    gap = hi - lo;
  }
  return Unperturbed{std::move(a), std::move(u), std::move(values), std::move(partition), std::move(p), gap};
}

HermitianMatrix build_perturbation(PerturbationKind kind, const OrthogonalProjection& p, double norm, Rng& rng) {
  const std::size_t n = p.dim();
  if (!(norm >= 0.0) || !std::isfinite(norm)) throw DomainError("build_perturbation: norm must be finite and >= 0");
  if (norm == 0.0) return HermitianMatrix::zero(n);
  HermitianMatrix w = random_hermitian(n, rng);
  if (kind == PerturbationKind::off_diagonal) {
    const ComplexMatrix x = p.matrix * w.matrix() * p.complement().matrix;
    w = HermitianMatrix(x + x.adjoint());
  }
  const double current = operator_norm(w);
  if (current == 0.0) return HermitianMatrix::zero(n);
  return w.scaled(norm / current);
}

double anticommutator_residual(const HermitianMatrix& v, const OrthogonalProjection& p) {
  const ComplexMatrix j = p.matrix - p.complement().matrix;
  const ComplexMatrix r = v.matrix() * j + j * v.matrix();
  // Exactly Hermitian in exact arithmetic; only roundoff breaks the symmetry.
  return operator_norm(HermitianMatrix(r, 1.0));
}

}  // namespace sbounds
