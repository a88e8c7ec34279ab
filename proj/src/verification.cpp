#include "subspace_bounds/verification.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <numbers>
#include <sstream>

#include "subspace_bounds/errors.hpp"

namespace sbounds {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double distance_to(double x, std::span<const double> set) { return set_distance(std::span<const double>(&x, 1), set); }

IndexSet within(std::span<const double> eigs, std::span<const double> centres, double radius) {
  IndexSet out;
  for (std::size_t k = 0; k < eigs.size(); ++k)
    if (distance_to(eigs[k], centres) <= radius) out.push_back(k);
  return out;
}

IndexSet complement_of(const IndexSet& set, std::size_t n) {
  IndexSet out;
  std::size_t j = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (j < set.size() && set[j] == k)
      ++j;
    else
      out.push_back(k);
  }
  return out;
}

std::vector<double> values_at(std::span<const double> eigs, const IndexSet& idx) {
  std::vector<double> out;
  for (std::size_t k : idx) out.push_back(eigs[k]);
  return out;
}

void add_check(TrialRecord& r, std::string name, double slack) {
  if (!std::isfinite(slack)) slack = slack > 0 ? std::numeric_limits<double>::max() : -std::numeric_limits<double>::max();
  r.checks.push_back({std::move(name), slack, slack >= 0.0});
}

bool sigma_below(std::span<const double> sv, std::span<const double> cv) {
  return *std::max_element(sv.begin(), sv.end()) < *std::min_element(cv.begin(), cv.end());
}

}  // namespace

std::vector<BoundKind> applicable_bounds(Layout layout, PerturbationKind kind, double x) {
  std::vector<BoundKind> candidates;
  if (layout != Layout::interlaced) candidates.push_back(BoundKind::dk_sin2);
  candidates.push_back(BoundKind::generic_sin2);
  candidates.push_back(BoundKind::gen_opt);
  if (kind == PerturbationKind::off_diagonal) {
    if (layout == Layout::ground_state || layout == Layout::subordinated) candidates.push_back(BoundKind::dk_tan2);
    if (layout == Layout::finite_gap) candidates.push_back(BoundKind::apriori_tan);
    candidates.push_back(BoundKind::kmm);
    candidates.push_back(BoundKind::ms);
    candidates.push_back(BoundKind::off_opt);
  }
  std::vector<BoundKind> out;
  for (BoundKind k : candidates)
    if (domain(k).contains(x)) out.push_back(k);
  return out;
}

bool TrialRecord::passed() const {
  if (!error.empty()) return false;
  for (const auto& b : bounds)
    if (!b.passed()) return false;
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

const BoundCheck* TrialRecord::tightest() const {
  const BoundCheck* best = nullptr;
  for (const auto& b : bounds)
    if (best == nullptr || b.value < best->value) best = &b;
  return best;
}

TrialRecord assess(const Instance& in) {
  const SpectralPartition part(in.levels, in.sigma);
  const auto& sv = part.sigma_values();
  const auto& cv = part.complement_values();

  TrialRecord r;
  r.layout = in.layout;
  r.kind = in.kind;
  r.dim = part.dim();
  r.sigma_rank = part.sigma().size();
  r.d = part.distance();
  r.norm_v = operator_norm(in.v);
  r.ratio = r.norm_v / r.d;
  r.epsilon = epsilon_shift(r.norm_v, r.d).epsilon;
  r.gap_length = in.gap_length;
  r.anticommutator = r.norm_v > 0.0 ? anticommutator_residual(in.v, in.p) / r.norm_v : 0.0;

  const auto ed = eigen_decompose(in.a + in.v);
  const auto& eigs = ed.eigenvalues;
  const double scale = std::max(std::abs(in.levels.front()), std::abs(in.levels.back())) + r.norm_v;
  const double tol = kEnclosureTolerance * std::max(scale, std::numeric_limits<double>::min());
  const bool off = in.kind == PerturbationKind::off_diagonal;

  // Choose omega.
  IndexSet omega;
  const bool radius_rule = !off || in.layout == Layout::interlaced;
  if (radius_rule) {
    double radius = off ? r.epsilon : r.norm_v;
    if (radius == 0.0) radius = 0.5 * r.d;
    omega = within(eigs, sv, radius + tol);
    const IndexSet other = within(eigs, cv, radius + tol);
    for (std::size_t k : omega)
      if (std::binary_search(other.begin(), other.end(), k)) {
        std::ostringstream msg;
        msg << "enclosure radius " << radius << " captures eigenvalue " << eigs[k] << " from both sets";
        throw ConfigurationError(msg.str());
      }
    if (!off) add_check(r, "disjoint_enclosure", -static_cast<double>(eigs.size() - omega.size() - other.size()));
  } else if (in.layout == Layout::finite_gap) {
    const double smin = sv.front();
    double lo = -kInf, hi = kInf;
    for (double c : cv) {
      if (c < smin) lo = std::max(lo, c);
      else hi = std::min(hi, c);
    }
    for (std::size_t k = 0; k < eigs.size(); ++k)
      if (eigs[k] > lo + tol && eigs[k] < hi - tol) omega.push_back(k);
  } else {
    const bool below = sigma_below(sv, cv);
    for (std::size_t k = 0; k < eigs.size(); ++k)
      if (below ? eigs[k] <= sv.back() + tol : eigs[k] >= sv.front() - tol) omega.push_back(k);
  }
  r.omega_rank = omega.size();
  add_check(r, "rank", -std::abs(static_cast<double>(omega.size()) - static_cast<double>(r.sigma_rank)));

  const OrthogonalProjection q = spectral_projection(ed, omega);
  r.theta = maximal_angle(in.p, q);

  // Weyl: spec(H) lies in the closed ||V||-neighbourhood of spec(A).
  double weyl = kInf;
  for (double lambda : eigs) weyl = std::min(weyl, r.norm_v + tol - distance_to(lambda, in.levels));
  add_check(r, "weyl", weyl);

  const std::vector<double> ov = values_at(eigs, omega);
  const std::vector<double> cov = values_at(eigs, complement_of(omega, eigs.size()));
  if (off && r.ratio < std::numbers::sqrt3 / 2.0 && !ov.empty() && !cov.empty()) {
    double s1 = kInf, s2 = kInf;
    for (double lambda : ov) s1 = std::min(s1, r.epsilon + tol - distance_to(lambda, sv));
    for (double lambda : cov) s2 = std::min(s2, r.epsilon + tol - distance_to(lambda, cv));
    add_check(r, "shift_enclosure_sigma", s1);
    add_check(r, "shift_enclosure_complement", s2);
    add_check(r, "separation", set_distance(ov, cov) - (r.d - 2.0 * r.epsilon) + tol);
  }
  if (off && (in.layout == Layout::subordinated || in.layout == Layout::ground_state)) {
    const bool below = sigma_below(sv, cv);
    const double lo = below ? sv.back() : cv.back();
    const double hi = below ? cv.front() : sv.front();
    std::size_t inside = 0;
    for (double lambda : eigs) inside += lambda > lo + tol && lambda < hi - tol;
    add_check(r, "gap_empty", -static_cast<double>(inside));
    if (!ov.empty()) {
      double slack = kInf;
      for (double lambda : ov)
        slack = below ? std::min({slack, lambda - (sv.front() - r.epsilon) + tol, sv.back() - lambda + tol})
                      : std::min({slack, sv.back() + r.epsilon - lambda + tol, lambda - sv.front() + tol});
      add_check(r, below && sv.size() == 1 ? "trapping" : "confinement", slack);
    }
  }

  for (BoundKind kind : applicable_bounds(in.layout, in.kind, r.ratio)) {
    const BoundValue bv = evaluate(kind, r.ratio);
    r.bounds.push_back({kind, bv.value, bv.capped, bv.value - r.theta});
  }
  return r;
}

Instance build_instance(const ScenarioSpec& spec, std::size_t trial) {
  Rng rng(derive_seed(spec.seed, trial));
  LevelSet levels;
  if (spec.prescribed_levels()) {
    levels = {spec.sigma_levels, spec.complement_levels};
  } else {
    const std::size_t lo = std::max(spec.dim_min, minimum_dim(spec.layout));
    levels = random_levels(spec.layout, rng.uniform_index(lo, spec.dim_max), rng);
  }
  Unperturbed un = build_unperturbed(levels, rng);
  double strength = spec.strength;
  if (spec.sampling == StrengthSampling::log_uniform) {
    double cap = strength_cap(spec.layout, spec.kind);
    if (!std::isfinite(cap)) cap = kUnboundedStrengthRange;
    strength = rng.log_uniform(0.01 * cap, 0.98 * cap);
  }
  HermitianMatrix v = build_perturbation(spec.kind, un.p, strength * un.partition.distance(), rng);
  return {std::move(un.a), std::move(v), std::move(un.levels), un.partition.sigma(),
          std::move(un.p), spec.kind, spec.layout, un.gap_length};
}

TrialRecord run_trial(const ScenarioSpec& spec, std::size_t trial) {
  TrialRecord record;
  try {
    record = assess(build_instance(spec, trial));
  } catch (const std::exception& e) {
    record.error = e.what();
  }
  record.trial = trial;
  record.seed = derive_seed(spec.seed, trial);
  record.layout = spec.layout;
  record.kind = spec.kind;
  return record;
}

Aggregates aggregate(const std::vector<TrialRecord>& records) {
  Aggregates a;
  a.trials = records.size();
  a.min_margin = kInf;
  for (const auto& r : records) {
    if (!r.passed()) ++a.failures;
    if (!r.error.empty()) ++a.errors;
    bool violated = false;
    for (const auto& b : r.bounds) {
      violated |= !b.passed();
      a.min_margin = std::min(a.min_margin, b.margin);
    }
    a.bound_violations += violated;
    for (const auto& c : r.checks) {
      auto& count = a.check_violations[c.name];
      count += !c.passed;
    }
    a.max_theta = std::max(a.max_theta, r.theta);
    a.max_ratio = std::max(a.max_ratio, r.ratio);
  }
  if (!std::isfinite(a.min_margin)) a.min_margin = 0.0;
  return a;
}

VerificationReport verify_bounds(const ScenarioSpec& spec, std::size_t trials) {
  validate(spec);
  VerificationReport report{spec, std::vector<TrialRecord>(trials), {}};
  const auto n = static_cast<std::ptrdiff_t>(trials);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n; ++i) report.records[i] = run_trial(spec, static_cast<std::size_t>(i));
  report.aggregates = aggregate(report.records);
  return report;
}

VerificationReport verify_bounds_serial(const ScenarioSpec& spec, std::size_t trials) {
  validate(spec);
  VerificationReport report{spec, std::vector<TrialRecord>(trials), {}};
  for (std::size_t i = 0; i < trials; ++i) report.records[i] = run_trial(spec, i);
  report.aggregates = aggregate(report.records);
  return report;
}

double ground_state_identity_check(std::size_t trials, std::size_t dim_max, std::uint64_t seed) {
  if (dim_max < 2) throw DomainError("ground_state_identity_check: dim must be >= 2");
  double worst = 0.0;
  const auto n = static_cast<std::ptrdiff_t>(trials);
#pragma omp parallel for schedule(dynamic, 8) reduction(max : worst)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    const LevelSet levels = random_levels(Layout::ground_state, rng.uniform_index(2, dim_max), rng);
    const Unperturbed un = build_unperturbed(levels, rng);
    const double norm = rng.log_uniform(0.005, 0.49) * un.partition.distance();
    const HermitianMatrix v = build_perturbation(PerturbationKind::generic, un.p, norm, rng);
    const auto ed = eigen_decompose(un.a + v);
    const std::size_t first = 0;
    const OrthogonalProjection q = spectral_projection(ed, std::span<const std::size_t>(&first, 1));
    Complex overlap{};
    for (std::size_t k = 0; k < ed.dim(); ++k) overlap += std::conj(un.basis(k, 0)) * ed.eigenvectors(k, 0);
    const double lhs = maximal_angle(un.p, q);
    const double rhs = std::acos(std::min(1.0, std::abs(overlap)));
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

nlohmann::json to_json(const TrialRecord& r) {
  nlohmann::json j;
  j["trial"] = r.trial;
  j["seed"] = r.seed;
  j["layout"] = to_string(r.layout);
  j["kind"] = to_string(r.kind);
  j["dim"] = r.dim;
  j["sigma_rank"] = r.sigma_rank;
  j["omega_rank"] = r.omega_rank;
  j["d"] = r.d;
  j["norm_v"] = r.norm_v;
  j["ratio"] = r.ratio;
  j["epsilon"] = r.epsilon;
  j["theta"] = r.theta;
  j["gap_length"] = r.gap_length ? nlohmann::json(*r.gap_length) : nlohmann::json(nullptr);
  j["anticommutator_residual"] = r.anticommutator;
  j["bounds"] = nlohmann::json::array();
  for (const auto& b : r.bounds)
    j["bounds"].push_back(
        {{"kind", to_string(b.kind)}, {"value", b.value}, {"capped", b.capped}, {"margin", b.margin}, {"passed", b.passed()}});
  j["checks"] = nlohmann::json::array();
  for (const auto& c : r.checks) j["checks"].push_back({{"name", c.name}, {"slack", c.slack}, {"passed", c.passed}});
  if (const BoundCheck* t = r.tightest())
    j["tightest"] = {{"kind", to_string(t->kind)}, {"value", t->value}};
  else
    j["tightest"] = nullptr;
  j["passed"] = r.passed();
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

nlohmann::json to_json(const VerificationReport& report) {
  const ScenarioSpec& s = report.spec;
  nlohmann::json scenario = {{"layout", to_string(s.layout)}, {"kind", to_string(s.kind)}};
  if (s.sampling == StrengthSampling::fixed) {
    scenario["strength"] = s.strength;
    scenario["sampling"] = "fixed";
  } else {
    scenario["strength"] = nullptr;
    scenario["sampling"] = "log-uniform";
  }
  const double cap = strength_cap(s.layout, s.kind);
  scenario["strength_cap"] = std::isfinite(cap) ? nlohmann::json(cap) : nlohmann::json(nullptr);
  if (s.prescribed_levels()) {
    scenario["sigma_levels"] = s.sigma_levels;
    scenario["complement_levels"] = s.complement_levels;
  } else {
    scenario["dim_min"] = std::max(s.dim_min, minimum_dim(s.layout));
    scenario["dim_max"] = s.dim_max;
  }

  nlohmann::json j;
  j["schema_version"] = 1;
  j["scenario"] = scenario;
  j["seed"] = s.seed;
  j["trials"] = report.records.size();
  j["records"] = nlohmann::json::array();
  for (const auto& r : report.records) j["records"].push_back(to_json(r));
  const Aggregates& a = report.aggregates;
  j["aggregates"] = {{"trials", a.trials},         {"failures", a.failures},   {"bound_violations", a.bound_violations},
                     {"errors", a.errors},         {"min_margin", a.min_margin}, {"max_theta", a.max_theta},
                     {"max_ratio", a.max_ratio},   {"check_violations", a.check_violations}};
  j["passed"] = report.passed();
  return j;
}

std::string to_csv(const VerificationReport& report) {
  std::ostringstream out;
  out << "trial,seed,dim,sigma_rank,omega_rank,d,norm_v,ratio,epsilon,theta,tightest_bound,tightest_value,"
         "min_margin,failed_checks,passed\n";
  char buf[64];
  const auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (const auto& r : report.records) {
    double min_margin = kInf;
    for (const auto& b : r.bounds) min_margin = std::min(min_margin, b.margin);
    std::size_t failed = 0;
    for (const auto& c : r.checks) failed += !c.passed;
    const BoundCheck* t = r.tightest();
    out << r.trial << ',' << r.seed << ',' << r.dim << ',' << r.sigma_rank << ',' << r.omega_rank << ',' << num(r.d)
        << ',' << num(r.norm_v) << ',' << num(r.ratio) << ',' << num(r.epsilon) << ',' << num(r.theta) << ','
        << (t ? to_string(t->kind) : "") << ',' << (t ? num(t->value) : "") << ','
        << (std::isfinite(min_margin) ? num(min_margin) : "") << ',' << failed << ',' << (r.passed() ? 1 : 0)
        << '\n';
  }
  return out.str();
}

}  // namespace sbounds
