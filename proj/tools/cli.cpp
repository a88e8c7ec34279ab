#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "subspace_bounds/bound_functions.hpp"
#include "subspace_bounds/curves.hpp"
#include "subspace_bounds/errors.hpp"
#include "subspace_bounds/matrix_io.hpp"
#include "subspace_bounds/partition_optimizer.hpp"
#include "subspace_bounds/scenario.hpp"
#include "subspace_bounds/spectral.hpp"
#include "subspace_bounds/verification.hpp"

namespace sbounds::cli {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw UsageError("cannot open " + path + " for writing");
  file << text;
  if (!file) throw std::runtime_error("write to " + path + " failed");
}

// Runs one constant computation; failures are recorded in place of the value.
bool constant_entry(json& report, const std::string& key, json meta, const std::function<double()>& compute) {
  const auto start = std::chrono::steady_clock::now();
  bool ok = true;
  try {
    meta["value"] = compute();
  } catch (const std::exception& e) {
    meta["value"] = nullptr;
    meta["error"] = e.what();
    ok = false;
  }
  meta["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report[key] = std::move(meta);
  return ok;
}

int cmd_constants(double tolerance, const std::string& out_path, std::ostream& out) {
  json report;
  report["schema_version"] = 1;
  bool ok = true;
  ok &= constant_entry(report, "c_S", {{"method", "closed form 1/2 - 1/2 (1 - sqrt(3)/pi)^3"}}, generic_rotation_constant);

  ThresholdOptions full;
  full.tolerance = tolerance;
  const json sweep = {{"n_range", "n_min .. n_min + 25"}, {"stall_limit", full.estimate.stall_limit}};
  ok &= constant_entry(report, "generic_threshold",
                       {{"method", "bisection of the generic estimating function at pi/2"},
                        {"tolerance", tolerance},
                        {"optimizer", sweep}},
                       [&] { return solve_threshold(DenominatorKind::generic, kHalfPi, full); });
  ok &= constant_entry(report, "off_threshold",
                       {{"method", "bisection of the off-diagonal estimating function at pi/2, full optimization"},
                        {"tolerance", tolerance},
                        {"optimizer", sweep}},
                       [&] { return solve_threshold(DenominatorKind::off_diagonal, kHalfPi, full); });
  ThresholdOptions capped = full;
  capped.estimate.max_steps = kCappedSteps;
  ok &= constant_entry(report, "off_threshold_capped",
                       {{"method", "bisection of the off-diagonal estimating function at pi/2, partitions of at most "
                                   "max_steps steps"},
                        {"tolerance", tolerance},
                        {"max_steps", kCappedSteps}},
                       [&] { return solve_threshold(DenominatorKind::off_diagonal, kHalfPi, capped); });
  ok &= constant_entry(report, "ms_threshold",
                       {{"method", "bisection of the integral in m_ms at 1 (adaptive Simpson, abs tol 1e-12)"},
                        {"tolerance", 1e-10}},
                       [] { return ms_saturation_point(1e-10); });
  ok &= constant_entry(report, "kmm_saturation",
                       {{"method", "smaller positive root of (4 - pi^2) x^2 + 6 pi x - 8 = 0"}},
                       kmm_saturation_point);
  emit(report.dump(2) + "\n", out_path, out);
  return ok ? kExitPass : kExitFailure;
}

std::vector<BoundKind> parse_functions(const std::vector<std::string>& names) {
  std::vector<BoundKind> out;
  for (const auto& n : names) {
    const auto k = parse_bound_kind(n);
    if (!k) throw UsageError("unknown function '" + n + "'");
    out.push_back(*k);
  }
  return out;
}

int cmd_curves(const CurveGrid& grid, bool raw, const std::string& out_path, std::ostream& out) {
  const CurveTable table = evaluate_curves(grid);
  emit(to_csv(table, !raw), out_path, out);
  return kExitPass;
}

struct VerifyArgs {
  std::string layout;
  std::string kind;
  std::optional<double> strength;
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  std::size_t dim_min = 2;
  std::size_t dim_max = 40;
  std::vector<double> sigma_levels;
  std::vector<double> complement_levels;
  std::string out_path;
  std::string csv_path;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  ScenarioSpec spec;
  const auto layout = parse_layout(a.layout);
  if (!layout) throw UsageError("unknown layout '" + a.layout + "'");
  const auto kind = parse_perturbation_kind(a.kind);
  if (!kind) throw UsageError("unknown kind '" + a.kind + "'");
  spec.layout = *layout;
  spec.kind = *kind;
  if (a.strength) {
    spec.sampling = StrengthSampling::fixed;
    spec.strength = *a.strength;
  } else {
    spec.sampling = StrengthSampling::log_uniform;
  }
  spec.seed = a.seed;
  spec.dim_min = a.dim_min;
  spec.dim_max = a.dim_max;
  spec.sigma_levels = a.sigma_levels;
  spec.complement_levels = a.complement_levels;
  try {
    validate(spec);
  } catch (const ConfigurationError& e) {
    throw UsageError(e.what());
  }

  const VerificationReport report = verify_bounds(spec, a.trials);
  const json doc = to_json(report);
  if (!a.csv_path.empty()) emit(to_csv(report), a.csv_path, out);
  if (a.out_path.empty()) {
    out << doc.dump(2) << "\n";
  } else {
    emit(doc.dump(2) + "\n", a.out_path, out);
    json summary = {{"passed", report.passed()}, {"aggregates", doc["aggregates"]}, {"out", a.out_path}};
    out << summary.dump(2) << "\n";
  }
  return report.passed() ? kExitPass : kExitFailure;
}

struct BoundArgs {
  std::string a_path;
  std::string v_path;
  std::vector<std::size_t> sigma;
  std::string out_path;
};

HermitianMatrix load(const std::string& path) {
  try {
    return read_matrix_file(path);
  } catch (const std::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
}

int cmd_bound(const BoundArgs& args, std::ostream& out) {
  const HermitianMatrix a = load(args.a_path);
  const HermitianMatrix v = load(args.v_path);
  if (a.dim() != v.dim()) throw UsageError("A and V have different dimensions");

  const auto ed = eigen_decompose(a);
  std::optional<SpectralPartition> part;
  try {
    part.emplace(ed.eigenvalues, args.sigma);
  } catch (const std::exception& e) {
    throw UsageError(std::string("sigma: ") + e.what());
  }
  const OrthogonalProjection p = spectral_projection(ed, part->sigma());
  const double norm_v = operator_norm(v);
  const double residual = anticommutator_residual(v, p);
  const PerturbationKind kind =
      residual <= 1e-10 * norm_v ? PerturbationKind::off_diagonal : PerturbationKind::generic;
  const Layout layout = classify_layout(part->sigma_values(), part->complement_values());
  const double ratio = norm_v / part->distance();

  json doc;
  doc["schema_version"] = 1;
  doc["regime"] = {{"kind", to_string(kind)},
                   {"layout", to_string(layout)},
                   {"anticommutator_residual", norm_v > 0.0 ? residual / norm_v : 0.0}};
  if (applicable_bounds(layout, kind, ratio).empty()) {
    doc["d"] = part->distance();
    doc["norm_v"] = norm_v;
    doc["ratio"] = ratio;
    doc["error"] = "no applicable bound at ||V||/d = " + std::to_string(ratio);
    emit(doc.dump(2) + "\n", args.out_path, out);
    return kExitFailure;
  }

  Instance instance{a, v, ed.eigenvalues, part->sigma(), p, kind, layout, std::nullopt};
  const TrialRecord record = assess(instance);
  json r = to_json(record);
  for (const char* drop : {"trial", "seed", "layout", "kind"}) r.erase(drop);
  doc.update(r);
  emit(doc.dump(2) + "\n", args.out_path, out);
  return record.passed() ? kExitPass : kExitFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"A priori bounds on the rotation of spectral subspaces", "sbounds"};
  app.require_subcommand(1);

  double tolerance = 1e-6;
  std::string constants_out;
  auto* constants = app.add_subcommand("constants", "Threshold constants as JSON");
  constants->add_option("--tolerance", tolerance, "Bisection tolerance in x")->check(CLI::PositiveNumber);
  constants->add_option("--out", constants_out, "Write JSON here instead of stdout");

  CurveGrid grid;
  std::vector<std::string> function_names{"kmm", "ms", "off_opt"};
  bool raw = false;
  std::string curves_out;
  auto* curves = app.add_subcommand("curves", "Estimating functions on a grid as CSV");
  curves->add_option("--grid-min", grid.x_min, "Left end of the grid")->capture_default_str();
  curves->add_option("--grid-max", grid.x_max, "Right end of the grid")->capture_default_str();
  curves->add_option("--points", grid.points, "Number of grid points")->capture_default_str();
  curves->add_option("--functions", function_names, "Comma-separated function names")
      ->delimiter(',')
      ->capture_default_str();
  curves->add_flag("--raw-radians", raw, "Write radians instead of values scaled by 2/pi");
  curves->add_option("--out", curves_out, "Write CSV here instead of stdout");

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "Random-instance verification of every applicable bound");
  verify->add_option("--layout", verify_args.layout, "ground-state | finite-gap | interlaced | subordinated")
      ->required();
  verify->add_option("--kind", verify_args.kind, "generic | off-diagonal")->required();
  verify->add_option("--strength", verify_args.strength, "||V||/d; omitted: log-uniform sampling below the cap");
  verify->add_option("--trials", verify_args.trials, "Number of trials")->capture_default_str();
  verify->add_option("--seed", verify_args.seed, "Base seed")->capture_default_str();
  verify->add_option("--dim-min", verify_args.dim_min, "Smallest dimension")->capture_default_str();
  verify->add_option("--dim-max", verify_args.dim_max, "Largest dimension")->capture_default_str();
  verify->add_option("--sigma-levels", verify_args.sigma_levels, "Prescribed sigma levels")->delimiter(',');
  verify->add_option("--complement-levels", verify_args.complement_levels, "Prescribed Sigma levels")
      ->delimiter(',');
  verify->add_option("--out", verify_args.out_path, "Write the JSON report here");
  verify->add_option("--csv", verify_args.csv_path, "Write the per-trial CSV summary here");

  BoundArgs bound_args;
  auto* bound = app.add_subcommand("bound", "Bounds and exact angle for a matrix pair A, V");
  bound->add_option("a", bound_args.a_path, "Matrix file for A")->required();
  bound->add_option("v", bound_args.v_path, "Matrix file for V")->required();
  bound->add_option("--sigma", bound_args.sigma, "Zero-based indices into the ascending spectrum of A")
      ->delimiter(',')
      ->required();
  bound->add_option("--out", bound_args.out_path, "Write JSON here instead of stdout");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (*constants) return cmd_constants(tolerance, constants_out, out);
    if (*curves) {
      grid.functions = parse_functions(function_names);
      try {
        grid.validate();
      } catch (const ConfigurationError& e) {
        throw UsageError(e.what());
      }
      return cmd_curves(grid, raw, curves_out, out);
    }
    if (*verify) {
      if (verify_args.trials == 0) throw UsageError("--trials must be positive");
      return cmd_verify(verify_args, out);
    }
    if (*bound) return cmd_bound(bound_args, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace sbounds::cli
