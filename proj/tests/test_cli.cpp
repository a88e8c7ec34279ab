#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>
#include <sys/wait.h>

#include "cli.hpp"
#include "subspace_bounds/matrix_io.hpp"
#include "subspace_bounds/verification.hpp"

using namespace sbounds;
using doctest::Approx;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("sbounds_cli_" + std::to_string(std::rand()) + "_" +
                                         std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

std::string write(const TempDir& dir, const std::string& name, const HermitianMatrix& m) {
  const std::string p = dir.file(name);
  write_matrix_file(p, m);
  return p;
}

HermitianMatrix real(std::vector<std::vector<double>> rows) {
  ComplexMatrix m(rows.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
  return HermitianMatrix(m);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("constants") {
  const auto r = run({"constants"});
  REQUIRE(r.code == cli::kExitPass);
  const json j = json::parse(r.out);
  for (const char* key :
       {"c_S", "generic_threshold", "off_threshold", "off_threshold_capped", "ms_threshold", "kmm_saturation"}) {
    CAPTURE(key);
    REQUIRE(j.contains(key));
    CHECK(j[key]["value"].is_number());
    CHECK(j[key].contains("method"));
    CHECK(j[key]["seconds"].get<double>() >= 0.0);
  }
  CHECK(j["c_S"]["value"].get<double>() == Approx(0.454839).epsilon(1e-6 / 0.454839));
  CHECK(std::abs(j["ms_threshold"]["value"].get<double>() - 0.67598) <= 1e-4);
  CHECK(j["off_threshold"]["value"].get<double>() >= 0.6920);
  CHECK(j["kmm_saturation"]["value"].get<double>() == Approx(0.5033).epsilon(1e-4));
}

TEST_CASE("curves") {
  const auto r = run({"curves", "--points", "11", "--grid-max", "0.5"});
  REQUIRE(r.code == cli::kExitPass);
  CHECK(r.out.rfind("x,kmm,ms,off_opt\n", 0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 12);

  TempDir dir;
  const std::string out = dir.file("c.csv");
  CHECK(run({"curves", "--points", "3", "--functions", "dk_sin2,gen_opt", "--raw-radians", "--out", out}).code == 0);
  CHECK(slurp(out).rfind("x,dk_sin2,gen_opt\n0,0,0\n", 0) == 0);

  CHECK(run({"curves", "--functions", "nope"}).code == cli::kExitUsage);
  CHECK(run({"curves", "--grid-max", "0.9"}).code == cli::kExitUsage);
  CHECK(run({"curves", "--points", "1"}).code == cli::kExitUsage);
}

TEST_CASE("verify") {
  const auto r = run({"verify", "--layout", "finite-gap", "--kind", "generic", "--trials", "20", "--seed", "3"});
  CHECK(r.code == cli::kExitPass);
  const json j = json::parse(r.out);
  CHECK(j["passed"] == true);
  CHECK(j["records"].size() == 20);

  const auto documented =
      run({"verify", "--layout", "ground-state", "--kind", "generic", "--strength", "0.4", "--trials", "1000",
           "--seed", "7", "--out", "/dev/null"});
  CHECK(documented.code == cli::kExitPass);

  const auto strong = run({"verify", "--layout", "subordinated", "--kind", "off-diagonal", "--strength", "5",
                           "--trials", "30"});
  CHECK(strong.code == cli::kExitPass);

  TempDir dir;
  const auto with_files = run({"verify", "--layout", "interlaced", "--kind", "off-diagonal", "--trials", "10",
                               "--out", dir.file("r.json"), "--csv", dir.file("r.csv")});
  CHECK(with_files.code == cli::kExitPass);
  CHECK(json::parse(with_files.out)["passed"] == true);
  CHECK(json::parse(slurp(dir.file("r.json")))["trials"] == 10);
  CHECK(slurp(dir.file("r.csv")).rfind("trial,", 0) == 0);

  const auto prescribed = run({"verify", "--layout", "interlaced", "--kind", "off-diagonal", "--strength", "0.5",
                               "--sigma-levels", "-3,-1", "--complement-levels", "-2,0", "--trials", "5"});
  CHECK(prescribed.code == cli::kExitPass);
}

TEST_CASE("verify usage errors") {
  CHECK(run({"verify", "--layout", "finite-gap"}).code == cli::kExitUsage);
  CHECK(run({"verify", "--layout", "sideways", "--kind", "generic"}).code == cli::kExitUsage);
  CHECK(run({"verify", "--layout", "finite-gap", "--kind", "diagonal"}).code == cli::kExitUsage);
  const auto strong = run({"verify", "--layout", "finite-gap", "--kind", "generic", "--strength", "0.6"});
  CHECK(strong.code == cli::kExitUsage);
  CHECK(strong.err.find("strength") != std::string::npos);
  CHECK(run({"verify", "--layout", "interlaced", "--kind", "generic", "--dim-max", "3"}).code == cli::kExitUsage);
  CHECK(run({"verify", "--layout", "ground-state", "--kind", "generic", "--trials", "0"}).code == cli::kExitUsage);
  CHECK(run({}).code == cli::kExitUsage);
  CHECK(run({"frobnicate"}).code == cli::kExitUsage);
}

TEST_CASE("bound: 2x2 sharpness instance") {
  TempDir dir;
  const auto a = write(dir, "a.txt", real({{0, 0}, {0, 1}}));
  const auto v = write(dir, "v.txt", real({{0, 0.2}, {0.2, 0}}));
  const auto r = run({"bound", a, v, "--sigma", "0"});
  REQUIRE(r.code == cli::kExitPass);
  const json j = json::parse(r.out);
  CHECK(j["regime"]["kind"] == "off-diagonal");
  CHECK(j["regime"]["layout"] == "subordinated");
  CHECK(j["d"].get<double>() == 1.0);
  CHECK(j["norm_v"].get<double>() == Approx(0.2).epsilon(1e-14));
  CHECK(j["theta"].get<double>() == Approx(0.5 * std::atan(0.4)).epsilon(1e-12));
  bool saw_tan2 = false;
  for (const auto& b : j["bounds"])
    if (b["kind"] == "dk_tan2") {
      saw_tan2 = true;
      CHECK(std::abs(b["margin"].get<double>()) <= 1e-10);
    }
  CHECK(saw_tan2);
}

TEST_CASE("bound: V = 0, generic 4x4, and no applicable bound") {
  TempDir dir;
  const auto a = write(dir, "a.txt", real({{-1, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 2}}));
  const auto zero = write(dir, "zero.txt", HermitianMatrix::zero(4));
  const auto r0 = run({"bound", a, zero, "--sigma", "0"});
  CHECK(r0.code == cli::kExitPass);
  CHECK(json::parse(r0.out)["theta"].get<double>() == 0.0);
  CHECK(json::parse(r0.out)["regime"]["kind"] == "off-diagonal");

  // Diagonal entries keep V from anticommuting with P - P'.
  const auto v = write(dir, "v.txt",
                       real({{0.1, 0.2, 0, 0}, {0.2, -0.1, 0.1, 0}, {0, 0.1, 0.05, 0.1}, {0, 0, 0.1, 0}}));
  const auto r = run({"bound", a, v, "--sigma", "0", "--out", dir.file("b.json")});
  CHECK(r.code == cli::kExitPass);
  const json j = json::parse(slurp(dir.file("b.json")));
  CHECK(j["regime"]["kind"] == "generic");
  double lowest = 10.0;
  for (const auto& b : j["bounds"]) lowest = std::min(lowest, b["value"].get<double>());
  CHECK(j["tightest"]["value"].get<double>() == lowest);

  const auto big = write(dir, "big.txt", real({{0.6, 0.1, 0, 0}, {0.1, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}}));
  const auto none = run({"bound", a, big, "--sigma", "0"});
  CHECK(none.code == cli::kExitFailure);
  CHECK(json::parse(none.out).contains("error"));

  CHECK(run({"bound", a, dir.file("missing.txt"), "--sigma", "0"}).code == cli::kExitUsage);
  CHECK(run({"bound", a, zero, "--sigma", "7"}).code == cli::kExitUsage);
  CHECK(run({"bound", a, write(dir, "two.txt", HermitianMatrix::zero(2)), "--sigma", "0"}).code ==
        cli::kExitUsage);
}

TEST_CASE("bound and verify agree on the same instance") {
  ScenarioSpec spec;
  spec.layout = Layout::interlaced;
  spec.kind = PerturbationKind::off_diagonal;
  spec.strength = 0.6;
  spec.dim_max = 12;
  spec.seed = 21;
  for (std::size_t trial = 0; trial < 3; ++trial) {
    const Instance inst = build_instance(spec, trial);
    const TrialRecord rec = run_trial(spec, trial);
    REQUIRE(rec.passed());
    TempDir dir;
    std::string sigma;
    for (std::size_t k : inst.sigma) sigma += (sigma.empty() ? "" : ",") + std::to_string(k);
    const auto r = run({"bound", write(dir, "a.txt", inst.a), write(dir, "v.txt", inst.v), "--sigma", sigma});
    REQUIRE(r.code == cli::kExitPass);
    const json j = json::parse(r.out);
    CHECK(j["regime"]["kind"] == "off-diagonal");
    CHECK(j["regime"]["layout"] == "interlaced");
    REQUIRE(j["bounds"].size() == rec.bounds.size());
    for (std::size_t b = 0; b < rec.bounds.size(); ++b)
      CHECK(std::abs(j["bounds"][b]["value"].get<double>() - rec.bounds[b].value) <= 1e-9);
    CHECK(std::abs(j["theta"].get<double>() - rec.theta) <= 1e-9);
  }
}

TEST_CASE("the executable maps results to exit codes") {
  const std::string exe = SBOUNDS_CLI_PATH;
  CHECK(std::system((exe + " --help > /dev/null").c_str()) == 0);
  CHECK(WEXITSTATUS(std::system((exe + " verify > /dev/null 2>&1").c_str())) == cli::kExitUsage);
  CHECK(std::system((exe + " verify --layout ground-state --kind generic --trials 5 > /dev/null").c_str()) == 0);
}
