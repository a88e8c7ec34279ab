#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "subspace_bounds/errors.hpp"
#include "subspace_bounds/quadrature.hpp"

using namespace sbounds;

TEST_CASE("Simpson is exact on cubics") {
  const auto r = adaptive_simpson([](double t) { return 4.0 * t * t * t - 3.0 * t + 1.0; }, -1.0, 2.0);
  CHECK(r.value == doctest::Approx(15.0 - 4.5 + 3.0).epsilon(1e-15));
  CHECK(r.evaluations == 5);
}

TEST_CASE("empty interval") {
  const auto r = adaptive_simpson([](double) { return 1.0; }, 0.5, 0.5);
  CHECK(r.value == 0.0);
  CHECK(r.evaluations == 0);
}

TEST_CASE("agrees with Gauss-Kronrod on smooth and steep integrands") {
  using boost::math::quadrature::gauss_kronrod;
  struct Case {
    std::function<double(double)> f;
    double a, b;
  };
  const std::vector<Case> cases{
      {[](double t) { return std::exp(-t * t); }, 0.0, 3.0},
      {[](double t) { return std::cos(20.0 * t); }, 0.0, 1.0},
      {[](double t) { return 1.0 / (1.0 + 25.0 * t * t); }, -1.0, 1.0},
      {[](double t) { return 1.0 / (2.0 - std::sqrt(1.0 + 4.0 * t * t)); }, 0.0, 0.8},
  };
  for (const auto& c : cases) {
    const double oracle = gauss_kronrod<double, 61>::integrate(c.f, c.a, c.b, 20, 1e-15);
    const auto r = adaptive_simpson(c.f, c.a, c.b, 1e-12, 60);
    CHECK(std::abs(r.value - oracle) <= 1e-11);
  }
}

TEST_CASE("integrable endpoint singularity converges; a non-integrable one does not") {
  // int_a^1 t^{-1/2} dt = 2 - 2 sqrt(a), steep near the left end.
  const auto r = adaptive_simpson([](double t) { return 1.0 / std::sqrt(t); }, 1e-12, 1.0, 1e-8, 60);
  CHECK(r.value == doctest::Approx(2.0 - 2e-6).epsilon(1e-8));
  CHECK_THROWS_AS(adaptive_simpson([](double t) { return std::sin(1.0 / t) / t; }, 1e-8, 1.0, 1e-12, 12),
                  ConvergenceError);
}
