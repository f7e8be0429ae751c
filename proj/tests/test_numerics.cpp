#include <cmath>
#include <limits>

#include "doctest.h"
#include "ergobound/errors.hpp"
#include "ergobound/numerics.hpp"
#include "oracles.hpp"

using namespace ergobound;
using namespace ergobound::numerics;

TEST_SUITE("numerics") {
  TEST_CASE("root finding hits known roots") {
    CHECK(solve_root_bracketed([](double x) { return x - 2.0; }, {0, 5}) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(std::abs(solve_root_bracketed([](double x) { return x * x - 2.0; }, {1, 2}) - std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(solve_root_bracketed([](double x) { return std::cos(x); }, {1, 2}) - oracle::pi / 2) < 1e-12);
  }

  TEST_CASE("root finding agrees with bisection on a skewed function") {
    auto f = [](double x) { return std::exp(x) - 5.0 * x * x; };
    const double ref = oracle::bisect(f, 3.0, 5.0);
    CHECK(std::abs(solve_root_bracketed(f, {3.0, 5.0}) - ref) < 1e-11);
  }

  TEST_CASE("root finding errors") {
    CHECK_THROWS_AS(solve_root_bracketed([](double x) { return x * x + 1.0; }, {-1, 1}), NoSignChange);
    NumericConfig tight{0.0, 0.0, 2};
    CHECK_THROWS_AS(solve_root_bracketed([](double x) { return std::tanh(x - 0.3123); }, {-50, 50}, tight),
                    NoConvergence);
  }

  TEST_CASE("minimization") {
    auto m = minimize_scalar([](double x) { return (x - 3) * (x - 3); }, {0, 10});
    CHECK(std::abs(m.x - 3.0) < 1e-6);
    CHECK(m.f < 1e-12);
    CHECK(minimize_scalar([](double x) { return x; }, {2, 5}).x == doctest::Approx(2.0));
    auto q = minimize_scalar([](double x) { return x * x * x * x - x; }, {0, 1});
    CHECK(std::abs(q.x - std::cbrt(0.25)) < 1e-6);
  }

  TEST_CASE("minimization never worse than golden section on a multimodal function") {
    auto f = [](double x) { return std::sin(5 * x) + 0.1 * x * x; };
    const double g = oracle::golden_min(f, -1.0, 0.0);
    const auto m = minimize_scalar(f, {-4.0, 4.0});
    CHECK(m.f <= f(g) + 1e-12);
  }

  TEST_CASE("normal cdf") {
    CHECK(std_normal_cdf(0.0) == 0.5);
    CHECK(std::abs(std_normal_cdf(1.96) - 0.9750021048517795) < 1e-15);
    const double t = std_normal_cdf(-40.0);
    CHECK(t >= 0.0);
    CHECK(t < 1e-300);
    for (double x = -6; x <= 6; x += 0.37) CHECK(std::abs(std_normal_cdf(x) + std_normal_cdf(-x) - 1.0) < 1e-15);
  }

  TEST_CASE("adaptive quadrature") {
    CHECK(integrate_adaptive([](double) { return 1.0; }, 0, 1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(integrate_adaptive([](double x) { return x * x; }, 0, 1) - 1.0 / 3) < 1e-10);
    CHECK(std::abs(integrate_adaptive([](double x) { return std::exp(-x * x); }, 0, 40) - std::sqrt(oracle::pi) / 2) <
          1e-10);
    auto kink = [](double x) { return std::abs(x - 0.3) * std::exp(x); };
    CHECK(std::abs(integrate_adaptive(kink, -1, 2) - oracle::simpson(kink, -1, 2, 200000)) < 1e-8);
  }

  TEST_CASE("gaussian tail cutoff") {
    auto f = [](double x) { return std::exp(-x * x / 2); };
    const double cut = gaussian_tail_cutoff(f, 0.0, 0.5);
    CHECK(f(cut) < 1e-16);
    CHECK(f(cut - 0.5) >= 1e-16);
  }
}
