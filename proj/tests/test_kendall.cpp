#include <algorithm>
#include <cmath>
#include <limits>

#include "doctest.h"
#include "ergobound/errors.hpp"
#include "ergobound/kendall.hpp"
#include "ergobound/validation.hpp"
#include "oracles.hpp"

using namespace ergobound;
using namespace ergobound::kendall;

namespace {

const KendallInput kTable1a{2.0 / 3, 1.0606602, 1.2071068, std::nullopt};
const KendallInput kTable1b{0.9, 5.0 / 3, 2.0, std::nullopt};

double oracle_kappa(const KendallInput& in, double a) {
  const double N = (in.L - 1) / (in.R - 1);
  return std::log((N - 1) / ((1 - in.b) * a)) / std::log(in.R);
}

// min over a fine alpha grid of min(R, (1 + D/alpha)^{1/kappa}).
double oracle_r0_unknown(const KendallInput& in) {
  const double a0 = std::max(1.0, std::log((in.L - in.b * in.R) / ((1 - in.b) * in.R)) / std::log(in.R));
  double best = in.R;
  const int n = 20000;
  for (int i = 0; i <= n; ++i) {
    const double a = 1.0 + (a0 - 1.0) * i / n;
    const double k = oracle_kappa(in, a);
    if (k <= 0) continue;
    best = std::min(best, std::pow(1.0 + oracle::d_alpha(in.b, a) / a, 1.0 / k));
  }
  return best;
}

}  // namespace

TEST_SUITE("kendall") {
  TEST_CASE("D(alpha) against complex arithmetic") {
    CHECK(d_alpha(0.0, 3.0) == 0.0);
    CHECK(std::abs(d_alpha(0.5, 1.0) - (std::sqrt(5.0) - 1) / std::sqrt(2.0)) < 1e-14);
    CHECK(std::abs(1e6 * d_alpha(0.5, 1e6) - oracle::pi) < 1e-3);
    for (double b : {0.05, 0.3, 0.7, 0.95})
      for (double a : {0.5, 1.0, 2.5, 10.0, 100.0})
        CHECK(d_alpha(b, a) == doctest::Approx(oracle::d_alpha(b, a)).epsilon(1e-10));
    CHECK_THROWS_AS(d_alpha(1.0, 2.0), InvalidInput);
  }

  TEST_CASE("alpha0 and kappa") {
    CHECK(alpha0(kTable1a) == doctest::Approx(5.885).epsilon(1e-3));
    CHECK(alpha0(kTable1b) == doctest::Approx(std::log(3.0) / std::log(5.0 / 3)).epsilon(1e-12));
    const double N = (kTable1a.L - 1) / (kTable1a.R - 1);
    CHECK(std::abs(kappa(kTable1a, (N - 1) / (1 - kTable1a.b))) < 1e-12);
    CHECK(kappa(kTable1a, (N - 1) / ((1 - kTable1a.b) * kTable1a.R)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(kappa(kTable1a, 2.0) == doctest::Approx(21.84).epsilon(1e-3));
  }

  TEST_CASE("table 1 inputs") {
    auto a = kTable1a;
    a.c1_known = 2.0;
    CHECK(std::abs(1 / bound_known_c1(a).r0 - 0.9737) < 5e-4);
    CHECK(std::abs(1 / bound_unknown_c1(kTable1a).r0 - 0.9737) < 5e-4);
    auto b = kTable1b;
    b.c1_known = 9.0 / 8;
    const auto kb = bound_known_c1(b);
    CHECK(kb.capped);
    CHECK(kb.r0 == 5.0 / 3);
    CHECK(bound_unknown_c1(kTable1b).r0 == 5.0 / 3);
    CHECK(bound_simplified(kTable1b).r0 == 5.0 / 3);
  }

  TEST_CASE("unknown-c1 radius matches a brute-force alpha grid") {
    for (const auto& in : validation::random_kendall_inputs(21, 40)) {
      const auto kb = bound_unknown_c1(in);
      if (kb.degenerate) continue;
      const double ref = oracle_r0_unknown(in);
      CHECK(kb.r0 <= ref * (1 + 1e-12));
      CHECK(std::log(kb.r0) >= std::log(ref) * (1 - 1e-6));
    }
  }

  TEST_CASE("K0 matches its defining maximum") {
    const auto kb = bound_unknown_c1(kTable1a);
    const double a0 = alpha0(kTable1a);
    for (double t : {0.2, 0.5, 0.8}) {
      const double r = 1 + t * (kb.r0 - 1);
      double M = 0;
      for (int i = 0; i <= 20000; ++i) {
        const double a = 1 + (a0 - 1) * i / 20000.0;
        M = std::max(M, a * (std::pow(r, oracle_kappa(kTable1a, a)) - 1) / oracle::d_alpha(kTable1a.b, a));
      }
      const double ref = M / ((r - 1) * (1 - M));
      CHECK(kb.k0(r) == doctest::Approx(ref).epsilon(1e-6));
    }
    CHECK(std::isinf(kb.k0(kb.r0 * (1 + 1e-9))));
  }

  TEST_CASE("simplified bound is weaker") {
    for (const auto& in : validation::random_kendall_inputs(4, 40)) {
      const auto r0 = bound_unknown_c1(in);
      const auto r1 = bound_simplified(in);
      CHECK(r1.r0 <= r0.r0 * (1 + 1e-12));
      CHECK(r2_baxendale(in) <= r1.r0 * (1 + 1e-12));
      const double r = 1 + 0.5 * (r1.r0 - 1);
      CHECK(r1.k0(r) >= r0.k0(r) * (1 - 1e-9));
    }
  }

  TEST_CASE("K1 maximizer is the argmax of alpha (r^kappa - 1)") {
    const double r = 1.01;
    const double a = k1_maximizer(kTable1a, r);
    const auto f = [&](double x) { return -x * (std::pow(r, oracle_kappa(kTable1a, x)) - 1); };
    CHECK(a == doctest::Approx(oracle::golden_min(f, 0.01, 50.0)).epsilon(1e-6));
  }

  TEST_CASE("r2 root") {
    const double r2 = r2_baxendale(kTable1a);
    const double N = (kTable1a.L - 1) / (kTable1a.R - 1);
    const double lhs = (r2 - 1) / (r2 * std::pow(std::log(kTable1a.R / r2), 2));
    CHECK(lhs == doctest::Approx(kTable1a.b / (2 * N)).epsilon(1e-9));
    CHECK(r2_baxendale({1e-9, 1.5, 40.0, {}}) < 1 + 1e-6);
    // b/(2N) is at most 1/2, so r2 stays below R but grows with the target.
    const double small = r2_baxendale({0.1, 1.5, 1.6, {}});
    const double large = r2_baxendale({0.999, 1.5, 1.5000001, {}});
    CHECK(small < large);
    CHECK(large < 1.5);
  }

  TEST_CASE("asymptotics") {
    const auto a = r0_asymptotic(0.5, 2.0, 1.001);
    const auto kb = bound_unknown_c1({0.5, 1.001, 2.0, {}});
    CHECK(std::abs((kb.r0 - 1) / (a.r0 - 1) - 1) < 0.15);
    CHECK(r0_asymptotic(0.5, 1.01, 1.0001).regime == 2);
    // Choose L on the seam: (L-1)/(1-b) = e^{1/2} log((L-b)/(1-b)).
    const double b = 0.5;
    const double L = oracle::bisect(
        [&](double l) { return (l - 1) / (1 - b) - std::exp(0.5) * std::log((l - b) / (1 - b)); }, 1.0001, 1.9);
    CHECK(r0_asymptotic(b, L, 1.001).seam);
  }

  TEST_CASE("stationarity residual vanishes at the interior minimizer") {
    const auto kb = bound_unknown_c1(kTable1a);
    if (kb.alpha_star > 1.0 + 1e-6 && kb.alpha_star < alpha0(kTable1a) - 1e-6)
      CHECK(std::abs(r0_stationarity_residual(kTable1a, kb.alpha_star)) < 1e-4);
  }

  TEST_CASE("degenerate and invalid inputs") {
    const auto kb = bound_unknown_c1({0.5, 2.0, 2.0, {}});
    CHECK(kb.degenerate);
    CHECK(kb.r0 == 2.0);
    CHECK(kb.k0(1.5) == 0.0);
    const auto p = bound_unknown_c1({1.0, 2.0, 3.0, {}});
    CHECK(p.degenerate);
    CHECK_THROWS_AS(bound_unknown_c1({1.5, 2.0, 3.0, {}}), InvalidInput);
    CHECK_THROWS_AS(bound_unknown_c1({0.5, 0.9, 3.0, {}}), InvalidInput);
    CHECK_THROWS_AS(bound_unknown_c1({0.5, 2.0, 1.5, {}}), InvalidInput);
    CHECK_THROWS_AS(bound_known_c1({0.5, 2.0, 3.0, 0.9}), InvalidInput);
  }
}
