#include <cmath>

#include "doctest.h"
#include "ergobound/atomic.hpp"
#include "ergobound/errors.hpp"

using namespace ergobound;
using namespace ergobound::atomic;

TEST_SUITE("atomic") {
  TEST_CASE("generating-function bounds") {
    const AtomicDriftSpec s{0.5, 0.6, 1.2, {}};
    const auto g1 = g_h_bounds(s, 1.0);
    CHECK(g1.H1_diff_quot == doctest::Approx(0.6 * 0.2 / 0.16));
    CHECK(g1.H1_onC == doctest::Approx(0.6 / 0.4));
    const auto g = g_h_bounds(s, 1.5);
    CHECK(g.HV_onC == doctest::Approx(4.5).epsilon(1e-12));
    CHECK(g.G_onC == doctest::Approx(1.8));
    CHECK(g_h_bounds({0.5, 0.6, 1.0, {}}, 1.2).H1_diff_quot == 0.0);
    CHECK(std::isinf(g_h_bounds(s, 1 / 0.6).HV_offC_coeff));
    CHECK_THROWS_AS(g_h_bounds(s, 0.9), InvalidInput);
    CHECK_THROWS_AS(g_h_bounds(s, 2.0), InvalidInput);
  }

  TEST_CASE("reflecting walk certificates") {
    const double p = 2.0 / 3, q = 1 - p;
    const auto c = atomic_certificate({p, 2 * std::sqrt(p * q), p + std::sqrt(p * q), 0.5});
    CHECK(std::abs(c.rho_bound - 0.9737) < 5e-4);
    CHECK(c.bounds.size() == 2);
    const auto c9 = atomic_certificate({0.9, 0.6, 1.2, 8.0 / 9});
    CHECK(std::abs(c9.rho_bound - 0.6) < 1e-9);
  }

  TEST_CASE("m1 and mv are the displayed sums") {
    const AtomicDriftSpec s{0.6, 0.8, 1.3, {}};
    const auto c = atomic_certificate(s);
    const double r = 1 + 0.5 * (c.r0 - 1), lam = s.lambda, K = s.K, k = c.k0(r);
    const double m1 = 2 * r * lam / (1 - lam) + r * lam * (K - 1) / std::pow(1 - lam, 2) + r * (K - lam) / (1 - lam) * k;
    const double mv = r * lam / (1 - r * lam) + r * lam * (K - lam) / std::pow(1 - lam, 2) +
                      r * lam * (K - 1) / ((1 - lam) * (1 - r * lam)) + r * (K - r * lam) / (1 - r * lam) * k;
    CHECK(c.m1(r) == doctest::Approx(m1).epsilon(1e-13));
    CHECK(c.mv(r) == doctest::Approx(mv).epsilon(1e-13));
    CHECK(std::isinf(c.mv(1 / lam)));
  }

  TEST_CASE("perfect renewal has only the drift terms") {
    const auto c = atomic_certificate({1.0, 0.5, 1.0, {}});
    CHECK(c.rho_bound == 0.5);
    for (double r : {1.0, 1.5, 1.9}) {
      CHECK(c.k0(r) == 0.0);
      CHECK(c.m1(r) == doctest::Approx(2 * r * 0.5 / 0.5));
    }
  }

  TEST_CASE("known pi(C) never loses to unknown") {
    for (double p : {0.6, 2.0 / 3, 0.75, 0.9, 0.97}) {
      const double q = 1 - p;
      const atomic::AtomicDriftSpec s{p, 2 * std::sqrt(p * q), p + std::sqrt(p * q), std::nullopt};
      auto k = s;
      k.pi_C = 1 - q / p;
      CHECK(atomic_certificate(k).rho_bound <= atomic_certificate(s).rho_bound + 1e-15);
    }
  }

  TEST_CASE("small mean return time raises the floor") {
    // c1 = 1.2 forces b_1 >= 0.8 even though the stated floor is 0.5.
    auto in = kendall_input({0.5, 0.5, 1.2, std::nullopt});
    in.c1_known = 1.2;
    const auto kb = kendall::bound_known_c1(in);
    CHECK(kb.b_effective >= 0.8 - 1e-12);
    CHECK(!kb.warnings.empty());
  }

  TEST_CASE("invalid specs") {
    CHECK_THROWS_AS(atomic_certificate({0.5, 1.2, 1.0, {}}), InvalidInput);
    CHECK_THROWS_AS(atomic_certificate({0.0, 0.5, 1.0, {}}), InvalidInput);
    CHECK_THROWS_AS(atomic_certificate({0.5, 0.5, 0.9, {}}), InvalidInput);
    CHECK_THROWS_AS(atomic_certificate({0.5, 0.5, 1.0, 1.5}), InvalidInput);
  }
}
