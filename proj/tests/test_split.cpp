#include <cmath>
#include <vector>

#include "doctest.h"
#include "ergobound/atomic.hpp"
#include "ergobound/errors.hpp"
#include "ergobound/split.hpp"
#include "oracles.hpp"

using namespace ergobound;
using namespace ergobound::split;

namespace {
const SplitDriftSpec kContract{0.3771, 0.3771, 0.71154, 2.3125, std::nullopt};
}

TEST_SUITE("split") {
  TEST_CASE("exponents") {
    const auto ex = exponents({0.5, 0.5, 0.6, 1.2, {}});
    CHECK(ex.alpha1 == doctest::Approx(std::log(1.4) / std::log(5.0 / 3)).epsilon(1e-12));
    CHECK_FALSE(ex.alpha2.has_value());
    CHECK(exponents({0.2, 0.5, 0.6, 1.2, {}}).alpha2.has_value());
  }

  TEST_CASE("envelope L(r)") {
    const SplitDriftSpec s{0.2, 0.5, 0.6, 1.2, {}};
    CHECK(L_of_r(s, 0.66, 2.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    const double r = 1.2;
    const double first = 0.5 * r / (1 - 0.5 * std::pow(r, 1.66));
    const double second = (0.2 * r + 0.3 * std::pow(r, 3.0)) / (1 - 0.5 * r);
    CHECK(L_of_r(s, 0.66, 2.0, r) == doctest::Approx(std::max(first, second)).epsilon(1e-14));
    const SplitDriftSpec one{0.4, 1.0, 0.6, 1.2, {}};
    CHECK(L_of_r(one, 0.3, 2.0, r) == doctest::Approx(std::max(r, 0.4 * r + 0.6 * std::pow(r, 3.0))));
  }

  TEST_CASE("first branch dominates when 1 + b >= 2 bbar") {
    const SplitDriftSpec s{0.3, 0.6, 0.7, 1.5, {}};
    const auto ex = exponents(s);
    REQUIRE(ex.alpha2.has_value());
    const double cap = std::min(1 / s.lambda, std::pow(1 - s.bbar, -1 / (1 + ex.alpha1)));
    for (int i = 1; i < 50; ++i) {
      const double r = 1 + (cap - 1) * i / 50.0 * 0.999;
      const double first = s.bbar * r / (1 - (1 - s.bbar) * std::pow(r, 1 + ex.alpha1));
      CHECK(L_of_r(s, ex.alpha1, ex.alpha2, r) == doctest::Approx(first).epsilon(1e-13));
    }
  }

  TEST_CASE("alpha-bar range") {
    const auto rg = alpha_bar_range({0.2, 0.5, 0.6, 1.2, {}}, 0.66, 2.0);
    CHECK(rg.lo == doctest::Approx(2.0));
    CHECK(rg.alpha_bar0 == doctest::Approx(1.375));
    CHECK(rg.hi == doctest::Approx(2.75));
    CHECK_FALSE(rg.collapsed);
    const SplitDriftSpec s{0.3, 0.6, 0.7, 1.5, {}};
    const auto ex = exponents(s);
    const auto r2 = alpha_bar_range(s, ex.alpha1, ex.alpha2);
    CHECK(r2.alpha_bar0 == doctest::Approx(0.4 / 0.7 * (1 + ex.alpha1)).epsilon(1e-12));
  }

  TEST_CASE("G is computed without cancellation") {
    const auto env = envelope(kContract);
    for (double x : {1e-9, 1e-5, 1e-2, 0.5 * env.x_max()}) {
      const double r = std::exp(x);
      const double L = L_of_r(kContract, env.alpha1(), env.alpha2(), r);
      const double naive = std::log((L - r) / (r - 1));
      if (x >= 1e-2) CHECK(env.G(x) == doctest::Approx(naive).epsilon(1e-9));
      CHECK(std::isfinite(env.G(x)));
    }
  }

  TEST_CASE("minorant is convex, below F1, and through the origin") {
    const auto env = envelope(kContract);
    const auto rg = alpha_bar_range(kContract, env.alpha1(), env.alpha2());
    const double abar = 0.5 * (rg.lo + rg.hi);
    const int n = 400;
    std::vector<double> fb(n + 1);
    for (int i = 0; i <= n; ++i) {
      const double x = env.x_max() * i / n;
      fb[i] = env.Fbar(abar, x);
      if (i > 0) CHECK(fb[i] <= env.F1(abar, x) + 1e-12);
    }
    CHECK(std::abs(fb[0]) < 1e-15);
    for (int i = 1; i < n; ++i) CHECK(fb[i - 1] - 2 * fb[i] + fb[i + 1] >= -1e-12);
    // Any chord from the origin under F1 lies under the minorant's slope bound.
    const auto t = env.tangent(abar);
    for (int i = 1; i <= n; ++i) {
      const double x = env.x_max() * i / n;
      CHECK(t.kappa0 <= env.F1(abar, x) / x + 1e-12);
    }
  }

  TEST_CASE("kappa_bar is constant before the tangent point") {
    const auto env = envelope(kContract);
    const auto rg = alpha_bar_range(kContract, env.alpha1(), env.alpha2());
    const auto t = env.tangent(rg.hi);
    if (t.x0 > 1e-6) {
      CHECK(env.kappa_bar(rg.hi, 1.0 + 1e-7) == doctest::Approx(t.kappa0));
      CHECK(env.kappa_bar(rg.hi, std::exp(0.5 * t.x0)) == doctest::Approx(t.kappa0));
    }
    CHECK_THROWS_AS(env.kappa_bar(rg.hi, env.r_cap() * 1.01), DomainExceeded);
  }

  TEST_CASE("fixed point solves its equation") {
    const auto env = envelope(kContract);
    const auto rg = alpha_bar_range(kContract, env.alpha1(), env.alpha2());
    for (double w : {0.0, 0.5, 1.0}) {
      const double abar = rg.lo + w * (rg.hi - rg.lo);
      const auto fp = split_fixed_point(env, kContract, abar);
      CHECK(fp.r > 1.0);
      CHECK(fp.r <= env.r_cap() * (1 + 1e-15));
      if (fp.r < env.r_cap() * (1 - 1e-12)) {
        const double T = std::log1p(oracle::d_alpha(kContract.b, abar) / abar);
        CHECK(std::abs(std::log(fp.r) * env.kappa_bar(abar, fp.r) - T) < 1e-10);
      }
    }
  }

  TEST_CASE("contracting normals rates") {
    const auto u = split_bound_unknown(kContract);
    CHECK(std::abs((1 - 1 / u.base.r0) - 8.72e-4) / 8.72e-4 < 0.1);
    auto known = kContract;
    known.pi_C = 2 * oracle::Phi(1.5) - 1;
    const auto k = split_kendall_bound(known);
    CHECK(k.base.r0 >= u.base.r0 * (1 - 1e-15));
  }

  TEST_CASE("supporting bounds") {
    const auto sb = split_supporting_bounds({0.5, 0.5, 0.6, 1.2, {}}, 1.2);
    CHECK(sb.HVbar_at1 == doctest::Approx(3.0));
    // r = 1 limits agree with a nearby point.
    const SplitDriftSpec s{0.4, 0.6, 0.7, 1.4, {}};
    const auto a = split_supporting_bounds(s, 1.0);
    const auto b = split_supporting_bounds(s, 1.0 + 1e-8);
    CHECK(a.H1bar_diff_quot == doctest::Approx(b.H1bar_diff_quot).epsilon(1e-6));
    CHECK(a.H1bar_offC_terms.at(3.0) == doctest::Approx(b.H1bar_offC_terms.at(3.0)).epsilon(1e-6));
    CHECK_THROWS_AS(split_supporting_bounds(s, 0.5), InvalidInput);
  }

  TEST_CASE("bbar = 1 reduces to the atomic case") {
    for (double b : {0.3, 0.7})
      for (double lam : {0.5, 0.9})
        for (double K : {1.0, 1.6}) {
          const auto a = atomic::atomic_certificate({b, lam, K, {}});
          const auto s = split_certificate({b, 1.0, lam, K, {}});
          CHECK(a.rho_bound == s.rho_bound);
          const double r = 1 + 0.5 * (a.r0 - 1);
          CHECK(a.m1(r) == s.m1(r));
          CHECK(a.mv(r) == s.mv(r));
        }
  }

  TEST_CASE("certificate terms are nonnegative") {
    const auto c = split_certificate(kContract);
    for (double t : {0.1, 0.5, 0.9}) {
      const double r = 1 + t * (c.r0 - 1);
      CHECK(c.m1(r) >= 0.0);
      CHECK(c.mv(r) >= 0.0);
    }
  }

  TEST_CASE("invalid split specs") {
    CHECK_THROWS_AS(split_certificate({0.6, 0.5, 0.7, 1.5, {}}), InvalidInput);
    CHECK_THROWS_AS(split_certificate({0.3, 0.5, 1.1, 1.5, {}}), InvalidInput);
    CHECK_THROWS_AS(split_certificate({0.3, 0.5, 0.7, 0.4, {}}), InvalidInput);
  }
}
