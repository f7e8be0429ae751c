#include <cmath>
#include <complex>

#include "doctest.h"
#include "ergobound/errors.hpp"
#include "ergobound/models.hpp"
#include "oracles.hpp"

using namespace ergobound;
using namespace ergobound::models;

TEST_SUITE("models") {
  TEST_CASE("reflecting walk parameters") {
    const auto d = derive_reflecting_rw(2.0 / 3);
    const auto& s = std::get<atomic::AtomicDriftSpec>(d.drift);
    CHECK(s.b == doctest::Approx(2.0 / 3));
    CHECK(s.lambda == doctest::Approx(2 * std::sqrt(2.0) / 3).epsilon(1e-14));
    CHECK(s.K == doctest::Approx((2 + std::sqrt(2.0)) / 3).epsilon(1e-14));
    CHECK(*d.pi_C_exact == doctest::Approx(0.5));
    const auto d9 = derive_reflecting_rw(0.9);
    CHECK(std::abs(std::get<atomic::AtomicDriftSpec>(d9.drift).lambda - 0.6) < 1e-12);
    CHECK(*d9.pi_C_exact == doctest::Approx(8.0 / 9));
    CHECK_THROWS_AS(derive_reflecting_rw(0.4), InvalidInput);
  }

  TEST_CASE("sticky walk") {
    CHECK(*derive_sticky_rw(0.8, 0.5).rho_optimal == doctest::Approx(0.8));
    CHECK(*derive_sticky_rw(0.9, 0.25).rho_optimal == doctest::Approx((0.09 + 0.4225) / 0.65));
    const auto d = derive_sticky_rw(0.9, 0.5);
    CHECK(1.0 / *d.pi_C_exact == doctest::Approx(1.625));
    CHECK(std::abs(d.exact_b_gen(1.0) - 1.0) < 1e-14);
    const double h = 1e-6;
    const double deriv = std::real(d.exact_b_gen(1.0 + h) - d.exact_b_gen(1.0 - h)) / (2 * h);
    CHECK(deriv == doctest::Approx(1.625).epsilon(1e-9));
    CHECK_THROWS_AS(derive_sticky_rw(0.8, 0.9), InvalidInput);
  }

  TEST_CASE("sticky generating function equals its series") {
    const double p = 0.7, eps = 0.2, q = 1 - p;
    // First passage 1 -> 0 of the walk: f_{2k+1} = Catalan(k) p^{k+1} q^k.
    const std::complex<double> z(0.6, 0.5);
    std::complex<double> series = eps * z, zn = z;
    double cat = 1.0;
    for (int k = 0; k < 400; ++k) {
      zn *= z;
      series += (1 - eps) * cat * std::pow(p, k + 1) * std::pow(q, k) * zn;
      cat = cat * 2 * (2 * k + 1) / (k + 2);
      zn *= z;
    }
    CHECK(std::abs(sticky_b_gen(p, eps, z) - series) < 1e-12);
  }

  TEST_CASE("metropolis-hastings normal") {
    const auto d = derive_mh_normal(1.0, 0.1, 1);
    const auto& s = std::get<split::SplitDriftSpec>(d.drift);
    CHECK(s.b == doctest::Approx(std::sqrt(2.0) * std::exp(-1.0) * (oracle::Phi(std::sqrt(2.0)) - 0.5)).epsilon(1e-12));
    CHECK(s.b == doctest::Approx(0.2192).epsilon(1e-3));
    CHECK(s.bbar == s.b);
    CHECK(s.K == doctest::Approx(s.lambda * std::exp(0.1)).epsilon(1e-12));
    CHECK(*d.pi_C_exact == doctest::Approx(2 * oracle::Phi(1.0) - 1));
    const auto d2 = derive_mh_normal(1.0, 0.1, 2);
    const auto& s2 = std::get<split::SplitDriftSpec>(d2.drift);
    CHECK(s2.b == doctest::Approx(2 * (oracle::Phi(2.0) - oracle::Phi(1.0))));
    CHECK(s2.bbar > s2.b);
  }

  TEST_CASE("metropolis-hastings quadrature is stable") {
    const auto a = std::get<split::SplitDriftSpec>(derive_mh_normal(0.92, 0.169, 1).drift);
    const auto b = std::get<split::SplitDriftSpec>(derive_mh_normal(0.92, 0.169, 1, {5e-15, 5e-13, 800}).drift);
    CHECK(std::abs(a.lambda / b.lambda - 1) < 1e-9);
    CHECK(std::abs(a.K / b.K - 1) < 1e-9);
  }

  TEST_CASE("contracting normals") {
    const auto d = derive_contracting_normals(0.5, 1.5);
    const auto& s = std::get<split::SplitDriftSpec>(d.drift);
    CHECK(s.lambda == doctest::Approx(0.25 + 1.5 / 3.25).epsilon(1e-14));
    CHECK(s.K == doctest::Approx(2.3125));
    CHECK(s.bbar == doctest::Approx(0.3771).epsilon(1e-3));
    CHECK(s.b == s.bbar);
    CHECK_THROWS_AS(derive_contracting_normals(0.5, 0.5), InvalidInput);
    CHECK(std::get<split::SplitDriftSpec>(derive_contracting_normals(0.0, 2.0).drift).lambda ==
          doctest::Approx(2.0 / 5));
  }

  TEST_CASE("contracting exact TV") {
    CHECK(contracting_exact_tv(0.5, 0.0, 1) == doctest::Approx(oracle::normal_tv(0.0, 0.75)).epsilon(1e-8));
    CHECK(contracting_exact_tv(0.5, 0.0, 1) == doctest::Approx(0.0786).epsilon(1e-2));
    CHECK(contracting_exact_tv(0.7, 2.0, 3) ==
          doctest::Approx(oracle::normal_tv(std::pow(0.7, 3) * 2.0, 1 - std::pow(0.7, 6))).epsilon(1e-8));
    CHECK(contracting_exact_tv(0.5, 1.0, 60) < 1e-15);
    const double ratio = contracting_exact_tv(0.6, 1.0, 41) / contracting_exact_tv(0.6, 1.0, 40);
    CHECK(ratio == doctest::Approx(0.6).epsilon(1e-3));
  }

  TEST_CASE("matrix oracle rates") {
    CHECK(rw_matrix_oracle(ModelSpec::reflecting_rw(2.0 / 3), 4000, 4000).fitted_rate ==
          doctest::Approx(0.9428).epsilon(2e-3));
    CHECK(std::abs(rw_matrix_oracle(ModelSpec::sticky_rw(0.9, 0.25), 2000, 2000).fitted_rate - 0.7885) < 2e-3);
    CHECK(std::abs(rw_matrix_oracle(ModelSpec::sticky_rw(0.9, 0.5), 2000, 2000).fitted_rate - 0.625) < 2e-3);
    const auto o = rw_matrix_oracle(ModelSpec::reflecting_rw(0.9), 400, 50);
    CHECK(o.tv[0] == doctest::Approx(1 - 8.0 / 9));
    CHECK_THROWS_AS(rw_matrix_oracle(ModelSpec::reflecting_rw(0.51), 200, 2000), MassLeak);
  }

  TEST_CASE("drift inequalities hold on the truncated chain") {
    for (double p : {2.0 / 3, 0.9}) CHECK(verify_drift_discrete(ModelSpec::reflecting_rw(p)).ok);
    CHECK(verify_drift_discrete(ModelSpec::sticky_rw(0.8, 0.25)).ok);
  }
}
