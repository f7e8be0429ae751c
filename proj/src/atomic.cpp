#include "ergobound/atomic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ergobound/errors.hpp"

namespace ergobound::atomic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

std::vector<std::string> validate(const AtomicDriftSpec& s) {
  if (!std::isfinite(s.b) || !(s.b > 0.0) || s.b > 1.0) throw InvalidInput("b must lie in (0, 1]");
  if (!std::isfinite(s.lambda) || !(s.lambda > 0.0) || !(s.lambda < 1.0))
    throw InvalidInput("lambda must lie in (0, 1)");
  if (!std::isfinite(s.K) || s.K < 1.0) throw InvalidInput("K must be >= 1");
  if (s.pi_C && (!(*s.pi_C > 0.0) || *s.pi_C > 1.0)) throw InvalidInput("pi_C must lie in (0, 1]");
  std::vector<std::string> warnings;
  if (s.lambda > 1.0 - 1e-6) warnings.push_back("lambda within 1e-6 of 1; bounds are near-vacuous");
  return warnings;
}

kendall::KendallInput kendall_input(const AtomicDriftSpec& s) {
  return {s.b, 1.0 / s.lambda, s.K / s.lambda, std::nullopt};
}

GHBounds g_h_bounds(const AtomicDriftSpec& s, double r) {
  validate(s);
  const double lam = s.lambda, K = s.K;
  if (!(r >= 1.0) || r > 1.0 / lam) throw InvalidInput("g_h_bounds requires 1 <= r <= 1/lambda");
  GHBounds g{};
  g.G_offC_coeff = 1.0;
  g.G_onC = r * K;
  g.H1_offC_coeff = r * lam / (1.0 - lam);
  g.H1_onC = r * (K - lam) / (1.0 - lam);
  g.H1_diff_quot = r * lam * (K - 1.0) / ((1.0 - lam) * (1.0 - lam));
  const double q = 1.0 - r * lam;
  if (q <= 0.0) {
    g.HV_offC_coeff = g.HV_onC = g.HV_diff_quot = kInf;
  } else {
    g.HV_offC_coeff = r * lam / q;
    g.HV_onC = r * (K - r * lam) / q;
    g.HV_diff_quot = r * lam * (K - 1.0) / ((1.0 - lam) * q);
  }
  return g;
}

ErgodicityCertificate atomic_certificate(const AtomicDriftSpec& spec) {
  ErgodicityCertificate cert;
  cert.warnings = validate(spec);
  kendall::KendallInput in = kendall_input(spec);

  cert.bounds.push_back(kendall::bound_unknown_c1(in));
  if (spec.pi_C) {
    in.c1_known = 1.0 / *spec.pi_C;
    cert.bounds.push_back(kendall::bound_known_c1(in));
  }
  std::size_t best = 0;
  for (std::size_t i = 0; i < cert.bounds.size(); ++i) {
    if (cert.bounds[i].r0 > cert.bounds[best].r0) best = i;
    for (const auto& w : cert.bounds[i].warnings)
      if (std::find(cert.warnings.begin(), cert.warnings.end(), w) == cert.warnings.end())
        cert.warnings.push_back(w);
  }
  cert.r0 = cert.bounds[best].r0;
  cert.rho_bound = 1.0 / cert.r0;

  std::vector<std::function<double(double)>> k0s;
  for (const auto& kb : cert.bounds) k0s.push_back(kb.k0);
  const double r0 = cert.r0;
  cert.k0 = [k0s, r0](double r) {
    if (r > r0) return kInf;
    double v = kInf;
    for (const auto& f : k0s) v = std::min(v, f(r));
    return v;
  };

  const double lam = spec.lambda, K = spec.K;
  const auto k0 = cert.k0;
  cert.m1 = [lam, K, k0](double r) {
    const double kv = k0(r);
    if (std::isinf(kv)) return kInf;
    return 2.0 * r * lam / (1.0 - lam) + r * lam * (K - 1.0) / ((1.0 - lam) * (1.0 - lam)) +
           r * (K - lam) / (1.0 - lam) * kv;
  };
  cert.mv = [lam, K, k0](double r) {
    const double q = 1.0 - r * lam;
    if (q <= 0.0) return kInf;
    const double kv = k0(r);
    if (std::isinf(kv)) return kInf;
    return r * lam / q + r * lam * (K - lam) / ((1.0 - lam) * (1.0 - lam)) +
           r * lam * (K - 1.0) / ((1.0 - lam) * q) + r * (K - r * lam) / q * kv;
  };

  cert.provenance = {
      {"R", "1/lambda"},
      {"L", "K/lambda"},
      {"r0", "kendall:" + kendall::to_string(cert.bounds[best].method)},
      {"k0", "pointwise minimum over the kendall bounds listed"},
      {"m1", "atomic renewal decomposition, test functions bounded by 1"},
      {"mv", "atomic renewal decomposition, test functions bounded by V"},
  };
  if (spec.pi_C) cert.provenance.push_back({"c1", "1/pi_C"});
  return cert;
}

}  // namespace ergobound::atomic
