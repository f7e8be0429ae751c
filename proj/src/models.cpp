#include "ergobound/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ergobound/errors.hpp"

namespace ergobound::models {

namespace {

using numerics::std_normal_cdf;

void require_walk(double p) {
  if (!(p > 0.5) || !(p < 1.0)) throw InvalidInput("p must lie in (1/2, 1)");
}

struct Walk {
  double p, q;
  double stay0;  // P(0, 0)
};

Walk walk_of(const ModelSpec& s) {
  if (s.family == Family::ReflectingRW) {
    require_walk(s.p);
    return {s.p, 1.0 - s.p, s.p};
  }
  if (s.family == Family::StickyRW) {
    require_walk(s.p);
    if (!(s.eps > 0.0) || !(s.eps < s.p)) throw InvalidInput("eps must lie in (0, p)");
    return {s.p, 1.0 - s.p, s.eps};
  }
  throw InvalidInput("matrix oracle supports the reflecting and sticky walks only");
}

// Stationary law of the walk truncated at `cap`, where an up-move from cap is a stay.
std::vector<double> truncated_stationary(const Walk& w, int cap) {
  std::vector<double> pi(cap + 1);
  pi[0] = 1.0;
  if (cap >= 1) pi[1] = (1.0 - w.stay0) / w.p;
  for (int i = 2; i <= cap; ++i) pi[i] = pi[i - 1] * w.q / w.p;
  double total = 0.0;
  for (double v : pi) total += v;
  for (double& v : pi) v /= total;
  return pi;
}

}  // namespace

std::string to_string(Family f) {
  switch (f) {
    case Family::ReflectingRW: return "reflecting_rw";
    case Family::StickyRW: return "sticky_rw";
    case Family::MHNormal: return "mh_normal";
    case Family::ContractingNormals: return "contracting_normals";
  }
  return "unknown";
}

ModelSpec ModelSpec::reflecting_rw(double p) {
  ModelSpec m;
  m.family = Family::ReflectingRW;
  m.p = p;
  return m;
}

ModelSpec ModelSpec::sticky_rw(double p, double eps) {
  ModelSpec m;
  m.family = Family::StickyRW;
  m.p = p;
  m.eps = eps;
  return m;
}

ModelSpec ModelSpec::mh_normal(double d, double s, int nu_choice) {
  ModelSpec m;
  m.family = Family::MHNormal;
  m.d = d;
  m.s = s;
  m.nu_choice = nu_choice;
  return m;
}

ModelSpec ModelSpec::contracting_normals(double theta, double c) {
  ModelSpec m;
  m.family = Family::ContractingNormals;
  m.theta = theta;
  m.c = c;
  return m;
}

DerivedParams derive_reflecting_rw(double p) {
  require_walk(p);
  const double q = 1.0 - p, root = std::sqrt(p * q);
  DerivedParams out;
  const double pi_c = 1.0 - q / p;
  out.drift = atomic::AtomicDriftSpec{p, 2.0 * root, p + root, pi_c};
  out.pi_C_exact = pi_c;
  out.rho_optimal = 2.0 * root;
  if (p < 0.5 + 1e-6) out.warnings.push_back("p within 1e-6 of 1/2: lambda near 1, chain near null recurrence");
  return out;
}

std::complex<double> sticky_b_gen(double p, double eps, std::complex<double> z) {
  const double q = 1.0 - p;
  if (!(std::abs(z) < 1.0 / std::sqrt(4.0 * p * q)))
    throw DomainExceeded("sticky_b_gen requires |z| < 1/sqrt(4pq)");
  return eps * z + (1.0 - eps) * (1.0 - std::sqrt(1.0 - 4.0 * p * q * z * z)) / (2.0 * q);
}

DerivedParams derive_sticky_rw(double p, double eps) {
  require_walk(p);
  if (!(eps > 0.0) || !(eps < p)) throw InvalidInput("eps must lie in (0, p)");
  const double q = 1.0 - p;
  DerivedParams out;
  const double mean_return = eps + 2.0 * p * (1.0 - eps) / (p - q);
  out.drift = atomic::AtomicDriftSpec{eps, 2.0 * std::sqrt(p * q), eps + (1.0 - eps) * std::sqrt(p / q),
                                      1.0 / mean_return};
  out.pi_C_exact = 1.0 / mean_return;
  if (eps < (p - q) / (1.0 + std::sqrt(q / p)))
    out.rho_optimal = (p * q + (p - eps) * (p - eps)) / (p - eps);
  else
    out.rho_optimal = 2.0 * std::sqrt(p * q);
  out.exact_b_gen = [p, eps](std::complex<double> z) { return sticky_b_gen(p, eps, z); };
  out.warnings.push_back("sticky walk uses P(0,0) = eps, consistent with b = eps and the closed-form b(z)");
  return out;
}

DerivedParams derive_mh_normal(double d, double s, int nu_choice, const numerics::NumericConfig& quad) {
  if (!(d > 0.0) || !(s > 0.0)) throw InvalidInput("d and s must be positive");
  if (nu_choice != 1 && nu_choice != 2) throw InvalidInput("nu_choice must be 1 or 2");
  const double x = d;
  const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  // Accepted-move density from x: proposal N(x, 1) thinned by min(1, pi(y)/pi(x)).
  auto dens = [x, norm](double y) {
    const double base = -(y - x) * (y - x) / 2.0;
    if (std::abs(y) <= std::abs(x)) return norm * std::exp(base);
    return norm * std::exp(base - (y * y - x * x) / 2.0);
  };
  const double cut = x + 40.0;
  const double pts[] = {-cut, -x, 0.0, x, cut};
  double accept = 0.0, pv = 0.0;
  for (int i = 0; i < 4; ++i) {
    accept += numerics::integrate_adaptive(dens, pts[i], pts[i + 1], quad);
    pv += numerics::integrate_adaptive([&](double y) { return dens(y) * std::exp(s * std::abs(y)); },
                                       pts[i], pts[i + 1], quad);
  }
  const double v_d = std::exp(s * d);
  pv += (1.0 - accept) * v_d;  // rejected proposals leave the chain at d

  const double lam = pv / v_d, K = pv;
  double b, bbar;
  if (nu_choice == 1) {
    b = bbar = std::sqrt(2.0) * std::exp(-d * d) * (std_normal_cdf(std::sqrt(2.0) * d) - 0.5);
  } else {
    b = 2.0 * (std_normal_cdf(2.0 * d) - std_normal_cdf(d));
    bbar = b + std::sqrt(2.0) * std::exp(d * d / 4.0) * (1.0 - std_normal_cdf(3.0 * d / std::sqrt(2.0)));
  }
  DerivedParams out;
  const double pi_c = 2.0 * std_normal_cdf(d) - 1.0;
  out.drift = split::SplitDriftSpec{b, bbar, lam, K, pi_c};
  out.pi_C_exact = pi_c;
  if (!(lam < 1.0)) out.warnings.push_back("lambda >= 1: drift condition fails at these (d, s)");
  if (s < 1e-6) out.warnings.push_back("s near 0: V nearly constant, bound near-vacuous");
  return out;
}

DerivedParams derive_contracting_normals(double theta, double c) {
  if (!(std::abs(theta) < 1.0)) throw InvalidInput("theta must lie in (-1, 1)");
  if (!(c > 0.0)) throw InvalidInput("c must be positive");
  const double t2 = theta * theta;
  const double lam = t2 + 2.0 * (1.0 - t2) / (1.0 + c * c);
  if (!(lam < 1.0)) throw InvalidInput("lambda = " + std::to_string(lam) + " >= 1; increase c");
  const double K = 2.0 + t2 * (c * c - 1.0);
  const double sd = std::sqrt(1.0 - t2), at = std::abs(theta);
  const double bbar = 2.0 * (std_normal_cdf((1.0 + at) * c / sd) - std_normal_cdf(at * c / sd));
  const double pi_c = 2.0 * std_normal_cdf(c) - 1.0;
  DerivedParams out;
  out.drift = split::SplitDriftSpec{bbar, bbar, lam, K, pi_c};
  out.pi_C_exact = pi_c;
  if (theta == 0.0) out.warnings.push_back("theta = 0: chain is i.i.d. and converges in one step");
  return out;
}

DerivedParams derive(const ModelSpec& m) {
  switch (m.family) {
    case Family::ReflectingRW: return derive_reflecting_rw(m.p);
    case Family::StickyRW: return derive_sticky_rw(m.p, m.eps);
    case Family::MHNormal: return derive_mh_normal(m.d, m.s, m.nu_choice);
    case Family::ContractingNormals: return derive_contracting_normals(m.theta, m.c);
  }
  throw InvalidInput("unknown model family");
}

MatrixOracle rw_matrix_oracle(const ModelSpec& spec, int state_cap, int n_steps) {
  const Walk w = walk_of(spec);
  if (state_cap < 200) throw InvalidInput("state_cap must be >= 200");
  if (n_steps < 2) throw InvalidInput("n_steps must be >= 2");
  const auto pi = truncated_stationary(w, state_cap);
  // The walk is reversible, so P^n(0, cap) <= pi(cap)/pi(0); it is 0 while n < cap.
  if (n_steps >= state_cap && pi[state_cap] / pi[0] > 1e-12)
    throw MassLeak("state_cap too small: boundary mass may exceed 1e-12");

  const int N = state_cap + 1;
  std::vector<double> mu(N), next(N);
  for (int i = 0; i < N; ++i) mu[i] = -pi[i];
  mu[0] += 1.0;

  MatrixOracle out;
  out.tv.resize(n_steps + 1);
  out.log_tv.resize(n_steps + 1);
  double log_scale = 0.0;
  auto record = [&](int n) {
    double l1 = 0.0;
    for (double v : mu) l1 += std::abs(v);
    out.log_tv[n] = std::log(0.5 * l1) + log_scale;
    out.tv[n] = std::exp(out.log_tv[n]);
    // Keep mu at unit L1 norm so long runs neither underflow nor lose digits.
    for (double& v : mu) v /= l1;
    log_scale += std::log(l1);
  };
  record(0);
  for (int n = 1; n <= n_steps; ++n) {
    std::fill(next.begin(), next.end(), 0.0);
    next[0] += w.stay0 * mu[0];
    if (N > 1) next[1] += (1.0 - w.stay0) * mu[0];
    for (int i = 1; i < N; ++i) {
      next[i - 1] += w.p * mu[i];
      if (i + 1 < N) next[i + 1] += w.q * mu[i];
      else next[i] += w.q * mu[i];
    }
    double total = 0.0;
    for (double v : next) total += v;
    for (int i = 0; i < N; ++i) next[i] -= total * pi[i];
    mu.swap(next);
    record(n);
  }

  // Least-squares slope of log tv over the second half of the run.
  const int a = n_steps / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int m = n_steps - a + 1;
  for (int n = a; n <= n_steps; ++n) {
    sx += n;
    sy += out.log_tv[n];
    sxx += double(n) * n;
    sxy += n * out.log_tv[n];
  }
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  out.fitted_rate = std::exp(slope);
  return out;
}

double contracting_exact_tv(double theta, double x0, int n) {
  if (!(std::abs(theta) < 1.0)) throw InvalidInput("theta must lie in (-1, 1)");
  if (n < 0) throw InvalidInput("n must be >= 0");
  const double m = std::pow(theta, n) * x0;
  const double v = -std::expm1(2.0 * n * std::log(std::abs(theta)));
  if (theta == 0.0 && n > 0) return 0.0;
  if (n == 0) return 1.0;  // point mass against a density
  if (m == 0.0 && v == 1.0) return 0.0;
  const double sd = std::sqrt(v);
  const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  auto diff = [&](double y) {
    const double f = norm / sd * std::exp(-(y - m) * (y - m) / (2.0 * v));
    const double g = norm * std::exp(-y * y / 2.0);
    return 0.5 * std::abs(f - g);
  };
  // Densities cross where x^2 (v - 1) + 2 m x - m^2 - v log v = 0.
  std::vector<double> cuts;
  const double A = v - 1.0, B = 2.0 * m, C = -m * m - v * std::log(v);
  if (std::abs(A) < 1e-300) {
    if (B != 0.0) cuts.push_back(-C / B);
  } else {
    const double disc = B * B - 4.0 * A * C;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      const double qq = -0.5 * (B + std::copysign(sq, B));
      if (qq != 0.0) cuts.push_back(C / qq);
      cuts.push_back(qq / A);
    }
  }
  const double span = std::abs(m) + 40.0;
  std::vector<double> pts{-span};
  for (double c : cuts)
    if (c > -span && c < span) pts.push_back(c);
  pts.push_back(span);
  std::sort(pts.begin(), pts.end());
  double tv = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    tv += numerics::integrate_adaptive(diff, pts[i], pts[i + 1], {1e-16, 1e-12, 400});
  return tv;
}

DriftCheck verify_drift_discrete(const ModelSpec& spec, int state_cap) {
  const Walk w = walk_of(spec);
  const auto dp = derive(spec);
  const auto& a = std::get<atomic::AtomicDriftSpec>(dp.drift);
  const double ratio = std::sqrt(w.p / w.q);
  const double log_ratio = std::log(ratio);
  DriftCheck out{true, -std::numeric_limits<double>::infinity(), 0.0};
  // Rows of the truncated matrix; an up-move from the cap is a stay. V is handled
  // through log differences so large i cannot overflow.
  for (int i = 1; i <= state_cap; ++i) {
    const double log_v = i * log_ratio;
    const double up = i < state_cap ? (i + 1) * log_ratio : log_v;
    const double pv_over_v = w.p * std::exp((i - 1) * log_ratio - log_v) + w.q * std::exp(up - log_v);
    out.worst_offC = std::max(out.worst_offC, pv_over_v / a.lambda - 1.0);
  }
  const double pv0 = w.stay0 + (1.0 - w.stay0) * ratio;
  out.onC = pv0 / a.K - 1.0;
  out.ok = out.worst_offC <= 1e-12 && out.onC <= 1e-12;
  return out;
}

}  // namespace ergobound::models
