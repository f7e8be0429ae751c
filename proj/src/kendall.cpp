#include "ergobound/kendall.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ergobound/errors.hpp"
#include "ergobound/numerics.hpp"

namespace ergobound::kendall {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kAlphaScan = 128;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void validate(const KendallInput& in) {
  if (!std::isfinite(in.b) || !std::isfinite(in.R) || !std::isfinite(in.L))
    throw InvalidInput("b, R and L must be finite");
  if (!(in.b > 0.0) || in.b > 1.0) throw InvalidInput("b must lie in (0, 1]");
  if (!(in.R > 1.0)) throw InvalidInput("R must be > 1");
  if (!(in.L > 1.0)) throw InvalidInput("L must be > 1");
  if (in.L < in.R * (1.0 - 1e-12))
    throw InvalidInput("L < R: no increment law has b(R) <= L");
}

// Constraint data after validation. When L < bR + (1-b)R^2 every admissible law
// has b_1 > b, so the floor is raised to the implied value (which puts alpha0 at 1).
struct Prepared {
  KendallInput in;
  bool degenerate = false;
  std::vector<std::string> warnings;
};

Prepared prepare(const KendallInput& raw) {
  validate(raw);
  Prepared p{raw, false, {}};
  if (raw.b >= 1.0) {
    p.degenerate = true;
    p.warnings.push_back("b = 1: perfect renewal, r0 = R and K0 = 0");
    return p;
  }
  const double R = raw.R, L = raw.L;
  const double lmin = raw.b * R + (1.0 - raw.b) * R * R;
  if (L < lmin) {
    const double implied = std::clamp((R * R - L) / (R * R - R), raw.b, 1.0);
    if (implied >= 1.0 - 1e-12) {
      p.degenerate = true;
      p.in.b = 1.0;
      p.warnings.push_back("degenerate range: alpha0 = " + fmt(alpha0(raw)) +
                           "; b(R) <= L = R forces b_1 = 1 (perfect renewal)");
      return p;
    }
    p.warnings.push_back("degenerate range: alpha0 = " + fmt(alpha0(raw)) +
                         " < 1; floor raised from b = " + fmt(raw.b) + " to implied b = " +
                         fmt(implied) + " so the alpha range collapses to {1}");
    p.in.b = implied;
  }
  return p;
}

KendallBound degenerate_bound(const Prepared& p, Method m) {
  KendallBound kb;
  kb.r0 = p.in.R;
  kb.alpha_star = 0.0;
  kb.method = m;
  const double R = p.in.R;
  kb.k0 = [R](double r) { return r <= R ? 0.0 : kInf; };
  kb.capped = true;
  kb.degenerate = true;
  kb.b_effective = 1.0;
  kb.alpha0 = 0.0;
  kb.warnings = p.warnings;
  return kb;
}

double pow_minus_one(double r, double k) { return std::expm1(k * std::log(r)); }

// K0 as a function of M = alpha (r^kappa - 1) / D, the only combination that matters.
double k0_from_ratio(double M, double r, double prefactor) {
  if (!(M < 1.0)) return kInf;
  return prefactor * M / ((r - 1.0) * (1.0 - M));
}

double log_r0_objective(const KendallInput& in, double alpha, double d) {
  const double k = kappa(in, alpha);
  if (!(k > 0.0)) return kInf;
  return std::log1p(d / alpha) / k;
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::known_c1: return "known_c1";
    case Method::unknown_c1: return "unknown_c1";
    case Method::simplified_K1: return "simplified_K1";
    case Method::baxendale_r2: return "baxendale_r2";
  }
  return "unknown";
}

double d_alpha(double b, double alpha) {
  if (!(b >= 0.0) || !(b < 1.0)) throw InvalidInput("d_alpha: b must lie in [0, 1)");
  if (!(alpha >= 0.0)) throw InvalidInput("d_alpha: alpha must be >= 0");
  // With x = beta (1 - w), w = e^{i theta}: |1+x|^2 - 1 = 4 beta (1+beta) sin^2(theta/2).
  const double beta = b / (1.0 - b);
  const double theta = std::numbers::pi / (1.0 + alpha);
  const double s = std::sin(0.5 * theta);
  const double re = 1.0 + 2.0 * beta * s * s;
  const double im = beta * std::sin(theta);
  const double mod = std::hypot(re, im);
  return 2.0 * beta * (1.0 + beta) * s / (mod + 1.0);
}

double alpha0(const KendallInput& in) {
  if (!(in.L > in.b * in.R)) throw InvalidInput("alpha0 requires L > bR");
  if (!(in.b < 1.0)) throw InvalidInput("alpha0 requires b < 1");
  return std::log((in.L - in.b * in.R) / ((1.0 - in.b) * in.R)) / std::log(in.R);
}

double kappa(const KendallInput& in, double alpha) {
  const double N = (in.L - 1.0) / (in.R - 1.0);
  if (!(N - 1.0 > 0.0)) throw InvalidInput("kappa requires N = (L-1)/(R-1) > 1");
  if (!(alpha > 0.0)) throw InvalidInput("kappa requires alpha > 0");
  return std::log((N - 1.0) / ((1.0 - in.b) * alpha)) / std::log(in.R);
}

KendallBound bound_known_c1(const KendallInput& raw) {
  if (!raw.c1_known) throw InvalidInput("bound_known_c1 requires c1");
  const double c1 = *raw.c1_known;
  if (!std::isfinite(c1) || c1 < 1.0) throw InvalidInput("c1 must be >= 1 (got c1 = " + fmt(c1) + ")");
  // Every law has c1 >= b_1 + 2(1 - b_1), so b_1 >= 2 - c1 and the floor may be raised.
  KendallInput adj = raw;
  std::string raised;
  if (2.0 - c1 > raw.b) {
    adj.b = std::min(1.0, 2.0 - c1);
    raised = "c1 = " + fmt(c1) + " < 2 - b implies b_1 >= " + fmt(adj.b) + "; floor raised from b = " + fmt(raw.b);
  }
  Prepared p = prepare(adj);
  if (!raised.empty()) p.warnings.insert(p.warnings.begin(), raised);
  if (p.degenerate) return degenerate_bound(p, Method::known_c1);
  const KendallInput in = p.in;
  const double alpha = (c1 - 1.0) / (1.0 - in.b);
  if (!(alpha > 0.0)) throw InvalidInput("bound_known_c1 requires alpha = (c1-1)/(1-b) > 0");
  const double a0 = alpha0(in);
  if (alpha > a0 * (1.0 + 1e-9))
    p.warnings.push_back("c1 = " + fmt(c1) + " gives alpha = " + fmt(alpha) +
                         " above alpha0 = " + fmt(a0) + "; inputs look inconsistent");
  const double k = kappa(in, alpha);
  if (!(k > 0.0)) throw InvalidInput("c1 inconsistent with b(R) <= L: kappa(alpha) <= 0");
  const double d = d_alpha(in.b, alpha);
  const double r_free = std::exp(std::log1p(d / alpha) / k);

  KendallBound kb;
  kb.method = Method::known_c1;
  kb.alpha_star = alpha;
  kb.r0 = std::min(in.R, r_free);
  kb.capped = r_free >= in.R;
  kb.b_effective = in.b;
  kb.alpha0 = a0;
  kb.warnings = std::move(p.warnings);
  const double pi_c = 1.0 / c1, R = in.R;
  kb.k0 = [pi_c, alpha, d, k, R](double r) {
    if (r < 1.0) throw InvalidInput("K0 is defined for r >= 1");
    if (r > R) return kInf;
    if (r == 1.0) return pi_c * k * alpha / d;
    return k0_from_ratio(alpha * pow_minus_one(r, k) / d, r, pi_c);
  };
  return kb;
}

KendallBound bound_unknown_c1(const KendallInput& raw) {
  Prepared p = prepare(raw);
  if (p.degenerate) return degenerate_bound(p, Method::unknown_c1);
  const KendallInput in = p.in;
  const double a0 = std::max(alpha0(in), 1.0);
  const auto objective = [&in](double a) { return log_r0_objective(in, a, d_alpha(in.b, a)); };
  const numerics::Minimum best = numerics::minimize_scalar(objective, {1.0, a0}, {}, kAlphaScan);
  if (!std::isfinite(best.f)) throw InvalidInput("kappa(alpha) <= 0 on the whole alpha range");
  const double r_free = std::exp(best.f);

  KendallBound kb;
  kb.method = Method::unknown_c1;
  kb.alpha_star = best.x;
  kb.r0 = std::min(in.R, r_free);
  kb.capped = r_free >= in.R;
  kb.b_effective = in.b;
  kb.alpha0 = a0;
  kb.warnings = std::move(p.warnings);
  const double R = in.R;
  kb.k0 = [in, a0, R](double r) {
    if (r < 1.0) throw InvalidInput("K0 is defined for r >= 1");
    if (r > R) return kInf;
    if (r == 1.0) {
      const auto neg = [&in](double a) {
        const double k = kappa(in, a);
        return -(k > 0.0 ? a * k / d_alpha(in.b, a) : 0.0);
      };
      return -numerics::minimize_scalar(neg, {1.0, a0}, {}, kAlphaScan).f;
    }
    const auto neg_ratio = [&in, r](double a) {
      const double k = kappa(in, a);
      return -(a * pow_minus_one(r, k) / d_alpha(in.b, a));
    };
    const double M = -numerics::minimize_scalar(neg_ratio, {1.0, a0}, {}, kAlphaScan).f;
    return k0_from_ratio(M, r, 1.0);
  };
  return kb;
}

double k1_maximizer(const KendallInput& in, double r) {
  const double N = (in.L - 1.0) / (in.R - 1.0);
  const double A = (N - 1.0) / (1.0 - in.b);
  if (r <= 1.0) return A / std::numbers::e;
  const double t = std::log(r) / std::log(in.R);
  if (t >= 1.0) return 0.0;
  return A * std::exp(std::log1p(-t) / t);
}

KendallBound bound_simplified(const KendallInput& raw) {
  Prepared p = prepare(raw);
  if (p.degenerate) return degenerate_bound(p, Method::simplified_K1);
  const KendallInput in = p.in;
  const double a0 = std::max(alpha0(in), 1.0);
  const double d0 = d_alpha(in.b, a0);
  const auto objective = [&in, d0](double a) { return log_r0_objective(in, a, d0); };
  const numerics::Minimum best = numerics::minimize_scalar(objective, {1.0, a0}, {}, kAlphaScan);
  if (!std::isfinite(best.f)) throw InvalidInput("kappa(alpha) <= 0 on the whole alpha range");
  const double r_free = std::exp(best.f);

  KendallBound kb;
  kb.method = Method::simplified_K1;
  kb.alpha_star = best.x;
  kb.r0 = std::min(in.R, r_free);
  kb.capped = r_free >= in.R;
  kb.b_effective = in.b;
  kb.alpha0 = a0;
  kb.warnings = std::move(p.warnings);
  const double R = in.R;
  // alpha (r^kappa - 1) is concave in alpha, so the clamped stationary point is the maximizer.
  kb.k0 = [in, a0, d0, R](double r) {
    if (r < 1.0) throw InvalidInput("K1 is defined for r >= 1");
    if (r > R) return kInf;
    const double a = std::clamp(k1_maximizer(in, r), 1.0, a0);
    if (r == 1.0) return a * kappa(in, a) / d0;
    return k0_from_ratio(a * pow_minus_one(r, kappa(in, a)) / d0, r, 1.0);
  };
  return kb;
}

double r2_baxendale(const KendallInput& raw) {
  validate(raw);
  const double N = (raw.L - 1.0) / (raw.R - 1.0);
  if (!(N > 0.0)) throw InvalidInput("r2 requires N > 0");
  const double R = raw.R, target = raw.b / (2.0 * N);
  const auto h = [R, target](double r) {
    const double l = std::log(R / r);
    return (r - 1.0) / (r * l * l) - target;
  };
  double hi = R;
  for (int k = 1; k < 200; ++k) {
    hi = R - (R - 1.0) * std::ldexp(1.0, -k);
    if (hi <= 1.0 || h(hi) > 0.0) break;
  }
  if (!(h(hi) > 0.0)) return hi;
  return numerics::solve_root_bracketed(h, {1.0, hi});
}

Asymptotic r0_asymptotic(double b, double L, double R) {
  if (!(b > 0.0 && b < 1.0)) throw InvalidInput("r0_asymptotic requires 0 < b < 1");
  if (!(L > 1.0) || !(R > 1.0)) throw InvalidInput("r0_asymptotic requires L > 1 and R > 1");
  const double e3 = std::pow(R - 1.0, 3);
  const double lg = std::log((L - b) / (1.0 - b));
  const double q = (L - 1.0) / (1.0 - b) / lg;
  Asymptotic a{};
  a.predicate = q;
  // Leading term with alpha0 ~ lg/(R-1) and kappa(alpha0) ~ log(q)/(R-1).
  a.regime1_r0 = 1.0 + b * std::numbers::pi * e3 / (2.0 * (1.0 - b) * (1.0 - b)) / (lg * lg) / std::log(q);
  a.regime2_r0 = 1.0 + b * std::numbers::e * std::numbers::pi * e3 / ((L - 1.0) * (L - 1.0));
  const double seam = std::exp(0.5);
  a.seam = std::abs(q - seam) <= 1e-12 * seam;
  a.regime = (q >= seam) ? 1 : 2;
  a.r0 = (a.regime == 1) ? a.regime1_r0 : a.regime2_r0;
  return a;
}

double r0_stationarity_residual(const KendallInput& in, double alpha) {
  const double N = (in.L - 1.0) / (in.R - 1.0);
  const double h = 1e-6 * std::max(1.0, alpha);
  const double d = d_alpha(in.b, alpha);
  const double dp = (d_alpha(in.b, alpha + h) - d_alpha(in.b, alpha - h)) / (2.0 * h);
  return std::log((N - 1.0) / (1.0 - in.b)) -
         (std::log(alpha) + std::log1p(d / alpha) * (d + alpha) / (d - alpha * dp));
}

double k0_stationarity_residual(const KendallInput& in, double alpha, double r) {
  const double h = 1e-6 * std::max(1.0, alpha);
  const double d = d_alpha(in.b, alpha);
  const double dp = (d_alpha(in.b, alpha + h) - d_alpha(in.b, alpha - h)) / (2.0 * h);
  const double rk = std::pow(r, kappa(in, alpha));
  return (1.0 - dp * alpha / d) * (rk - 1.0) - std::log(r) / std::log(in.R) * rk;
}

}  // namespace ergobound::kendall
