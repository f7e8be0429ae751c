#include "ergobound/split.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ergobound/errors.hpp"
#include "ergobound/numerics.hpp"

namespace ergobound::split {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

bool is_atomic(const SplitDriftSpec& s) { return s.bbar >= 1.0; }

atomic::AtomicDriftSpec as_atomic(const SplitDriftSpec& s) { return {s.b, s.lambda, s.K, s.pi_C}; }

// expm1(a y) / expm1(y), continuous at y = 0.
double expm1_ratio(double a, double y) {
  if (std::abs(y) < 1e-8) return a * (1.0 + 0.5 * (a - 1.0) * y);
  return std::expm1(a * y) / std::expm1(y);
}

// d/dy log(expm1(a y) / expm1(y)).
double expm1_ratio_logderiv(double a, double y) {
  if (std::abs(y) < 1e-4) return 0.5 * (a - 1.0) + (a * a - 1.0) * y / 12.0;
  return a * std::exp(a * y) / std::expm1(a * y) - std::exp(y) / std::expm1(y);
}

// (r^{1+alpha1} - 1)/(r - 1).
double growth_quotient(double alpha1, double r) {
  if (r == 1.0) return 1.0 + alpha1;
  return std::expm1((1.0 + alpha1) * std::log(r)) / (r - 1.0);
}

// M / (r - 1) with M = abar (r^kappa - 1)/D, continuous at r = 1.
double ratio_over_rm1(double abar, double kap, double d, double r) {
  if (r == 1.0) return abar * kap / d;
  return abar * std::expm1(kap * std::log(r)) / (d * (r - 1.0));
}

double k0_value(double prefactor, double m_over, double r) {
  const double M = m_over * (r - 1.0);
  if (!(M < 1.0)) return kInf;
  return prefactor * m_over / (1.0 - M);
}

kendall::KendallInput atomic_input(const SplitDriftSpec& s) {
  return {s.b, 1.0 / s.lambda, s.K / s.lambda, std::nullopt};
}

SplitKendallBound wrap_atomic(const kendall::KendallBound& kb, const SplitDriftSpec& s) {
  SplitKendallBound out;
  out.base = kb;
  out.r_cap = 1.0 / s.lambda;
  out.range = {1.0, 1.0, 1.0, false};
  return out;
}

}  // namespace

std::vector<std::string> validate(const SplitDriftSpec& s) {
  if (!std::isfinite(s.b) || !(s.b > 0.0) || s.b > 1.0) throw InvalidInput("b must lie in (0, 1]");
  if (!std::isfinite(s.bbar) || s.bbar < s.b || s.bbar > 1.0)
    throw InvalidInput("bbar must lie in [b, 1]");
  if (!std::isfinite(s.lambda) || !(s.lambda > 0.0) || !(s.lambda < 1.0))
    throw InvalidInput("lambda must lie in (0, 1)");
  if (!std::isfinite(s.K) || s.K < 1.0) throw InvalidInput("K must be >= 1");
  if (s.pi_C && (!(*s.pi_C > 0.0) || *s.pi_C > 1.0)) throw InvalidInput("pi_C must lie in (0, 1]");
  if (!is_atomic(s) && !(s.K > s.bbar)) throw InvalidInput("K must exceed bbar");
  std::vector<std::string> w;
  if (s.lambda > 1.0 - 1e-6) w.push_back("lambda within 1e-6 of 1; bounds are near-vacuous");
  return w;
}

Exponents exponents(const SplitDriftSpec& s) {
  validate(s);
  if (is_atomic(s)) throw InvalidInput("exponents are undefined for bbar = 1; use the atomic bounds");
  const double logR = -std::log(s.lambda);
  Exponents e{};
  e.alpha1 = std::log((s.K - s.bbar) / (1.0 - s.bbar)) / logR;
  if (s.bbar - s.b > 1e-15)
    e.alpha2 = std::log((s.K - 1.0 + s.bbar - s.b) / (s.bbar - s.b)) / logR;
  return e;
}

double L_of_r(const SplitDriftSpec& s, double alpha1, std::optional<double> alpha2, double r) {
  const double q1 = 1.0 - (1.0 - s.bbar) * std::pow(r, 1.0 + alpha1);
  const double q2 = 1.0 - (1.0 - s.bbar) * r;
  if (!(q1 > 0.0) || !(q2 > 0.0)) return kInf;
  const double first = s.bbar * r / q1;
  const double tail = alpha2 ? (s.bbar - s.b) * std::pow(r, 1.0 + *alpha2) : 0.0;
  const double second = (s.b * r + tail) / q2;
  return std::max(first, second);
}

AlphaBarRange alpha_bar_range(const SplitDriftSpec& s, double alpha1, std::optional<double> alpha2) {
  const double c = (1.0 - s.bbar) / (1.0 - s.b);
  double a0 = c * (1.0 + alpha1);
  if (alpha2) a0 = std::max(a0, c + (s.bbar - s.b) / (1.0 - s.b) * *alpha2);
  else a0 = std::max(a0, c);
  AlphaBarRange out{1.0 / s.bbar, a0 / s.bbar, a0, false};
  if (out.hi < out.lo) {
    out.collapsed = true;
    out.lo = out.hi;
  }
  return out;
}

SplitEnvelope::SplitEnvelope(const SplitDriftSpec& spec, Exponents ex) : spec_(spec), ex_(ex) {
  const double R = 1.0 / spec.lambda;
  const double pole = -std::log1p(-spec.bbar) / (1.0 + ex.alpha1);
  x_max_ = std::min(std::log(R), pole);
  r_cap_ = std::exp(x_max_);
  x_lo_ = x_max_ * 1e-9;

  constexpr int n = 257;
  const double hi = x_max_ * (1.0 - 1e-6);
  const double h = (hi - x_lo_) / (n - 1);
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = G(x_lo_ + i * h);
  for (int i = 1; i + 1 < n; ++i) {
    const double dd = g[i + 1] - 2.0 * g[i] + g[i - 1];
    const double scale = std::abs(g[i + 1]) + 2.0 * std::abs(g[i]) + std::abs(g[i - 1]);
    if (dd < -1e-9 * scale) {
      convex_ = false;
      break;
    }
  }
}

double SplitEnvelope::G(double x) const {
  if (x > x_max_) return kInf;
  const double bb = spec_.bbar, b = spec_.b, a1 = ex_.alpha1;
  const double er = std::exp(x);
  const double q1 = -std::expm1(std::log1p(-bb) + (1.0 + a1) * x);
  const double q2 = -std::expm1(std::log1p(-bb) + x);
  if (!(q1 > 0.0) || !(q2 > 0.0)) return kInf;
  const double g1 = er * (1.0 - bb) * expm1_ratio(1.0 + a1, x) / q1;
  const double e2 = ex_.alpha2 ? expm1_ratio(*ex_.alpha2, x) : 0.0;
  const double g2 = er * ((bb - b) * e2 + (1.0 - bb)) / q2;
  return std::log(std::max(g1, g2));
}

double SplitEnvelope::F1(double abar, double x) const {
  return G(x) - std::log((1.0 - spec_.b) * abar);
}

double SplitEnvelope::F1_prime(double /*abar*/, double x) const {
  const double bb = spec_.bbar, b = spec_.b, a1 = ex_.alpha1;
  const double er = std::exp(x);
  const double s1 = std::exp((1.0 + a1) * x);
  const double q1 = 1.0 - (1.0 - bb) * s1;
  const double q2 = 1.0 - (1.0 - bb) * er;
  if (!(q1 > 0.0) || !(q2 > 0.0)) return kInf;
  const double g1 = er * (1.0 - bb) * expm1_ratio(1.0 + a1, x) / q1;
  const double d1 = 1.0 + expm1_ratio_logderiv(1.0 + a1, x) + (1.0 - bb) * (1.0 + a1) * s1 / q1;
  double e2 = 0.0, e2d = 0.0;
  if (ex_.alpha2 && *ex_.alpha2 > 0.0) {
    e2 = expm1_ratio(*ex_.alpha2, x);
    e2d = e2 * expm1_ratio_logderiv(*ex_.alpha2, x);
  }
  const double n2 = (bb - b) * e2 + (1.0 - bb);
  const double g2 = er * n2 / q2;
  const double d2 = 1.0 + (bb - b) * e2d / n2 + (1.0 - bb) * er / q2;
  // At a seam the larger one-sided derivative is reported.
  if (std::abs(g1 - g2) <= 1e-13 * std::max(g1, g2)) return std::max(d1, d2);
  return g1 > g2 ? d1 : d2;
}

SplitEnvelope::Tangent SplitEnvelope::tangent(double abar) const {
  auto slope = [&](double y) { return F1(abar, y) / y; };
  const auto m = numerics::minimize_scalar(slope, {x_lo_, x_max_}, {1e-14, 1e-12, 300}, 128);
  return {m.x, m.f};
}

double SplitEnvelope::kappa_bar(const Tangent& t, double abar, double r) const {
  const double x = std::log(r);
  if (x > x_max_ * (1.0 + 1e-12)) throw DomainExceeded("kappa_bar: r beyond r_cap");
  if (x <= t.x0) return t.kappa0;
  if (convex_) return F1(abar, x) / x;
  auto slope = [&](double y) { return F1(abar, y) / y; };
  return numerics::minimize_scalar(slope, {x, x_max_}).f;
}

double SplitEnvelope::kappa_bar(double abar, double r) const {
  return kappa_bar(tangent(abar), abar, r);
}

double SplitEnvelope::Fbar(double abar, double x) const {
  if (x <= 0.0) return 0.0;
  return x * kappa_bar(abar, std::exp(x));
}

SplitEnvelope envelope(const SplitDriftSpec& spec) { return SplitEnvelope(spec, exponents(spec)); }

FixedPoint split_fixed_point(const SplitEnvelope& env, const SplitDriftSpec& spec, double abar) {
  const double T = std::log1p(kendall::d_alpha(spec.b, abar) / abar);
  const auto t = env.tangent(abar);
  if (t.x0 * t.kappa0 >= T) return {std::exp(T / t.kappa0), true, 0.0};
  const double xm = env.x_max();
  auto phi = [&](double x) { return x * env.kappa_bar(t, abar, std::exp(x)) - T; };
  const double at_cap = phi(xm);
  if (!(at_cap > 0.0)) return {env.r_cap(), false, at_cap};
  const double x = numerics::solve_root_bracketed(phi, {t.x0, xm}, {1e-15, 1e-13, 300});
  return {std::exp(x), false, phi(x)};
}

namespace {

void fill_common(SplitKendallBound& out, const SplitEnvelope& env, const AlphaBarRange& range,
                 double abar, const FixedPoint& fp) {
  const auto t = env.tangent(abar);
  out.base.r0 = std::min(fp.r, env.r_cap());
  out.base.alpha_star = abar;
  out.base.capped = out.base.r0 >= env.r_cap() * (1.0 - 1e-12);
  out.x0 = t.x0;
  out.kappa0 = t.kappa0;
  out.tangent_regime = t.x0 < env.x_max() * (1.0 - 1e-9);
  out.closed_form = fp.closed_form;
  out.range = range;
  out.r_cap = env.r_cap();
  if (range.collapsed)
    out.base.warnings.push_back("alpha_bar range empty (upper end " + fmt(range.hi) +
                                " below 1/bbar); evaluated at the upper end");
  if (!env.convex())
    out.base.warnings.push_back("envelope F1 not convex on the scan grid; kappa_bar by direct minimization");
}

}  // namespace

SplitKendallBound split_bound_known(const SplitDriftSpec& spec) {
  validate(spec);
  if (!spec.pi_C) throw InvalidInput("split_bound_known requires pi_C");
  if (is_atomic(spec)) {
    auto in = atomic_input(spec);
    in.c1_known = 1.0 / *spec.pi_C;
    return wrap_atomic(kendall::bound_known_c1(in), spec);
  }
  const auto ex = exponents(spec);
  const SplitEnvelope env(spec, ex);
  const auto range = alpha_bar_range(spec, ex.alpha1, ex.alpha2);
  double abar = (1.0 / (spec.bbar * *spec.pi_C) - 1.0) / (1.0 - spec.b);
  if (!(abar > 0.0))
    throw InvalidInput("pi_C gives alpha_bar = " + fmt(abar) + " <= 0; need bbar pi_C < 1");
  if (abar > range.alpha_bar0 / spec.bbar * (1.0 + 1e-9))
    throw InvalidInput("pi_C gives alpha_bar = " + fmt(abar) + " above the envelope limit " +
                       fmt(range.alpha_bar0 / spec.bbar) + "; inputs are inconsistent");
  abar = std::min(abar, range.alpha_bar0 / spec.bbar);

  SplitKendallBound out;
  out.base.method = kendall::Method::known_c1;
  out.base.b_effective = spec.b;
  out.base.alpha0 = range.alpha_bar0;
  const auto fp = split_fixed_point(env, spec, abar);
  fill_common(out, env, {abar, abar, range.alpha_bar0, false}, abar, fp);

  const double r0 = out.base.r0, d = kendall::d_alpha(spec.b, abar);
  const double pref = spec.bbar * *spec.pi_C;
  const auto t = env.tangent(abar);
  out.base.k0 = [env, t, abar, d, pref, r0](double r) {
    if (r < 1.0 || r > r0) return kInf;
    return k0_value(pref, ratio_over_rm1(abar, env.kappa_bar(t, abar, r), d, r), r);
  };
  return out;
}

SplitKendallBound split_bound_unknown(const SplitDriftSpec& spec) {
  validate(spec);
  if (is_atomic(spec)) return wrap_atomic(kendall::bound_unknown_c1(atomic_input(spec)), spec);
  const auto ex = exponents(spec);
  const SplitEnvelope env(spec, ex);
  const auto range = alpha_bar_range(spec, ex.alpha1, ex.alpha2);

  auto log_r0 = [&](double abar) { return std::log(split_fixed_point(env, spec, abar).r); };
  double abar = range.lo;
  if (range.hi > range.lo) abar = numerics::minimize_scalar(log_r0, {range.lo, range.hi}, {}, 128).x;

  SplitKendallBound out;
  out.base.method = kendall::Method::unknown_c1;
  out.base.b_effective = spec.b;
  out.base.alpha0 = range.alpha_bar0;
  fill_common(out, env, range, abar, split_fixed_point(env, spec, abar));

  const double r0 = out.base.r0, lo = range.lo, hi = range.hi, b = spec.b, bbar = spec.bbar;
  out.base.k0 = [env, r0, lo, hi, b, bbar](double r) {
    if (r < 1.0 || r > r0) return kInf;
    auto neg = [&](double a) {
      return -ratio_over_rm1(a, env.kappa_bar(a, r), kendall::d_alpha(b, a), r);
    };
    double best = -neg(lo);
    if (hi > lo) best = std::max(best, -numerics::minimize_scalar(neg, {lo, hi}, {}, 128).f);
    return k0_value(bbar, best, r);
  };
  return out;
}

SplitKendallBound split_kendall_bound(const SplitDriftSpec& spec) {
  auto unknown = split_bound_unknown(spec);
  if (!spec.pi_C) return unknown;
  auto known = split_bound_known(spec);
  return known.base.r0 >= unknown.base.r0 ? known : unknown;
}

SupportingBounds split_supporting_bounds(const SplitDriftSpec& spec, double r) {
  validate(spec);
  const double lam = spec.lambda, K = spec.K, bb = spec.bbar;
  if (!(r >= 1.0) || r > 1.0 / lam) throw InvalidInput("split_supporting_bounds requires 1 <= r <= 1/lambda");
  SupportingBounds sb{};
  if (is_atomic(spec)) {
    const auto g = atomic::g_h_bounds(as_atomic(spec), r);
    sb.Gbar_onatom = g.G_onC;
    sb.Gbar_weighted_coeff = g.G_offC_coeff;
    sb.H1bar_offC_terms = {g.H1_offC_coeff, 0.0, 0.0};
    sb.H1bar_atom = g.H1_onC;
    sb.H1bar_diff_quot = g.H1_diff_quot;
    sb.HVbar_offC_terms = {g.HV_offC_coeff, 0.0, 0.0};
    sb.HVbar_atom = g.HV_onC;
    sb.HVbar_at1 = (K - lam) / (1.0 - lam);
    sb.HVbar_diff_quot = g.HV_diff_quot;
    return sb;
  }
  const auto ex = exponents(spec);
  const double Q = 1.0 - (1.0 - bb) * std::pow(r, 1.0 + ex.alpha1);
  const double E = growth_quotient(ex.alpha1, r);
  const double atom_scale = r * (K - lam) / (1.0 - lam);
  sb.Gbar_onatom = L_of_r(spec, ex.alpha1, ex.alpha2, r);
  if (!(Q > 0.0)) {
    sb.Gbar_weighted_coeff = sb.H1bar_atom = sb.H1bar_diff_quot = kInf;
    sb.H1bar_offC_terms = {r * lam / (1.0 - lam), kInf, 0.0};
    sb.HVbar_offC_terms = {kInf, kInf, 0.0};
    sb.HVbar_atom = sb.HVbar_diff_quot = kInf;
    sb.HVbar_at1 = (K - lam) / ((1.0 - lam) * bb);
    return sb;
  }
  sb.Gbar_weighted_coeff = bb / Q;
  sb.H1bar_offC_terms = {r * lam / (1.0 - lam), (1.0 - bb) * r * E / Q, 0.0};
  sb.H1bar_atom = atom_scale / Q;
  sb.H1bar_diff_quot = r * lam * (K - 1.0) / (bb * (1.0 - lam) * (1.0 - lam)) +
                       (1.0 - bb) * E / (bb * Q) * atom_scale;
  sb.HVbar_at1 = (K - lam) / ((1.0 - lam) * bb);
  const double qv = 1.0 - r * lam;
  if (!(qv > 0.0)) {
    sb.HVbar_offC_terms = {kInf, kInf, 0.0};
    sb.HVbar_atom = sb.HVbar_diff_quot = kInf;
    return sb;
  }
  const double A = (K - r * lam) / qv;
  sb.HVbar_offC_terms = {r * lam / qv, (A - bb) * r / Q, 0.0};
  sb.HVbar_atom = (r * A + (A - bb) * (r - 1.0) / Q * atom_scale) / bb;
  sb.HVbar_diff_quot = (r * (K - 1.0) / ((1.0 - lam) * qv) + (A - bb) / Q * atom_scale) / bb;
  return sb;
}

atomic::ErgodicityCertificate split_certificate(const SplitDriftSpec& spec) {
  if (is_atomic(spec)) {
    auto cert = atomic::atomic_certificate(as_atomic(spec));
    cert.provenance.push_back({"bbar", "bbar = 1: split construction reduces to the atomic one"});
    return cert;
  }
  atomic::ErgodicityCertificate cert;
  cert.warnings = validate(spec);
  const auto ex = exponents(spec);

  std::vector<SplitKendallBound> parts{split_bound_unknown(spec)};
  if (spec.pi_C) parts.push_back(split_bound_known(spec));
  std::size_t best = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].base.r0 > parts[best].base.r0) best = i;
    for (const auto& w : parts[i].base.warnings)
      if (std::find(cert.warnings.begin(), cert.warnings.end(), w) == cert.warnings.end())
        cert.warnings.push_back(w);
    cert.bounds.push_back(parts[i].base);
  }
  cert.r0 = parts[best].base.r0;
  cert.rho_bound = 1.0 / cert.r0;

  std::vector<std::function<double(double)>> k0s;
  for (const auto& p : parts) k0s.push_back(p.base.k0);
  const double r0 = cert.r0;
  cert.k0 = [k0s, r0](double r) {
    if (r > r0) return kInf;
    double v = kInf;
    for (const auto& f : k0s) v = std::min(v, f(r));
    return v;
  };

  const double lam = spec.lambda, K = spec.K, bb = spec.bbar, a1 = ex.alpha1;
  const auto k0 = cert.k0;
  cert.m1 = [lam, K, bb, a1, k0](double r) {
    const double kv = k0(r);
    const double Q = 1.0 - (1.0 - bb) * std::pow(r, 1.0 + a1);
    if (std::isinf(kv) || !(Q > 0.0)) return kInf;
    const double E = growth_quotient(a1, r);
    const double atom_scale = r * (K - lam) / (1.0 - lam);
    // (r^{1+a1} - 1)/(r - 1) = E keeps the last term finite at r = 1.
    return 2.0 * lam * r / (1.0 - lam) + 2.0 * (1.0 - bb) * E * r / Q +
           bb / Q * r * lam * (K - 1.0) / ((1.0 - lam) * (1.0 - lam)) +
           (kv + bb * (1.0 - bb) * E) / (Q * Q) * atom_scale;
  };
  cert.mv = [lam, K, bb, a1, k0](double r) {
    const double qv = 1.0 - r * lam;
    const double Q = 1.0 - (1.0 - bb) * std::pow(r, 1.0 + a1);
    if (!(qv > 0.0) || !(Q > 0.0)) return kInf;
    const double kv = k0(r);
    if (std::isinf(kv)) return kInf;
    const double E = growth_quotient(a1, r);
    const double A = (K - r * lam) / qv;
    const double atom_scale = r * (K - lam) / (1.0 - lam);
    return lam * r / qv + (A - bb) * r / Q +
           (K - lam) / (1.0 - lam) * (r * lam / (1.0 - lam) + (1.0 - bb) * E * r / Q) +
           bb / Q * (r * (K - 1.0) / ((1.0 - lam) * qv) + (A - bb) / Q * atom_scale) +
           kv / Q * (r * A + (A - bb) * (r - 1.0) / Q * atom_scale);
  };

  cert.provenance = {
      {"R", "1/lambda"},
      {"alpha1", "log((K - bbar)/(1 - bbar)) / log R"},
      {"r0", std::string("split renewal fixed point, ") +
                 (parts[best].base.method == kendall::Method::known_c1 ? "pi_C known" : "pi_C unknown")},
      {"k0", "pointwise minimum over the split kendall bounds listed"},
      {"m1", "split renewal decomposition, test functions bounded by 1"},
      {"mv", "split renewal decomposition, test functions bounded by V"},
  };
  if (ex.alpha2) cert.provenance.push_back({"alpha2", "log((K - 1 + bbar - b)/(bbar - b)) / log R"});
  return cert;
}

}  // namespace ergobound::split
