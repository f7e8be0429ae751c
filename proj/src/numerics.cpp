#include "ergobound/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "ergobound/errors.hpp"

namespace ergobound::numerics {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_bracket(const Bracket& br, bool allow_degenerate) {
  if (!std::isfinite(br.lo) || !std::isfinite(br.hi))
    throw InvalidInput("bracket endpoints must be finite");
  if (br.hi < br.lo || (!allow_degenerate && br.hi == br.lo))
    throw InvalidInput("bracket requires lo < hi");
}

// NaN sorts as +inf so a failed evaluation never wins a minimization.
double sanitize(double v) { return std::isnan(v) ? std::numeric_limits<double>::infinity() : v; }

Minimum brent_localmin(const ScalarFn& f, double a, double b, const NumericConfig& cfg) {
  const double golden = 0.5 * (3.0 - std::sqrt(5.0));
  double x = a + golden * (b - a);
  double w = x, v = x;
  double fx = sanitize(f(x));
  double fw = fx, fv = fx;
  double d = 0.0, e = 0.0;
  for (int it = 0; it < std::max(cfg.max_iter, 1); ++it) {
    const double m = 0.5 * (a + b);
    const double tol = std::sqrt(kEps) * std::abs(x) + cfg.abs_tol / 3.0;
    const double t2 = 2.0 * tol;
    if (std::abs(x - m) <= t2 - 0.5 * (b - a)) break;
    bool golden_step = true;
    if (std::abs(e) > tol) {
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p; else q = -q;
      const double etemp = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * etemp) && p > q * (a - x) && p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < t2 || b - u < t2) d = (x < m) ? tol : -tol;
        golden_step = false;
      }
    }
    if (golden_step) {
      e = (x < m) ? b - x : a - x;
      d = golden * e;
    }
    const double u = (std::abs(d) >= tol) ? x + d : x + (d > 0 ? tol : -tol);
    const double fu = sanitize(f(u));
    if (fu <= fx) {
      if (u < x) b = x; else a = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      if (u < x) a = u; else b = u;
      if (fu <= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }
  return {x, fx};
}

// Kronrod 15-point abscissae and weights; every odd index is also a Gauss 7-point node.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const ScalarFn& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double resk = fc * kWgk[7];
  double resg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double pair = f(center - dx) + f(center + dx);
    resk += kWgk[j] * pair;
    if (j % 2 == 1) resg += kWg[j / 2] * pair;
  }
  const double value = resk * half;
  const double error = std::abs((resk - resg) * half);
  if (!std::isfinite(value)) throw NoConvergence("integrand is not finite on [" +
                                                 std::to_string(a) + ", " + std::to_string(b) + "]");
  return {a, b, value, error};
}

}  // namespace

double solve_root_bracketed(const ScalarFn& f, Bracket br, const NumericConfig& cfg) {
  check_bracket(br, false);
  double a = br.lo, b = br.hi;
  double fa = f(a), fb = f(b);
  if (std::isnan(fa) || std::isnan(fb)) throw NoConvergence("root finder: NaN at bracket endpoint");
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) throw NoSignChange("root finder: f(lo) and f(hi) have the same sign");

  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int it = 0; it < cfg.max_iter; ++it) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a; fc = fa;
      d = b - a; e = d;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol = 2.0 * kEps * std::abs(b) + 0.5 * cfg.abs_tol;
    const double m = 0.5 * (c - b);
    if (std::abs(m) <= tol || fb == 0.0) return b;
    if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
      const double s = fb / fa;
      double p, q;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        const double qa = fa / fc, r = fb / fc;
        p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
        q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q; else p = -p;
      if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > tol) ? d : (m > 0.0 ? tol : -tol);
    fb = f(b);
    if (std::isnan(fb)) throw NoConvergence("root finder: NaN inside bracket");
  }
  throw NoConvergence("root finder: max_iter exhausted");
}

Minimum minimize_scalar(const ScalarFn& f, Bracket br, const NumericConfig& cfg, int scan_points) {
  check_bracket(br, true);
  if (br.lo == br.hi) return {br.lo, f(br.lo)};
  const int n = std::max(scan_points, 64);
  std::vector<double> xs(n), fs(n);
  int best = 0;
  for (int i = 0; i < n; ++i) {
    xs[i] = (i == n - 1) ? br.hi : br.lo + (br.hi - br.lo) * static_cast<double>(i) / (n - 1);
    fs[i] = sanitize(f(xs[i]));
    if (fs[i] < fs[best]) best = i;
  }
  const double a = xs[std::max(best - 1, 0)];
  const double b = xs[std::min(best + 1, n - 1)];
  Minimum refined = brent_localmin(f, a, b, cfg);
  if (refined.f < fs[best]) return refined;
  return {xs[best], fs[best]};
}

double std_normal_cdf(double x) {
  // erfc keeps full relative accuracy in the lower tail, so no cancellation.
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double integrate_adaptive(const ScalarFn& f, double a, double b, const NumericConfig& cfg) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw InvalidInput("integration limits must be finite");
  if (a == b) return 0.0;
  if (b < a) return -integrate_adaptive(f, b, a, cfg);

  std::priority_queue<Segment> heap;
  Segment first = gk15(f, a, b);
  double total = first.value, err = first.error;
  heap.push(first);
  const double min_width = 64.0 * kEps * std::max(std::abs(a), std::abs(b));
  for (int it = 0; it < cfg.max_iter; ++it) {
    if (err <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total))) return total;
    Segment worst = heap.top();
    if (worst.b - worst.a <= min_width) break;
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Segment left = gk15(f, worst.a, mid);
    Segment right = gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Recompute from the leaves to shed accumulated rounding in the running sums.
  total = 0.0;
  err = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  if (err <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total))) return total;
  throw NoConvergence("adaptive quadrature: subdivision budget exhausted (error estimate " +
                      std::to_string(err) + ")");
}

double gaussian_tail_cutoff(const ScalarFn& f, double start, double step, double rel, int max_steps) {
  if (step == 0.0) throw InvalidInput("tail cutoff step must be nonzero");
  double peak = std::abs(f(start));
  double x = start;
  for (int i = 0; i < max_steps; ++i) {
    x += step;
    const double v = std::abs(f(x));
    peak = std::max(peak, v);
    if (v <= rel * peak) return x;
  }
  throw NoConvergence("tail cutoff not reached");
}

}  // namespace ergobound::numerics
