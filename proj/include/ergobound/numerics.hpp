#pragma once

#include <functional>

namespace ergobound::numerics {

using ScalarFn = std::function<double(double)>;

struct Bracket {
  double lo;
  double hi;
};

struct NumericConfig {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_iter = 200;
};

struct Minimum {
  double x;
  double f;
};

// Brent's method. Throws NoSignChange when f(lo) and f(hi) share a strict sign,
// NoConvergence when max_iter is exhausted.
double solve_root_bracketed(const ScalarFn& f, Bracket bracket, const NumericConfig& cfg = {});

// Uniform scan of at least 64 points followed by Brent refinement around the best
// grid point. The result is never worse than the best grid value.
Minimum minimize_scalar(const ScalarFn& f, Bracket bracket, const NumericConfig& cfg = {},
                        int scan_points = 64);

double std_normal_cdf(double x);

// Globally adaptive Gauss-Kronrod (7/15) quadrature on a finite interval.
// cfg.max_iter bounds the number of interval subdivisions.
double integrate_adaptive(const ScalarFn& f, double a, double b, const NumericConfig& cfg = {});

// Walks outward from `start` in steps of `step` (sign gives direction) until
// |f| falls below rel * peak, where peak is |f(start)|. Returns the cut point.
double gaussian_tail_cutoff(const ScalarFn& f, double start, double step, double rel = 1e-16,
                            int max_steps = 10000);

}  // namespace ergobound::numerics
