#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ergobound::kendall {

// Constraint data for an increment law: b_1 >= b and b(R) <= L, optionally
// with the mean return time c(1) known exactly.
struct KendallInput {
  double b;
  double R;
  double L;
  std::optional<double> c1_known;
};

enum class Method { known_c1, unknown_c1, simplified_K1, baxendale_r2 };

std::string to_string(Method m);

struct KendallBound {
  double r0 = 1.0;
  double alpha_star = 0.0;
  Method method = Method::unknown_c1;
  // Bound on sup_{|z|=r} |sum (u_n - u_inf) z^n|; +inf where the bound is vacuous.
  std::function<double(double)> k0;
  bool capped = false;      // r0 == R
  bool degenerate = false;  // perfect renewal, b_1 = 1 forced
  double b_effective = 0.0;
  double alpha0 = 0.0;
  std::vector<std::string> warnings;
};

double d_alpha(double b, double alpha);
double alpha0(const KendallInput& in);
double kappa(const KendallInput& in, double alpha);

KendallBound bound_known_c1(const KendallInput& in);
KendallBound bound_unknown_c1(const KendallInput& in);
KendallBound bound_simplified(const KendallInput& in);
double r2_baxendale(const KendallInput& in);

struct Asymptotic {
  double r0;          // value from the active regime
  int regime;         // 1: moderate L, 2: L close to 1
  bool seam;          // predicate equal to e^{1/2} within rounding
  double predicate;   // ((L-1)/(1-b)) / log((L-b)/(1-b))
  double regime1_r0;
  double regime2_r0;
};

Asymptotic r0_asymptotic(double b, double L, double R);

// Residuals of the stationarity conditions for the minimizing alpha of r0 and
// the maximizing alpha of K0(r). Zero at interior extrema.
double r0_stationarity_residual(const KendallInput& in, double alpha);
double k0_stationarity_residual(const KendallInput& in, double alpha, double r);

// Unconstrained maximizer of alpha (r^kappa(alpha) - 1); callers clamp to [1, alpha0].
double k1_maximizer(const KendallInput& in, double r);

}  // namespace ergobound::kendall
