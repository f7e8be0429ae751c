#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ergobound/atomic.hpp"
#include "ergobound/kendall.hpp"

namespace ergobound::split {

// Drift/minorization data for a small set C: P(x, .) >= bbar nu on C with
// bbar nu(C) >= b, PV <= lambda V off C, PV <= K on C.
struct SplitDriftSpec {
  double b;
  double bbar;
  double lambda;
  double K;
  std::optional<double> pi_C;
};

struct Exponents {
  double alpha1;
  std::optional<double> alpha2;  // empty when bbar == b (second branch has no such term)
};

Exponents exponents(const SplitDriftSpec& spec);

// Envelope for the split-chain increment generating function on [1, r_cap).
double L_of_r(const SplitDriftSpec& spec, double alpha1, std::optional<double> alpha2, double r);

struct AlphaBarRange {
  double lo;
  double hi;
  double alpha_bar0;
  bool collapsed;  // hi < lo before collapsing
};

AlphaBarRange alpha_bar_range(const SplitDriftSpec& spec, double alpha1, std::optional<double> alpha2);

// F1(x) = G(x) - log((1-b) abar) with G(x) = log((L(e^x) - e^x)/(e^x - 1)).
// kappa_bar(abar, r) = min over y in [log r, x_max] of F1(y)/y, the slope of the
// largest convex minorant of F1 through the origin.
class SplitEnvelope {
 public:
  SplitEnvelope(const SplitDriftSpec& spec, Exponents ex);

  double alpha1() const { return ex_.alpha1; }
  std::optional<double> alpha2() const { return ex_.alpha2; }
  double r_cap() const { return r_cap_; }
  double x_max() const { return x_max_; }
  bool convex() const { return convex_; }

  double G(double x) const;
  double F1(double abar, double x) const;
  double F1_prime(double abar, double x) const;

  struct Tangent {
    double x0;      // argmin of F1(y)/y
    double kappa0;  // F1(x0)/x0
  };
  Tangent tangent(double abar) const;

  double kappa_bar(double abar, double r) const;
  double kappa_bar(const Tangent& t, double abar, double r) const;
  double Fbar(double abar, double x) const;

 private:
  SplitDriftSpec spec_;
  Exponents ex_;
  double r_cap_;
  double x_max_;
  double x_lo_;
  bool convex_ = true;
};

SplitEnvelope envelope(const SplitDriftSpec& spec);

struct SplitKendallBound {
  kendall::KendallBound base;
  double x0 = 0.0;
  double kappa0 = 0.0;
  bool tangent_regime = false;  // x0 <= log R
  bool closed_form = false;     // fixed point given by T / kappa0
  AlphaBarRange range{};
  double r_cap = 0.0;
};

// Fixed point r = (1 + D(abar)/abar)^{1/kappa_bar(abar, r)} capped at r_cap.
struct FixedPoint {
  double r;
  bool closed_form;
  double residual;
};
FixedPoint split_fixed_point(const SplitEnvelope& env, const SplitDriftSpec& spec, double abar);

SplitKendallBound split_bound_known(const SplitDriftSpec& spec);
SplitKendallBound split_bound_unknown(const SplitDriftSpec& spec);
// Best of the two when pi_C is given, otherwise the unknown-pi_C bound.
SplitKendallBound split_kendall_bound(const SplitDriftSpec& spec);

struct LinearTerms {
  double coef_V_minus_1;
  double coef_V;
  double constant;
  double at(double V) const { return coef_V_minus_1 * (V - 1.0) + coef_V * V + constant; }
};

struct SupportingBounds {
  double Gbar_onatom;
  double Gbar_weighted_coeff;
  LinearTerms H1bar_offC_terms;
  double H1bar_atom;
  double H1bar_diff_quot;
  LinearTerms HVbar_offC_terms;
  double HVbar_atom;
  double HVbar_at1;
  double HVbar_diff_quot;
};

SupportingBounds split_supporting_bounds(const SplitDriftSpec& spec, double r);

atomic::ErgodicityCertificate split_certificate(const SplitDriftSpec& spec);

std::vector<std::string> validate(const SplitDriftSpec& spec);

}  // namespace ergobound::split
