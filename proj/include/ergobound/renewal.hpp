#pragma once

#include <complex>
#include <vector>

namespace ergobound::renewal {

using cplx = std::complex<double>;

// Law of the renewal increment on {1, ..., N}, together with a lower bound
// b_floor on the one-step mass b_1.
class IncrementDistribution {
 public:
  IncrementDistribution(std::vector<double> probs, double b_floor);

  // Skips validation; for negative controls such as periodic increments.
  static IncrementDistribution unchecked(std::vector<double> probs, double b_floor);

  const std::vector<double>& probs() const { return probs_; }
  double b_floor() const { return b_floor_; }
  int support() const { return static_cast<int>(probs_.size()); }

 private:
  IncrementDistribution() = default;
  std::vector<double> probs_;
  double b_floor_ = 0.0;
};

struct RenewalSequence {
  std::vector<double> u;
  double u_inf;
};

RenewalSequence renewal_sequence(const IncrementDistribution& inc, int m);

cplx gen_b(const IncrementDistribution& inc, cplx z);
// (b(z) - 1)/(z - 1), evaluated through the tail sums so z = 1 needs no special case.
cplx gen_c(const IncrementDistribution& inc, cplx z);
double c1(const IncrementDistribution& inc);

struct OracleValue {
  double value;      // max over the angle grid of |sum (u_n - u_inf) z^n|
  double tail_term;  // |u_m - u_inf| r^m
  int m;
};

// Truncated evaluation of sup_{|z|=r} |sum_{n<=m} (u_n - u_inf) z^n| on a uniform
// grid of theta_points angles. Throws TruncationTooShort when the tail term
// exceeds 1e-6 of the value.
OracleValue tail_sup_oracle(const IncrementDistribution& inc, double r, int m,
                            int theta_points = 4096);

// Same, doubling m until the geometric tail estimate is below 1e-10.
OracleValue tail_sup_oracle_adaptive(const IncrementDistribution& inc, double r,
                                     int theta_points = 4096, int m_start = 256,
                                     int m_max = 1 << 20);

struct CircleCheck {
  bool ok;
  double margin;     // min |c(e^{i theta})| - (1-b) D(alpha)
  double theta_min;  // where the minimum of |c| was found
  double rhs;        // (1-b) D(alpha)
};

// Checks |c(e^{i theta})| >= (1-b) D(alpha) on (0, pi] with alpha = (c(1)-1)/(1-b)
// and b = b_floor.
CircleCheck circle_lower_bound_check(const IncrementDistribution& inc, int theta_points = 4096);

// (1-b) D(alpha), written so that b = 1 is finite.
double scaled_circle_gap(double b, double alpha);

}  // namespace ergobound::renewal
