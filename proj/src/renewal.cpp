#include "ergobound/renewal.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "ergobound/errors.hpp"
#include "ergobound/numerics.hpp"

namespace ergobound::renewal {

namespace {

// FFTW planning is not thread-safe; execution on private arrays is.
std::mutex& fftw_plan_mutex() {
  static std::mutex m;
  return m;
}

// Tail sums c_j = sum_{k>j} b_k for j = 0..N-1.
std::vector<double> tail_sums(const std::vector<double>& b) {
  const int n = static_cast<int>(b.size());
  std::vector<double> c(n, 0.0);
  double acc = 0.0;
  for (int j = n - 1; j >= 0; --j) {
    acc += b[j];
    c[j] = acc;
  }
  return c;
}

// d_n = u_n - u_inf for n = 0..m. Beyond the first N-1 terms this uses
// sum_j c_j d_{n-j} = 0, whose characteristic roots exclude z = 1, so rounding
// does not leave a persistent constant offset behind.
std::vector<double> renewal_deviation(const IncrementDistribution& inc, int m) {
  const auto& b = inc.probs();
  const int nsup = inc.support();
  const std::vector<double> c = tail_sums(b);
  const double uinf = 1.0 / c1(inc);
  std::vector<double> d(m + 1, 0.0);
  d[0] = 1.0 - uinf;
  for (int n = 1; n <= m; ++n) {
    double s = 0.0;
    if (n < nsup - 1) {
      for (int k = 1; k <= n; ++k) s += d[n - k] * b[k - 1];
      s -= uinf * c[n];
    } else {
      for (int j = 1; j < nsup && j <= n; ++j) s -= c[j] * d[n - j];
      s /= c[0];
    }
    d[n] = s;
  }
  return d;
}

double window_tail(const std::vector<double>& d, double r, int window) {
  const int m = static_cast<int>(d.size()) - 1;
  double t = 0.0;
  for (int n = std::max(0, m - window + 1); n <= m; ++n)
    t = std::max(t, std::abs(d[n]) * std::pow(r, n));
  return t;
}

double fft_circle_max(const std::vector<double>& d, double r, int theta_points) {
  const int t = theta_points;
  double* in = fftw_alloc_real(t);
  fftw_complex* out = fftw_alloc_complex(t / 2 + 1);
  std::fill(in, in + t, 0.0);
  const double logr = std::log(r);
  for (std::size_t n = 0; n < d.size(); ++n) {
    if (d[n] == 0.0) continue;
    const double term = d[n] * std::exp(static_cast<double>(n) * logr);
    in[n % t] += term;
  }
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex());
    plan = fftw_plan_dft_r2c_1d(t, in, out, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  double best = 0.0;
  for (int k = 0; k <= t / 2; ++k) best = std::max(best, std::hypot(out[k][0], out[k][1]));
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(in);
  fftw_free(out);
  if (!std::isfinite(best)) throw DomainExceeded("tail series overflowed on the circle");
  return best;
}

}  // namespace

IncrementDistribution::IncrementDistribution(std::vector<double> probs, double b_floor) {
  if (probs.empty()) throw InvalidInput("increment distribution needs at least one atom");
  double total = 0.0;
  for (double p : probs) {
    if (!std::isfinite(p) || p < 0.0) throw InvalidInput("increment probabilities must be >= 0");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw InvalidInput("increment probabilities must sum to 1 (got " + std::to_string(total) + ")");
  if (!(b_floor > 0.0) || b_floor > 1.0) throw InvalidInput("b_floor must lie in (0, 1]");
  if (probs[0] < b_floor - 1e-15) throw InvalidInput("b_1 must be >= b_floor");
  probs_ = std::move(probs);
  b_floor_ = b_floor;
}

IncrementDistribution IncrementDistribution::unchecked(std::vector<double> probs, double b_floor) {
  IncrementDistribution inc;
  inc.probs_ = std::move(probs);
  inc.b_floor_ = b_floor;
  return inc;
}

RenewalSequence renewal_sequence(const IncrementDistribution& inc, int m) {
  if (m < 0) throw InvalidInput("renewal_sequence: m must be >= 0");
  const auto& b = inc.probs();
  const int nsup = inc.support();
  std::vector<double> u(m + 1, 0.0);
  u[0] = 1.0;
  for (int n = 1; n <= m; ++n) {
    double s = 0.0;
    for (int k = 1; k <= std::min(n, nsup); ++k) s += u[n - k] * b[k - 1];
    u[n] = s;
  }
  return {std::move(u), 1.0 / c1(inc)};
}

cplx gen_b(const IncrementDistribution& inc, cplx z) {
  const auto& b = inc.probs();
  cplx acc = 0.0;
  for (auto it = b.rbegin(); it != b.rend(); ++it) acc = acc * z + *it;
  return acc * z;
}

cplx gen_c(const IncrementDistribution& inc, cplx z) {
  const std::vector<double> c = tail_sums(inc.probs());
  cplx acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

double c1(const IncrementDistribution& inc) {
  double s = 0.0;
  const auto& b = inc.probs();
  for (std::size_t n = 0; n < b.size(); ++n) s += static_cast<double>(n + 1) * b[n];
  return s;
}

OracleValue tail_sup_oracle(const IncrementDistribution& inc, double r, int m, int theta_points) {
  if (!(r >= 1.0)) throw InvalidInput("tail_sup_oracle: r must be >= 1");
  if (m < 0) throw InvalidInput("tail_sup_oracle: m must be >= 0");
  if (theta_points < 2) throw InvalidInput("tail_sup_oracle: theta_points must be >= 2");
  const std::vector<double> d = renewal_deviation(inc, m);
  const double value = fft_circle_max(d, r, theta_points);
  const double tail = window_tail(d, r, std::max(inc.support(), 1));
  if (tail > 1e-6 * value && tail > 1e-300)
    throw TruncationTooShort("tail term " + std::to_string(tail) + " exceeds 1e-6 of oracle value " +
                             std::to_string(value) + " at m=" + std::to_string(m));
  return {value, tail, m};
}

OracleValue tail_sup_oracle_adaptive(const IncrementDistribution& inc, double r, int theta_points,
                                     int m_start, int m_max) {
  if (!(r >= 1.0)) throw InvalidInput("tail_sup_oracle: r must be >= 1");
  const int window = std::max(inc.support(), 1);
  for (int m = std::max(m_start, 4 * window); m <= m_max; m *= 2) {
    const std::vector<double> d = renewal_deviation(inc, m);
    double late = 0.0, early = 0.0;
    const int half = m / 2;
    for (int n = std::max(0, m - window + 1); n <= m; ++n) late = std::max(late, std::abs(d[n]));
    for (int n = std::max(0, half - window + 1); n <= half; ++n) early = std::max(early, std::abs(d[n]));
    if (late == 0.0) return {fft_circle_max(d, r, theta_points), 0.0, m};
    const double rho_geo = (early > 0.0) ? std::pow(late / early, 1.0 / (m - half)) : 1.0;
    const double q = r * rho_geo;
    if (q < 1.0) {
      const double tail = late * std::pow(r, m);
      const double estimate = tail / (1.0 - q);
      if (estimate <= 1e-10) {
        const double value = fft_circle_max(d, r, theta_points);
        return {value, tail, m};
      }
    }
  }
  throw TruncationTooShort("tail series did not converge by m=" + std::to_string(m_max) +
                           " at r=" + std::to_string(r));
}

double scaled_circle_gap(double b, double alpha) {
  const cplx w = std::polar(1.0, std::numbers::pi / (1.0 + alpha));
  const double one_minus_w = std::abs(1.0 - w);
  return (std::abs((1.0 - b) + b * (1.0 - w)) - (1.0 - b)) / one_minus_w;
}

CircleCheck circle_lower_bound_check(const IncrementDistribution& inc, int theta_points) {
  if (theta_points < 128) throw InvalidInput("circle_lower_bound_check: theta_points must be >= 128");
  const double b = inc.b_floor();
  const double alpha = (b >= 1.0) ? 0.0 : (c1(inc) - 1.0) / (1.0 - b);
  const double rhs = scaled_circle_gap(std::min(b, 1.0), alpha);

  const auto modc = [&](double th) { return std::abs(gen_c(inc, std::polar(1.0, th))); };
  const double step = std::numbers::pi / theta_points;
  int kbest = 1;
  double best = modc(step);
  for (int k = 2; k <= theta_points; ++k) {
    const double v = modc(k * step);
    if (v < best) {
      best = v;
      kbest = k;
    }
  }
  const double lo = std::max((kbest - 1) * step, 0.5 * step);
  const double hi = std::min((kbest + 1) * step, std::numbers::pi);
  const numerics::Minimum refined = numerics::minimize_scalar(modc, {lo, hi});
  double theta = kbest * step;
  if (refined.f < best) {
    best = refined.f;
    theta = refined.x;
  }
  const double margin = best - rhs;
  return {margin >= -1e-9, margin, theta, rhs};
}

}  // namespace ergobound::renewal
