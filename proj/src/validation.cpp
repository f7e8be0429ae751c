#include "ergobound/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ergobound/atomic.hpp"
#include "ergobound/errors.hpp"
#include "ergobound/tables.hpp"

namespace ergobound::validation {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxFailures = 10;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string describe(const renewal::IncrementDistribution& inc) {
  std::string s = "b_floor=" + fmt(inc.b_floor()) + " probs=[";
  for (std::size_t i = 0; i < inc.probs().size(); ++i) s += (i ? "," : "") + fmt(inc.probs()[i]);
  return s + "]";
}

}  // namespace

PropertyStats::PropertyStats(std::string n) : name(std::move(n)), worst_margin(kInf) {}

void PropertyStats::record(double margin, bool violated, const std::string& what) {
  ++checks;
  worst_margin = std::min(worst_margin, margin);
  if (violated) {
    ++violations;
    if (failures.size() < kMaxFailures) failures.push_back(what);
  }
}

std::vector<renewal::IncrementDistribution> random_increments(std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::exponential_distribution<double> expo(1.0);
  std::uniform_int_distribution<int> supp(2, 20);
  std::vector<renewal::IncrementDistribution> out;
  out.reserve(n);
  for (int c = 0; c < n; ++c) {
    const int S = supp(rng);
    const double b = 0.05 + 0.9 * unif(rng);
    const double b1 = c % 10 == 0 ? b : b + 0.5 * (1.0 - b) * unif(rng);
    const double decay = 0.3 + 0.7 * unif(rng);
    std::vector<double> w(S, 0.0);
    double total = 0.0;
    for (int k = 1; k < S; ++k) {
      w[k] = expo(rng) * std::pow(decay, k);
      total += w[k];
    }
    std::vector<double> p(S);
    p[0] = b1;
    for (int k = 1; k < S; ++k) p[k] = (1.0 - b1) * w[k] / total;
    out.emplace_back(std::move(p), b);
  }
  return out;
}

std::vector<renewal::IncrementDistribution> hand_cases() {
  std::vector<renewal::IncrementDistribution> out;
  out.emplace_back(std::vector<double>{0.5, 0.5}, 0.5);
  std::vector<double> far(20, 0.0);
  far[0] = 0.2;
  far[19] = 0.8;
  out.emplace_back(far, 0.2);
  std::vector<double> geo(20);
  double total = 0.0;
  for (int k = 0; k < 20; ++k) total += geo[k] = 0.3 * std::pow(0.7, k);
  for (auto& v : geo) v /= total;
  out.emplace_back(geo, geo[0]);
  return out;
}

std::vector<kendall::KendallInput> random_kendall_inputs(std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<kendall::KendallInput> out;
  for (int i = 0; i < n; ++i) {
    const double b = 0.05 + 0.9 * unif(rng);
    const double R = 1.0 + std::pow(10.0, -3.0 + 3.3 * unif(rng));
    const double a = 1.0 + 5.0 * unif(rng);  // alpha0 of the constructed L
    const double L = b * R + (1.0 - b) * std::pow(R, 1.0 + a);
    out.push_back({b, R, L, std::nullopt});
  }
  return out;
}

double radius_surrogate(const renewal::IncrementDistribution& inc) {
  const auto seq = renewal::renewal_sequence(inc, 400);
  std::vector<double> dev(seq.u.size());
  for (std::size_t i = 0; i < dev.size(); ++i) dev[i] = std::abs(seq.u[i] - seq.u_inf);
  // Only use the part of the sequence that sits above the rounding floor.
  int last = 0;
  for (int i = 0; i < static_cast<int>(dev.size()); ++i)
    if (dev[i] > 1e-13) last = i;
  if (last < 8) return kInf;
  const int half = last / 2;
  const double early = *std::max_element(dev.begin() + half / 2, dev.begin() + half + 1);
  const double late = *std::max_element(dev.begin() + half, dev.begin() + last + 1);
  if (!(late > 0.0) || !(early > 0.0)) return kInf;
  const double rho = std::pow(late / early, 1.0 / (last - half));
  return rho > 0.0 && rho < 1.0 ? 1.0 / rho : kInf;
}

PropertyStats oracle_vs_bound(const std::vector<renewal::IncrementDistribution>& cases, int threads) {
  struct Check {
    double margin;
    bool skipped;
    std::string what;
  };
  // Per-case buffers keep the report independent of thread scheduling.
  std::vector<std::vector<Check>> results(cases.size());
  tables::parallel_for(cases.size(), threads, [&](std::size_t i) {
    const auto& inc = cases[i];
    const double R = std::min(1.05 * radius_surrogate(inc), 3.0);
    const double L = renewal::gen_b(inc, R).real();
    kendall::KendallInput in{inc.b_floor(), R, L, std::nullopt};
    std::vector<kendall::KendallBound> bounds{kendall::bound_unknown_c1(in)};
    in.c1_known = renewal::c1(inc);
    bounds.push_back(kendall::bound_known_c1(in));
    for (const auto& kb : bounds) {
      for (int k = 1; k <= 8; ++k) {
        const double r = 1.0 + (kb.r0 - 1.0) * k / 9.0;
        const double bound = kb.k0(r);
        const std::string what =
            "case " + std::to_string(i) + " " + kendall::to_string(kb.method) + " r=" + fmt(r);
        try {
          const auto o = renewal::tail_sup_oracle_adaptive(inc, r);
          results[i].push_back({bound + 1e-7 - o.value, false,
                                what + " oracle=" + fmt(o.value) + " K0=" + fmt(bound) + " " + describe(inc)});
        } catch (const TruncationTooShort&) {
          results[i].push_back({0.0, true, what});
        }
      }
    }
  });
  PropertyStats st("oracle_vs_bound");
  for (const auto& per_case : results)
    for (const auto& c : per_case) {
      if (c.skipped) ++st.skipped;
      else st.record(c.margin, c.margin < 0.0, c.what);
    }
  return st;
}

PropertyStats circle_lower_bound(const std::vector<renewal::IncrementDistribution>& cases) {
  PropertyStats st("circle_lower_bound");
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto chk = renewal::circle_lower_bound_check(cases[i]);
    st.record(chk.margin, !chk.ok,
              "case " + std::to_string(i) + " margin=" + fmt(chk.margin) + " " + describe(cases[i]));
  }
  return st;
}

PropertyStats ordering(const std::vector<kendall::KendallInput>& inputs) {
  PropertyStats st("ordering_r2_r1_r0");
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const auto& in = inputs[i];
    const double r0 = kendall::bound_unknown_c1(in).r0;
    const double r1 = kendall::bound_simplified(in).r0;
    const double r2 = kendall::r2_baxendale(in);
    const double tol = 1e-12 * r0;
    const double margin = std::min(r1 - r2, r0 - r1);
    st.record(margin, margin < -tol,
              "input " + std::to_string(i) + " b=" + fmt(in.b) + " R=" + fmt(in.R) + " L=" + fmt(in.L) +
                  " r2=" + fmt(r2) + " r1=" + fmt(r1) + " r0=" + fmt(r0));
  }
  return st;
}

PropertyStats deviation_bound(const models::ModelSpec& walk, int n_max) {
  PropertyStats st("deviation_bound_m1");
  const auto dp = models::derive(walk);
  const auto cert = atomic::atomic_certificate(std::get<atomic::AtomicDriftSpec>(dp.drift));
  const double r = 0.5 * (1.0 + cert.r0);
  const double m1 = cert.m1(r);
  const auto oracle = models::rw_matrix_oracle(walk, std::max(400, 2 * n_max), n_max);
  for (int n = 0; n <= n_max; ++n) {
    // sup over |g| <= 1 of |P^n g(0) - pi g| is twice the total variation distance.
    const double lhs = 2.0 * oracle.tv[n];
    const double rhs = m1 * std::pow(r, -n);
    st.record(rhs - lhs, lhs > rhs, "n=" + std::to_string(n) + " lhs=" + fmt(lhs) + " rhs=" + fmt(rhs));
  }
  return st;
}

PropertyStats drift_conditions() {
  PropertyStats st("drift_conditions");
  std::vector<models::ModelSpec> specs{models::ModelSpec::reflecting_rw(2.0 / 3.0),
                                       models::ModelSpec::reflecting_rw(0.9)};
  for (double p : {0.6, 0.7, 0.8, 0.9, 0.95})
    for (double e : {0.05, 0.25, 0.5}) specs.push_back(models::ModelSpec::sticky_rw(p, e));
  for (const auto& s : specs) {
    const auto chk = models::verify_drift_discrete(s);
    const double margin = -std::max(chk.worst_offC, chk.onC);
    st.record(margin, !chk.ok,
              models::to_string(s.family) + " p=" + fmt(s.p) + " eps=" + fmt(s.eps) +
                  " offC=" + fmt(chk.worst_offC) + " onC=" + fmt(chk.onC));
  }
  return st;
}

bool ValidationReport::ok() const {
  return std::all_of(properties.begin(), properties.end(), [](const auto& p) { return p.violations == 0; });
}

ValidationReport run_validation(std::uint64_t seed, int n_cases, int threads) {
  if (n_cases < 1) throw InvalidInput("n_cases must be >= 1");
  ValidationReport rep{seed, n_cases, {}};
  auto cases = random_increments(seed, n_cases);
  rep.properties.push_back(oracle_vs_bound(cases, threads));
  for (auto& h : hand_cases()) cases.push_back(h);
  rep.properties.push_back(circle_lower_bound(cases));
  rep.properties.push_back(ordering(random_kendall_inputs(seed, n_cases)));
  return rep;
}

}  // namespace ergobound::validation
