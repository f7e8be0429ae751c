#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ergobound/kendall.hpp"
#include "ergobound/models.hpp"
#include "ergobound/renewal.hpp"

namespace ergobound::validation {

struct PropertyStats {
  std::string name;
  int checks = 0;
  int violations = 0;
  int skipped = 0;
  double worst_margin;  // smallest (allowed - observed); negative on violation
  std::vector<std::string> failures;  // first few violations, human readable

  explicit PropertyStats(std::string n);
  void record(double margin, bool violated, const std::string& what);
};

// Seeded increment laws on {1..S}, S <= 20, with b_1 >= b_floor. Every tenth case
// (starting with the first) has b_1 equal to the floor.
std::vector<renewal::IncrementDistribution> random_increments(std::uint64_t seed, int n);
std::vector<renewal::IncrementDistribution> hand_cases();
std::vector<kendall::KendallInput> random_kendall_inputs(std::uint64_t seed, int n);

// Inverse of the empirical decay ratio of |u_n - u_inf|.
double radius_surrogate(const renewal::IncrementDistribution& inc);

// tail_sup_oracle(r) <= K0(r) + 1e-7 at 8 points in (1, r0) for both the
// known-c1 and unknown-c1 bounds, with R = min(1.05 * surrogate, 3) and L = b(R).
PropertyStats oracle_vs_bound(const std::vector<renewal::IncrementDistribution>& cases, int threads = 1);
PropertyStats circle_lower_bound(const std::vector<renewal::IncrementDistribution>& cases);
// r2 <= r1 <= r0.
PropertyStats ordering(const std::vector<kendall::KendallInput>& inputs);
// 2 tv_n <= M1(r) r^{-n} for n <= n_max with r = (1 + r0)/2, started at 0.
PropertyStats deviation_bound(const models::ModelSpec& walk, int n_max = 200);
// Drift inequalities on the truncated state space for every discrete table configuration.
PropertyStats drift_conditions();

struct ValidationReport {
  std::uint64_t seed;
  int n_cases;
  std::vector<PropertyStats> properties;
  bool ok() const;
};

ValidationReport run_validation(std::uint64_t seed, int n_cases, int threads = 1);

}  // namespace ergobound::validation
