#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ergobound/atomic.hpp"
#include "ergobound/numerics.hpp"
#include "ergobound/split.hpp"

namespace ergobound::models {

enum class Family { ReflectingRW, StickyRW, MHNormal, ContractingNormals };

std::string to_string(Family f);

// Parameters for the built-in chains. Only the fields of the chosen family are read.
struct ModelSpec {
  Family family = Family::ReflectingRW;
  double p = 0.0;
  double eps = 0.0;
  double d = 0.0;
  double s = 0.0;
  int nu_choice = 1;
  double theta = 0.0;
  double c = 0.0;

  static ModelSpec reflecting_rw(double p);
  static ModelSpec sticky_rw(double p, double eps);
  static ModelSpec mh_normal(double d, double s, int nu_choice);
  static ModelSpec contracting_normals(double theta, double c);
};

struct DerivedParams {
  std::variant<atomic::AtomicDriftSpec, split::SplitDriftSpec> drift;
  std::optional<double> pi_C_exact;
  std::optional<double> rho_optimal;
  // Exact increment generating function (sticky walk only).
  std::function<std::complex<double>(std::complex<double>)> exact_b_gen;
  std::vector<std::string> warnings;

  bool is_atomic() const { return std::holds_alternative<atomic::AtomicDriftSpec>(drift); }
};

DerivedParams derive_reflecting_rw(double p);
DerivedParams derive_sticky_rw(double p, double eps);
DerivedParams derive_mh_normal(double d, double s, int nu_choice,
                               const numerics::NumericConfig& quad = {1e-14, 1e-12, 400});
DerivedParams derive_contracting_normals(double theta, double c);
DerivedParams derive(const ModelSpec& spec);

// b(z) = eps z + (1 - eps)(1 - sqrt(1 - 4pq z^2))/(2q), principal branch, |z| < 1/sqrt(4pq).
std::complex<double> sticky_b_gen(double p, double eps, std::complex<double> z);

// Both walks move to i-1 with probability p and to i+1 with probability q = 1-p
// for i >= 1. From 0 the reflecting walk stays with probability p; the sticky walk
// stays with probability eps.
struct MatrixOracle {
  std::vector<double> tv;      // tv[n] for n = 0..n_steps; may underflow to 0
  std::vector<double> log_tv;  // log tv[n], accurate past underflow
  double fitted_rate = 0.0;
};

MatrixOracle rw_matrix_oracle(const ModelSpec& spec, int state_cap, int n_steps);

// TV distance between N(theta^n x0, 1 - theta^{2n}) and N(0, 1).
double contracting_exact_tv(double theta, double x0, int n);

struct DriftCheck {
  bool ok;
  double worst_offC;  // max over i in 1..cap of PV(i)/(lambda V(i)) - 1
  double onC;         // PV(0)/K - 1
};

DriftCheck verify_drift_discrete(const ModelSpec& spec, int state_cap = 200);

}  // namespace ergobound::models
