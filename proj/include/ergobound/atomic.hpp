#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ergobound/kendall.hpp"

namespace ergobound::atomic {

// Drift/minorization data when C is an atom: P(x, .) = nu on C, PV <= lambda V
// off C, PV <= K on C, and nu(C) >= b.
struct AtomicDriftSpec {
  double b;
  double lambda;
  double K;
  std::optional<double> pi_C;
};

// Upper bounds on the generating functions G, H_1, H_V. Off-C entries are
// coefficients: G <= G_offC_coeff * V(x), H_1 <= H1_offC_coeff * (V(x) - 1),
// H_V <= HV_offC_coeff * (V(x) - 1).
struct GHBounds {
  double G_offC_coeff;
  double G_onC;
  double H1_offC_coeff;
  double H1_onC;
  double H1_diff_quot;
  double HV_offC_coeff;  // +inf at r = 1/lambda
  double HV_onC;
  double HV_diff_quot;
};

GHBounds g_h_bounds(const AtomicDriftSpec& spec, double r);

struct ProvenanceEntry {
  std::string component;
  std::string source;
};

struct ErgodicityCertificate {
  double rho_bound = 1.0;
  double r0 = 1.0;
  std::function<double(double)> k0;
  std::function<double(double)> m1;
  std::function<double(double)> mv;
  std::vector<ProvenanceEntry> provenance;
  std::vector<std::string> warnings;
  // Individual Kendall bounds that fed the certificate, labelled by method.
  std::vector<kendall::KendallBound> bounds;
};

kendall::KendallInput kendall_input(const AtomicDriftSpec& spec);

ErgodicityCertificate atomic_certificate(const AtomicDriftSpec& spec);

// Validates the spec (throws InvalidInput) and returns warnings for soft issues.
std::vector<std::string> validate(const AtomicDriftSpec& spec);

}  // namespace ergobound::atomic
