// Postselection on the qubits not being found in the global ground state:
// POVM {P0 = |00><00|, P1 = 1 - P0}, keeping the P1 branch.
#pragma once

#include <optional>
#include <vector>

#include "entbus/core.hpp"
#include "entbus/lindblad.hpp"
#include "entbus/metrics.hpp"

namespace entbus {

struct PostselectionResult {
  TwoQubitState state;          // normalized P1 rho P1
  double success_prob = 0.0;    // 1 - <00|rho|00>
  ConcurrencePair concurrence;
  double f_s_post = 0.0;        // <s| state |s>
};

// Zeroes the |00> row and column and renormalizes.  Throws numeric_error when
// the success probability is below 1e-12.
PostselectionResult postselect(const TwoQubitState& r);

struct PostselectSample {
  double tau = 0.0;
  bool degenerate = false;  // success probability ~ 0, no state available
  std::optional<PostselectionResult> result;
};

std::vector<PostselectSample> postselect_sweep(const OperatorTrajectory& traj);

}  // namespace entbus
