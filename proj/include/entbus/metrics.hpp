// Entanglement and state diagnostics: Wootters concurrence (general and the
// closed form for the representable Dicke-basis states), Dicke fidelities,
// partial-transpose negativity, purity.
#pragma once

#include <utility>

#include "entbus/core.hpp"

namespace entbus {

struct ConcurrencePair {
  double clamped = 0.0;  // max(0, relaxed)
  double relaxed = 0.0;  // sqrt(a1) - sum_{i>1} sqrt(ai), unclamped
};

// Wootters concurrence via the Hermitian product sqrt(rho) rho~ sqrt(rho),
// rho~ = (sy x sy) rho* (sy x sy).  Throws numeric_error for non-physical
// input (eigenvalue < -1e-8); eigenvalues in [-1e-10, 0) are clipped to 0.
ConcurrencePair concurrence_wootters(const TwoQubitState& r);

// Closed form for states of the representable Dicke form:
// relaxed = |2 rho_{10,01}| - 2 sqrt(rho_upup rho_dndn), with
// 2 rho_{10,01} = (p_s - p_a) + 2i Im(c_sa).
ConcurrencePair concurrence_xform(const DickeState& d);

// (F_s, F_a) = (<s|rho|s>, <a|rho|a>) = (p_s, p_a).
std::pair<double, double> fidelities(const DickeState& d);

// Sum of |negative eigenvalues| of the partial transpose over qubit 2.
double negativity(const TwoQubitState& r);

// tr(rho^2).
double purity(const TwoQubitState& r);

// Per-sample record exported as a CSV row by the CLI.
struct MetricRecord {
  double tau = 0.0;
  double p_up = 0.0, p_s = 0.0, p_a = 0.0, p_down = 0.0;
  double re_csa = 0.0, im_csa = 0.0;
  double concurrence_clamped = 0.0, concurrence_relaxed = 0.0;
  double f_s = 0.0, f_a = 0.0;
  double negativity = 0.0;
  double purity = 0.0;
  double delta_value = 0.0;
};

// Compute all metrics from a general 4x4 state (populations/coherence are
// Dicke-basis matrix elements of rho, valid for any input).
MetricRecord metrics_of(double tau, const TwoQubitState& r, double delta_value);

}  // namespace entbus
