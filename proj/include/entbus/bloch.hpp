// Projected equations of motion for the Dicke-basis populations and the
// |s><a| coherence of two qubits coupled to a common lossy cavity bus, with a
// time-dependent detuning phase Delta(tau).
#pragma once

#include <utility>
#include <vector>

#include "entbus/core.hpp"

namespace entbus {

struct BlochDerivative {
  double d_up = 0.0;
  double d_s = 0.0;
  double d_a = 0.0;
  double d_down = 0.0;  // defined by trace closure
  complexd d_csa{0.0, 0.0};
};

// RHS in units of kappa (per physical time); the integrator rescales to the
// dimensionless tau axis via SystemParams::time_per_tau().
BlochDerivative bloch_rhs(const DickeState& d, double delta, const SystemParams& p);

struct Trajectory {
  std::vector<double> taus;
  std::vector<DickeState> states;
  DetuningSchedule schedule;
  SystemParams params;
};

// Fixed-step RK4 over [0, tau_end] with the schedule re-evaluated at every
// stage; integration is split at schedule edges.  Samples every
// `sample_stride` grid points (grid spacing dtau) plus the final point.
// Throws numeric_error if normalization drifts beyond 1e-6.
Trajectory integrate(const DickeState& d0, const DetuningSchedule& s,
                     const SystemParams& p, double tau_end, double dtau = 1e-3,
                     long sample_stride = 1);

// Returns the last state and whether max |bloch_rhs| (per tau) over the
// trailing `window` of the trajectory stays below tol.
std::pair<DickeState, bool> steady_state(const Trajectory& traj, double window,
                                         double tol);

}  // namespace entbus
