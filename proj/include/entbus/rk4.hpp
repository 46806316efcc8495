// Fixed-step 4th-order Runge-Kutta on a uniform tau grid, with sub-steps
// inserted at schedule discontinuities so no stage straddles a jump.
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "entbus/core.hpp"

namespace entbus {

// One RK4 step of size h from t for dy/dtau = f(tau, y).  When the step ends
// exactly on a schedule edge the final-stage time is nudged to the left limit
// so the stage sees the pre-jump schedule value.
template <class State, class RHS>
State rk4_step(const State& y, double t, double h, RHS&& f, bool edge_at_end) {
  const double t_mid = t + 0.5 * h;
  double t_end = t + h;
  if (edge_at_end) t_end = std::nextafter(t_end, t);
  const State k1 = f(t, y);
  const State k2 = f(t_mid, State(y + (0.5 * h) * k1));
  const State k3 = f(t_mid, State(y + (0.5 * h) * k2));
  const State k4 = f(t_end, State(y + h * k3));
  return State(y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

// Integrate from tau=0 to tau_end on the uniform grid tau_k = k*dtau.  Steps
// containing an edge are split internally at the edge, keeping the sampling
// grid uniform.  on_grid_point(k, tau, y) is called at every grid point
// (including k=0); edges that land on a grid point are crossed first, so
// observers see the post-jump state.  on_edge(tau, y) is called exactly when
// an edge time is reached (used by the full model for phase kicks; it may
// modify y in place).
template <class State, class RHS, class GridFn, class EdgeFn>
void rk4_integrate_grid(State y, double tau_end, double dtau,
                        const std::vector<double>& edges, RHS&& f,
                        GridFn&& on_grid_point, EdgeFn&& on_edge) {
  if (!(dtau > 0.0) || !(tau_end > 0.0))
    throw config_error("integrate: dtau and tau_end must be positive");
  const long nsteps = std::lround(tau_end / dtau);
  if (nsteps < 1) throw config_error("integrate: tau_end smaller than dtau");
  const double tol = 1e-12 * std::max(1.0, tau_end);
  std::size_t ne = 0;
  on_grid_point(0L, 0.0, y);
  for (long k = 0; k < nsteps; ++k) {
    const double t0 = k * dtau;
    const double t1 = (k + 1 == nsteps) ? tau_end : (k + 1) * dtau;
    double t = t0;
    while (t < t1 - tol) {
      while (ne < edges.size() && edges[ne] <= t + tol) {
        on_edge(edges[ne], y);
        ++ne;
      }
      double t_next = t1;
      bool edge_end = false;
      if (ne < edges.size() && edges[ne] <= t1 + tol) {
        t_next = std::min(edges[ne], t1);
        edge_end = true;
      }
      y = rk4_step(y, t, t_next - t, f, edge_end);
      t = t_next;
    }
    while (ne < edges.size() && edges[ne] <= t1 + tol) {
      on_edge(edges[ne], y);
      ++ne;
    }
    on_grid_point(k + 1, t1, y);
  }
}

}  // namespace entbus
