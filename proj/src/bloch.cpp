#include "entbus/bloch.hpp"

#include <cmath>

#include "entbus/rk4.hpp"

namespace entbus {

namespace {

using Vec6 = Eigen::Matrix<double, 6, 1>;

Vec6 pack(const DickeState& d) {
  Vec6 v;
  v << d.p_up, d.p_s, d.p_a, d.p_down, d.c_sa.real(), d.c_sa.imag();
  return v;
}

DickeState unpack(const Vec6& v) {
  return DickeState{v[0], v[1], v[2], v[3], complexd(v[4], v[5])};
}

Vec6 rhs_vec(const Vec6& v, double delta, const SystemParams& p) {
  const double up = v[0], s = v[1], a = v[2], down = v[3];
  const complexd csa(v[4], v[5]);
  const double r = p.r();
  const double G11_n = p.gamma + r * (p.nbar + 1.0);        // G^1_1(nbar)
  const double G00_n = r * p.nbar;                          // G^0_0(nbar)
  const double G01_2n = r * (2.0 * p.nbar + 1.0);           // G^0_1(2 nbar)
  const double G01_n = r * (p.nbar + 1.0);                  // G^0_1(nbar)
  const double G11_2n = p.gamma + r * (2.0 * p.nbar + 1.0); // G^1_1(2 nbar)
  const double c = std::cos(delta), sn = std::sin(delta);

  // The bracket [cos(D) rho_ss - i sin(D) rho_sa + h.c.] expands to
  // 2 cos(D) rho_ss + 2 sin(D) Im(rho_sa).
  double d_up = -4.0 * G11_n * up + 2.0 * G00_n * (s + a)
                // Thermal cross term required for exact agreement with the
                // operator-level reduced model (see project_reduced_rhs).
                + 2.0 * p.nbar * r * ((s - a) * c + 2.0 * sn * csa.imag());
  double d_s = -G01_2n * (2.0 * c * s + 2.0 * sn * csa.imag()) +
               2.0 * G11_n * (up - s) - 2.0 * G00_n * (s - down) +
               2.0 * c * (G01_n * up + G00_n * down);
  // rho_aa: same structure with s -> a and cos -> -cos (sin unchanged).
  double d_a = -G01_2n * (-2.0 * c * a + 2.0 * sn * csa.imag()) +
               2.0 * G11_n * (up - a) - 2.0 * G00_n * (a - down) -
               2.0 * c * (G01_n * up + G00_n * down);
  complexd d_csa = -2.0 * G11_2n * csa +
                   complexd(0.0, 1.0) * sn *
                       (2.0 * G01_n * up + 2.0 * G00_n * down - G01_2n * (s + a));
  double d_down = -(d_up + d_s + d_a);  // trace closure

  Vec6 out;
  out << d_up, d_s, d_a, d_down, d_csa.real(), d_csa.imag();
  return out;
}

}  // namespace

BlochDerivative bloch_rhs(const DickeState& d, double delta, const SystemParams& p) {
  const Vec6 v = rhs_vec(pack(d), delta, p);
  return BlochDerivative{v[0], v[1], v[2], v[3], complexd(v[4], v[5])};
}

Trajectory integrate(const DickeState& d0, const DetuningSchedule& s,
                     const SystemParams& p, double tau_end, double dtau,
                     long sample_stride) {
  p.validate();
  d0.check(1e-6);
  if (sample_stride < 1) throw config_error("integrate: sample_stride must be >= 1");
  const double scale = p.time_per_tau();  // d/dtau = scale * d/dt
  Trajectory traj;
  traj.schedule = s;
  traj.params = p;
  const long nsteps = std::lround(tau_end / dtau);
  traj.taus.reserve(nsteps / sample_stride + 2);
  traj.states.reserve(nsteps / sample_stride + 2);

  auto f = [&](double t, const Vec6& y) -> Vec6 {
    return scale * rhs_vec(y, eval_schedule(s, t), p);
  };
  auto on_grid = [&](long k, double tau, const Vec6& y) {
    if (std::abs(y[0] + y[1] + y[2] + y[3] - 1.0) > 1e-6)
      throw numeric_error("integrate: normalization drift beyond 1e-6 (reduce dtau)");
    if (k % sample_stride == 0 || k == nsteps) {
      traj.taus.push_back(tau);
      traj.states.push_back(unpack(y));
    }
  };
  rk4_integrate_grid(pack(d0), tau_end, dtau, schedule_edges(s, tau_end), f,
                     on_grid, [](double, Vec6&) {});
  return traj;
}

std::pair<DickeState, bool> steady_state(const Trajectory& traj, double window,
                                         double tol) {
  if (traj.taus.empty()) throw config_error("steady_state: empty trajectory");
  const double t_end = traj.taus.back();
  if (t_end < window) throw config_error("steady_state: trajectory shorter than window");
  const double scale = traj.params.time_per_tau();
  double max_rate = 0.0;
  for (std::size_t i = 0; i < traj.taus.size(); ++i) {
    if (traj.taus[i] < t_end - window) continue;
    const double delta = eval_schedule(traj.schedule, traj.taus[i]);
    const Vec6 d = scale * rhs_vec(pack(traj.states[i]), delta, traj.params);
    max_rate = std::max(max_rate, d.cwiseAbs().maxCoeff());
  }
  return {traj.states.back(), max_rate < tol};
}

}  // namespace entbus
