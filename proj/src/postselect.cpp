#include "entbus/postselect.hpp"

namespace entbus {

PostselectionResult postselect(const TwoQubitState& r) {
  const double p_down = r.rho(3, 3).real();
  const double success = 1.0 - p_down;
  if (success < 1e-12)
    throw numeric_error("postselect: success probability ~ 0 (state is |00>)");
  PostselectionResult out;
  out.state.rho = r.rho;
  out.state.rho.row(3).setZero();
  out.state.rho.col(3).setZero();
  out.state.rho /= out.state.rho.trace().real();
  out.success_prob = success;
  out.concurrence = concurrence_wootters(out.state);
  const Eigen::Vector4cd s = dicke_s();
  out.f_s_post = (s.adjoint() * out.state.rho * s).value().real();
  return out;
}

std::vector<PostselectSample> postselect_sweep(const OperatorTrajectory& traj) {
  std::vector<PostselectSample> out;
  out.reserve(traj.taus.size());
  for (std::size_t i = 0; i < traj.taus.size(); ++i) {
    PostselectSample sample;
    sample.tau = traj.taus[i];
    try {
      sample.result = postselect(traj.states[i]);
    } catch (const numeric_error&) {
      sample.degenerate = true;
    }
    out.push_back(std::move(sample));
  }
  return out;
}

}  // namespace entbus
