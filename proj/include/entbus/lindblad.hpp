// Operator-level engines: the full cavity + two-qubit master equation on a
// truncated Fock space, and the adiabatically eliminated two-qubit master
// equation with the cross-qubit dissipator carrying the detuning phase.
#pragma once

#include <vector>

#include "entbus/bloch.hpp"
#include "entbus/core.hpp"

namespace entbus {

// Dissipator in the convention used throughout: 2 L rho L+ - {L+L, rho}
// (rates multiply this whole bracket, no 1/2).
Eigen::MatrixXcd dissipator(const Eigen::MatrixXcd& L, const Eigen::MatrixXcd& rho);

// ---------------------------------------------------------------------------
// Reduced two-qubit master equation (cavity eliminated).  delta_rel is the
// relative detuning phase Delta1 - Delta2 entering the cross dissipator as
// exp(-i delta_rel).  Returns d rho / dt in units of kappa.
Eigen::Matrix4cd reduced_me_rhs(const Eigen::Matrix4cd& rho, double delta_rel,
                                const SystemParams& p);

// Projection of reduced_me_rhs onto the Dicke basis; oracle for bloch_rhs.
// Writes the off-span residual of the derivative to *residual when non-null.
BlochDerivative project_reduced_rhs(const DickeState& d, double delta_rel,
                                    const SystemParams& p, double* residual = nullptr);

// ---------------------------------------------------------------------------
// Composite cavity (Fock-truncated) + two-qubit state, ordering
// cavity tensor qubit1 tensor qubit2; dimension 4*(nmax+1).
struct CompositeState {
  Eigen::MatrixXcd rho;
  int nmax = 0;

  double top_fock_population() const;
  void check(double herm_tol = 1e-12, double trace_tol = 1e-9,
             double tail_tol = 1e-8) const;
};

// Cavity thermal state (vacuum when nbar = 0) tensored with a qubit state.
CompositeState composite_initial(int nmax, const Eigen::Matrix4cd& qubit_rho,
                                 const SystemParams& p);

TwoQubitState partial_trace_cavity(const CompositeState& c);

// Full model with precomputed operators.  Works in the frame rotating at the
// cavity frequency: H = sum_j (freq_j/2) sz_j + g (a+ sm_j + h.c.), cavity
// dissipators kappa(nbar+1) D[a] + kappa nbar D[a+], qubit dissipators
// gamma D[sm_j].  Frequencies are in units of kappa.
class FullModel {
 public:
  FullModel(const SystemParams& p, int nmax);

  Eigen::MatrixXcd rhs(const Eigen::MatrixXcd& rho, double freq1, double freq2) const;

  // Instantaneous phase kick: conjugate rho by exp(i phase |1><1|) on the
  // given qubit (1 or 2).  Used to apply schedule jumps, which act as
  // accumulated phases on the qubit raising/lowering operators.
  void kick(Eigen::MatrixXcd& rho, double phase, int qubit) const;

  int nmax() const { return nmax_; }
  int dim() const { return static_cast<int>(h_int_.rows()); }

 private:
  int nmax_;
  SystemParams params_;
  Eigen::MatrixXcd h_int_;           // g (a+ (sm1+sm2) + h.c.)
  Eigen::VectorXd sz1_, sz2_;        // diagonals of sz on each qubit
  Eigen::VectorXd n1_, n2_;          // diagonals of |1><1| on each qubit
  Eigen::MatrixXcd a_, ad_;          // cavity annihilation / creation
  Eigen::MatrixXcd ada_, aad_;       // a+a, a a+
  Eigen::MatrixXcd sm1_, sm2_, sm1d_sm1_, sm2d_sm2_;
};

// Trajectory of two-qubit density matrices (reduced model directly; full
// model via partial trace).
struct OperatorTrajectory {
  std::vector<double> taus;
  std::vector<TwoQubitState> states;
  DetuningSchedule schedule;
  SystemParams params;
};

// Reduced-model integration; the schedule value is used directly as the
// phase delta_rel at each stage.  Two-schedule overload uses the difference
// Delta1(tau) - Delta2(tau).
OperatorTrajectory integrate_reduced(const Eigen::Matrix4cd& rho0,
                                     const DetuningSchedule& s,
                                     const SystemParams& p, double tau_end,
                                     double dtau = 1e-3, long sample_stride = 1);
OperatorTrajectory integrate_reduced(const Eigen::Matrix4cd& rho0,
                                     const DetuningSchedule& s1,
                                     const DetuningSchedule& s2,
                                     const SystemParams& p, double tau_end,
                                     double dtau = 1e-3, long sample_stride = 1);

// Full-model integration.  The schedule value is interpreted as the phase
// accumulated by qubit 1: jumps become instantaneous sz kicks, smooth parts
// become an instantaneous frequency d Delta/d tau converted to units of
// kappa.  Throws numeric_error when the top Fock level population exceeds
// tail_tol (raise nmax).
OperatorTrajectory integrate_full(const CompositeState& c0,
                                  const DetuningSchedule& s,
                                  const SystemParams& p, double tau_end,
                                  double dtau = 1e-3, long sample_stride = 1,
                                  double tail_tol = 1e-6);

}  // namespace entbus
