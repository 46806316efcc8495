// Core domain types for the detuning-modulated two-qubit cavity-bus simulator:
// system parameters, collective decay coefficients, detuning schedules, and the
// Dicke-basis <-> computational-basis state representations.
#pragma once

#include <complex>
#include <stdexcept>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace entbus {

using complexd = std::complex<double>;

// Thrown when an integration or state goes numerically bad (maps to CLI exit 2).
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown on invalid configuration / invalid inputs (maps to CLI exit 1).
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// System parameters. The cavity decay rate kappa fixes the unit system; g and
// gamma are stored in units of kappa, nbar is the mean thermal photon number
// of the bath seen by the cavity.
struct SystemParams {
  double g = 0.3;
  double kappa = 1.0;
  double gamma = 0.0;
  double nbar = 0.0;
  double weak_coupling_warn = 0.5;  // warn threshold for g/kappa

  // Cavity-mediated collective rate g^2/kappa.
  double r() const { return g * g / kappa; }

  // Physical time (units of 1/kappa) elapsed per unit of the dimensionless
  // trajectory time tau used throughout this code base.  The tau axis counts
  // time in units of 10 g^2/kappa; with this convention the resonant
  // collective decay of |11> reaches population 0.9995 on |00> at tau = 25
  // for g = 0.3 kappa, which is the reference dynamics all outputs are
  // calibrated against.
  double time_per_tau() const { return kappa / (10.0 * g * g); }

  void validate() const {
    if (!(g > 0.0)) throw config_error("SystemParams: g must be > 0");
    if (!(kappa > 0.0)) throw config_error("SystemParams: kappa must be > 0");
    if (gamma < 0.0) throw config_error("SystemParams: gamma must be >= 0");
    if (nbar < 0.0) throw config_error("SystemParams: nbar must be >= 0");
  }

  bool weak_coupling_ok() const { return g <= weak_coupling_warn * kappa; }
};

// G^q_p(k*nbar) = q*gamma + g^2 (k*nbar + p) / kappa.
double g_coeff(const SystemParams& p, int q, int pp, int k);

// ---------------------------------------------------------------------------
// Detuning schedules Delta(tau).  The value is the dimensionless phase used
// directly inside cos/sin in the projected equations of motion.
struct Zero {};
struct Constant {
  double amplitude = 0.0;
};
struct Heaviside {
  double amplitude = 0.0;
  double tau0 = 0.0;
};
struct Sigmoid {
  double amplitude = 0.0;
  double b = 1.0;
  double tau0 = 0.0;
};
struct SquareWave {
  double amplitude = 0.0;
  double period = 1.0;
  int edges = 1;
};
struct Pulse {
  double amplitude = 0.0;
  double tau0 = 0.0;
  double width = 0.0;
};
// Piecewise-constant table: value is values[i] for tau in [taus[i], taus[i+1]),
// and 0 before taus[0].  taus must be strictly increasing.
struct PiecewiseTable {
  std::vector<double> taus;
  std::vector<double> values;
};

using DetuningSchedule =
    std::variant<Zero, Constant, Heaviside, Sigmoid, SquareWave, Pulse, PiecewiseTable>;

// Evaluate Delta(tau).  Right-continuous at discontinuities.
double eval_schedule(const DetuningSchedule& s, double tau);

// Times in (0, tau_end) where the schedule jumps; used by the integrators to
// split steps so that no Runge-Kutta stage straddles a discontinuity.
std::vector<double> schedule_edges(const DetuningSchedule& s, double tau_end);

// d Delta / d tau of the smooth part (zero for the piecewise-constant
// variants).  Used by the full-model integrator, which accumulates the
// schedule value as a phase.
double schedule_slope(const DetuningSchedule& s, double tau);

// ---------------------------------------------------------------------------
// Two-qubit state in the Dicke basis {|up>=|11>, |s>, |a>, |down>=|00>} with
// |s> = (|01>+|10>)/sqrt(2), |a> = (|01>-|10>)/sqrt(2).  Only states of the
// form diag(populations) + c_sa |s><a| + h.c. are representable.
struct DickeState {
  double p_up = 0.0;
  double p_s = 0.0;
  double p_a = 0.0;
  double p_down = 0.0;
  complexd c_sa{0.0, 0.0};

  double trace() const { return p_up + p_s + p_a + p_down; }
  // Throws numeric_error if normalization / population bounds are violated.
  void check(double tol = 1e-9) const;
};

// Full 4x4 density matrix in the computational basis {|11>,|10>,|01>,|00>}
// (qubit 1 tensor qubit 2, |1> = excited listed first for each qubit).
struct TwoQubitState {
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();

  void check(double herm_tol = 1e-12, double trace_tol = 1e-9,
             double eig_tol = 1e-8) const;
};

// Dicke basis vectors in the computational basis.
Eigen::Vector4cd dicke_up();
Eigen::Vector4cd dicke_s();
Eigen::Vector4cd dicke_a();
Eigen::Vector4cd dicke_down();

// Basis transforms.  dicke_to_computational throws config_error when the
// input violates normalization beyond 1e-6.  computational_to_dicke writes
// the norm of the components outside the representable span to *residual
// when non-null, and throws config_error if it exceeds 1e-8 and residual is
// null.
TwoQubitState dicke_to_computational(const DickeState& d);
DickeState computational_to_dicke(const TwoQubitState& r, double* residual = nullptr);

}  // namespace entbus
