#include "entbus/lindblad.hpp"

#include <cmath>

#include "entbus/rk4.hpp"

namespace entbus {

namespace {

// Single-qubit lowering operator in the basis {|1>, |0>}.
Eigen::Matrix2cd sigma_minus() {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  m(1, 0) = 1.0;
  return m;
}

Eigen::Matrix4cd kron2(const Eigen::Matrix2cd& x, const Eigen::Matrix2cd& y) {
  Eigen::Matrix4cd out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = x(i, j) * y;
  return out;
}

}  // namespace

Eigen::MatrixXcd dissipator(const Eigen::MatrixXcd& L, const Eigen::MatrixXcd& rho) {
  if (L.rows() != rho.rows() || L.cols() != rho.cols() || rho.rows() != rho.cols())
    throw config_error("dissipator: shape mismatch");
  const Eigen::MatrixXcd LdL = L.adjoint() * L;
  return 2.0 * L * rho * L.adjoint() - LdL * rho - rho * LdL;
}

Eigen::Matrix4cd reduced_me_rhs(const Eigen::Matrix4cd& rho, double delta_rel,
                                const SystemParams& p) {
  static const Eigen::Matrix2cd sm = sigma_minus();
  static const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  static const Eigen::Matrix4cd sm1 = kron2(sm, id);
  static const Eigen::Matrix4cd sm2 = kron2(id, sm);
  static const Eigen::Matrix4cd sp1 = sm1.adjoint();
  static const Eigen::Matrix4cd sp2 = sm2.adjoint();

  const double r = p.r();
  Eigen::Matrix4cd out = Eigen::Matrix4cd::Zero();
  for (const auto* smj : {&sm1, &sm2}) {
    const Eigen::Matrix4cd spj = smj->adjoint();
    out += (r * (p.nbar + 1.0) + p.gamma) *
           (2.0 * (*smj) * rho * spj - spj * (*smj) * rho - rho * spj * (*smj));
    if (p.nbar > 0.0)
      out += r * p.nbar *
             (2.0 * spj * rho * (*smj) - (*smj) * spj * rho - rho * (*smj) * spj);
  }
  // Cross-qubit dissipator; the relative detuning enters as a phase on the
  // effective coupling, c = (g^2/kappa) e^{-i delta_rel}.
  const complexd c = r * std::exp(complexd(0.0, -delta_rel));
  Eigen::Matrix4cd t =
      c * (p.nbar + 1.0) *
      (2.0 * sm1 * rho * sp2 - sp2 * sm1 * rho - rho * sp2 * sm1);
  if (p.nbar > 0.0)
    t += c * p.nbar * (2.0 * sp2 * rho * sm1 - sm1 * sp2 * rho - rho * sm1 * sp2);
  out += t + t.adjoint();
  return out;
}

BlochDerivative project_reduced_rhs(const DickeState& d, double delta_rel,
                                    const SystemParams& p, double* residual) {
  const TwoQubitState r = dicke_to_computational(d);
  const Eigen::Matrix4cd rhs = reduced_me_rhs(r.rho, delta_rel, p);
  const Eigen::Vector4cd u = dicke_up(), s = dicke_s(), a = dicke_a(), w = dicke_down();
  BlochDerivative out;
  out.d_up = (u.adjoint() * rhs * u).value().real();
  out.d_s = (s.adjoint() * rhs * s).value().real();
  out.d_a = (a.adjoint() * rhs * a).value().real();
  out.d_down = (w.adjoint() * rhs * w).value().real();
  out.d_csa = (s.adjoint() * rhs * a).value();
  // Residual: derivative components outside the representable span.
  const Eigen::Matrix4cd recon =
      out.d_up * u * u.adjoint() + out.d_s * s * s.adjoint() +
      out.d_a * a * a.adjoint() + out.d_down * w * w.adjoint() +
      out.d_csa * s * a.adjoint() + std::conj(out.d_csa) * a * s.adjoint();
  const double res = (rhs - recon).cwiseAbs().maxCoeff();
  if (residual) {
    *residual = res;
  } else if (res > 1e-10) {
    throw numeric_error("project_reduced_rhs: derivative leaves the Dicke span");
  }
  return out;
}

// ---------------------------------------------------------------------------

double CompositeState::top_fock_population() const {
  const int nc = nmax + 1;
  double pop = 0.0;
  for (int q = 0; q < 4; ++q) pop += rho(4 * nmax + q, 4 * nmax + q).real();
  (void)nc;
  return pop;
}

void CompositeState::check(double herm_tol, double trace_tol, double tail_tol) const {
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > herm_tol)
    throw numeric_error("CompositeState: not Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > trace_tol)
    throw numeric_error("CompositeState: trace deviates from 1");
  if (top_fock_population() > tail_tol)
    throw numeric_error("CompositeState: top Fock level populated (raise nmax)");
}

CompositeState composite_initial(int nmax, const Eigen::Matrix4cd& qubit_rho,
                                 const SystemParams& p) {
  if (nmax < 1) throw config_error("composite_initial: nmax must be >= 1");
  const int nc = nmax + 1;
  Eigen::VectorXd pth = Eigen::VectorXd::Zero(nc);
  if (p.nbar > 0.0) {
    const double x = p.nbar / (p.nbar + 1.0);
    for (int n = 0; n < nc; ++n) pth[n] = std::pow(x, n);
    pth /= pth.sum();
  } else {
    pth[0] = 1.0;
  }
  CompositeState c;
  c.nmax = nmax;
  c.rho = Eigen::MatrixXcd::Zero(4 * nc, 4 * nc);
  for (int n = 0; n < nc; ++n)
    c.rho.block<4, 4>(4 * n, 4 * n) = pth[n] * qubit_rho;
  return c;
}

TwoQubitState partial_trace_cavity(const CompositeState& c) {
  TwoQubitState out;
  out.rho.setZero();
  for (int n = 0; n <= c.nmax; ++n) out.rho += c.rho.block<4, 4>(4 * n, 4 * n);
  return out;
}

FullModel::FullModel(const SystemParams& p, int nmax) : nmax_(nmax), params_(p) {
  p.validate();
  const int nc = nmax + 1;
  const int dim = 4 * nc;
  Eigen::MatrixXcd a_cav = Eigen::MatrixXcd::Zero(nc, nc);
  for (int n = 1; n < nc; ++n) a_cav(n - 1, n) = std::sqrt(double(n));
  const Eigen::Matrix2cd sm = sigma_minus();
  const Eigen::Matrix2cd id2 = Eigen::Matrix2cd::Identity();
  const Eigen::Matrix4cd sm1q = kron2(sm, id2);
  const Eigen::Matrix4cd sm2q = kron2(id2, sm);

  auto lift_cav = [&](const Eigen::MatrixXcd& x) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
    for (int i = 0; i < nc; ++i)
      for (int j = 0; j < nc; ++j)
        if (x(i, j) != complexd(0.0, 0.0))
          out.block<4, 4>(4 * i, 4 * j) = x(i, j) * Eigen::Matrix4cd::Identity();
    return out;
  };
  auto lift_qub = [&](const Eigen::Matrix4cd& x) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 0; n < nc; ++n) out.block<4, 4>(4 * n, 4 * n) = x;
    return out;
  };

  a_ = lift_cav(a_cav);
  ad_ = a_.adjoint();
  ada_ = ad_ * a_;
  aad_ = a_ * ad_;
  sm1_ = lift_qub(sm1q);
  sm2_ = lift_qub(sm2q);
  sm1d_sm1_ = sm1_.adjoint() * sm1_;
  sm2d_sm2_ = sm2_.adjoint() * sm2_;
  h_int_ = p.g * (ad_ * (sm1_ + sm2_) + (sm1_ + sm2_).adjoint() * a_);

  sz1_ = Eigen::VectorXd(dim);
  sz2_ = Eigen::VectorXd(dim);
  n1_ = Eigen::VectorXd(dim);
  n2_ = Eigen::VectorXd(dim);
  for (int n = 0; n < nc; ++n)
    for (int q = 0; q < 4; ++q) {
      const int i = 4 * n + q;
      const int e1 = (q < 2) ? 1 : 0;  // qubit 1 excited for q in {0,1}
      const int e2 = (q % 2 == 0) ? 1 : 0;
      sz1_[i] = e1 ? 1.0 : -1.0;
      sz2_[i] = e2 ? 1.0 : -1.0;
      n1_[i] = e1;
      n2_[i] = e2;
    }
}

Eigen::MatrixXcd FullModel::rhs(const Eigen::MatrixXcd& rho, double freq1,
                                double freq2) const {
  const SystemParams& p = params_;
  Eigen::MatrixXcd h = h_int_;
  if (freq1 != 0.0) h += (0.5 * freq1) * sz1_.asDiagonal().toDenseMatrix().cast<complexd>();
  if (freq2 != 0.0) h += (0.5 * freq2) * sz2_.asDiagonal().toDenseMatrix().cast<complexd>();
  Eigen::MatrixXcd out = complexd(0.0, -1.0) * (h * rho - rho * h);
  out.noalias() += (p.kappa * (p.nbar + 1.0)) *
                   (2.0 * a_ * rho * ad_ - ada_ * rho - rho * ada_);
  if (p.nbar > 0.0)
    out.noalias() += (p.kappa * p.nbar) *
                     (2.0 * ad_ * rho * a_ - aad_ * rho - rho * aad_);
  if (p.gamma > 0.0) {
    out.noalias() += p.gamma * (2.0 * sm1_ * rho * sm1_.adjoint() -
                                sm1d_sm1_ * rho - rho * sm1d_sm1_);
    out.noalias() += p.gamma * (2.0 * sm2_ * rho * sm2_.adjoint() -
                                sm2d_sm2_ * rho - rho * sm2d_sm2_);
  }
  return out;
}

void FullModel::kick(Eigen::MatrixXcd& rho, double phase, int qubit) const {
  const Eigen::VectorXd& n = (qubit == 1) ? n1_ : n2_;
  const int dim = static_cast<int>(rho.rows());
  Eigen::VectorXcd u(dim);
  for (int i = 0; i < dim; ++i) u[i] = std::exp(complexd(0.0, phase * n[i]));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) rho(i, j) *= u[i] * std::conj(u[j]);
}

// ---------------------------------------------------------------------------

namespace {

template <class Rhs4>
OperatorTrajectory integrate_4x4(const Eigen::Matrix4cd& rho0,
                                 const DetuningSchedule& sched,
                                 const SystemParams& p, double tau_end,
                                 double dtau, long sample_stride, Rhs4&& phase_of) {
  p.validate();
  TwoQubitState init{rho0};
  init.check(1e-9, 1e-6, 1e-6);
  if (sample_stride < 1) throw config_error("integrate: sample_stride must be >= 1");
  const double scale = p.time_per_tau();
  OperatorTrajectory traj;
  traj.schedule = sched;
  traj.params = p;
  const long nsteps = std::lround(tau_end / dtau);

  auto f = [&](double t, const Eigen::Matrix4cd& y) -> Eigen::Matrix4cd {
    return scale * reduced_me_rhs(y, phase_of(t), p);
  };
  auto on_grid = [&](long k, double tau, const Eigen::Matrix4cd& y) {
    if (std::abs(y.trace().real() - 1.0) > 1e-6)
      throw numeric_error("integrate_reduced: trace drift beyond 1e-6");
    if (k % sample_stride == 0 || k == nsteps) {
      traj.taus.push_back(tau);
      traj.states.push_back(TwoQubitState{y});
    }
  };
  rk4_integrate_grid(Eigen::Matrix4cd(rho0), tau_end, dtau,
                     schedule_edges(sched, tau_end), f, on_grid,
                     [](double, Eigen::Matrix4cd&) {});
  return traj;
}

}  // namespace

OperatorTrajectory integrate_reduced(const Eigen::Matrix4cd& rho0,
                                     const DetuningSchedule& s,
                                     const SystemParams& p, double tau_end,
                                     double dtau, long sample_stride) {
  return integrate_4x4(rho0, s, p, tau_end, dtau, sample_stride,
                       [&](double t) { return eval_schedule(s, t); });
}

OperatorTrajectory integrate_reduced(const Eigen::Matrix4cd& rho0,
                                     const DetuningSchedule& s1,
                                     const DetuningSchedule& s2,
                                     const SystemParams& p, double tau_end,
                                     double dtau, long sample_stride) {
  // Only the relative detuning enters the reduced dynamics.  Edges of both
  // schedules matter for step splitting, so merge them into a table.
  std::vector<double> edges1 = schedule_edges(s1, tau_end);
  std::vector<double> edges2 = schedule_edges(s2, tau_end);
  edges1.insert(edges1.end(), edges2.begin(), edges2.end());
  std::sort(edges1.begin(), edges1.end());
  edges1.erase(std::unique(edges1.begin(), edges1.end()), edges1.end());
  PiecewiseTable merged;  // carrier for merged edges; evaluated analytically
  merged.taus = edges1;
  merged.values.assign(edges1.size(), 0.0);
  for (std::size_t i = 0; i < edges1.size(); ++i)
    merged.values[i] =
        eval_schedule(s1, edges1[i]) - eval_schedule(s2, edges1[i]);
  // For smooth schedules the table above is only an edge carrier; evaluate
  // the true difference at every stage instead.
  OperatorTrajectory traj = integrate_4x4(
      rho0, DetuningSchedule(merged), p, tau_end, dtau, sample_stride,
      [&](double t) { return eval_schedule(s1, t) - eval_schedule(s2, t); });
  return traj;
}

OperatorTrajectory integrate_full(const CompositeState& c0,
                                  const DetuningSchedule& s,
                                  const SystemParams& p, double tau_end,
                                  double dtau, long sample_stride,
                                  double tail_tol) {
  p.validate();
  if (sample_stride < 1) throw config_error("integrate: sample_stride must be >= 1");
  const double scale = p.time_per_tau();
  FullModel model(p, c0.nmax);
  OperatorTrajectory traj;
  traj.schedule = s;
  traj.params = p;
  const long nsteps = std::lround(tau_end / dtau);

  // The schedule value is the accumulated phase on qubit 1: its jumps are
  // applied as instantaneous kicks at the edges, its smooth slope acts as an
  // instantaneous frequency (converted from per-tau to units of kappa).
  auto f = [&](double t, const Eigen::MatrixXcd& y) -> Eigen::MatrixXcd {
    const double freq1 = schedule_slope(s, t) / scale;
    return scale * model.rhs(y, freq1, 0.0);
  };
  auto on_edge = [&](double tau, Eigen::MatrixXcd& y) {
    const double before = eval_schedule(s, std::nextafter(tau, 0.0));
    const double after = eval_schedule(s, tau);
    if (before != after) model.kick(y, after - before, 1);
  };
  auto on_grid = [&](long k, double tau, const Eigen::MatrixXcd& y) {
    if (std::abs(y.trace().real() - 1.0) > 1e-6)
      throw numeric_error("integrate_full: trace drift beyond 1e-6");
    CompositeState c{y, c0.nmax};
    if (c.top_fock_population() > tail_tol)
      throw numeric_error("integrate_full: Fock tail overflow (raise nmax)");
    if (k % sample_stride == 0 || k == nsteps) {
      traj.taus.push_back(tau);
      traj.states.push_back(partial_trace_cavity(c));
    }
  };
  rk4_integrate_grid(c0.rho, tau_end, dtau, schedule_edges(s, tau_end), f,
                     on_grid, on_edge);
  return traj;
}

}  // namespace entbus
