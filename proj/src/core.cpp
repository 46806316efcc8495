#include "entbus/core.hpp"

#include <algorithm>
#include <cmath>

namespace entbus {

double g_coeff(const SystemParams& p, int q, int pp, int k) {
  if ((q != 0 && q != 1) || (pp != 0 && pp != 1) || (k != 1 && k != 2))
    throw config_error("g_coeff: q,p must be in {0,1}, k in {1,2}");
  return q * p.gamma + p.g * p.g * (k * p.nbar + pp) / p.kappa;
}

double eval_schedule(const DetuningSchedule& s, double tau) {
  return std::visit(
      [tau](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Zero>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, Constant>) {
          return v.amplitude;
        } else if constexpr (std::is_same_v<T, Heaviside>) {
          return tau >= v.tau0 ? v.amplitude : 0.0;
        } else if constexpr (std::is_same_v<T, Sigmoid>) {
          return v.amplitude / std::sqrt(1.0 + std::exp(2.0 * v.b * (v.tau0 - tau)));
        } else if constexpr (std::is_same_v<T, SquareWave>) {
          double val = 0.0;
          for (int n = 1; n <= v.edges; ++n)
            if (tau >= v.period * n) val += (n % 2 == 1 ? v.amplitude : -v.amplitude);
          return val;
        } else if constexpr (std::is_same_v<T, Pulse>) {
          return (tau >= v.tau0 && tau < v.tau0 + v.width) ? v.amplitude : 0.0;
        } else {  // PiecewiseTable
          if (v.taus.size() != v.values.size())
            throw config_error("PiecewiseTable: taus/values size mismatch");
          double val = 0.0;
          for (std::size_t i = 0; i < v.taus.size(); ++i)
            if (tau >= v.taus[i]) val = v.values[i];
          return val;
        }
      },
      s);
}

std::vector<double> schedule_edges(const DetuningSchedule& s, double tau_end) {
  std::vector<double> e;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Heaviside>) {
          e.push_back(v.tau0);
        } else if constexpr (std::is_same_v<T, SquareWave>) {
          for (int n = 1; n <= v.edges; ++n) e.push_back(v.period * n);
        } else if constexpr (std::is_same_v<T, Pulse>) {
          e.push_back(v.tau0);
          e.push_back(v.tau0 + v.width);
        } else if constexpr (std::is_same_v<T, PiecewiseTable>) {
          e = v.taus;
        }
        // Zero, Constant, Sigmoid: no discontinuities.
      },
      s);
  std::sort(e.begin(), e.end());
  e.erase(std::remove_if(e.begin(), e.end(),
                         [tau_end](double t) { return t <= 0.0 || t >= tau_end; }),
          e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  return e;
}

double schedule_slope(const DetuningSchedule& s, double tau) {
  if (const auto* v = std::get_if<Sigmoid>(&s)) {
    // d/dtau A (1 + e^{2b(tau0-tau)})^{-1/2}
    const double ex = std::exp(2.0 * v->b * (v->tau0 - tau));
    return v->amplitude * v->b * ex * std::pow(1.0 + ex, -1.5);
  }
  return 0.0;  // all other variants are piecewise constant
}

void DickeState::check(double tol) const {
  if (std::abs(trace() - 1.0) > tol)
    throw numeric_error("DickeState: trace deviates from 1 beyond tolerance");
  for (double p : {p_up, p_s, p_a, p_down})
    if (p < -tol || p > 1.0 + tol)
      throw numeric_error("DickeState: population out of [0,1]");
  if (std::norm(c_sa) > p_s * p_a + tol)
    throw numeric_error("DickeState: |c_sa|^2 exceeds p_s*p_a");
}

void TwoQubitState::check(double herm_tol, double trace_tol, double eig_tol) const {
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > herm_tol)
    throw numeric_error("TwoQubitState: not Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > trace_tol || std::abs(rho.trace().imag()) > trace_tol)
    throw numeric_error("TwoQubitState: trace deviates from 1");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -eig_tol)
    throw numeric_error("TwoQubitState: negative eigenvalue beyond tolerance");
}

Eigen::Vector4cd dicke_up() { return {1.0, 0.0, 0.0, 0.0}; }
Eigen::Vector4cd dicke_down() { return {0.0, 0.0, 0.0, 1.0}; }
Eigen::Vector4cd dicke_s() {
  const double h = 1.0 / std::sqrt(2.0);
  return {0.0, h, h, 0.0};
}
Eigen::Vector4cd dicke_a() {
  // |a> = (|01> - |10>)/sqrt(2); basis order {|11>,|10>,|01>,|00>}
  const double h = 1.0 / std::sqrt(2.0);
  return {0.0, -h, h, 0.0};
}

TwoQubitState dicke_to_computational(const DickeState& d) {
  if (std::abs(d.trace() - 1.0) > 1e-6)
    throw config_error("dicke_to_computational: input normalization off beyond 1e-6");
  const Eigen::Vector4cd u = dicke_up(), s = dicke_s(), a = dicke_a(), w = dicke_down();
  TwoQubitState out;
  out.rho = d.p_up * u * u.adjoint() + d.p_s * s * s.adjoint() +
            d.p_a * a * a.adjoint() + d.p_down * w * w.adjoint() +
            d.c_sa * s * a.adjoint() + std::conj(d.c_sa) * a * s.adjoint();
  return out;
}

DickeState computational_to_dicke(const TwoQubitState& r, double* residual) {
  const Eigen::Vector4cd u = dicke_up(), s = dicke_s(), a = dicke_a(), w = dicke_down();
  DickeState d;
  d.p_up = (u.adjoint() * r.rho * u).value().real();
  d.p_s = (s.adjoint() * r.rho * s).value().real();
  d.p_a = (a.adjoint() * r.rho * a).value().real();
  d.p_down = (w.adjoint() * r.rho * w).value().real();
  d.c_sa = (s.adjoint() * r.rho * a).value();
  const Eigen::Matrix4cd recon = dicke_to_computational(
      DickeState{d.p_up, d.p_s, d.p_a, d.p_down, d.c_sa}).rho;
  const double res = (r.rho - recon).cwiseAbs().maxCoeff();
  if (residual) {
    *residual = res;
  } else if (res > 1e-8) {
    throw config_error("computational_to_dicke: coherences outside representable span");
  }
  return d;
}

}  // namespace entbus
