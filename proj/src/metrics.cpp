#include "entbus/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace entbus {

namespace {

Eigen::Matrix4cd spin_flip(const Eigen::Matrix4cd& rho) {
  // (sy x sy) rho* (sy x sy) in the basis {|11>,|10>,|01>,|00>}:
  // sy x sy = antidiag(-1, 1, 1, -1).
  Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  return yy * rho.conjugate() * yy;
}

}  // namespace

ConcurrencePair concurrence_wootters(const TwoQubitState& r) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(r.rho);
  Eigen::Vector4d ev = es.eigenvalues();
  if (ev.minCoeff() < -1e-8)
    throw numeric_error("concurrence_wootters: non-physical state");
  for (int i = 0; i < 4; ++i) ev[i] = std::max(ev[i], 0.0);
  const Eigen::Matrix4cd sqrt_rho =
      es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
  const Eigen::Matrix4cd m = sqrt_rho * spin_flip(r.rho) * sqrt_rho;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es2(m, Eigen::EigenvaluesOnly);
  Eigen::Vector4d alpha = es2.eigenvalues();
  std::sort(alpha.data(), alpha.data() + 4, std::greater<double>());
  double relaxed = 0.0;
  for (int i = 0; i < 4; ++i) {
    double a = alpha[i];
    if (a < 0.0) {
      if (a < -1e-10)
        throw numeric_error("concurrence_wootters: negative alpha eigenvalue");
      a = 0.0;
    }
    relaxed += (i == 0 ? 1.0 : -1.0) * std::sqrt(a);
  }
  return {std::max(0.0, relaxed), relaxed};
}

ConcurrencePair concurrence_xform(const DickeState& d) {
  const double mod =
      std::hypot(d.p_s - d.p_a, 2.0 * d.c_sa.imag());  // |2 rho_{10,01}|
  const double relaxed =
      mod - 2.0 * std::sqrt(std::max(d.p_up, 0.0) * std::max(d.p_down, 0.0));
  return {std::max(0.0, relaxed), relaxed};
}

std::pair<double, double> fidelities(const DickeState& d) {
  return {d.p_s, d.p_a};
}

double negativity(const TwoQubitState& r) {
  // Partial transpose over qubit 2: index i = 2*b1 + b2.
  Eigen::Matrix4cd pt;
  for (int r1 = 0; r1 < 2; ++r1)
    for (int r2 = 0; r2 < 2; ++r2)
      for (int c1 = 0; c1 < 2; ++c1)
        for (int c2 = 0; c2 < 2; ++c2)
          pt(2 * r1 + c2, 2 * c1 + r2) = r.rho(2 * r1 + r2, 2 * c1 + c2);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(pt, Eigen::EigenvaluesOnly);
  double neg = 0.0;
  for (int i = 0; i < 4; ++i)
    if (es.eigenvalues()[i] < 0.0) neg -= es.eigenvalues()[i];
  return neg;
}

double purity(const TwoQubitState& r) {
  return (r.rho * r.rho).trace().real();
}

MetricRecord metrics_of(double tau, const TwoQubitState& r, double delta_value) {
  const Eigen::Vector4cd u = dicke_up(), s = dicke_s(), a = dicke_a(), w = dicke_down();
  MetricRecord m;
  m.tau = tau;
  m.p_up = (u.adjoint() * r.rho * u).value().real();
  m.p_s = (s.adjoint() * r.rho * s).value().real();
  m.p_a = (a.adjoint() * r.rho * a).value().real();
  m.p_down = (w.adjoint() * r.rho * w).value().real();
  const complexd csa = (s.adjoint() * r.rho * a).value();
  m.re_csa = csa.real();
  m.im_csa = csa.imag();
  m.concurrence_clamped = concurrence_wootters(r).clamped;
  // The relaxed (unclamped) diagnostic is the closed-form branch
  // 2(|rho_{10,01}| - sqrt(rho_upup rho_dndn)); for the states produced here
  // it agrees with the unclamped Wootters value whenever it is the active
  // branch, and unlike the sorted-eigenvalue expression it stays meaningful
  // deep in the separable regime.
  m.concurrence_relaxed =
      2.0 * (std::abs(r.rho(1, 2)) -
             std::sqrt(std::max(0.0, r.rho(0, 0).real() * r.rho(3, 3).real())));
  m.f_s = m.p_s;
  m.f_a = m.p_a;
  m.negativity = negativity(r);
  m.purity = purity(r);
  m.delta_value = delta_value;
  return m;
}

}  // namespace entbus
