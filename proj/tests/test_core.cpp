#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "entbus/core.hpp"

using namespace entbus;

namespace {

// Deterministic random Dicke states (Dirichlet(1,1,1,1) populations plus an
// admissible coherence).
DickeState random_dicke(std::mt19937_64& rng) {
  std::exponential_distribution<double> exp1(1.0);
  double p[4];
  double sum = 0.0;
  for (double& x : p) {
    x = exp1(rng);
    sum += x;
  }
  for (double& x : p) x /= sum;
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double mag = 0.99 * std::sqrt(p[1] * p[2]) * u01(rng);
  const double phase = 2.0 * M_PI * u01(rng);
  return DickeState{p[0], p[1], p[2], p[3],
                    mag * complexd(std::cos(phase), std::sin(phase))};
}

}  // namespace

TEST_CASE("g_coeff matches its definition") {
  SystemParams p{0.3, 1.0, 0.0, 0.0};
  CHECK(g_coeff(p, 1, 1, 1) == doctest::Approx(0.09).epsilon(1e-12));
  CHECK(g_coeff(p, 0, 0, 1) == doctest::Approx(0.0));
  SystemParams pt{0.3, 1.0, 1e-3, 0.06};
  CHECK(g_coeff(pt, 1, 1, 2) == doctest::Approx(1e-3 + 0.09 * 1.12).epsilon(1e-12));
  CHECK_THROWS_AS(g_coeff(p, 2, 0, 1), config_error);
  CHECK_THROWS_AS(g_coeff(p, 0, 0, 3), config_error);
}

TEST_CASE("g_coeff is monotone in gamma, nbar, g") {
  SystemParams base{0.3, 1.0, 1e-3, 0.06};
  for (int q : {0, 1})
    for (int pp : {0, 1})
      for (int k : {1, 2}) {
        SystemParams hi = base;
        hi.gamma *= 2.0;
        CHECK(g_coeff(hi, q, pp, k) >= g_coeff(base, q, pp, k));
        hi = base;
        hi.nbar *= 2.0;
        CHECK(g_coeff(hi, q, pp, k) >= g_coeff(base, q, pp, k));
        hi = base;
        hi.g *= 1.5;
        CHECK(g_coeff(hi, q, pp, k) >= g_coeff(base, q, pp, k));
      }
}

TEST_CASE("SystemParams validation and conventions") {
  SystemParams p{0.3, 1.0, 0.0, 0.0};
  CHECK_NOTHROW(p.validate());
  CHECK(p.weak_coupling_ok());
  CHECK(p.time_per_tau() == doctest::Approx(1.0 / 0.9).epsilon(1e-15));
  SystemParams bad = p;
  bad.g = -1.0;
  CHECK_THROWS_AS(bad.validate(), config_error);
  bad = p;
  bad.nbar = -0.1;
  CHECK_THROWS_AS(bad.validate(), config_error);
  SystemParams strong = p;
  strong.g = 0.6;
  CHECK_FALSE(strong.weak_coupling_ok());
}

TEST_CASE("schedule evaluation") {
  DetuningSchedule h = Heaviside{10.0, 2.5};
  CHECK(eval_schedule(h, 2.0) == 0.0);
  CHECK(eval_schedule(h, 2.5) == 10.0);  // right-continuous at the edge
  CHECK(eval_schedule(h, 3.0) == 10.0);

  DetuningSchedule sg = Sigmoid{10.0, 3.0, 2.5};
  CHECK(eval_schedule(sg, 2.5) == doctest::Approx(10.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(eval_schedule(sg, 25.0) == doctest::Approx(10.0).epsilon(1e-9));

  DetuningSchedule sw = SquareWave{10.0, 2.5, 16};
  CHECK(eval_schedule(sw, 3.0) == 10.0);
  CHECK(eval_schedule(sw, 6.0) == 0.0);
  CHECK(eval_schedule(sw, 2.0) == 0.0);
  CHECK(eval_schedule(sw, 5.0) == 0.0);  // right-continuous: drops at 5.0

  DetuningSchedule pu = Pulse{10.0, 2.5, 0.5};
  CHECK(eval_schedule(pu, 2.4) == 0.0);
  CHECK(eval_schedule(pu, 2.5) == 10.0);
  CHECK(eval_schedule(pu, 2.9) == 10.0);
  CHECK(eval_schedule(pu, 3.0) == 0.0);

  DetuningSchedule tb = PiecewiseTable{{1.0, 2.0, 3.0}, {4.0, 5.0, 0.0}};
  CHECK(eval_schedule(tb, 0.5) == 0.0);
  CHECK(eval_schedule(tb, 1.0) == 4.0);
  CHECK(eval_schedule(tb, 2.5) == 5.0);
  CHECK(eval_schedule(tb, 7.0) == 0.0);
}

TEST_CASE("schedule edges and slope") {
  CHECK(schedule_edges(Heaviside{10.0, 2.5}, 25.0) == std::vector<double>{2.5});
  CHECK(schedule_edges(Heaviside{10.0, 30.0}, 25.0).empty());
  CHECK(schedule_edges(Zero{}, 25.0).empty());
  CHECK(schedule_edges(Sigmoid{10.0, 3.0, 2.5}, 25.0).empty());
  CHECK(schedule_edges(SquareWave{10.0, 2.5, 16}, 45.0).size() == 16);
  CHECK(schedule_edges(Pulse{10.0, 2.5, 0.5}, 25.0) == std::vector<double>{2.5, 3.0});

  // Sigmoid slope against a central finite difference.
  DetuningSchedule sg = Sigmoid{10.0, 3.0, 2.5};
  for (double tau : {0.5, 2.0, 2.5, 3.0, 5.0}) {
    const double h = 1e-6;
    const double fd =
        (eval_schedule(sg, tau + h) - eval_schedule(sg, tau - h)) / (2.0 * h);
    CHECK(schedule_slope(sg, tau) == doctest::Approx(fd).epsilon(1e-6));
  }
  CHECK(schedule_slope(Heaviside{10.0, 2.5}, 2.4) == 0.0);
}

TEST_CASE("dicke_to_computational on basis states") {
  TwoQubitState s = dicke_to_computational(DickeState{0, 1, 0, 0, {0, 0}});
  // |s><s| has 0.5 on the four entries coupling |10> (index 1) and |01> (2).
  for (int i : {1, 2})
    for (int j : {1, 2})
      CHECK(s.rho(i, j).real() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(s.rho(0, 0)) == 0.0);
  CHECK(std::abs(s.rho(3, 3)) == 0.0);

  TwoQubitState a = dicke_to_computational(DickeState{0, 0, 1, 0, {0, 0}});
  CHECK(a.rho(1, 1).real() == doctest::Approx(0.5));
  CHECK(a.rho(2, 2).real() == doctest::Approx(0.5));
  CHECK(a.rho(1, 2).real() == doctest::Approx(-0.5));
  CHECK(a.rho(2, 1).real() == doctest::Approx(-0.5));

  // p_s = p_a = 1/2 with real coherence 1/2 is the product state |01><01|.
  TwoQubitState c = dicke_to_computational(DickeState{0, 0.5, 0.5, 0, {0.5, 0}});
  CHECK(c.rho(2, 2).real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c.rho.cwiseAbs().sum() == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(dicke_to_computational(DickeState{0.7, 0, 0, 0.1, {0, 0}}),
                  config_error);
}

TEST_CASE("computational_to_dicke inverse map") {
  TwoQubitState mixed;
  mixed.rho = Eigen::Matrix4cd::Identity() / 4.0;
  DickeState d = computational_to_dicke(mixed);
  CHECK(d.p_up == doctest::Approx(0.25));
  CHECK(d.p_s == doctest::Approx(0.25));
  CHECK(d.p_a == doctest::Approx(0.25));
  CHECK(d.p_down == doctest::Approx(0.25));
  CHECK(std::abs(d.c_sa) == doctest::Approx(0.0));

  TwoQubitState p01;
  p01.rho.setZero();
  p01.rho(2, 2) = 1.0;
  DickeState d01 = computational_to_dicke(p01);
  CHECK(d01.p_s == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(d01.p_a == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(d01.c_sa.real() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(d01.c_sa.imag() == doctest::Approx(0.0));

  // A state with coherences outside the representable span is rejected.
  TwoQubitState bad;
  bad.rho = Eigen::Matrix4cd::Identity() / 4.0;
  bad.rho(0, 3) = complexd(0.1, 0.0);
  bad.rho(3, 0) = complexd(0.1, 0.0);
  CHECK_THROWS_AS(computational_to_dicke(bad), config_error);
  double res = 0.0;
  computational_to_dicke(bad, &res);
  CHECK(res == doctest::Approx(0.1).epsilon(1e-9));
}

TEST_CASE("basis transforms are unitary conjugations (round trip, spectrum)") {
  std::mt19937_64 rng(20240817);
  for (int it = 0; it < 200; ++it) {
    const DickeState d = random_dicke(rng);
    const TwoQubitState r = dicke_to_computational(d);
    CHECK(std::abs(r.rho.trace().real() - 1.0) <= 1e-12);
    CHECK((r.rho - r.rho.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(r.rho, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() >= -1e-12);

    const DickeState back = computational_to_dicke(r);
    CHECK(std::abs(back.p_up - d.p_up) <= 1e-12);
    CHECK(std::abs(back.p_s - d.p_s) <= 1e-12);
    CHECK(std::abs(back.p_a - d.p_a) <= 1e-12);
    CHECK(std::abs(back.p_down - d.p_down) <= 1e-12);
    CHECK(std::abs(back.c_sa - d.c_sa) <= 1e-12);
  }
}

TEST_CASE("state invariant checks") {
  const DickeState good{0.25, 0.25, 0.25, 0.25, {0.1, 0.1}};
  CHECK_NOTHROW(good.check());
  const DickeState neg_pop{0.5, 0.5, 0.5, -0.5, {0, 0}};
  CHECK_THROWS_AS(neg_pop.check(), numeric_error);
  const DickeState big_coh{0.25, 0.25, 0.25, 0.25, {0.5, 0}};
  CHECK_THROWS_AS(big_coh.check(), numeric_error);

  TwoQubitState ok;
  ok.rho = Eigen::Matrix4cd::Identity() / 4.0;
  CHECK_NOTHROW(ok.check());
  TwoQubitState neg;
  neg.rho = Eigen::Matrix4cd::Identity() / 2.0;
  neg.rho(3, 3) = -0.25;
  neg.rho(0, 0) = 0.75;
  CHECK_THROWS_AS(neg.check(), numeric_error);
}
