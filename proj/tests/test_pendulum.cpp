#include <cmath>

#include "doctest.h"
#include "pendinv/actions.hpp"
#include "pendinv/elliptic.hpp"
#include "pendinv/pendulum.hpp"

using namespace pendinv;

namespace {

constexpr double kPi = 3.141592653589793238462643;

Series1 ints(std::initializer_list<long> c, const std::string& var) {
  Series1 s(static_cast<int>(c.size()) - 1, var);
  int i = 0;
  for (long v : c) s.at(i++) = v;
  return s;
}

}  // namespace

TEST_CASE("quadruple at h = 2") {
  const PendulumQuadruple q = pendulum_quadruple(2.0);
  CHECK(q.branch == PendulumBranch::above);
  CHECK(q.I == doctest::Approx(4 * std::sqrt(2.0) / kPi * ellint_E(0.5)).epsilon(1e-15));
  // I+ from its defining integral (1/2pi) int_0^{2pi} sqrt(2(h + 2 sin^2(t/2))) dt
  double s = 0;
  const int n = 2000;
  for (int i = 0; i < n; ++i) {
    const double t = 2 * kPi * (i + 0.5) / n;
    s += std::sqrt(2 * (2.0 + 2 * std::sin(t / 2) * std::sin(t / 2)));
  }
  CHECK(q.I == doctest::Approx(s / n).epsilon(1e-12));
}

TEST_CASE("Legendre relation IU - JT = 8") {
  CHECK(std::abs(legendre_defect(pendulum_quadruple(1.0))) < 1e-12);
  CHECK(std::abs(legendre_defect(pendulum_quadruple(-1.0))) < 1e-12);
  for (int i = 0; i < 25; ++i) {
    const double below = -1.9 * std::pow(1e-4 / 1.9, i / 24.0);
    const double above = 5.0 * std::pow(1e-4 / 5.0, i / 24.0);
    CHECK(std::abs(legendre_defect(pendulum_quadruple(below))) < 1e-12);
    CHECK(std::abs(legendre_defect(pendulum_quadruple(above))) < 1e-12);
  }
  const PendulumQuadruple t = pendulum_quadruple(-0.7, true);
  CHECK(std::abs(t.I * t.U - t.J * t.T - 16) < 1e-12);
}

TEST_CASE("Appell duality below the separatrix") {
  for (double h = -1.95; h < 0; h += 0.05) {
    const PendulumQuadruple a = pendulum_quadruple(h), b = pendulum_quadruple(-2 - h);
    CHECK(std::abs(a.J + 2 * b.I) < 1e-12);
    CHECK(std::abs(a.U - 2 * b.T) < 1e-12);
  }
}

TEST_CASE("branches join at the separatrix") {
  const PendulumQuadruple a = pendulum_quadruple(-1e-6), b = pendulum_quadruple(1e-6);
  CHECK(std::abs(a.J - b.J) < 1e-5);
  CHECK(std::abs(a.U - b.U) < 1e-5);
  CHECK(std::abs(a.I - b.I) < 1e-4);
  CHECK_THROWS_AS(pendulum_quadruple(0.0), DomainError);
  CHECK_THROWS_AS(pendulum_quadruple(-2.0), DomainError);
}

TEST_CASE("pendulum matches the j2 = 0 slice of the spherical pendulum") {
  for (double h : {-0.5, -0.1, 0.1, 0.6}) {
    const PendulumQuadruple q = pendulum_quadruple(h);
    CHECK(std::abs(q.I - action_I1(h, 0.0).value) < 1e-13);
    CHECK(std::abs(q.T - period_T_numeric(h, 0.0)) < 1e-12);
  }
}

TEST_CASE("series expansions") {
  const PendulumSeriesReport r = pendulum_series_check();
  CHECK(r.J_series_exact);
  CHECK(r.J_vs_J1_series < 1e-12);
  CHECK(r.S_slice < 1e-10);
  CHECK(r.ok());
  const Series1 J = pendulum_J_series(3);
  CHECK(J.coeff(1) == 1);
  CHECK(J.coeff(2) == make_rational(-1, 16));
  CHECK(J.coeff(3) == make_rational(3, 256));
}

TEST_CASE("theta4 and J(q)") {
  CHECK(theta4_series(16) == ints({1, -2, 0, 0, 2, 0, 0, 0, 0, -2, 0, 0, 0, 0, 0, 0, 2}, "q"));
  const Series1 Jq = J_of_q_theta(4) * make_rational(1, 32);
  CHECK(Jq == ints({0, 1, 6, 24, 76}, "q"));
  // q theta4' = -2 (q - 4 q^4 + 9 q^9 - ...)
  const Series1 th = theta4_series(9);
  CHECK(derivative(th).coeff(0) == -2);
  CHECK(derivative(th).coeff(3) == 8);
  CHECK(derivative(th).coeff(8) == -18);
}

TEST_CASE("nome from the invariant") {
  const NomeSeries n = nome_from_invariant(8);
  // printed with l^2 on the third term; the derived exponent is 3
  CHECK(n.q_of_l == ints({0, 1, -6, 48, -436, 4254, -43452, 458192, -4945872}, "l"));
  CHECK(n.reciprocal_pole == 1);
  CHECK(n.reciprocal_regular.with_order(5) == ints({6, -12, 76, -606, 5412, -51736}, "l"));
  CHECK(all_integer(n.q_of_l));
  CHECK(all_integer(n.l_of_q));
  CHECK_THROWS_AS(nome_from_invariant(9), DomainError);
}

TEST_CASE("theta inversion reproduces the nome exactly") {
  for (int order : {2, 5, 7, 8}) {
    const NomeCheck c = nome_theta_check(order);
    CAPTURE(order);
    CHECK(c.inverse_matches);
    CHECK(c.integers);
    CHECK(c.l_of_q_is_theta);
    CHECK(c.roundtrip);
  }
}

TEST_CASE("pendulum invariant recovered from theta series") {
  const Series1 S = pendulum_S_from_theta(8);
  CHECK(S == pendulum_S_published());
  // beyond the published range the nome built from it stays integral
  const NomeSeries n = nome_from_invariant(12, pendulum_S_from_theta(12));
  CHECK(all_integer(n.q_of_l));
  CHECK(n.q_of_l == reversion(J_of_q_theta(12) * make_rational(1, 32)).relabeled("l"));
}

TEST_CASE("complex nome") {
  const InvariantModel m = InvariantModel::displayed();
  const ComplexSeries2 qh = complex_nome_series(4, m.S_poly);
  auto re = [&](int a, int b) { return qh.coeff(a, b).re; };
  for (int d = 0; d <= 4; ++d)
    for (int b = 0; b <= d; ++b) CHECK(qh.coeff(d - b, b).im == 0);
  CHECK(re(1, 0) == 1);
  CHECK(re(0, 1) == 0);
  CHECK(re(2, 0) == 6);
  CHECK(re(1, 1) == -12);
  CHECK(re(3, 0) == -51);
  CHECK(re(2, 1) == -6);
  CHECK(re(1, 2) == 105);
  CHECK(re(4, 0) == 74);
  CHECK(re(3, 1) == 1332);
  CHECK(re(2, 2) == -1266);
  CHECK(re(1, 3) == -576);
  CHECK(restrict_diagonal(qh) == nome_from_invariant(4).q_of_l);
  CHECK_THROWS_AS(complex_nome_series(5, m.S_poly), DomainError);
}
