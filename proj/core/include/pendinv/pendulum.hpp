#pragma once

// The ordinary pendulum, i.e. the j2 = 0 slice: the four period/action
// integrals on either side of the separatrix, their series, and the nome
// built from the derivative of the invariant.

#include <string>
#include <vector>

#include "pendinv/series.hpp"

namespace pendinv {

enum class PendulumBranch { above, below };  // h > 0, h < 0

struct PendulumQuadruple {
  double h = 0;
  double I = 0;  // action
  double J = 0;  // imaginary action
  double T = 0;  // 2 pi dI/dh
  double U = 0;  // 2 pi dJ/dh
  PendulumBranch branch = PendulumBranch::above;
};

// Below the separatrix the default values are half the true pendulum action and
// period, which is what makes I continuous across h = 0 and matches the j2 = 0
// limit of the spherical pendulum. `true_pendulum` restores the factor 2 on I
// and T for h < 0 (then IU - JT = 16 there).
PendulumQuadruple pendulum_quadruple(double h, bool true_pendulum = false);

double legendre_defect(const PendulumQuadruple& q);  // IU - JT - 8

// Exact series of J(h) from the K, E expansions of the h > 0 formula.
Series1 pendulum_J_series(int order);

struct PendulumSeriesReport {
  double J_vs_J1_series = 0;  // max |J(h) - J1_series(h, 0)|
  double I_truncation = 0;    // max |err| / (|h|^3 ln(32/|h|)) for 2 pi I
  double T_truncation = 0;    // max |err| / h^2
  double U_truncation = 0;    // max |err| / |h|^3 for U / 2 pi
  double S_slice = 0;         // max |2 pi I - 8 - j (1 + ln 32/|j|) - S(j)| with published S(j)
  bool J_series_exact = false;  // J1_series at j2 = 0 == pendulum_J_series through degree 20
  bool ok() const;
};
// Evaluates the truncated expansions against pendulum_quadruple at
// h in {+-0.05, +-0.1, +-0.2}. Uses the derived +9/256 in the T log factor.
PendulumSeriesReport pendulum_series_check();

// ---------------------------------------------------------------- nome

struct NomeSeries {
  Series1 q_of_l;   // q = exp(-2 pi dI/dJ) in l = j/32
  Series1 l_of_q;   // compositional inverse
  Rational reciprocal_pole = 1;  // exp(+2 pi dI/dJ) = pole / l + reciprocal_regular(l)
  Series1 reciprocal_regular;
};

// Analytic part of the pendulum invariant, S(j) = sum_{n>=2} s_n j^n, from the
// published table. Series in "j".
Series1 pendulum_S_published();

// Builds the nome from S(j): 2 pi dI/dJ = ln(32/|j|) + S'(j), so
// q = l exp(-S'(32 l)). Needs S through degree N + 1.
NomeSeries nome_from_invariant(int order, const Series1& S_of_j);
NomeSeries nome_from_invariant(int order);

// J(q) = -16 q theta4'(q) / theta4(q)^3, theta4 = sum (-1)^n q^(n^2).
Series1 theta4_series(int order);
Series1 J_of_q_theta(int order);

// S(j) recovered exactly from the theta route: s_n from -log(q(l)/l).
Series1 pendulum_S_from_theta(int order);

bool all_integer(const Series1& s);

struct NomeCheck {
  bool inverse_matches = false;   // q_of_l == reversion(J_of_q / 32)
  bool integers = false;          // q_of_l, l_of_q, J/32, reciprocal all integral
  bool l_of_q_is_theta = false;   // l_of_q == J_of_q / 32
  bool roundtrip = false;         // q_of_l o (J/32) == q
  std::vector<std::string> notes;
  bool ok() const { return inverse_matches && integers && l_of_q_is_theta && roundtrip; }
};
NomeCheck nome_theta_check(int order);

// q-hat = jhat exp(-S1 + i S2) written in l = jhat/32 and lbar. `S_poly` is the
// polynomial part of S (without j1 ln 32); `order` counts total degree in
// (l, lbar) and must not exceed S_poly.order().
ComplexSeries2 complex_nome_series(int order, const Series2& S_poly);
// Sum over a + b = n of the coefficient of l^a lbar^b, i.e. lbar = l.
Series1 restrict_diagonal(const ComplexSeries2& f);

}  // namespace pendinv
