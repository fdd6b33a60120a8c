#include "pendinv/pendulum.hpp"

#include <cmath>

#include "pendinv/actions.hpp"
#include "pendinv/elliptic.hpp"

namespace pendinv {

PendulumQuadruple pendulum_quadruple(double h, bool true_pendulum) {
  if (h <= -2) throw DomainError("pendulum_quadruple: h <= -2 is below the potential minimum");
  if (h == 0) throw DomainError("pendulum_quadruple: h = 0 is the separatrix, T diverges");
  const double pi = pi_v<double>();
  PendulumQuadruple q;
  q.h = h;
  if (h > 0) {
    const double m = 2 / (2 + h), mp = h / (2 + h), k = std::sqrt(m);
    q.branch = PendulumBranch::above;
    q.I = 4 / (pi * k) * ellint_E(m);
    q.J = 8 / (pi * k) * (ellint_K(mp) - ellint_E(mp));
    q.T = 2 * k * ellint_K(m);
    q.U = 4 * k * ellint_K(mp);
  } else {
    const double m = (2 + h) / 2, mp = -h / 2;
    q.branch = PendulumBranch::below;
    q.I = 4 / pi * (ellint_E(m) - (1 - m) * ellint_K(m));
    q.J = 8 / pi * (m * ellint_K(mp) - ellint_E(mp));
    q.T = 2 * ellint_K(m);
    q.U = 4 * ellint_K(mp);
    if (true_pendulum) {
      q.I *= 2;
      q.T *= 2;
    }
  }
  return q;
}

double legendre_defect(const PendulumQuadruple& q) { return q.I * q.U - q.J * q.T - 8; }

bool PendulumSeriesReport::ok() const {
  return J_vs_J1_series < 1e-12 && I_truncation < 0.1 && T_truncation < 1.0 && U_truncation < 0.1 && S_slice < 1e-10 &&
         J_series_exact;
}

Series1 pendulum_S_published() {
  Series1 s(8, "j");
  for (const auto& [k, v] : published_S())
    if (k.second == 0) s.at(k.first) = v;
  return s;
}

Series1 pendulum_J_series(int order) {
  // K - E = (pi/2) sum_{n>=1} c_n^2 2n/(2n-1) m^n with c_n = binom(2n, n)/4^n, so
  // J = (4/k) sum c_n^2 2n/(2n-1) m^n, m = k'^2 = (h/2)/(1 + h/2), 1/k = (1 + h/2)^(1/2).
  Series1 half_h(order, "h");
  if (order >= 1) half_h.at(1) = make_rational(1, 2);
  Series1 one_plus = half_h;
  one_plus.at(0) = 1;
  const Series1 m = half_h * reciprocal(one_plus);
  const Series1 inv_k = pow_series(one_plus, make_rational(1, 2));
  Series1 sum(order, "h"), mp = Series1(order, "h");
  mp.at(0) = 1;
  Rational c = 1;
  for (int n = 1; n <= order; ++n) {
    c = c * (2 * n - 1) / (2 * n);  // binom(2n, n)/4^n
    mp = mp * m;
    sum = sum + mp * (c * c * 2 * n / (2 * n - 1));
  }
  return inv_k * sum * Rational(4);
}

PendulumSeriesReport pendulum_series_check() {
  PendulumSeriesReport rep;
  const Series2 J1 = J1_series(40);
  const Series1 S = pendulum_S_published();
  for (double h : {-0.2, -0.1, -0.05, 0.05, 0.1, 0.2}) {
    const PendulumQuadruple q = pendulum_quadruple(h);
    const double L = std::log(32 / std::abs(h));
    const double pi2 = 2 * pi_v<double>();
    const double j = evaluate(J1, h, 0.0);
    rep.J_vs_J1_series = std::max(rep.J_vs_J1_series, std::abs(q.J - j));

    const double I2 = 8 + h + (h - h * h / 16) * L + 3 * h * h / 32;
    rep.I_truncation = std::max(rep.I_truncation, std::abs(pi2 * q.I - I2) / (std::abs(h * h * h) * L));
    const double T2 = (1 - h / 8 + 9 * h * h / 256) * L + h / 4;
    rep.T_truncation = std::max(rep.T_truncation, std::abs(q.T - T2) / (h * h));
    const double U2 = 1 - h / 8 + 9 * h * h / 256;
    rep.U_truncation = std::max(rep.U_truncation, std::abs(q.U / pi2 - U2) / std::abs(h * h * h));

    const double Sj = evaluate(S, q.J);
    const double lhs = pi2 * q.I - 8 - q.J * (1 + std::log(32 / std::abs(q.J)));
    rep.S_slice = std::max(rep.S_slice, std::abs(lhs - Sj));
  }
  const Series1 Jp = pendulum_J_series(20);
  rep.J_series_exact = true;
  for (int n = 0; n <= 20; ++n) rep.J_series_exact = rep.J_series_exact && J1.coeff(n, 0) == Jp.coeff(n);
  return rep;
}

// ----------------------------------------------------------------------- nome

namespace {

// c_n j^n -> c_n 32^n l^n
Series1 scale_to_l(const Series1& f) {
  Series1 r(f.order(), "l");
  Rational p = 1;
  for (int n = 0; n <= f.order(); ++n) {
    r.at(n) = f.coeff(n) * p;
    p *= 32;
  }
  return r;
}

Series1 scale_to_j(const Series1& f) {
  Series1 r(f.order(), "j");
  Rational p = 1;
  for (int n = 0; n <= f.order(); ++n) {
    r.at(n) = f.coeff(n) * p;
    p /= 32;
  }
  return r;
}

Series1 shift_up(const Series1& f, const std::string& var) {  // x f(x)
  Series1 r(f.order() + 1, var);
  for (int n = 0; n <= f.order(); ++n) r.at(n + 1) = f.coeff(n);
  return r;
}

}  // namespace

NomeSeries nome_from_invariant(int order, const Series1& S_of_j) {
  if (order < 1) throw DomainError("nome_from_invariant: order must be >= 1");
  if (S_of_j.order() < order) throw DomainError("nome_from_invariant: S(j) needed through degree order");
  // S'(j) through degree order - 1 gives q through l^order.
  const Series1 a = scale_to_l(derivative(S_of_j.with_order(order)).with_order(order - 1));
  NomeSeries out;
  out.q_of_l = shift_up(exp_series(-a), "l");
  out.l_of_q = reversion(out.q_of_l).relabeled("q");
  // exp(a)/l = 1/l + (exp(a) - 1)/l
  const Series1 e = exp_series(a);
  out.reciprocal_pole = e.coeff(0);
  out.reciprocal_regular = Series1(std::max(order - 2, 0), "l");
  for (int n = 1; n <= e.order() && n - 1 <= out.reciprocal_regular.order(); ++n)
    out.reciprocal_regular.at(n - 1) = e.coeff(n);
  return out;
}

NomeSeries nome_from_invariant(int order) {
  if (order > 8) throw DomainError("nome_from_invariant: the published S(j) only reaches degree 8");
  return nome_from_invariant(order, pendulum_S_published());
}

Series1 theta4_series(int order) {
  Series1 t(order, "q");
  for (int n = 0; n * n <= order; ++n) t.at(n * n) = n == 0 ? 1 : (n % 2 ? -2 : 2);
  return t;
}

Series1 J_of_q_theta(int order) {
  const Series1 th = theta4_series(order);
  const Series1 num = shift_up(derivative(th), "q").with_order(order);  // q theta4'
  const Series1 inv = reciprocal(th);
  return num * inv * inv * inv * Rational(-16);
}

Series1 pendulum_S_from_theta(int order) {
  // q(l) = l exp(-S'(32 l)), with q(l) the inverse of J(q)/32.
  const Series1 Jq = J_of_q_theta(order) * make_rational(1, 32);
  const Series1 q_of_l = reversion(Jq).relabeled("l");
  Series1 ratio(order - 1, "l");  // q/l
  for (int n = 1; n <= order; ++n) ratio.at(n - 1) = q_of_l.coeff(n);
  const Series1 a = -log_series(ratio);  // S'(32 l) as series in l
  const Series1 Sp = scale_to_j(a);
  Series1 S = integral(Sp);
  S.at(1) = 0;  // the linear term is the symbolic j ln 32 and not part of S'
  return S;
}

bool all_integer(const Series1& s) {
  for (int n = 0; n <= s.order(); ++n)
    if (boost::multiprecision::denominator(s.coeff(n)) != 1) return false;
  return true;
}

NomeCheck nome_theta_check(int order) {
  NomeCheck c;
  const NomeSeries nome = nome_from_invariant(order);
  const Series1 Jq = (J_of_q_theta(order) * make_rational(1, 32));
  const Series1 from_theta = reversion(Jq).relabeled("l");
  c.inverse_matches = from_theta == nome.q_of_l;
  c.integers = all_integer(nome.q_of_l) && all_integer(nome.l_of_q) && all_integer(Jq) &&
               all_integer(nome.reciprocal_regular);
  // l_of_q is l as a function of q, which is J(q)/32 itself; q(l(q)) = q closes the loop.
  c.l_of_q_is_theta = nome.l_of_q == Jq;
  c.roundtrip = compose(nome.q_of_l, Jq) == Series1::variable(order, "q");
  c.notes.push_back("q(l) = " + format_series(nome.q_of_l));
  c.notes.push_back("J(q)/32 = " + format_series(Jq));
  return c;
}

ComplexSeries2 complex_nome_series(int order, const Series2& S_poly) {
  if (order < 1 || order > S_poly.order()) throw DomainError("complex_nome_series: order must be in [1, S order]");
  const ComplexSeries2::Labels lv = {"l", "lbar"};
  auto to_c = [](const Series2& s) { return s.map<GaussianRational>([](const Rational& r) { return GaussianRational(r); }); };
  // -S1 + i S2 without the constant -ln 32, which becomes the 1/32 in l = jhat/32.
  const ComplexSeries2 P1 = to_c(partial(S_poly, Var::first));
  const ComplexSeries2 P2 = to_c(partial(S_poly, Var::second));
  const GaussianRational i(Rational(0), Rational(1));
  const ComplexSeries2 G = P2 * i - P1;
  // j1 = 16 (l + lbar), j2 = -16 i (l - lbar)
  const int n = order;
  ComplexSeries2 gx(n, lv), gy(n, lv);
  gx.at(1, 0) = 16;
  gx.at(0, 1) = 16;
  gy.at(1, 0) = GaussianRational(Rational(0), Rational(-16));
  gy.at(0, 1) = GaussianRational(Rational(0), Rational(16));
  const ComplexSeries2 E = exp_series(compose(G.with_order(n - 1).relabeled(lv), gx, gy).with_order(n - 1));
  ComplexSeries2 q(n, lv);  // l * E
  for (int d = 0; d < n; ++d)
    for (int b = 0; b <= d; ++b) q.at(d - b + 1, b) = E.coeff(d - b, b);
  return q;
}

Series1 restrict_diagonal(const ComplexSeries2& f) {
  Series1 r(f.order(), "l");
  for (int d = 0; d <= f.order(); ++d) {
    GaussianRational s;
    for (int b = 0; b <= d; ++b) s += f.coeff(d - b, b);
    if (!s.im.is_zero()) throw ConsistencyError("restrict_diagonal: imaginary part on lbar = l");
    r.at(d) = s.re;
  }
  return r;
}

}  // namespace pendinv
