#include "pendinv/actions.hpp"

#include <array>
#include <cmath>
#include <complex>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "pendinv/normalform.hpp"

namespace pendinv {

std::string to_string(ActionMethod m) {
  switch (m) {
    case ActionMethod::legendre_form: return "legendre_form";
    case ActionMethod::lambda0_form: return "lambda0_form";
    case ActionMethod::quadrature: return "quadrature";
    case ActionMethod::contour: return "contour";
    case ActionMethod::series_model: return "series_model";
  }
  return "unknown";
}

namespace {

template <class T>
T tol_for() {
  using std::sqrt;
  // Near-full precision for MPFR, a bit of slack in double.
  if constexpr (std::is_same_v<T, double>) return 1e-15;
  else return std::numeric_limits<T>::epsilon() * 1024;
}

// Below this |j2| the double evaluation of the third-kind terms loses digits
// (n+ -> 1 with c3+ -> 0), so W and I1 switch to an MPFR evaluation.
constexpr double kAxisBand = 1e-6;
constexpr unsigned kAxisBits = 192;

}  // namespace

// ----------------------------------------------------------------------- I1

template <class T>
T action_I1_legendre(const T& h, const T& j2) {
  if (h == 0 && j2 == 0) return 4 / pi_v<T>();
  const EllipticDataT<T> e = cubic_roots(h, j2);
  const T K = ellint_K(e.k2), E = ellint_E(e.k2);
  T s = e.c1 * K + e.c2 * E;
  if (j2 != 0) {
    s += e.c3_plus * ellint_Pi(e.n_plus, e.k2);
    if (e.c3_minus != 0) s += e.c3_minus * ellint_Pi(e.n_minus, e.k2);
  }
  return e.c0 * s;
}

template <class T>
T action_I1_lambda0(const T& h, const T& j2) {
  using std::abs;
  if (h == 0 && j2 == 0) return 4 / pi_v<T>();
  const EllipticDataT<T> e = cubic_roots(h, j2);
  const T K = ellint_K(e.k2), E = ellint_E(e.k2);
  T v = e.c0 * e.c1_tilde * K + e.c0 * e.c2 * E;
  if (j2 != 0) v -= abs(j2) / 2 * heuman_lambda0(e.phi, e.k2);
  return v;
}

template <class T>
T action_I1_quadrature(const T& h, const T& j2) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  if (h == 0 && j2 == 0) return 4 / pi_v<T>();
  const EllipticDataT<T> e = cubic_roots(h, j2);
  const T d = e.zeta1 - e.zeta0;
  if (d == 0) return T(0);
  const T a0 = 1 + e.zeta0;      // 1 + zeta at t = 0
  const T a1 = 1 - e.zeta1;      // 1 - zeta at t = pi/2
  const T g21 = e.zeta2 - e.zeta1;
  // zeta = zeta0 + d sin^2 t. With P = 2 (zeta - zeta0)(zeta1 - zeta)(zeta2 - zeta)
  // the square-root endpoint behaviour is absorbed by the substitution.
  auto f = [&](const T& t) -> T {
    const T s = sin(t), c = cos(t);
    const T s2 = s * s, c2 = c * c;
    const T lo = a0 + d * s2;
    const T hi = a1 + d * c2;
    const T fs = lo == 0 ? T(1) / d : s2 / lo;
    const T fc = hi == 0 ? T(1) / d : c2 / hi;
    return 2 * d * d * fs * fc * sqrt(2 * (g21 + d * c2));
  };
  // Variable-precision MPFR reports no usable min_value, so the endpoint
  // clearance is passed explicitly.
  const T min_complement = std::is_same_v<T, double> ? T(std::numeric_limits<double>::min() * 4)
                                                     : T(ldexp(T(1), -4 * static_cast<int>(Real::default_precision() * 3.33 + 1)));
  boost::math::quadrature::tanh_sinh<T> integrator(std::is_same_v<T, double> ? 15 : 22, min_complement);
  const T half_pi = pi_v<T>() / 2;
  const T v = integrator.integrate(f, T(0), half_pi, tol_for<T>());
  return v / pi_v<T>();
}

template double action_I1_legendre<double>(const double&, const double&);
template Real action_I1_legendre<Real>(const Real&, const Real&);
template double action_I1_lambda0<double>(const double&, const double&);
template Real action_I1_lambda0<Real>(const Real&, const Real&);
template double action_I1_quadrature<double>(const double&, const double&);
template Real action_I1_quadrature<Real>(const Real&, const Real&);

ActionValue action_I1(double h, double j2, ActionMethod method) {
  ActionValue r;
  r.method = method;
  if (h == 0 && j2 == 0) {
    r.value = 4 / pi_v<double>();
    r.flagged = true;
    return r;
  }
  const double scale = 1 + std::abs(h) + std::abs(j2);
  switch (method) {
    case ActionMethod::legendre_form:
      if (j2 != 0 && std::abs(j2) < kAxisBand) {
        PrecisionScope p(kAxisBits);
        r.value = static_cast<double>(action_I1_legendre(Real(h), Real(j2)));
      } else {
        r.value = action_I1_legendre(h, j2);
      }
      r.error_estimate = 1e-14 * scale;
      break;
    case ActionMethod::lambda0_form:
      r.value = action_I1_lambda0(h, j2);
      r.error_estimate = 1e-14 * scale;
      break;
    case ActionMethod::quadrature:
      r.value = action_I1_quadrature(h, j2);
      r.error_estimate = 1e-13 * scale;
      break;
    default:
      throw DomainError("action_I1: method " + to_string(method) + " does not evaluate I1");
  }
  r.flagged = std::hypot(h, j2) < 1e-8;
  return r;
}

ActionValue action_I1(double h, double j2) {
  // The Lambda0 form has no third-kind terms, so it is the safe choice on the axis.
  return action_I1(h, j2, std::abs(j2) < kAxisBand ? ActionMethod::lambda0_form
                                                    : ActionMethod::legendre_form);
}

// ----------------------------------------------------------------------- J1

ContourResult action_J1_contour(double h, double j2) {
  using C = std::complex<double>;
  const EllipticData e = cubic_roots(h, j2);
  ContourResult out;
  if (e.zeta2 - e.zeta1 <= 0) return out;  // vanishing cycle has shrunk to a point
  const double room = std::min({0.1, e.zeta1 - e.zeta0, e.zeta1 + 1});
  if (room <= 1e-12) {
    throw DomainError("action_J1_contour: zeta0 or -1 touches [zeta1, zeta2]; shrink the contour");
  }
  const double dx = room / 4, dy = room / 4;
  const double x0 = e.zeta1 - dx, x1 = e.zeta2 + dx;
  const std::array<C, 5> corner = {C(x0, -dy), C(x1, -dy), C(x1, dy), C(x0, dy), C(x0, -dy)};

  auto P = [&](C z) { return 2.0 * (1.0 - z * z) * (h + 1.0 - z) - j2 * j2; };
  using GL = boost::math::quadrature::gauss<double, 20>;
  const auto& xs = GL::abscissa();
  const auto& ws = GL::weights();
  // Ordered nodes on [-1, 1] with weights (Boost stores the nonnegative half).
  std::vector<std::pair<double, double>> nodes;
  for (std::size_t i = xs.size(); i-- > 0;)
    if (xs[i] != 0) nodes.emplace_back(-xs[i], ws[i]);
  for (std::size_t i = 0; i < xs.size(); ++i) nodes.emplace_back(xs[i], ws[i]);

  const int panels = 48;
  C w_prev = std::sqrt(P(corner[0]));  // principal branch: positive on (zeta0, zeta1)
  C sum = 0;
  int count = 0;
  // Counterclockwise sweep; the sign flip below makes the result the clockwise one.
  for (int edge = 0; edge < 4; ++edge) {
    const C a = corner[edge], b = corner[edge + 1];
    for (int p = 0; p < panels; ++p) {
      const C pa = a + (b - a) * (double(p) / panels);
      const C pb = a + (b - a) * (double(p + 1) / panels);
      const C half = (pb - pa) / 2.0, mid = (pa + pb) / 2.0;
      for (const auto& [x, w] : nodes) {
        const C z = mid + half * x;
        C s = std::sqrt(P(z));
        if (std::abs(s - w_prev) > std::abs(s + w_prev)) s = -s;
        w_prev = s;
        sum += w * half * s / (1.0 - z * z);
        ++count;
      }
    }
  }
  const C val = -sum / (C(0, 1) * pi_v<double>());
  out.value = val.real();
  out.imag_residue = val.imag();
  out.nodes = count;
  return out;
}

ActionValue action_J1_numeric(double h, double j2) {
  ActionValue r;
  r.method = ActionMethod::contour;
  if (h == 0 && j2 == 0) {
    r.flagged = true;
    return r;
  }
  const ContourResult c = action_J1_contour(h, j2);
  r.value = c.value;
  r.error_estimate = std::abs(c.imag_residue) + 1e-13;
  return r;
}

// ----------------------------------------------------------------------- W, T

template <class T>
T rotation_W_legendre(const T& h, const T& j2) {
  using std::sqrt;
  if (j2 == 0) {
    if (h == 0) throw DomainError("rotation_W: undefined at the critical value (0, 0)");
    return h > 0 ? T(1) : T(1) / 2;  // limit j2 -> 0+, sgn(0) := +1
  }
  const EllipticDataT<T> e = cubic_roots(h, j2);
  if (e.zeta0 <= -1 || e.zeta1 >= 1) {
    throw DomainError("rotation_W: j2 too small to resolve at this precision");
  }
  // Pairing: Pi(n+) with 1/(1 - zeta0) and Pi(n-) with 1/(1 + zeta0). This is the
  // pairing that equals -dI1/dj2 (checked by finite differences).
  const T pp = ellint_Pi(e.n_plus, e.k2) / (1 - e.zeta0);
  const T pm = ellint_Pi(e.n_minus, e.k2) / (1 + e.zeta0);
  return j2 / (pi_v<T>() * sqrt(2 * (e.zeta2 - e.zeta0))) * (pp + pm);
}

template double rotation_W_legendre<double>(const double&, const double&);
template Real rotation_W_legendre<Real>(const Real&, const Real&);

double rotation_W_numeric(double h, double j2) {
  if (j2 != 0 && std::abs(j2) < kAxisBand) {
    PrecisionScope p(kAxisBits);
    return static_cast<double>(rotation_W_legendre(Real(h), Real(j2)));
  }
  return rotation_W_legendre(h, j2);
}

double period_T_numeric(double h, double j2) {
  if (h == 0 && j2 == 0) throw DomainError("period_T: diverges at the critical value");
  const EllipticData e = cubic_roots(h, j2);
  return 2 * std::sqrt(2.0) * ellint_K(e.k2) / std::sqrt(e.zeta2 - e.zeta0);
}

double rotation_W_finite_difference(double h, double j2, double step) {
  PrecisionScope p(128);
  const Real H(h), y(j2), d(step);
  const Real up = action_I1_legendre(H, y + d);
  const Real dn = action_I1_legendre(H, y - d);
  return static_cast<double>(-(up - dn) / (2 * d));
}

double period_T_finite_difference(double h, double j2, double step) {
  PrecisionScope p(128);
  const Real H(h), y(j2), d(step);
  const Real up = action_I1_legendre(H + d, y);
  const Real dn = action_I1_legendre(H - d, y);
  return static_cast<double>(2 * pi_v<Real>() * (up - dn) / (2 * d));
}

// ----------------------------------------------------------------------- series

namespace {

Rational gen_binomial(const Rational& alpha, int k) {
  Rational r = 1;
  for (int i = 0; i < k; ++i) r = r * (alpha - i) / (i + 1);
  return r;
}

Integer binomial(int n, int k) {
  Integer r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

}  // namespace

Series2 J1_series(int degree) {
  if (degree < 1) throw DomainError("J1_series: degree must be >= 1");
  // With x = zeta - 1 and (h, j2) -> eps (h, j2):
  //   w/(1 - zeta^2) dzeta = -sqrt(2) (2 + x)^(-1/2) (1 - v)^(1/2) dx,
  //   v = h eps / x + j2^2 eps^2 / (2 (2 + x) x^2).
  // The eps^n term of (1 - v)^(1/2) collects binom(1/2, k) (-v)^k with k + m = n,
  // m the power of the j2^2 part; it carries x^-n (2 + x)^(-m-1/2), whose
  // residue at x = 0 is the x^(n-1) Taylor coefficient of (2 + x)^(-m-1/2).
  Series2 J(degree, {"h", "j2"});
  const Rational half = make_rational(1, 2);
  for (int n = 1; n <= degree; ++n) {
    Rational two_pow = 1;  // 2^-(n-1)
    for (int i = 1; i < n; ++i) two_pow /= 2;
    for (int m = 0; 2 * m <= n; ++m) {
      const int k = n - m;
      Rational c = Rational(binomial(k, m)) * gen_binomial(half, k);
      if (k % 2) c = -c;
      for (int i = 0; i < m; ++i) c /= 4;
      c *= gen_binomial(-Rational(m) - half, n - 1) * two_pow;
      // -sqrt(2) from the prefactor times 2^(-m-1/2) from (2+x) gives -2^-m, already
      // folded into the 4^-m above; the cycle is traversed twice.
      J.at(n - 2 * m, 2 * m) = -2 * c;
    }
  }
  return J;
}

Series2 birkhoff_by_inversion(int grade, bool verify) {
  if (grade < 2) throw DomainError("birkhoff_by_inversion: grade must be >= 2");
  const Series2 H = invert_first(J1_series(std::max(grade / 2, 1))).relabeled({"j1", "j2"});
  if (verify) {
    const Series2 L = lie_normalize(grade);
    if (!(L == H)) {
      throw ConsistencyError("birkhoff_by_inversion: inverse of J1 differs from the Lie normal form at grade " +
                             std::to_string(grade));
    }
  }
  return H;
}

Series2 W_log_coefficient(int degree) {
  return -partial(J1_series(degree + 1), Var::second);
}

ASeries A_series_both(int degree) {
  if (degree < 1) throw DomainError("A_series: degree must be >= 1");
  ASeries out;
  const Series2 HL = lie_normalize(2 * (degree + 1));
  const Series2 H1 = partial(HL, Var::first);
  const Series2 H2 = partial(HL, Var::second);
  out.ratio_route = (H2 * reciprocal(H1)).with_order(degree);

  // Implicit differentiation of J1(H(j1, j2), j2) = j1 gives A = -(dJ1/dj2) o H.
  const Series2 HI = birkhoff_by_inversion(2 * (degree + 1), false);
  out.residue_route = compose_first(W_log_coefficient(degree), HI).with_order(degree);
  out.agree = out.ratio_route == out.residue_route;
  if (!out.agree) throw ConsistencyError("A_series: ratio-of-partials and residue routes disagree");
  return out;
}

Series2 A_series(int degree) { return A_series_both(degree).ratio_route; }

}  // namespace pendinv
