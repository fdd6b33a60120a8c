#pragma once

// Carlson symmetric integrals by duplication, the complete Legendre integrals
// built on them, Heuman's Lambda0, and the cubic whose roots carry the
// geometry of the reduced motion. Templated so the same code runs in double
// and in MPFR.
//
// Every Legendre-type function takes the parameter m = k^2, not the modulus.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "pendinv/errors.hpp"
#include "pendinv/numeric.hpp"

namespace pendinv {

namespace detail {

template <class T>
T eps_v() {
  return std::numeric_limits<T>::epsilon();
}

template <class T>
std::string num_str(const T& x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

// Shared tail of RD and RJ.
template <class T>
T rd_rj_poly(const T& e2, const T& e3, const T& e4, const T& e5) {
  return 1 - 3 * e2 / 14 + e3 / 6 + 9 * e2 * e2 / 88 - 3 * e4 / 22 - 9 * e2 * e3 / 52 +
         3 * e5 / 26;
}

constexpr int kMaxDuplications = 400;

}  // namespace detail

// RC(x, y), x >= 0, y > 0.
template <class T>
T carlson_rc(T x, T y) {
  using std::abs;
  using std::pow;
  using std::sqrt;
  if (!(x >= 0) || !(y > 0)) throw DomainError("carlson_rc: need x >= 0 and y > 0");
  const T a0 = (x + 2 * y) / 3;
  const T y0 = y;
  T a = a0;
  T q = pow(3 * detail::eps_v<T>(), T(-1) / 8) * abs(a0 - x);
  T scale = 1;
  for (int n = 0; n < detail::kMaxDuplications && q * scale >= abs(a); ++n) {
    const T lam = 2 * sqrt(x) * sqrt(y) + y;
    a = (a + lam) / 4;
    x = (x + lam) / 4;
    y = (y + lam) / 4;
    scale /= 4;
  }
  const T s = (y0 - a0) * scale / a;
  const T s2 = s * s;
  return (1 + s2 * T(3) / 10 + s2 * s / 7 + s2 * s2 * T(3) / 8 + s2 * s2 * s * T(9) / 22 +
          s2 * s2 * s2 * T(159) / 208 + s2 * s2 * s2 * s * T(9) / 8) /
         sqrt(a);
}

// RF(x, y, z), nonnegative arguments, at most one zero.
template <class T>
T carlson_rf(T x, T y, T z) {
  using std::abs;
  using std::pow;
  using std::sqrt;
  if (x < 0 || y < 0 || z < 0) throw DomainError("carlson_rf: negative argument");
  if ((x == 0) + (y == 0) + (z == 0) > 1) throw DomainError("carlson_rf: two zero arguments");
  const T a0 = (x + y + z) / 3;
  const T x0 = x, y0 = y;
  T a = a0;
  T q = pow(3 * detail::eps_v<T>(), T(-1) / 6) *
        std::max({abs(a0 - x), abs(a0 - y), abs(a0 - z)});
  T scale = 1;
  for (int n = 0; n < detail::kMaxDuplications && q * scale >= abs(a); ++n) {
    const T sx = sqrt(x), sy = sqrt(y), sz = sqrt(z);
    const T lam = sx * sy + sx * sz + sy * sz;
    a = (a + lam) / 4;
    x = (x + lam) / 4;
    y = (y + lam) / 4;
    z = (z + lam) / 4;
    scale /= 4;
  }
  const T X = (a0 - x0) * scale / a;
  const T Y = (a0 - y0) * scale / a;
  const T Z = -X - Y;
  const T e2 = X * Y - Z * Z;
  const T e3 = X * Y * Z;
  return (1 - e2 / 10 + e3 / 14 + e2 * e2 / 24 - 3 * e2 * e3 / 44) / sqrt(a);
}

// RD(x, y, z), x, y >= 0 (not both zero), z > 0.
template <class T>
T carlson_rd(T x, T y, T z) {
  using std::abs;
  using std::pow;
  using std::sqrt;
  if (x < 0 || y < 0 || !(z > 0)) throw DomainError("carlson_rd: need x, y >= 0 and z > 0");
  if (x == 0 && y == 0) throw DomainError("carlson_rd: x and y both zero");
  const T a0 = (x + y + 3 * z) / 5;
  const T x0 = x, y0 = y;
  T a = a0;
  T q = pow(detail::eps_v<T>() / 4, T(-1) / 6) *
        std::max({abs(a0 - x), abs(a0 - y), abs(a0 - z)});
  T scale = 1;
  T sum = 0;
  for (int n = 0; n < detail::kMaxDuplications && q * scale >= abs(a); ++n) {
    const T sx = sqrt(x), sy = sqrt(y), sz = sqrt(z);
    const T lam = sx * sy + sx * sz + sy * sz;
    sum += scale / (sz * (z + lam));
    a = (a + lam) / 4;
    x = (x + lam) / 4;
    y = (y + lam) / 4;
    z = (z + lam) / 4;
    scale /= 4;
  }
  const T X = (a0 - x0) * scale / a;
  const T Y = (a0 - y0) * scale / a;
  const T Z = -(X + Y) / 3;
  const T xy = X * Y, z2 = Z * Z;
  const T e2 = xy - 6 * z2;
  const T e3 = (3 * xy - 8 * z2) * Z;
  const T e4 = 3 * (xy - z2) * z2;
  const T e5 = xy * z2 * Z;
  return scale * detail::rd_rj_poly(e2, e3, e4, e5) / (a * sqrt(a)) + 3 * sum;
}

// RJ(x, y, z, p), x, y, z >= 0 (at most one zero), p > 0.
template <class T>
T carlson_rj(T x, T y, T z, T p) {
  using std::abs;
  using std::pow;
  using std::sqrt;
  if (x < 0 || y < 0 || z < 0) throw DomainError("carlson_rj: negative argument");
  if ((x == 0) + (y == 0) + (z == 0) > 1) throw DomainError("carlson_rj: two zero arguments");
  if (!(p > 0)) throw DomainError("carlson_rj: p must be positive (principal value not supported)");
  const T a0 = (x + y + z + 2 * p) / 5;
  const T x0 = x, y0 = y, z0 = z;
  const T delta = (p - x) * (p - y) * (p - z);
  T a = a0;
  T q = pow(detail::eps_v<T>() / 4, T(-1) / 6) *
        std::max({abs(a0 - x), abs(a0 - y), abs(a0 - z), abs(a0 - p)});
  T scale = 1;  // 4^-n
  T scale3 = 1; // 4^-3n
  T sum = 0;
  for (int n = 0; n < detail::kMaxDuplications && q * scale >= abs(a); ++n) {
    const T sx = sqrt(x), sy = sqrt(y), sz = sqrt(z), sp = sqrt(p);
    const T lam = sx * sy + sx * sz + sy * sz;
    const T d = (sp + sx) * (sp + sy) * (sp + sz);
    const T e = scale3 * delta / (d * d);
    sum += scale / d * carlson_rc(T(1), 1 + e);
    a = (a + lam) / 4;
    x = (x + lam) / 4;
    y = (y + lam) / 4;
    z = (z + lam) / 4;
    p = (p + lam) / 4;
    scale /= 4;
    scale3 /= 64;
  }
  const T X = (a0 - x0) * scale / a;
  const T Y = (a0 - y0) * scale / a;
  const T Z = (a0 - z0) * scale / a;
  const T P = -(X + Y + Z) / 2;
  const T e2 = X * Y + X * Z + Y * Z - 3 * P * P;
  const T e3 = X * Y * Z + 2 * e2 * P + 4 * P * P * P;
  const T e4 = (2 * X * Y * Z + e2 * P + 3 * P * P * P) * P;
  const T e5 = X * Y * Z * P * P;
  return scale * detail::rd_rj_poly(e2, e3, e4, e5) / (a * sqrt(a)) + 6 * sum;
}

// Complete integrals. m may be negative; m >= 1 diverges except for E(1) = 1.
template <class T>
T ellint_K(const T& m) {
  if (!(m < 1)) throw DomainError("ellint_K: K diverges for k^2 >= 1 (k^2 = " + detail::num_str(m) + ")");
  return carlson_rf(T(0), 1 - m, T(1));
}

template <class T>
T ellint_E(const T& m) {
  if (m == 1) return T(1);
  if (m > 1) throw DomainError("ellint_E: k^2 > 1");
  const T mc = 1 - m;
  // RF - (m/3) RD cancels as m -> 1; the RD + RD form has no cancellation there.
  if (m > T(0.5)) return mc / 3 * (carlson_rd(T(0), mc, T(1)) + carlson_rd(T(0), T(1), mc));
  return carlson_rf(T(0), mc, T(1)) - m / 3 * carlson_rd(T(0), mc, T(1));
}

// Pi(n, m) = int_0^{pi/2} dt / ((1 - n sin^2 t) sqrt(1 - m sin^2 t)), circular and
// hyperbolic cases with n < 1.
template <class T>
T ellint_Pi(const T& n, const T& m) {
  if (!(m < 1)) throw DomainError("ellint_Pi: diverges for k^2 >= 1 (k^2 = " + detail::num_str(m) + ")");
  if (n == 1) throw DomainError("ellint_Pi: pole at n = 1");
  if (n > 1) throw DomainError("ellint_Pi: n > 1 (Cauchy principal value) is not supported");
  const T y = 1 - m;
  return carlson_rf(T(0), y, T(1)) + n / 3 * carlson_rj(T(0), y, T(1), 1 - n);
}

// Incomplete F and E for any real phi (quasi-periodic continuation).
template <class T>
T ellint_F(const T& phi, const T& m) {
  using std::cos;
  using std::round;
  using std::sin;
  const T pi = pi_v<T>();
  const T j = round(phi / pi);
  const T r = phi - j * pi;
  const T s = sin(r), c = cos(r);
  if (m * s * s >= 1) throw DomainError("ellint_F: 1 - k^2 sin^2 phi <= 0");
  T f = s * carlson_rf(c * c, 1 - m * s * s, T(1));
  if (j != 0) f += 2 * j * ellint_K(m);
  return f;
}

template <class T>
T ellint_E(const T& phi, const T& m) {
  using std::cos;
  using std::round;
  using std::sin;
  const T pi = pi_v<T>();
  const T j = round(phi / pi);
  const T r = phi - j * pi;
  const T s = sin(r), c = cos(r);
  if (m == 1) return s + 2 * j;
  const T y = 1 - m * s * s;
  if (y < 0) throw DomainError("ellint_E: 1 - k^2 sin^2 phi < 0");
  T e = s * carlson_rf(c * c, y, T(1));
  if (s != 0) e -= m / 3 * s * s * s * carlson_rd(c * c, y, T(1));
  if (j != 0) e += 2 * j * ellint_E(m);
  return e;
}

// Heuman's Lambda0(phi, m) = (2/pi) [E F(phi, 1-m) + K E(phi, 1-m) - K F(phi, 1-m)].
// At m = 1 the bracket tends to phi (K E(phi,0) - K F(phi,0) vanishes identically).
template <class T>
T heuman_lambda0(const T& phi, const T& m) {
  const T pi = pi_v<T>();
  if (m < 0 || m > 1) throw DomainError("heuman_lambda0: need 0 <= k^2 <= 1");
  if (m == 1) return 2 * phi / pi;
  if (m == 0) return ellint_E(phi, T(1));  // E = K there, so the divergent F(phi, 1) drops out
  const T mc = 1 - m;
  const T K = ellint_K(m), E = ellint_E(m);
  const T F1 = ellint_F(phi, mc), E1 = ellint_E(phi, mc);
  return 2 / pi * (E * F1 + K * (E1 - F1));
}

// ---------------------------------------------------------------------------
// Curve geometry for P(zeta) = 2 (1 - zeta^2)(h + 1 - zeta) - j2^2.

template <class T>
struct EnergyMomentumT {
  T h = 0;
  T j2 = 0;
};
using EnergyMomentum = EnergyMomentumT<double>;

template <class T>
struct EllipticDataT {
  T h = 0, j2 = 0;
  T zeta0 = 0, zeta1 = 0, zeta2 = 0;
  T k2 = 0;
  T n_plus = 0, n_minus = 0;
  T c0 = 0, c1 = 0, c2 = 0, c3_plus = 0, c3_minus = 0;
  T phi = 0;
  T c1_tilde = 0;
  // 1 - k^2 below 1e-6: callers should prefer the Lambda0 representation.
  bool near_separatrix = false;
};
using EllipticData = EllipticDataT<double>;

template <class T>
T pendulum_cubic(const T& h, const T& j2, const T& z) {
  return 2 * (1 - z * z) * (h + 1 - z) - j2 * j2;
}

template <class T>
T pendulum_cubic_derivative(const T& h, const T& z) {
  return 6 * z * z - 4 * (h + 1) * z - 2;
}

// Roots ordered -1 <= zeta0 <= zeta1 <= 1 <= zeta2 via the trigonometric
// solution and two Newton steps, then all derived quantities.
template <class T>
EllipticDataT<T> cubic_roots(const T& h, const T& j2_in) {
  using std::abs;
  using std::acos;
  using std::asin;
  using std::cos;
  using std::sin;
  using std::sqrt;
  const T pi = pi_v<T>();
  const T j2 = j2_in;
  const T jj = j2 * j2;
  // Monic form z^3 + b z^2 + c z + d.
  const T b = -(h + 1);
  const T c = -1;
  const T d = (h + 1) - jj / 2;
  const T p = c - b * b / 3;  // always < 0 here
  const T q = 2 * b * b * b / 27 - b * c / 3 + d;
  const T disc = q * q / 4 + p * p * p / 27;
  const T scale = 1 + abs(h) + jj;
  const T tol = 64 * detail::eps_v<T>() * scale * scale * scale;
  if (disc > tol) {
    throw DomainError("cubic_roots: no real motion at h = " + detail::num_str(h) + ", j2 = " +
                      detail::num_str(j2) + " (cubic discriminant q^2/4 + p^3/27 = " +
                      detail::num_str(disc) + " > 0, only one real root)");
  }
  const T rr = sqrt(-p / 3);
  T arg = -q / (2 * rr * rr * rr);
  if (arg > 1) arg = 1;
  if (arg < -1) arg = -1;
  const T th = acos(arg) / 3;
  std::array<T, 3> z;
  for (int k = 0; k < 3; ++k) z[k] = 2 * rr * cos(th - 2 * pi * k / 3) - b / 3;
  for (auto& zi : z) {
    for (int it = 0; it < 2; ++it) {
      const T fp = pendulum_cubic_derivative(h, zi);
      if (abs(fp) < sqrt(detail::eps_v<T>())) break;  // double root: Newton stalls
      zi -= pendulum_cubic(h, j2, zi) / fp;
    }
  }
  std::sort(z.begin(), z.end());

  // Ordering -1 <= z0 <= z1 <= 1 <= z2; rounding-level violations are clamped.
  const T slack = 1e3 * sqrt(detail::eps_v<T>()) * scale;
  auto check = [&](bool ok, const char* what) {
    if (!ok) {
      throw DomainError(std::string("cubic_roots: no real motion at h = ") + detail::num_str(h) +
                        ", j2 = " + detail::num_str(j2) + " (violates " + what + ")");
    }
  };
  check(z[0] >= -1 - slack, "-1 <= zeta0");
  check(z[1] <= 1 + slack, "zeta1 <= 1");
  check(z[2] >= 1 - slack, "1 <= zeta2");
  if (z[0] < -1) z[0] = -1;
  if (z[1] > 1) z[1] = 1;
  if (z[2] < 1) z[2] = 1;
  if (z[1] < z[0]) z[1] = z[0];

  EllipticDataT<T> e;
  e.h = h;
  e.j2 = j2;
  e.zeta0 = z[0];
  e.zeta1 = z[1];
  e.zeta2 = z[2];
  const T span = z[2] - z[0];
  e.k2 = span > 0 ? (z[1] - z[0]) / span : T(0);
  e.n_plus = (z[1] - z[0]) / (1 - z[0]);
  // n_minus is unbounded on the axis zeta0 = -1, where c3_minus vanishes; 0 marks it.
  e.n_minus = (1 + z[0]) > 0 ? (z[1] - z[0]) / (-1 - z[0]) : T(0);
  e.c0 = 4 / (pi * sqrt(2 * span));
  e.c1 = 1 + h - z[2];
  e.c2 = span;
  // Negative signs on c3: with the printed positive signs the Legendre form
  // misses quadrature by 2 j2 W.
  e.c3_plus = -jj / (4 * (1 - z[0]));
  e.c3_minus = (1 + z[0]) > 0 ? -jj / (4 * (1 + z[0])) : T(0);
  const T gap = z[2] - z[1];
  if (gap > 0) {
    T s2 = (jj / 2 - z[1] - z[0]) / gap;
    if (s2 < 0) s2 = 0;
    if (s2 > 1) s2 = 1;
    e.phi = pi - asin(sqrt(s2));
  } else {
    e.phi = pi / 2;
  }
  const T aj = abs(j2);
  e.c1_tilde = h + 1 - z[2] - jj / (4 * (1 + z[2])) -
               aj / 2 * sqrt((z[2] - 1) * gap / (2 * (z[2] + 1))) * sin(e.phi);
  e.near_separatrix = (1 - e.k2) < T(1e-6);
  return e;
}

}  // namespace pendinv
