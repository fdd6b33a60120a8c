#include <cmath>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/ellint_1.hpp>
#include <boost/math/special_functions/ellint_2.hpp>
#include <boost/math/special_functions/ellint_3.hpp>

#include "doctest.h"
#include "pendinv/elliptic.hpp"

using namespace pendinv;

namespace {

constexpr double kPi = 3.141592653589793238462643;

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

template <class F>
double gk(F f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-15);
}

}  // namespace

TEST_CASE("Carlson reference values") {
  // Values from Carlson's published test table.
  CHECK(rel(carlson_rf(1.0, 2.0, 0.0), 1.3110287771461) < 1e-13);
  CHECK(rel(carlson_rf(2.0, 3.0, 4.0), 0.58408284167715) < 1e-13);
  CHECK(rel(carlson_rc(0.0, 0.25), kPi) < 1e-15);
  CHECK(rel(carlson_rc(2.25, 2.0), std::log(2.0)) < 1e-15);
  CHECK(rel(carlson_rd(0.0, 2.0, 1.0), 1.7972103521034) < 1e-13);
  CHECK(rel(carlson_rd(2.0, 3.0, 4.0), 0.16510527294261) < 1e-12);
  CHECK(rel(carlson_rj(0.0, 1.0, 2.0, 3.0), 0.77688623778582) < 1e-13);
  CHECK(rel(carlson_rj(2.0, 3.0, 4.0, 5.0), 0.14297579667157) < 1e-12);
  CHECK_THROWS_AS(carlson_rf(0.0, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(carlson_rj(0.0, 1.0, 2.0, -1.0), DomainError);
}

TEST_CASE("complete integrals: trivial values and domain") {
  CHECK(ellint_K(0.0) == doctest::Approx(kPi / 2).epsilon(1e-16));
  CHECK(ellint_E(0.0) == doctest::Approx(kPi / 2).epsilon(1e-16));
  CHECK(ellint_E(1.0) == 1.0);
  CHECK(rel(ellint_Pi(0.0, 0.5), ellint_K(0.5)) < 1e-15);
  CHECK_THROWS_AS(ellint_K(1.0), DomainError);
  CHECK_THROWS_AS(ellint_Pi(0.3, 1.0), DomainError);
  CHECK_THROWS_AS(ellint_Pi(1.0, 0.3), DomainError);
  CHECK_THROWS_AS(ellint_E(1.5), DomainError);
}

TEST_CASE("complete integrals agree with Boost.Math to 1e-15 relative") {
  for (int i = 0; i <= 60; ++i) {
    const double m = (i == 60) ? 1 - 1e-10 : -0.5 + 1.5 * i / 60.0;
    if (m >= 1) continue;
    const double k = std::sqrt(std::abs(m));
    if (m < 0) continue;  // Boost takes the modulus, so negative m is skipped here
    CAPTURE(m);
    CHECK(rel(ellint_K(m), boost::math::ellint_1(k)) < 1e-15);
    CHECK(rel(ellint_E(m), boost::math::ellint_2(k)) < 1e-15);
  }
}

TEST_CASE("Legendre relation across a modulus grid") {
  for (int i = 1; i < 100; ++i) {
    const double m = i / 100.0;
    const double K = ellint_K(m), E = ellint_E(m);
    const double Kp = ellint_K(1 - m), Ep = ellint_E(1 - m);
    CHECK(std::abs(E * Kp + Ep * K - K * Kp - kPi / 2) < 1e-13);
  }
}

TEST_CASE("third kind against adaptive quadrature on a random grid") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> um(0.0, 0.99);
  std::uniform_real_distribution<double> un(-50.0, 0.95);
  for (int t = 0; t < 60; ++t) {
    const double m = um(rng), n = un(rng);
    const double quad = gk(
        [&](double th) {
          const double s2 = std::sin(th) * std::sin(th);
          return 1.0 / ((1 - n * s2) * std::sqrt(1 - m * s2));
        },
        0.0, kPi / 2);
    CAPTURE(m);
    CAPTURE(n);
    CHECK(std::abs(ellint_Pi(n, m) - quad) < 1e-11 * std::max(1.0, std::abs(quad)));
    CHECK(rel(ellint_Pi(n, m), boost::math::ellint_3(std::sqrt(m), n)) < 1e-13);
  }
}

TEST_CASE("incomplete integrals continue past pi/2") {
  const double m = 0.7;
  for (double phi : {-2.0, -0.3, 0.4, 1.2, 2.5, 4.0}) {
    CAPTURE(phi);
    const double F = gk([&](double t) { return 1 / std::sqrt(1 - m * std::sin(t) * std::sin(t)); }, 0, phi);
    const double E = gk([&](double t) { return std::sqrt(1 - m * std::sin(t) * std::sin(t)); }, 0, phi);
    CHECK(std::abs(ellint_F(phi, m) - F) < 1e-13);
    CHECK(std::abs(ellint_E(phi, m) - E) < 1e-13);
  }
}

TEST_CASE("Heuman Lambda0") {
  for (double m : {0.0, 0.2, 0.5, 0.9, 0.999}) CHECK(heuman_lambda0(kPi / 2, m) == doctest::Approx(1.0).epsilon(1e-13));
  for (double phi : {0.1, 0.7, 1.4, 2.2}) {
    // Parameter 1 reduces to 2 phi / pi; parameter 0 to int_0^phi |cos t| dt.
    CHECK(heuman_lambda0(phi, 1.0) == doctest::Approx(2 * phi / kPi).epsilon(1e-15));
    const double abs_cos = phi <= kPi / 2 ? std::sin(phi) : 2 - std::sin(phi);
    CHECK(heuman_lambda0(phi, 0.0) == doctest::Approx(abs_cos).epsilon(1e-13));
  }
  SUBCASE("quadrature oracle at (1.2, 0.9)") {
    const double phi = 1.2, m = 0.9, mc = 0.1;
    auto sn2 = [](double t) { return std::sin(t) * std::sin(t); };
    const double K = gk([&](double t) { return 1 / std::sqrt(1 - m * sn2(t)); }, 0, kPi / 2);
    const double E = gk([&](double t) { return std::sqrt(1 - m * sn2(t)); }, 0, kPi / 2);
    const double F1 = gk([&](double t) { return 1 / std::sqrt(1 - mc * sn2(t)); }, 0, phi);
    const double E1 = gk([&](double t) { return std::sqrt(1 - mc * sn2(t)); }, 0, phi);
    const double oracle = 2 / kPi * (E * F1 + K * E1 - K * F1);
    CHECK(std::abs(heuman_lambda0(phi, m) - oracle) < 1e-12);
  }
}

TEST_CASE("MPFR instantiation matches double") {
  PrecisionScope prec(256);
  const Real m("0.37");
  const Real K = ellint_K(m), E = ellint_E(m);
  const Real Kp = ellint_K(Real(1) - m), Ep = ellint_E(Real(1) - m);
  using boost::multiprecision::abs;
  CHECK(abs(E * Kp + Ep * K - K * Kp - pi_v<Real>() / 2) < Real("1e-70"));
  CHECK(std::abs(static_cast<double>(ellint_Pi(Real("-3.5"), m)) - ellint_Pi(-3.5, 0.37)) < 1e-15);
}

TEST_CASE("cubic_roots: degenerate values") {
  const EllipticData a = cubic_roots(0.0, 0.0);
  CHECK(a.zeta0 == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(a.zeta1 == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(a.zeta2 == doctest::Approx(1.0).epsilon(1e-7));
  const EllipticData b = cubic_roots(-2.0, 0.0);
  CHECK(b.zeta0 == doctest::Approx(-1.0).epsilon(1e-7));
  CHECK(b.zeta1 == doctest::Approx(-1.0).epsilon(1e-7));
  CHECK(b.zeta2 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(cubic_roots(-2.5, 0.0), DomainError);
  CHECK_THROWS_AS(cubic_roots(-1.9, 1.0), DomainError);
}

TEST_CASE("cubic_roots at (0.3, 0.2) and the small-energy root expansion") {
  const double h = 0.3, j2 = 0.2;
  const EllipticData e = cubic_roots(h, j2);
  for (double z : {e.zeta0, e.zeta1, e.zeta2}) CHECK(std::abs(pendulum_cubic(h, j2, z)) < 1e-14);
  CHECK(e.k2 == doctest::Approx((e.zeta1 - e.zeta0) / (e.zeta2 - e.zeta0)));
  // Expansion through second order. The printed expansion has the j2^2/(8r)
  // corrections with opposite signs on zeta1 and zeta2; with those signs the
  // error only shrinks like eps^2. The signs below come from one step of
  // perturbation at zeta = 1 and give the eps^3 behaviour.
  double prev = 0;
  for (double eps : {0.2, 0.1, 0.05}) {
    const double hh = h * eps, jj = j2 * eps, r = std::hypot(hh, jj);
    const EllipticData s = cubic_roots(hh, jj);
    const double z0 = -1 + jj * jj / 8;
    const double z1 = 1 + 0.5 * (hh - r) * (1 + jj * jj / (8 * r));
    const double z2 = 1 + 0.5 * (hh + r) * (1 - jj * jj / (8 * r));
    const double err = std::max({std::abs(s.zeta0 - z0), std::abs(s.zeta1 - z1), std::abs(s.zeta2 - z2)});
    CHECK(err < 2.0 * eps * eps * eps);
    if (prev > 0) CHECK(err < prev / 6);
    prev = err;
  }
}

TEST_CASE("cubic_roots: Vieta identities and ordering on the unit disk") {
  for (int i = -40; i <= 40; ++i)
    for (int k = -40; k <= 40; ++k) {
      const double h = i / 40.0, j2 = k / 40.0;
      if (h * h + j2 * j2 > 1) continue;
      CAPTURE(h);
      CAPTURE(j2);
      const EllipticData e = cubic_roots(h, j2);
      CHECK(-1 <= e.zeta0);
      CHECK(e.zeta0 <= e.zeta1);
      CHECK(e.zeta1 <= 1);
      CHECK(1 <= e.zeta2);
      CHECK(std::abs(e.zeta0 + e.zeta1 + e.zeta2 - (h + 1)) < 1e-13);
      CHECK(std::abs(e.zeta0 * e.zeta1 + e.zeta0 * e.zeta2 + e.zeta1 * e.zeta2 + 1) < 1e-13);
      CHECK(std::abs(e.zeta0 * e.zeta1 * e.zeta2 - (-(h + 1) + j2 * j2 / 2)) < 1e-13);
      CHECK(0 <= e.k2);
      CHECK(e.k2 <= 1);
    }
}
