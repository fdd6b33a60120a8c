#include <cmath>
#include <thread>
#include <vector>

#include "doctest.h"
#include "pendinv/actions.hpp"
#include "pendinv/normalform.hpp"

using namespace pendinv;

namespace {

constexpr double kPi = 3.141592653589793238462643;

Rational q(long n, long d = 1) { return make_rational(n, d); }

}  // namespace

TEST_CASE("J1 residue series: displayed terms through degree 4") {
  const Series2 J = J1_series(4);
  CHECK(J.vars()[0] == "h");
  CHECK(J.coeff(0, 0) == 0);
  CHECK(J.coeff(1, 0) == 1);
  CHECK(J.coeff(0, 1) == 0);
  CHECK(J.coeff(2, 0) == q(-1, 16));
  CHECK(J.coeff(0, 2) == q(-3, 16));
  CHECK(J.coeff(3, 0) == q(3, 256));
  CHECK(J.coeff(1, 2) == q(15, 256));
  CHECK(J.coeff(4, 0) == q(-25, 8192));
  CHECK(J.coeff(2, 2) == q(-210, 8192));
  CHECK(J.coeff(0, 4) == q(-105, 8192));
}

TEST_CASE("J1 series is even in j2") {
  const Series2 J = J1_series(16);
  for (int d = 0; d <= 16; ++d)
    for (int b = 1; b <= d; b += 2) CHECK(J.coeff(d - b, b) == 0);
}

TEST_CASE("Birkhoff normal form by inversion") {
  SUBCASE("degree 2") {
    const Series2 H = birkhoff_by_inversion(4);
    CHECK(H.vars()[0] == "j1");
    CHECK(H.coeff(1, 0) == 1);
    CHECK(H.coeff(2, 0) == q(1, 16));
    CHECK(H.coeff(0, 2) == q(3, 16));
  }
  SUBCASE("H(J1(h, j2), j2) = h and J1(H) = j1") {
    for (int n : {3, 6, 9}) {
      const Series2 J = J1_series(n);
      const Series2 H = birkhoff_by_inversion(2 * n, false);
      CHECK(compose_first(J, H) == Series2::variable(0, n, {"j1", "j2"}));
      CHECK(compose_first(H.relabeled({"h", "j2"}), J.relabeled({"j1", "j2"})) ==
            Series2::variable(0, n, {"j1", "j2"}));
    }
  }
  SUBCASE("equals the Lie normal form at every grade up to 16") {
    for (int g = 2; g <= 16; ++g) {
      CAPTURE(g);
      CHECK_NOTHROW(birkhoff_by_inversion(g, true));
    }
  }
}

TEST_CASE("A series: both routes and the displayed terms") {
  const ASeries a = A_series_both(4);
  CHECK(a.agree);
  CHECK(a.ratio_route == a.residue_route);
  const Series2& A = a.ratio_route;
  CHECK(A.coeff(0, 1) == q(3, 8));
  CHECK(A.coeff(1, 1) == q(-15, 128));
  CHECK(A.coeff(2, 1) == q(45, 1024));
  CHECK(A.coeff(0, 3) == q(30, 1024));
  CHECK(A.coeff(3, 1) == q(-1125, 65536));
  CHECK(A.coeff(1, 3) == q(-1935, 65536));
  // j2 = 0 slice vanishes, A is odd in j2
  const Series2 A8 = A_series(8);
  for (int d = 0; d <= 8; ++d)
    for (int b = 0; b <= d; b += 2) CHECK(A8.coeff(d - b, b) == 0);
}

TEST_CASE("I1: three representations agree") {
  for (int i = -8; i <= 8; ++i)
    for (int k = -8; k <= 8; ++k) {
      const double h = 0.1 * i + 0.013, j2 = 0.1 * k + 0.007;
      if (h * h + j2 * j2 > 0.81) continue;
      CAPTURE(h);
      CAPTURE(j2);
      const double L = action_I1_legendre(h, j2);
      CHECK(std::abs(action_I1_lambda0(h, j2) - L) < 1e-10);
      CHECK(std::abs(action_I1_quadrature(h, j2) - L) < 1e-10);
    }
  CHECK(std::abs(action_I1(0.2, 0.1, ActionMethod::legendre_form).value -
                 action_I1(0.2, 0.1, ActionMethod::quadrature).value) < 1e-10);
}

TEST_CASE("I1 at the critical value and near the axis") {
  const ActionValue c = action_I1(0.0, 0.0);
  CHECK(2 * kPi * c.value == doctest::Approx(8.0).epsilon(1e-15));
  CHECK(c.flagged);
  // the automatic choice uses the Lambda0 form next to the axis
  const ActionValue a = action_I1(0.1, 1e-9);
  CHECK(a.method == ActionMethod::lambda0_form);
  CHECK(std::abs(a.value - action_I1_legendre(0.1, 0.0)) < 1e-8);
  CHECK_THROWS_AS(action_I1(0.1, 0.1, ActionMethod::contour), DomainError);
  CHECK_THROWS_AS(action_I1(-2.5, 0.0), DomainError);
}

TEST_CASE("I1 is even in j2") {
  for (double h : {-0.4, -0.05, 0.0, 0.2, 0.7})
    for (double j2 : {0.01, 0.1, 0.35}) {
      CHECK(std::abs(action_I1(h, j2).value - action_I1(h, -j2).value) < 1e-12);
    }
}

TEST_CASE("I1 MPFR instantiation") {
  PrecisionScope p(200);
  const Real h("0.13"), j2("0.21");
  const Real L = action_I1_legendre(h, j2), Q = action_I1_quadrature(h, j2), L0 = action_I1_lambda0(h, j2);
  using boost::multiprecision::abs;
  CHECK(abs(L - Q) < Real("1e-55"));
  CHECK(abs(L - L0) < Real("1e-55"));
}

TEST_CASE("J1 by contour integration") {
  const ActionValue z = action_J1_numeric(0.0, 0.0);
  CHECK(z.value == 0);
  CHECK(z.flagged);
  const Series2 J10 = J1_series(10);
  const ContourResult a = action_J1_contour(0.1, 0.0);
  CHECK(std::abs(a.value - evaluate(J10, 0.1, 0.0)) < 1e-9);
  const ContourResult b = action_J1_contour(0.1, 0.1);
  CHECK(std::abs(b.value - evaluate(J10, 0.1, 0.1)) < 1e-9);
  CHECK(std::abs(b.imag_residue) < 1e-10);
  const Series2 J30 = J1_series(30);
  for (auto [h, j2] : {std::pair{-0.2, 0.05}, {0.3, -0.2}, {0.05, 1e-4}}) {
    CAPTURE(h);
    const ContourResult c = action_J1_contour(h, j2);
    CHECK(std::abs(c.value - evaluate(J30, h, j2)) < 1e-12);
    CHECK(std::abs(c.imag_residue) < 1e-10);
  }
}

TEST_CASE("rotation number W") {
  SUBCASE("axis limits") {
    CHECK(rotation_W_numeric(0.1, 0.0) == 1.0);
    CHECK(rotation_W_numeric(-0.1, 0.0) == 0.5);
    CHECK(std::abs(rotation_W_numeric(0.1, 1e-9) - 1) < 1e-7);
    CHECK(std::abs(rotation_W_numeric(-0.1, 1e-9) - 0.5) < 1e-7);
    CHECK(std::abs(rotation_W_numeric(0.1, -1e-9) + 1) < 1e-7);
    CHECK(std::abs(rotation_W_numeric(-0.1, -1e-9) + 0.5) < 1e-7);
    CHECK_THROWS_AS(rotation_W_numeric(0.0, 0.0), DomainError);
  }
  SUBCASE("odd in j2") {
    for (double h : {-0.3, 0.0, 0.25})
      for (double j2 : {0.02, 0.3}) CHECK(rotation_W_numeric(h, -j2) == doctest::Approx(-rotation_W_numeric(h, j2)).epsilon(1e-14));
  }
  SUBCASE("equals -dI1/dj2") {
    CHECK(std::abs(rotation_W_numeric(0.05, 0.1) - rotation_W_finite_difference(0.05, 0.1)) < 1e-6);
    for (auto [h, j2] : {std::pair{0.3, 0.2}, {-0.2, 0.05}, {0.5, -0.3}, {-0.8, 0.4}})
      CHECK(std::abs(rotation_W_numeric(h, j2) - rotation_W_finite_difference(h, j2)) < 1e-6);
  }
}

TEST_CASE("reduced period T = 2 pi dI1/dh") {
  for (auto [h, j2] : {std::pair{0.1, 0.1}, {0.3, 0.2}, {-0.2, 0.05}, {0.5, -0.3}, {-0.8, 0.4}}) {
    CAPTURE(h);
    CHECK(std::abs(period_T_numeric(h, j2) - period_T_finite_difference(h, j2)) < 1e-9);
  }
  CHECK_THROWS_AS(period_T_numeric(0.0, 0.0), DomainError);
}

TEST_CASE("printed I1 expansion: error shrinks like eps^4") {
  for (double e : {0.2, 0.1, 0.05, 0.025}) {
    double mx = 0;
    for (int k = 0; k < 16; ++k) {
      const double t = 2 * kPi * (k + 0.5) / 16, h = e * std::cos(t), j2 = e * std::sin(t);
      mx = std::max(mx, std::abs(2 * kPi * action_I1(h, j2).value - I1_expansion_displayed(h, j2)));
    }
    CAPTURE(e);
    CHECK(mx < 0.05 * e * e * e * e);
  }
}

TEST_CASE("displayed model") {
  const InvariantModel m = InvariantModel::displayed();
  CHECK(m.S_poly.coeff(2, 0) == q(3, 32));
  CHECK(m.S_poly.coeff(2, 2) == q(1230, 32768));
  CHECK(m.rotation_W(-0.1, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(m.rotation_W(0.1, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(m.rotation_W(0.1, -0.2) == doctest::Approx(-m.rotation_W(0.1, 0.2)).epsilon(1e-14));
  const double j1 = 0.05, j2 = 0.1, h = m.h_of(j1, j2);
  CHECK(std::abs(m.rotation_W(j1, j2) - rotation_W_numeric(h, j2)) < 1e-4);
  CHECK(std::abs(m.period_T(j1, j2) - period_T_numeric(h, j2)) < 1e-4);
  CHECK(std::abs(rotation_W_model(j1, j2) - m.rotation_W(j1, j2)) < 1e-15);
  // T / ln(32/|j|) -> 1
  double prev = 1;
  for (double r : {1e-2, 1e-4, 1e-6}) {
    const double dev = std::abs(period_T_model(r * 0.6, r * 0.8) / std::log(32 / r) - 1);
    CHECK(dev < prev);
    prev = dev;
  }
  CHECK(prev < 1e-6);
  CHECK(std::abs(m.action_2pi(0.0, 0.0) - 8) < 1e-15);
  CHECK(std::abs(m.action_2pi(-0.1, 0.05) - 2 * kPi * action_I1(-0.1, 0.05).value) < 1e-4);
}

TEST_CASE("rotation-number expansion and its log coefficient") {
  const WExpansionReport r = W_expansion_check();
  CHECK(r.log_coefficient_leading);
  CHECK(r.log_coefficient_bracket);
  CHECK(r.reproduces_A);
  CHECK(r.max_grid_error < 1e-5);
  CHECK(r.ok());
  CHECK(std::abs(W_expansion_displayed(0.05, 0.05) - rotation_W_numeric(0.05, 0.05)) < 1e-5);
}

TEST_CASE("monodromy") {
  const MonodromyResult a = monodromy_check(0.3, 720);
  CHECK(std::abs(a.mu) == 1);
  CHECK(std::abs(a.raw - a.mu) < 1e-8);
  const MonodromyResult b = monodromy_check(0.3, 720, false);
  CHECK(b.mu == -a.mu);
  CHECK(monodromy_check(0.3, 1440).mu == a.mu);
  CHECK(monodromy_check(0.05, 720).mu == a.mu);
}

TEST_CASE("twist") {
  const InvariantModel m = InvariantModel::displayed();
  SUBCASE("analytic partials match differences of W") {
    const double a = 0.1, b = 0.2, d = 1e-6;
    const double w1 = (m.rotation_W(a + d, b) - m.rotation_W(a - d, b)) / (2 * d);
    const double w2 = (m.rotation_W(a, b + d) - m.rotation_W(a, b - d)) / (2 * d);
    CHECK(m.twist_2pi(a, b) == doctest::Approx(2 * kPi * (-evaluate(m.A, a, b) * w1 + w2)).epsilon(1e-7));
  }
  SUBCASE("polar leading form") {
    for (double r : {0.001, 0.01})
      for (double s : {-1.0, 0.0, 0.7}) {
        const double lead = -std::sin(s) / r + 0.375 * std::log(32 / r) - 15.0 / 16 - 0.375 * std::cos(2 * s);
        CHECK(std::abs(twist_polar(m, r, s) - lead) < 10 * r * std::log(32 / r));
      }
  }
  SUBCASE("twistless curve") {
    double prev = 1;
    for (double r : {0.1, 0.01, 0.001}) {
      const double s = std::abs(twistless_curve(m, r));
      CHECK(s < prev);
      prev = s;
    }
    for (double r = 0.05; r <= 0.75 + 1e-12; r += 0.05) CHECK_NOTHROW(twistless_curve(m, r));
    CHECK(std::abs(W_star(m, 0.1) / W_star_approx(0.1) - 1) < 0.05);
  }
  SUBCASE("rotation numbers with j1 > 0 lie in (3/4, 1]") {
    for (int i = 1; i <= 15; ++i)
      for (int k = 0; k <= 20; ++k) {
        const double r = 0.05 * i, s = kPi / 2 * k / 20;
        const double W = m.rotation_W(r * std::sin(s), r * std::cos(s));
        CHECK(W > 0.75);
        CHECK(W <= 1.0);
      }
  }
}

TEST_CASE("invariant fit at reduced size") {
  FitOptions o;
  o.degree = 10;
  o.precision_bits = 160;
  const InvariantSeries f = fit_invariant_S(o);
  CHECK(f.residual_max < 1e-9);
  CHECK(f.ln32_error < 1e-8);
  CHECK(f.unknowns == 35);
  int low = 0;
  for (const FittedCoefficient& c : f.coefficients) {
    if (c.a + c.b < 2 || c.a + c.b > 4) continue;
    ++low;
    REQUIRE(c.published.has_value());
    CHECK(c.snapped);
    CHECK(std::abs(c.value - static_cast<double>(*c.published)) < 1e-6);
    CHECK(f.S_poly.coeff(c.a, c.b) == *c.published);
  }
  CHECK(low == 7);
  // odd powers of j2 are never fitted
  for (const FittedCoefficient& c : f.coefficients) CHECK(c.b % 2 == 0);
  const InvariantModel m = InvariantModel::fitted(f, 10);
  CHECK(std::abs(m.action_2pi(-0.1, 0.05) - 2 * kPi * action_I1(-0.1, 0.05).value) < 1e-8);
}

TEST_CASE("CSV row") {
  CHECK(scalar_csv_header() == "h,j2,I1,J1,W,T,method");
  const std::string row = scalar_csv_row(0.1, 0.1);
  CHECK(row.rfind("0.10000000000000001,0.10000000000000001,", 0) == 0);
  CHECK(row.find("legendre_form") != std::string::npos);
  CHECK(scalar_csv_row(0.0, 0.0).find("nan") != std::string::npos);
}

TEST_CASE("MPFR sections are safe to run from several threads") {
  std::vector<double> serial, threaded(8);
  for (int i = 0; i < 8; ++i) serial.push_back(rotation_W_finite_difference(0.05 * (i + 1), 0.1));
  std::vector<std::thread> ts;
  for (int i = 0; i < 8; ++i)
    ts.emplace_back([&, i] { threaded[i] = rotation_W_finite_difference(0.05 * (i + 1), 0.1); });
  for (auto& t : ts) t.join();
  for (int i = 0; i < 8; ++i) CHECK(threaded[i] == serial[i]);
}
