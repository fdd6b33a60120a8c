#include <random>

#include "doctest.h"
#include "pendinv/series.hpp"
#include "pendinv/series_json.hpp"

using namespace pendinv;

namespace {

Rational q(long n, long d = 1) { return make_rational(n, d); }

Series2 random_series(std::mt19937_64& rng, int order, Series2::Labels vars = {"x", "y"},
                      bool zero_constant = false) {
  std::uniform_int_distribution<int> num(-9, 9);
  std::uniform_int_distribution<int> den(1, 7);
  Series2 s(order, vars);
  for (int d = 0; d <= order; ++d)
    for (int b = 0; b <= d; ++b) s.at(d - b, b) = q(num(rng), den(rng));
  if (zero_constant) s.at(0, 0) = 0;
  return s;
}

}  // namespace

TEST_CASE("rational is normalized with positive denominator") {
  const Rational r = make_rational(6, -4);
  CHECK(boost::multiprecision::denominator(r) == 2);
  CHECK(boost::multiprecision::numerator(r) == -3);
  CHECK(to_string(r) == "-3/2");
  CHECK(parse_rational("10/-4") == q(-5, 2));
}

TEST_CASE("arith examples") {
  const auto x = Series2::variable(0, 2, {"j1", "j2"});
  const auto one = Series2::constant(1, 2, {"j1", "j2"});
  const Series2 p = (one + x) * (one - x);
  CHECK(p.coeff(0, 0) == 1);
  CHECK(p.coeff(2, 0) == -1);
  CHECK(p.coeff(1, 0) == 0);

  const auto h = Series2::variable(0, 2, {"h", "j2"});
  const auto y = Series2::variable(1, 2, {"h", "j2"});
  const Series2 s = h * (h + y) + y * (y - h);
  Series2 expect(2, {"h", "j2"});
  expect.at(2, 0) = 1;
  expect.at(0, 2) = 1;
  CHECK(s == expect);

  Series2 f(2, {"j1", "j2"});
  f.at(1, 0) = 1;
  f.at(0, 2) = 3;
  const Series2 g = f * q(1, 16);
  CHECK(g.coeff(1, 0) == q(1, 16));
  CHECK(g.coeff(0, 2) == q(3, 16));
}

TEST_CASE("mismatched labels are rejected") {
  const auto a = Series2::variable(0, 3, {"h", "j2"});
  const auto b = Series2::variable(0, 3, {"j1", "j2"});
  CHECK_THROWS_AS(a + b, LabelError);
  CHECK_THROWS_AS(a * b, LabelError);
}

TEST_CASE("orders truncate to the minimum") {
  const auto a = Series2::variable(0, 5);
  const auto b = Series2::variable(1, 3);
  CHECK((a * b).order() == 3);
}

TEST_CASE("compose_first") {
  Series2 f(2, {"h", "j2"});
  f.at(2, 0) = 1;
  const Series2 g = Series2::variable(0, 2, {"j1", "j2"}) + Series2::variable(1, 2, {"j1", "j2"});
  Series2 fg = compose_first(f, g.relabeled({"j1", "j2"}));
  CHECK(fg.coeff(2, 0) == 1);
  CHECK(fg.coeff(1, 1) == 2);
  CHECK(fg.coeff(0, 2) == 1);

  SUBCASE("nonzero constant term is rejected") {
    const Series2 c = Series2::constant(1, 2, {"j1", "j2"}) + Series2::variable(0, 2, {"j1", "j2"});
    CHECK_THROWS_AS(compose_first(f.relabeled({"h", "j2"}), c), SeriesError);
  }
  SUBCASE("second labels must agree") {
    CHECK_THROWS_AS(compose_first(f, Series2::variable(0, 2, {"j1", "k"})), LabelError);
  }
}

TEST_CASE("pendulum J(h) composed with its inverse is the identity to order 2") {
  // J(h) = h - h^2/16, H(j) = j + j^2/16 + ...
  Series2 J(2, {"h", "j2"});
  J.at(1, 0) = 1;
  J.at(2, 0) = q(-1, 16);
  Series2 H(2, {"j1", "j2"});
  H.at(1, 0) = 1;
  H.at(2, 0) = q(1, 16);
  const Series2 r = compose_first(J, H);
  CHECK(r == Series2::variable(0, 2, {"j1", "j2"}));
}

TEST_CASE("invert_first") {
  SUBCASE("identity") {
    const auto h = Series2::variable(0, 6, {"h", "j2"});
    CHECK(invert_first(h) == h);
  }
  SUBCASE("pendulum quartic truncation") {
    Series2 f(4, {"h", "j2"});
    f.at(1, 0) = 1;
    f.at(2, 0) = q(-1, 16);
    f.at(3, 0) = q(3, 256);
    f.at(4, 0) = q(-25, 8192);
    const Series2 g = invert_first(f);
    // Independent oracle: solve f(g) = x order by order by hand.
    // g1 = 1; g2 = 1/16; g3 = 2*(1/16)^2 - 3/256 = -1/256 ... computed from
    // coefficient matching of f(g) = x:
    //   deg2: g2 - 1/16 = 0
    //   deg3: g3 - 2 g2/16 + 3/256 = 0            -> g3 = -1/256
    //   deg4: g4 - (g2^2 + 2 g3)/16 + 9 g2/256 - 25/8192 = 0
    const Rational g2 = q(1, 16);
    const Rational g3 = 2 * g2 / 16 - q(3, 256);
    const Rational g4 = (g2 * g2 + 2 * g3) / 16 - 9 * g2 / 256 + q(25, 8192);
    CHECK(g.coeff(1, 0) == 1);
    CHECK(g.coeff(2, 0) == g2);
    CHECK(g.coeff(3, 0) == g3);
    CHECK(g.coeff(4, 0) == g4);
    CHECK(compose_first(f, g) == Series2::variable(0, 4, {"h", "j2"}));
  }
  SUBCASE("non-unit linear coefficient is rejected") {
    Series2 f(3);
    f.at(1, 0) = 2;
    CHECK_THROWS_AS(invert_first(f), SeriesError);
  }
}

TEST_CASE("partial") {
  Series2 s(3, {"j1", "j2"});
  s.at(2, 0) = q(3, 32);
  s.at(0, 2) = q(9, 32);
  const Series2 d = partial(s, Var::second);
  CHECK(d.order() == 2);
  CHECK(d.coeff(0, 1) == q(9, 16));
  CHECK(d.coeff(1, 0) == 0);
  CHECK(partial(Series2::constant(5, 3), Var::first).is_zero_series());
}

TEST_CASE("evaluate") {
  const Series2 f = Series2::variable(0, 3) + Series2::variable(1, 3);
  CHECK(evaluate(f, 1.0, 2.0) == doctest::Approx(3.0));
  PrecisionScope prec(200);
  CHECK(evaluate(f, Real(1), Real(2)) == 3);
}

TEST_CASE("exp_series") {
  const Series1 zero(4);
  const Series1 e0 = exp_series(zero);
  CHECK(e0.coeff(0) == 1);
  for (int i = 1; i <= 4; ++i) CHECK(e0.coeff(i) == 0);

  const Series1 ex = exp_series(Series1::variable(3));
  CHECK(ex.coeff(0) == 1);
  CHECK(ex.coeff(1) == 1);
  CHECK(ex.coeff(2) == q(1, 2));
  CHECK(ex.coeff(3) == q(1, 6));

  Series1 bad(3);
  bad.at(0) = 1;
  CHECK_THROWS_AS(exp_series(bad), SeriesError);
}

TEST_CASE("log and pow invert exp") {
  Series1 f(6);
  f.at(1) = q(2, 3);
  f.at(2) = q(-1, 5);
  f.at(4) = 7;
  CHECK(log_series(exp_series(f)) == f);
  Series1 one_plus_x = Series1::variable(6);
  one_plus_x.at(0) = 1;
  const Series1 s = pow_series(one_plus_x, q(1, 2));
  CHECK(s.coeff(1) == q(1, 2));
  CHECK(s.coeff(2) == q(-1, 8));
  CHECK(s.coeff(3) == q(1, 16));
  CHECK(s * s == one_plus_x);
}

TEST_CASE("univariate reversion") {
  Series1 f(7, "q");
  f.at(1) = 1;
  f.at(2) = 6;
  f.at(3) = 24;
  f.at(4) = 76;
  const Series1 g = reversion(f);
  CHECK(g.coeff(2) == -6);
  CHECK(g.coeff(3) == 48);
  CHECK(compose(f, g) == Series1::variable(7, "q"));
}

TEST_CASE("bivariate exp and reciprocal") {
  std::mt19937_64 rng(11);
  const Series2 g = random_series(rng, 5, {"x", "y"}, true);
  const Series2 e = exp_series(g);
  const Series2 e_neg = exp_series(-g);
  CHECK(e * e_neg == Series2::constant(1, 5));
  Series2 f = random_series(rng, 5);
  f.at(0, 0) = 3;
  CHECK(f * reciprocal(f) == Series2::constant(1, 5));
}

TEST_CASE("ring axioms on random series") {
  std::mt19937_64 rng(0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 6;
    const Series2 a = random_series(rng, n);
    const Series2 b = random_series(rng, n);
    const Series2 c = random_series(rng, n);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a * b == b * a);
    CHECK((a + b) - b == a);
  }
}

TEST_CASE("invert then compose is the identity for random invertible inputs") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + trial % 6;
    Series2 f = random_series(rng, n, {"h", "j2"}, true);
    f.at(1, 0) = 1;
    const Series2 g = invert_first(f);
    CHECK(compose_first(f, g) == Series2::variable(0, n, {"h", "j2"}));
  }
}

TEST_CASE("mixed partials commute") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const Series2 f = random_series(rng, 2 + trial % 7);
    CHECK(partial(partial(f, Var::first), Var::second) == partial(partial(f, Var::second), Var::first));
  }
}

TEST_CASE("evaluate is multiplicative up to truncation") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.05, 0.05);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 6;
    const Series2 a = random_series(rng, n);
    const Series2 b = random_series(rng, n);
    const double x = u(rng), y = u(rng);
    const double lhs = evaluate(a * b, x, y);
    const double rhs = evaluate(a, x, y) * evaluate(b, x, y);
    // Coefficients are bounded by 9, so the dropped tail is at most
    // sum_{d>n} (d+1)^2 81 r^d with r = |x|+|y|.
    const double r = std::abs(x) + std::abs(y);
    double bound = 0;
    for (int d = n + 1; d <= 2 * n; ++d) bound += 81.0 * (d + 1) * (d + 1) * std::pow(r, d);
    CHECK(std::abs(lhs - rhs) <= bound + 1e-15);
  }
}

TEST_CASE("JSON round trip") {
  std::mt19937_64 rng(4);
  const Series2 f = random_series(rng, 4, {"h", "j2"});
  const auto j = to_json(f);
  CHECK(j["order"] == 4);
  CHECK(j["vars"][0] == "h");
  CHECK(series2_from_json(j) == f);
  const Series1 s = exp_series(Series1::variable(5, "l"));
  CHECK(series1_from_json(to_json(s)) == s);
  CHECK(j["terms"][0]["num"].is_string());
}

TEST_CASE("format_by_degree factors each homogeneous part") {
  Series2 H(3, {"j1", "j2"});
  H.at(1, 0) = 1;
  H.at(2, 0) = q(1, 16);
  H.at(0, 2) = q(3, 16);
  H.at(3, 0) = q(-1, 256);
  H.at(1, 2) = q(-9, 256);
  const std::string s = format_by_degree(H);
  CHECK(s == "+ j1\n+ 1/16 (j1^2 + 3 j2^2)\n- 1/256 (j1^3 + 9 j1 j2^2)\n");
}
