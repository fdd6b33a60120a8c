#include <chrono>
#include <random>

#include "doctest.h"
#include "pendinv/normalform.hpp"

using namespace pendinv;
using P = PClassFunction;

namespace {

Rational q(long n, long d = 1) { return make_rational(n, d); }

P J1() { return P::monomial(0, 1, 0); }
P Jsq() { return P::monomial(0, 2, 0) + P::monomial(0, 0, 2); }
P e(int m, Rational c = 1) { return P::monomial(m, 0, 0, c); }

// Grade-4 part written exactly as displayed for the integral-angle form.
P displayed_H4() {
  return Jsq() * Jsq() * e(-4, q(-5, 32)) + J1() * Jsq() * e(-2, q(1, 8)) +
         P::monomial(0, 2, 0, q(1, 16)) + P::monomial(0, 0, 2, q(3, 16)) + J1() * e(2, q(1, 8)) +
         e(4, q(-5, 32));
}

P displayed_W4() {
  return Jsq() * Jsq() * e(-4, q(5, 128)) - J1() * Jsq() * e(-2, q(1, 16)) +
         J1() * e(2, q(1, 16)) - e(4, q(5, 128));
}

Series2 displayed_H() {
  Series2 H(5, {"j1", "j2"});
  H.at(1, 0) = 1;
  H.at(2, 0) = q(1, 16);
  H.at(0, 2) = q(3, 16);
  H.at(3, 0) = q(-1, 256);
  H.at(1, 2) = q(-9, 256);
  H.at(4, 0) = q(5, 8192);
  H.at(2, 2) = q(102, 8192);
  H.at(0, 4) = q(33, 8192);
  H.at(5, 0) = q(-33, 262144);
  H.at(3, 2) = q(-1230, 262144);
  H.at(1, 4) = q(-813, 262144);
  return H;
}

P random_pclass(std::mt19937_64& rng, int grade) {
  std::uniform_int_distribution<int> c(-5, 5);
  P f;
  for (int k = 0; k <= grade; ++k)
    for (int b = 0; b <= k; b += 1) f.add({grade - 2 * k, k - b, b}, q(c(rng), 1 + (k % 3)));
  return f;
}

}  // namespace

TEST_CASE("seed Hamiltonian low grades") {
  const P H = seed_hamiltonian(8);
  CHECK(H.grade_part(2) == J1());
  CHECK(H.grade_part(3).empty());
  CHECK(H.grade_part(4) == displayed_H4());
  CHECK_THROWS_AS(seed_hamiltonian(1), DomainError);
  for (const auto& [k, c] : H.terms()) CHECK(k.b % 2 == 0);
}

TEST_CASE("Poisson bracket examples") {
  CHECK(poisson_bracket(J1(), P::monomial(0, 0, 1)).empty());
  for (int m : {-4, -2, 2, 4}) CHECK(poisson_bracket(J1(), e(m)) == e(m, Rational(-m)));
}

TEST_CASE("homological solve on H4") {
  const HomologicalSolution s = homological_solve(displayed_H4());
  CHECK(s.kernel == P::monomial(0, 2, 0, q(1, 16)) + P::monomial(0, 0, 2, q(3, 16)));
  CHECK(s.generator == displayed_W4());
  CHECK(s.generator.d_theta() == displayed_H4() - s.kernel);
  // With {f,g} = f_theta g_J1 - f_J1 g_theta the homological operator {H2, .}
  // is -d/dtheta1, so H4 - K4 is {W4, H2}.
  CHECK(poisson_bracket(s.generator, J1()) == displayed_H4() - s.kernel);
  CHECK(poisson_bracket(J1(), s.generator) == s.kernel - displayed_H4());

  const P flat = P::monomial(0, 3, 2, q(7, 3));
  const HomologicalSolution t = homological_solve(flat);
  CHECK(t.kernel == flat);
  CHECK(t.generator.empty());
}

TEST_CASE("bracket grading and kernel commutation") {
  std::mt19937_64 rng(5);
  for (int i = 2; i <= 6; ++i)
    for (int j = 2; j <= 6; ++j) {
      const P f = random_pclass(rng, i);
      const P g = random_pclass(rng, j);
      const P b = poisson_bracket(f, g);
      for (const auto& [k, c] : b.terms()) CHECK(k.grade() == i + j - 2);
      CHECK(poisson_bracket(f.kernel(), g.kernel()).empty());
      CHECK(poisson_bracket_shuffled(f, g, 99) == b);
    }
}

TEST_CASE("Lie normal form reproduces the displayed Birkhoff coefficients") {
  const auto t0 = std::chrono::steady_clock::now();
  const Series2 H = lie_normalize(10);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(H == displayed_H());
  CHECK(secs < 10.0);

  Series2 H4(2, {"j1", "j2"});
  H4.at(1, 0) = 1;
  H4.at(2, 0) = q(1, 16);
  H4.at(0, 2) = q(3, 16);
  CHECK(lie_normalize(4) == H4);
  CHECK(lie_normalize(6) == displayed_H().with_order(3));
  CHECK(lie_normalize(2) == Series2::variable(0, 1, {"j1", "j2"}));
}

TEST_CASE("Lie normal form is even in J2 and independent of evaluation order") {
  const LieNormalForm nf = lie_normalize_full(14);
  for (int d = 0; d <= nf.H.order(); ++d)
    for (int b = 1; b <= d; b += 2) CHECK(nf.H.coeff(d - b, b) == 0);
  CHECK(lie_normalize_full(14, 12345).H == nf.H);
  CHECK(lie_normalize_sequential(14) == nf.H);
}

TEST_CASE("each generator solves its homological equation") {
  const LieNormalForm nf = lie_normalize_full(12);
  CHECK(nf.generators.at(4) == displayed_W4());
  for (const auto& [g, W] : nf.generators) {
    for (const auto& [k, c] : W.terms()) {
      CHECK(k.m != 0);
      CHECK(k.grade() == g);
    }
    CHECK(nf.kernels.at(g).is_theta_free());
  }
}

TEST_CASE("linear normal form identities") {
  const LinearNFData d = verify_linear_nf();
  CHECK(d.symplectic);
  CHECK(d.preserves_J2);
  CHECK(d.normalizes_H);
  CHECK(d.charpoly[0] == 1);
  CHECK(d.charpoly[2] == -2);
  CHECK(d.charpoly[4] == 1);
  CHECK(d.multiplicity_plus == 2);
  CHECK(d.multiplicity_minus == 2);
}

TEST_CASE("canonical perturbation theory cross-check") {
  const CanonicalPTReport r = canonical_pt_cross_check();
  CHECK(r.average_ok);
  CHECK(r.oscillating == r.H4 - r.average);
  CHECK(r.generator_matches);
  CHECK(r.S1_computed.coeff(-4, 4, 0) == q(5, 128));
  // The printed generating function differs from the integral in the two
  // m = +-2 terms (J1 J^2 e^{-2 theta} expands to two monomials).
  CHECK_FALSE(r.displayed_matches);
  CHECK(r.displayed_mismatch.size() == 3);
  for (const PKey& k : r.displayed_mismatch) CHECK((k.m == 2 || k.m == -2));
  CHECK(r.relation.rfind("W4 = +S1", 0) == 0);
}
