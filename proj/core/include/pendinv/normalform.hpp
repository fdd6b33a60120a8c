#pragma once

// Lie-series Birkhoff normal form at the focus-focus point, in the algebra of
// finite sums Q(J1,J2) e^{m theta1}. Units are scaled so kappa = nu = 1.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "pendinv/series.hpp"

namespace pendinv {

// Monomial J1^a J2^b e^{m theta1}.
struct PKey {
  int m = 0;
  int a = 0;
  int b = 0;
  int grade() const { return 2 * (a + b) + m; }
  friend auto operator<=>(const PKey&, const PKey&) = default;
};

class PClassFunction {
 public:
  using Terms = std::map<PKey, Rational>;

  PClassFunction() = default;
  static PClassFunction monomial(int m, int a, int b, Rational c = Rational(1));

  const Terms& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  Rational coeff(int m, int a, int b) const;
  void add(const PKey& k, const Rational& c);

  // Highest and lowest grade present (0 for the zero function).
  int max_grade() const;
  PClassFunction grade_part(int grade) const;
  PClassFunction truncated(int max_grade) const;
  PClassFunction kernel() const;  // m == 0 terms
  PClassFunction range() const;   // m != 0 terms
  bool is_theta_free() const { return range().empty(); }

  PClassFunction d_theta() const;
  PClassFunction d_J1() const;

  // Kernel part as a series in (j1, j2); throws if any m != 0 term is present.
  Series2 to_series(int order) const;
  std::string to_string() const;

  friend bool operator==(const PClassFunction&, const PClassFunction&) = default;
  friend PClassFunction operator+(const PClassFunction& f, const PClassFunction& g);
  friend PClassFunction operator-(const PClassFunction& f, const PClassFunction& g);
  friend PClassFunction operator-(const PClassFunction& f);
  friend PClassFunction operator*(const PClassFunction& f, const PClassFunction& g);
  friend PClassFunction operator*(const PClassFunction& f, const Rational& s);

 private:
  Terms terms_;
};

// Seed Hamiltonian expanded through the given grade; grade 2 part is J1.
PClassFunction seed_hamiltonian(int max_grade);

// {f,g} = f_theta g_J1 - f_J1 g_theta.
PClassFunction poisson_bracket(const PClassFunction& f, const PClassFunction& g);
// Same result; products are accumulated in an order permuted by the seed.
PClassFunction poisson_bracket_shuffled(const PClassFunction& f, const PClassFunction& g,
                                        std::uint64_t seed);

struct HomologicalSolution {
  PClassFunction kernel;
  PClassFunction generator;  // dW/dtheta1 = h - kernel, no m == 0 terms
};
HomologicalSolution homological_solve(const PClassFunction& h);

struct LieNormalForm {
  Series2 H;                                // H(j1, j2), degree floor(grade/2)
  std::map<int, PClassFunction> kernels;    // K_i by grade
  std::map<int, PClassFunction> generators; // W_i by grade
  int max_grade = 0;
};

// Deprit triangle over the Q e^{m theta} algebra. If shuffle_seed is set,
// bracket accumulation order is permuted (the result must not change).
LieNormalForm lie_normalize_full(int max_grade, std::optional<std::uint64_t> shuffle_seed = {});
Series2 lie_normalize(int max_grade);
// Independent route: successive exp(L_W) transforms, one grade at a time.
Series2 lie_normalize_sequential(int max_grade);

using Mat4 = std::array<std::array<Rational, 4>, 4>;

struct LinearNFData {
  Mat4 J4;            // standard symplectic matrix, ordering (x1, p1, x2, p2)
  Mat4 D2H;           // Hessian of the quadratic Hamiltonian (xi, p_xi, eta, p_eta)
  Mat4 D2J1;
  Mat4 D2J2;
  Mat4 M_sqrt2;       // sqrt(2) * M, integer entries
  Rational nu = 1;
  std::array<Rational, 5> charpoly;  // coefficients of det(lambda I - J4 D2H), lambda^4 first
  int multiplicity_plus = 0;         // geometric multiplicities of +nu, -nu
  int multiplicity_minus = 0;
  bool symplectic = false;
  bool preserves_J2 = false;
  bool normalizes_H = false;
  bool eigen_ok = false;
  bool ok() const { return symplectic && preserves_J2 && normalizes_H && eigen_ok; }
};
// Builds the Williamson transformation and checks the three matrix identities
// exactly; throws ConsistencyError on failure.
LinearNFData verify_linear_nf();

struct CanonicalPTReport {
  PClassFunction H4;
  PClassFunction average;       // <H4>
  PClassFunction oscillating;   // {H4}
  PClassFunction S1_computed;   // integral of {H4} d theta1
  PClassFunction S1_displayed;  // as printed
  PClassFunction W4;            // Lie generator at grade 4
  bool average_ok = false;        // <H4> == J1^2/16 + 3 J2^2/16
  bool generator_matches = false; // W4 == S1_computed
  bool displayed_matches = false; // S1_displayed == S1_computed
  std::vector<PKey> displayed_mismatch;
  std::string relation;  // observed sign relation between W4 and S1
  bool ok() const { return average_ok && generator_matches; }
};
CanonicalPTReport canonical_pt_cross_check();

}  // namespace pendinv
