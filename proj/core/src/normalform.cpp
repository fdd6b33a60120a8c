#include "pendinv/normalform.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace pendinv {

// ---------------------------------------------------------------------------
// PClassFunction

PClassFunction PClassFunction::monomial(int m, int a, int b, Rational c) {
  PClassFunction f;
  f.add({m, a, b}, c);
  return f;
}

Rational PClassFunction::coeff(int m, int a, int b) const {
  auto it = terms_.find({m, a, b});
  return it == terms_.end() ? Rational(0) : it->second;
}

void PClassFunction::add(const PKey& k, const Rational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(k, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

int PClassFunction::max_grade() const {
  int g = 0;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    g = first ? k.grade() : std::max(g, k.grade());
    first = false;
  }
  return g;
}

PClassFunction PClassFunction::grade_part(int grade) const {
  PClassFunction r;
  for (const auto& [k, c] : terms_)
    if (k.grade() == grade) r.terms_.emplace(k, c);
  return r;
}

PClassFunction PClassFunction::truncated(int max_grade) const {
  PClassFunction r;
  for (const auto& [k, c] : terms_)
    if (k.grade() <= max_grade) r.terms_.emplace(k, c);
  return r;
}

PClassFunction PClassFunction::kernel() const {
  PClassFunction r;
  for (const auto& [k, c] : terms_)
    if (k.m == 0) r.terms_.emplace(k, c);
  return r;
}

PClassFunction PClassFunction::range() const {
  PClassFunction r;
  for (const auto& [k, c] : terms_)
    if (k.m != 0) r.terms_.emplace(k, c);
  return r;
}

PClassFunction PClassFunction::d_theta() const {
  PClassFunction r;
  for (const auto& [k, c] : terms_)
    if (k.m != 0) r.add(k, c * k.m);
  return r;
}

PClassFunction PClassFunction::d_J1() const {
  PClassFunction r;
  for (const auto& [k, c] : terms_)
    if (k.a > 0) r.add({k.m, k.a - 1, k.b}, c * k.a);
  return r;
}

Series2 PClassFunction::to_series(int order) const {
  Series2 s(order, {"j1", "j2"});
  for (const auto& [k, c] : terms_) {
    if (k.m != 0) throw ConsistencyError("PClassFunction::to_series: theta1-dependent term present");
    if (k.a + k.b <= order) s.at(k.a, k.b) += c;
  }
  return s;
}

std::string PClassFunction::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << pendinv::to_string(c) << ")";
    if (k.a) os << "*J1^" << k.a;
    if (k.b) os << "*J2^" << k.b;
    if (k.m) os << "*e^(" << k.m << "t)";
  }
  return first ? "0" : os.str();
}

PClassFunction operator+(const PClassFunction& f, const PClassFunction& g) {
  PClassFunction r = f;
  for (const auto& [k, c] : g.terms_) r.add(k, c);
  return r;
}

PClassFunction operator-(const PClassFunction& f) {
  PClassFunction r;
  for (const auto& [k, c] : f.terms_) r.terms_.emplace(k, -c);
  return r;
}

PClassFunction operator-(const PClassFunction& f, const PClassFunction& g) { return f + (-g); }

PClassFunction operator*(const PClassFunction& f, const PClassFunction& g) {
  PClassFunction r;
  for (const auto& [kf, cf] : f.terms_)
    for (const auto& [kg, cg] : g.terms_) r.add({kf.m + kg.m, kf.a + kg.a, kf.b + kg.b}, cf * cg);
  return r;
}

PClassFunction operator*(const PClassFunction& f, const Rational& s) {
  PClassFunction r;
  if (s.is_zero()) return r;
  for (const auto& [k, c] : f.terms_) r.terms_.emplace(k, c * s);
  return r;
}

// ---------------------------------------------------------------------------
// Algebra

namespace {

using TermList = std::vector<std::pair<PKey, Rational>>;

// f_theta g_J1 - f_J1 g_theta for one pair of monomials collapses to
// cf cg (m_f a_g - a_f m_g) on the product monomial with one J1 removed.
PClassFunction bracket_terms(const TermList& f, const TermList& g) {
  PClassFunction r;
  for (const auto& [kf, cf] : f)
    for (const auto& [kg, cg] : g) {
      const int w = kf.m * kg.a - kf.a * kg.m;
      if (w == 0) continue;
      r.add({kf.m + kg.m, kf.a + kg.a - 1, kf.b + kg.b}, cf * cg * w);
    }
  return r;
}

TermList term_list(const PClassFunction& f) { return {f.terms().begin(), f.terms().end()}; }

Rational factorial(int n) {
  Rational r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

Rational binomial(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

}  // namespace

PClassFunction poisson_bracket(const PClassFunction& f, const PClassFunction& g) {
  return bracket_terms(term_list(f), term_list(g));
}

PClassFunction poisson_bracket_shuffled(const PClassFunction& f, const PClassFunction& g,
                                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  TermList tf = term_list(f);
  TermList tg = term_list(g);
  std::shuffle(tf.begin(), tf.end(), rng);
  std::shuffle(tg.begin(), tg.end(), rng);
  return bracket_terms(tf, tg);
}

HomologicalSolution homological_solve(const PClassFunction& h) {
  HomologicalSolution s;
  for (const auto& [k, c] : h.terms()) {
    if (k.m == 0)
      s.kernel.add(k, c);
    else
      s.generator.add(k, c / k.m);
  }
  return s;
}

PClassFunction seed_hamiltonian(int max_grade) {
  if (max_grade < 2) throw DomainError("seed_hamiltonian: grade must be at least 2");
  using P = PClassFunction;
  const P J1 = P::monomial(0, 1, 0);
  const P E = P::monomial(2, 0, 0);
  const P Jsq_over_E = P::monomial(-2, 2, 0) + P::monomial(-2, 0, 2);
  // q^2 - p^2 and rho^2 in integral-angle variables
  const P diff = E - Jsq_over_E;
  const P rho2 = (Jsq_over_E + E) * Rational(1, 2) - J1;

  P H = J1;
  if (max_grade >= 4) H = H - (diff * diff) * Rational(1, 8);
  // sqrt(1 - rho^2) - 1 + rho^2/2 = -sum_{n>=2} (2n-3)!!/(2n)!! rho^{2n}
  P rho_pow = rho2;
  Rational odd = 1;   // (2n-3)!!
  Rational even = 2;  // (2n)!!
  for (int n = 2; 2 * n <= max_grade; ++n) {
    rho_pow = rho_pow * rho2;
    if (n >= 3) odd *= 2 * n - 3;
    even *= 2 * n;
    H = H - rho_pow * (odd / even);
  }
  return H.truncated(max_grade);
}

// ---------------------------------------------------------------------------
// Deprit triangle

LieNormalForm lie_normalize_full(int max_grade, std::optional<std::uint64_t> shuffle_seed) {
  if (max_grade < 2) throw DomainError("lie_normalize: grade must be at least 2");
  const PClassFunction H = seed_hamiltonian(max_grade);
  const int nmax = (max_grade - 2) / 2;

  std::uint64_t counter = shuffle_seed.value_or(0);
  auto bracket = [&](const PClassFunction& f, const PClassFunction& g) {
    if (shuffle_seed) return poisson_bracket_shuffled(f, g, counter++);
    return poisson_bracket(f, g);
  };

  // T[i][j]: Deprit triangle entry; T[0][j] = j! H_{2j+2}.
  std::vector<std::vector<PClassFunction>> T(nmax + 1, std::vector<PClassFunction>(nmax + 1));
  for (int j = 0; j <= nmax; ++j) T[0][j] = H.grade_part(2 * j + 2) * factorial(j);
  std::vector<PClassFunction> W(nmax + 2);

  LieNormalForm out;
  out.max_grade = max_grade;
  out.kernels[2] = T[0][0];
  for (int n = 1; n <= nmax; ++n) {
    for (int i = 1; i <= n; ++i) {
      const int j = n - i;
      PClassFunction acc = T[i - 1][j + 1];
      for (int k = 0; k <= j; ++k) {
        if (W[k + 1].empty()) continue;
        acc = acc + bracket(T[i - 1][j - k], W[k + 1]) * binomial(j, k);
      }
      T[i][j] = acc;
    }
    const HomologicalSolution sol = homological_solve(T[n][0]);
    W[n] = sol.generator;
    const PClassFunction delta = bracket(T[0][0], W[n]);
    for (int i = 1; i <= n; ++i) T[i][n - i] = T[i][n - i] + delta;
    if (!T[n][0].is_theta_free())
      throw ConsistencyError("lie_normalize: homological equation left theta1-dependent terms");
    out.kernels[2 * n + 2] = T[n][0] * (Rational(1) / factorial(n));
    out.generators[2 * n + 2] = W[n] * (Rational(1) / factorial(n - 1));
  }

  const int degree = max_grade / 2;
  Series2 Hs(degree, {"j1", "j2"});
  for (const auto& [g, K] : out.kernels) Hs += K.to_series(degree);
  out.H = Hs;
  return out;
}

Series2 lie_normalize(int max_grade) { return lie_normalize_full(max_grade).H; }

Series2 lie_normalize_sequential(int max_grade) {
  PClassFunction H = seed_hamiltonian(max_grade);
  for (int g = 4; g <= max_grade; g += 2) {
    const PClassFunction W = homological_solve(H.grade_part(g)).generator;
    if (W.empty()) continue;
    PClassFunction result = H;
    PClassFunction term = H;
    for (int k = 1;; ++k) {
      term = poisson_bracket(term, W).truncated(max_grade) * Rational(1, k);
      if (term.empty()) break;
      result = result + term;
    }
    H = result;
  }
  if (!H.is_theta_free())
    throw ConsistencyError("lie_normalize_sequential: theta1-dependent terms remain");
  return H.to_series(max_grade / 2);
}

// ---------------------------------------------------------------------------
// Linear normal form

namespace {

Mat4 zero4() {
  Mat4 m;
  for (auto& row : m) row.fill(Rational(0));
  return m;
}

Mat4 mul4(const Mat4& a, const Mat4& b) {
  Mat4 r = zero4();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) r[i][j] += a[i][k] * b[k][j];
  return r;
}

Mat4 transpose4(const Mat4& a) {
  Mat4 r = zero4();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r[i][j] = a[j][i];
  return r;
}

Mat4 scale4(const Mat4& a, const Rational& s) {
  Mat4 r = a;
  for (auto& row : r)
    for (auto& x : row) x *= s;
  return r;
}

int rank4(Mat4 a) {
  int rank = 0;
  for (int col = 0; col < 4 && rank < 4; ++col) {
    int piv = -1;
    for (int r = rank; r < 4; ++r)
      if (!a[r][col].is_zero()) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    std::swap(a[piv], a[rank]);
    for (int r = 0; r < 4; ++r) {
      if (r == rank || a[r][col].is_zero()) continue;
      const Rational f = a[r][col] / a[rank][col];
      for (int c = 0; c < 4; ++c) a[r][c] -= f * a[rank][c];
    }
    ++rank;
  }
  return rank;
}

}  // namespace

LinearNFData verify_linear_nf() {
  LinearNFData d;
  d.J4 = zero4();
  d.J4[0][1] = 1;
  d.J4[1][0] = -1;
  d.J4[2][3] = 1;
  d.J4[3][2] = -1;

  // H2 = nu (p_xi^2 + p_eta^2)/2 - nu (xi^2 + eta^2)/2
  d.D2H = zero4();
  d.D2H[0][0] = -d.nu;
  d.D2H[1][1] = d.nu;
  d.D2H[2][2] = -d.nu;
  d.D2H[3][3] = d.nu;

  // J1 = q1 p1 + q2 p2, J2 = x1 p2 - x2 p1
  d.D2J1 = zero4();
  d.D2J1[0][1] = d.D2J1[1][0] = 1;
  d.D2J1[2][3] = d.D2J1[3][2] = 1;
  d.D2J2 = zero4();
  d.D2J2[0][3] = d.D2J2[3][0] = 1;
  d.D2J2[1][2] = d.D2J2[2][1] = -1;

  // sqrt2 xi = q1 - p1, sqrt2 p_xi = q1 + p1, likewise for (eta, p_eta).
  d.M_sqrt2 = zero4();
  d.M_sqrt2[0][0] = 1;
  d.M_sqrt2[0][1] = -1;
  d.M_sqrt2[1][0] = 1;
  d.M_sqrt2[1][1] = 1;
  d.M_sqrt2[2][2] = 1;
  d.M_sqrt2[2][3] = -1;
  d.M_sqrt2[3][2] = 1;
  d.M_sqrt2[3][3] = 1;

  // M = M_sqrt2 / sqrt2, so M^t A M = (M_sqrt2^t A M_sqrt2) / 2.
  const Mat4 Mt = transpose4(d.M_sqrt2);
  auto congruence = [&](const Mat4& a) { return scale4(mul4(mul4(Mt, a), d.M_sqrt2), Rational(1, 2)); };
  d.symplectic = congruence(d.J4) == d.J4;
  d.preserves_J2 = congruence(d.D2J2) == d.D2J2;
  d.normalizes_H = congruence(d.D2H) == scale4(d.D2J1, d.nu);

  // Faddeev-LeVerrier for det(lambda I - A), A = J4 D2H.
  const Mat4 A = mul4(d.J4, d.D2H);
  Mat4 I = zero4();
  for (int i = 0; i < 4; ++i) I[i][i] = 1;
  d.charpoly[0] = 1;
  Mat4 Mk = zero4();
  for (int k = 1; k <= 4; ++k) {
    Mat4 AM = mul4(A, Mk);
    for (int i = 0; i < 4; ++i) AM[i][i] += d.charpoly[k - 1];
    Mk = AM;
    const Mat4 AMk = mul4(A, Mk);
    Rational tr = 0;
    for (int i = 0; i < 4; ++i) tr += AMk[i][i];
    d.charpoly[k] = -tr / k;
  }
  Mat4 Ap = A, Am = A;
  for (int i = 0; i < 4; ++i) {
    Ap[i][i] -= d.nu;
    Am[i][i] += d.nu;
  }
  d.multiplicity_plus = 4 - rank4(Ap);
  d.multiplicity_minus = 4 - rank4(Am);
  // (lambda^2 - nu^2)^2
  const Rational nu2 = d.nu * d.nu;
  d.eigen_ok = d.charpoly[1].is_zero() && d.charpoly[2] == -2 * nu2 && d.charpoly[3].is_zero() &&
               d.charpoly[4] == nu2 * nu2 && d.multiplicity_plus == 2 && d.multiplicity_minus == 2;

  if (!d.ok()) throw ConsistencyError("verify_linear_nf: Williamson transformation identities fail");
  return d;
}

// ---------------------------------------------------------------------------
// Canonical perturbation theory cross-check

CanonicalPTReport canonical_pt_cross_check() {
  using P = PClassFunction;
  CanonicalPTReport r;
  r.H4 = seed_hamiltonian(4).grade_part(4);
  r.average = r.H4.kernel();
  r.oscillating = r.H4 - r.average;
  for (const auto& [k, c] : r.oscillating.terms()) r.S1_computed.add(k, c / k.m);

  const P J1 = P::monomial(0, 1, 0);
  const P Jsq = P::monomial(0, 2, 0) + P::monomial(0, 0, 2);
  r.S1_displayed = Jsq * Jsq * P::monomial(-4, 0, 0, Rational(5, 128)) +
                   J1 * Jsq * P::monomial(-2, 0, 0, Rational(1, 16)) -
                   J1 * P::monomial(2, 0, 0, Rational(1, 16)) -
                   P::monomial(4, 0, 0, Rational(5, 128));

  r.W4 = lie_normalize_full(4).generators.at(4);
  r.average_ok = r.average == P::monomial(0, 2, 0, Rational(1, 16)) + P::monomial(0, 0, 2, Rational(3, 16));
  r.generator_matches = r.W4 == r.S1_computed;
  r.displayed_matches = r.S1_displayed == r.S1_computed;
  const P diff = r.S1_displayed - r.S1_computed;
  for (const auto& [k, c] : diff.terms()) r.displayed_mismatch.push_back(k);

  if (r.W4 == r.S1_computed)
    r.relation = "W4 = +S1 (S1 = integral of the oscillating part of H4)";
  else if (r.W4 == -r.S1_computed)
    r.relation = "W4 = -S1 (S1 = integral of the oscillating part of H4)";
  else
    r.relation = "W4 and S1 are not related by a sign";
  return r;
}

}  // namespace pendinv
