#include "suites.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

#include "pendinv/actions.hpp"
#include "pendinv/dynamics.hpp"
#include "pendinv/normalform.hpp"
#include "pendinv/pendulum.hpp"

namespace pendinv::suites {

namespace {

constexpr double kPi = 3.141592653589793238462643;

// Tolerances and budgets for the acceptance criteria.
constexpr double kNormalFormSeconds = 10;
constexpr double kFitCoefficientTol = 1e-6;
constexpr double kFitResidualTol = 1e-9;
constexpr double kFitSeconds = 120;
constexpr double kErrorBoundHalf = 1.0e-4;
constexpr double kErrorBoundOne = 3.2e-3;
constexpr double kLegendreTol = 1e-12;
constexpr double kTriangleTol = 1e-4;
constexpr double kWExpansionTol = 1e-5;
constexpr double kWStarRelTol = 0.05;
constexpr double kClosureTol = 1e-6;

std::string fmt(const char* f, double a) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}
std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Rational q(long n, long d) { return make_rational(n, d); }

// Same bits on every platform, unlike std::uniform_real_distribution.
double unit(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

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

Result normal_form(const Options&) {
  Result r;
  const auto t0 = std::chrono::steady_clock::now();
  const Series2 H = lie_normalize(10);
  const double dt = elapsed(t0);
  const Series2 want = displayed_H();
  int bad = 0;
  for (int d = 0; d <= 5; ++d)
    for (int b = 0; b <= d; ++b)
      if (H.coeff(d - b, b) != want.coeff(d - b, b)) {
        ++bad;
        r.details.push_back("mismatch at j1^" + std::to_string(d - b) + " j2^" + std::to_string(b) + ": " +
                            to_string(H.coeff(d - b, b)));
      }
  r.details.push_back("H = " + format_series(H));
  r.details.push_back(fmt("lie_normalize(10): %.2f s", dt));
  r.pass = bad == 0 && H.order() == 5 && dt < kNormalFormSeconds;
  return r;
}

Result inversion(const Options&) {
  Result r;
  const auto t0 = std::chrono::steady_clock::now();
  const Series2 inv = invert_first(J1_series(10)).relabeled({"j1", "j2"});
  const Series2 lie = lie_normalize(20);
  const double dt = elapsed(t0);
  int compared = 0, bad = 0;
  for (int d = 0; d <= 10; ++d)
    for (int b = 0; b <= d; ++b, ++compared)
      if (inv.coeff(d - b, b) != lie.coeff(d - b, b)) ++bad;
  r.details.push_back(std::to_string(compared) + " coefficients compared through degree 10, " + std::to_string(bad) +
                      " differ");
  r.details.push_back(fmt("inversion + lie_normalize(20): %.2f s", dt));
  r.pass = bad == 0 && inv.order() == 10 && lie.order() == 10 && dt < kNormalFormSeconds;
  return r;
}

Result residue(const Options&) {
  Result r;
  const Series2 J = J1_series(4);
  Series2 want(4, {"h", "j2"});
  want.at(1, 0) = 1;
  want.at(2, 0) = q(-1, 16);
  want.at(0, 2) = q(-3, 16);
  want.at(3, 0) = q(3, 256);
  want.at(1, 2) = q(15, 256);
  want.at(4, 0) = q(-25, 8192);
  want.at(2, 2) = q(-210, 8192);
  want.at(0, 4) = q(-105, 8192);
  r.pass = J == want;
  r.details.push_back("J1 = " + format_series(J));
  return r;
}

Result fit(const Options& opt) {
  Result r;
  FitOptions fo;
  fo.precision_bits = opt.precision_bits;
  const InvariantSeries f = fit_invariant_S(fo);
  bool ok = f.residual_max < kFitResidualTol && f.ln32_error < kFitCoefficientTol && f.seconds < kFitSeconds;
  r.details.push_back(fmt("ln 32: fitted %.15f, error %.2e", f.ln32_fitted, f.ln32_error));
  int checked = 0;
  for (const FittedCoefficient& c : f.coefficients) {
    if (c.a + c.b < 2 || c.a + c.b > 4) continue;
    if (!c.published) {
      ok = false;
      continue;
    }
    ++checked;
    const double err = std::abs(c.value - static_cast<double>(*c.published));
    ok = ok && err < kFitCoefficientTol;
    r.details.push_back("j1^" + std::to_string(c.a) + " j2^" + std::to_string(c.b) + ": " + fmt("%.12g", c.value) +
                        " vs " + to_string(*c.published) + fmt("  |diff| %.1e", err));
  }
  r.details.push_back(fmt("residual %.2e, %.1f s", f.residual_max, f.seconds));
  r.details.push_back(std::to_string(f.samples) + " samples, " + std::to_string(f.unknowns) + " unknowns, " +
                      std::to_string(f.precision_bits) + " bits");
  r.pass = ok && checked == 7;
  return r;
}

// max over a 10 x 20 polar grid of radius R, in 2 pi I1 units and in I1 units.
std::pair<double, double> model_error(const InvariantModel& m, double R) {
  double mx = 0;
  for (int i = 1; i <= 10; ++i)
    for (int k = 0; k < 20; ++k) {
      const double rad = R * i / 10, ang = 2 * kPi * (k + 0.5) / 20;
      const double h = rad * std::cos(ang), j2 = rad * std::sin(ang);
      mx = std::max(mx, std::abs(2 * kPi * action_I1(h, j2).value - m.action_2pi(h, j2)));
    }
  return {mx, mx / (2 * kPi)};
}

Result error_bound(const Options&) {
  Result r;
  const InvariantModel m = InvariantModel::displayed();
  const auto [half, half_I] = model_error(m, 0.5);
  const auto [one, one_I] = model_error(m, 1.0);
  r.details.push_back(fmt("radius 1/2: max |2pi dI1| = %.3e (bound %.1e)", half, kErrorBoundHalf));
  r.details.push_back(fmt("radius 1:   max |2pi dI1| = %.3e (bound %.1e)", one, kErrorBoundOne));
  r.details.push_back(fmt("same grids in I1 units: %.3e and %.3e", half_I, one_I));
  r.pass = half <= kErrorBoundHalf && one <= kErrorBoundOne;
  return r;
}

Result legendre(const Options&) {
  Result r;
  double mx = 0;
  int n = 0;
  for (int i = 0; i < 50; ++i) {
    const double h = -1.9 + 6.9 * (i + 0.5) / 50;
    if (h == 0) continue;
    const PendulumQuadruple p = pendulum_quadruple(h);
    const double d = std::abs(legendre_defect(p));
    mx = std::max(mx, d);
    ++n;
    if (i % 7 == 0) r.details.push_back(fmt("h = %+.4f  IU - JT - 8 = %+.2e", h, legendre_defect(p)));
  }
  r.details.push_back(std::to_string(n) + fmt(" points, max defect %.2e", mx));
  r.pass = n == 50 && mx < kLegendreTol;
  return r;
}

Result nome(const Options&) {
  Result r;
  const NomeCheck c = nome_theta_check(7);
  const NomeSeries n = nome_from_invariant(7);
  const long want[] = {-6, 48, -436, 4254, -43452, 458192};
  bool coeffs = n.q_of_l.coeff(1) == 1;
  for (int d = 2; d <= 7; ++d) coeffs = coeffs && n.q_of_l.coeff(d) == want[d - 2];
  r.details.insert(r.details.end(), c.notes.begin(), c.notes.end());
  r.details.push_back(std::string("inverse ") + (c.inverse_matches ? "ok" : "FAIL") + ", integers " +
                      (c.integers ? "ok" : "FAIL") + ", round trip " + (c.roundtrip ? "ok" : "FAIL"));
  r.pass = c.ok() && coeffs;
  return r;
}

Result a_series(const Options&) {
  Result r;
  const ASeries a = A_series_both(4);
  const Series2& A = a.ratio_route;
  const bool shown = A.coeff(0, 1) == q(3, 8) && A.coeff(1, 1) == q(-15, 128) && A.coeff(2, 1) == q(45, 1024) &&
                     A.coeff(0, 3) == q(30, 1024) && A.coeff(3, 1) == q(-1125, 65536) &&
                     A.coeff(1, 3) == q(-1935, 65536);
  r.details.push_back("A = " + format_series(A));
  r.pass = a.agree && a.ratio_route == a.residue_route && shown;
  return r;
}

Result rotation(const Options&) {
  Result r;
  const auto grid = rotation_triangle_grid();
  double gap = 0;
  for (const WTriangle& w : grid) gap = std::max(gap, w.max_gap());
  const WExpansionReport c = W_expansion_check(kWExpansionTol);
  r.details.push_back(std::to_string(grid.size()) + fmt(" grid points, max pairwise gap %.2e", gap));
  r.details.push_back(fmt("expansion vs numeric W at |(h,j2)| <= %.2f: %.2e", c.grid_radius, c.max_grid_error));
  r.pass = grid.size() == 25 && gap < kTriangleTol && c.ok();
  return r;
}

Result monodromy(const Options&) {
  Result r;
  const MonodromyResult a = monodromy_check(0.3, 720);
  const MonodromyResult b = monodromy_check(0.3, 1440);
  r.details.push_back(fmt("720 steps: dI1/j2 = %+.10f", a.raw) + ", mu = " + std::to_string(a.mu));
  r.details.push_back(fmt("1440 steps: dI1/j2 = %+.10f", b.raw) + ", mu = " + std::to_string(b.mu));
  r.pass = std::abs(a.mu) == 1 && a.mu == b.mu;
  return r;
}

Result twist(const Options&) {
  Result r;
  const InvariantModel m = InvariantModel::displayed();
  bool exists = true;
  for (int i = 0; i <= 14; ++i) {
    const double rad = 0.05 * (i + 1);
    try {
      twistless_curve(m, rad);
    } catch (const std::exception&) {
      exists = false;
      r.details.push_back(fmt("no twistless torus at r = %.2f", rad));
    }
  }
  const double ws = W_star(m, 0.1), wa = W_star_approx(0.1);
  const double rel = std::abs(ws / wa - 1);
  r.details.push_back(fmt("r = 0.1: W on curve %.6f, approximation %.6f", ws, wa));
  double lo = 2, hi = -2;
  for (int i = 1; i <= 15; ++i)
    for (int k = 1; k <= 20; ++k) {
      const double rad = 0.05 * i, s = kPi / 2 * k / 20;
      const double W = m.rotation_W(rad * std::sin(s), rad * std::cos(s));
      lo = std::min(lo, W);
      hi = std::max(hi, W);
    }
  r.details.push_back(fmt("W for j1 > 0 spans [%.6f, %.6f]", lo, hi));
  r.pass = exists && rel < kWStarRelTol && lo > 0.75 && hi <= 1.0;
  return r;
}

Result orbits(const Options&) {
  Result r;
  const long P[] = {4, 3, 5, 2, 5, 3, 4, 7}, Q[] = {7, 5, 8, 3, 7, 4, 5, 8};
  bool ok = true;
  IntegrateOptions io;
  io.record = false;
  for (int i = 0; i < 8; ++i) {
    const std::string tag = std::to_string(P[i]) + "/" + std::to_string(Q[i]);
    try {
      const OrbitSearchResult o = periodic_orbit_search(P[i], Q[i], 0.75, io);
      ok = ok && o.closure_error < kClosureTol;
      r.details.push_back(tag + fmt(": s = %+.5f, closure %.1e", o.s, o.closure_error));
    } catch (const std::exception& e) {
      ok = false;
      r.details.push_back(tag + ": " + e.what());
    }
  }
  const auto two = periodic_orbits_at_energy(5, 6, 0.05, io);
  for (const auto& o : two) {
    ok = ok && o.closure_error < kClosureTol;
    r.details.push_back(fmt("5/6 at h = 0.05: j2 = %.6f, closure %.1e", o.j2, o.closure_error));
  }
  r.pass = ok && two.size() == 2;
  return r;
}

Result pendulum_series(const Options&) {
  Result r;
  const PendulumSeriesReport p = pendulum_series_check();
  r.details.push_back(fmt("J vs J1(h, 0): %.2e", p.J_vs_J1_series));
  r.details.push_back(fmt("truncation ratios I %.3g, T %.3g", p.I_truncation, p.T_truncation));
  r.details.push_back(fmt("U %.3g, S slice %.2e", p.U_truncation, p.S_slice));
  r.pass = p.ok();
  return r;
}

Result complex_nome(const Options&) {
  Result r;
  Series2 S(4, {"j1", "j2"});
  for (const auto& [k, v] : published_S())
    if (k.first + k.second <= 4 && k.first + k.second >= 2) S.at(k.first, k.second) = v;
  const ComplexSeries2 qh = complex_nome_series(4, S);
  const Series1 diag = restrict_diagonal(qh);
  const NomeSeries n = nome_from_invariant(4);
  r.details.push_back("q-hat = " + format_series(qh));
  r.pass = diag == n.q_of_l;
  return r;
}

// Seeded random points: I1 representations, W routes and the orbit W.
Result properties(const Options& opt) {
  Result r;
  std::mt19937_64 g(opt.seed);
  double i_gap = 0, w_gap = 0, o_gap = 0;
  for (int k = 0; k < 40; ++k) {
    const double rad = 0.02 + 0.6 * unit(g), ang = kPi * (0.02 + 0.96 * unit(g));
    const double h = rad * std::cos(ang), j2 = rad * std::sin(ang);
    const double a = action_I1(h, j2, ActionMethod::legendre_form).value;
    const double b = action_I1(h, j2, ActionMethod::lambda0_form).value;
    const double c = action_I1(h, j2, ActionMethod::quadrature).value;
    i_gap = std::max({i_gap, std::abs(a - b), std::abs(a - c)});
    const double W = rotation_W_numeric(h, j2);
    w_gap = std::max(w_gap, std::abs(W - rotation_W_finite_difference(h, j2)));
    if (k % 4 == 0) o_gap = std::max(o_gap, std::abs(W - rotation_W_orbit(h, j2)));
  }
  r.details.push_back("seed " + std::to_string(opt.seed));
  r.details.push_back(fmt("I1 methods: %.2e, W elliptic vs difference: %.2e", i_gap, w_gap));
  r.details.push_back(fmt("W elliptic vs orbit: %.2e", o_gap));
  r.pass = i_gap < 1e-10 && w_gap < 1e-7 && o_gap < 1e-8;
  return r;
}

}  // namespace

const std::vector<Suite>& all() {
  static const std::vector<Suite> s = {
      {"normal-form", 1, "Lie normal form reproduces the displayed H(j1, j2)", normal_form},
      {"inversion", 2, "series inversion of J1 equals the Lie normal form", inversion},
      {"residue", 3, "J1 residue series through degree 4", residue},
      {"fit", 4, "least-squares fit of the invariant S", fit},
      {"error-bound", 5, "model error of 2 pi I1 on the radius 1/2 and 1 disks", error_bound},
      {"legendre", 6, "pendulum IU - JT = 8 sweep", legendre},
      {"nome", 7, "nome from S vs theta-function inverse", nome},
      {"a-series", 8, "A(j1, j2) by two routes", a_series},
      {"rotation", 9, "rotation-number triangle and expansion", rotation},
      {"monodromy", 10, "monodromy of I1 around the focus-focus value", monodromy},
      {"twist", 11, "twistless curve and rotation-number range", twist},
      {"orbits", 12, "periodic orbits at r = 0.75 and h = 0.05", orbits},
      {"pendulum-series", 0, "pendulum series truncations and S on j2 = 0", pendulum_series},
      {"complex-nome", 0, "complex nome restricted to the diagonal", complex_nome},
      {"properties", 0, "seeded cross-route property checks", properties},
  };
  return s;
}

const Suite* find(const std::string& name) {
  for (const Suite& s : all())
    if (s.name == name) return &s;
  return nullptr;
}

Result run(const Suite& s, const Options& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  Result r;
  try {
    r = s.run(opt);
  } catch (const std::exception& e) {
    r.pass = false;
    r.details.push_back(std::string("exception: ") + e.what());
  }
  r.name = s.name;
  r.seconds = elapsed(t0);
  return r;
}

}  // namespace pendinv::suites
