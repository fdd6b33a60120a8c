#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include <boost/math/tools/roots.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>

#include "pendinv/actions.hpp"
#include "pendinv/normalform.hpp"

namespace pendinv {

// ----------------------------------------------------------------------- published S

const std::map<std::pair<int, int>, Rational>& published_S() {
  static const std::map<std::pair<int, int>, Rational> table = [] {
    std::map<std::pair<int, int>, Rational> t;
    t[{2, 0}] = make_rational(3, 32);
    t[{0, 2}] = make_rational(9, 32);
    t[{3, 0}] = make_rational(-5, 512);
    t[{1, 2}] = make_rational(-51, 512);
    t[{4, 0}] = make_rational(55, 32768);
    t[{2, 2}] = make_rational(1230, 32768);
    t[{0, 4}] = make_rational(271, 32768);
    // j2 = 0: the ordinary pendulum.
    t[{5, 0}] = make_rational(-189, 524288);
    t[{6, 0}] = make_rational(3689, 41943040);
    t[{7, 0}] = make_rational(-3129, 134217728);
    t[{8, 0}] = Rational(1575405) / Rational(Integer("240518168576"));
    return t;
  }();
  return table;
}

// ----------------------------------------------------------------------- fit

namespace {

using RVec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
using RMat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

struct RealPoly {
  std::vector<std::pair<int, int>> mono;
  std::vector<Real> coef;
  int order = 0;

  explicit RealPoly(const Series2& s) : order(s.order()) {
    for (int d = 0; d <= s.order(); ++d)
      for (int b = 0; b <= d; ++b)
        if (!s.coeff(d - b, b).is_zero()) {
          mono.emplace_back(d - b, b);
          coef.push_back(Real(s.coeff(d - b, b)));
        }
  }
  Real operator()(const std::vector<Real>& xp, const std::vector<Real>& yp) const {
    Real v = 0;
    for (std::size_t i = 0; i < coef.size(); ++i) v += coef[i] * xp[mono[i].first] * yp[mono[i].second];
    return v;
  }
};

std::vector<Real> powers(const Real& x, int n) {
  std::vector<Real> p(static_cast<std::size_t>(n) + 1);
  p[0] = 1;
  for (int i = 1; i <= n; ++i) p[i] = p[i - 1] * x;
  return p;
}

// Energy h on the torus with actions (j1, j2): Newton on j1 = J1(h, j2).
Real solve_h(const RealPoly& J, const RealPoly& Jh, const Real& j1, const Real& j2) {
  using boost::multiprecision::abs;
  const std::vector<Real> yp = powers(j2, J.order);
  const Real tol = std::numeric_limits<Real>::epsilon() * 64;
  Real h = j1;
  for (int it = 0; it < 100; ++it) {
    const std::vector<Real> hp = powers(h, J.order);
    const Real step = (J(hp, yp) - j1) / Jh(hp, yp);
    h -= step;
    if (abs(step) <= tol * (1 + abs(h))) return h;
  }
  throw ConvergenceError("fit_invariant_S: Newton for h did not converge");
}

}  // namespace

InvariantSeries fit_invariant_S(const FitOptions& opt) {
  if (opt.degree < 2 || opt.circles < 1 || opt.r_min <= 0 || opt.r_max < opt.r_min)
    throw DomainError("fit_invariant_S: bad options");
  const auto t0 = std::chrono::steady_clock::now();
  PrecisionScope prec(opt.precision_bits);

  // j1^a j2^b with b even (S is even in j2), total degree 1..D.
  std::vector<std::pair<int, int>> mono;
  for (int d = 1; d <= opt.degree; ++d)
    for (int b = 0; b <= d; b += 2) mono.emplace_back(d - b, b);
  const int n = static_cast<int>(mono.size());
  int per = opt.points_per_circle;
  if (per <= 0) {
    const int need = std::max(3 * n / opt.circles + 2, 2 * opt.degree + 3);
    per = 2 * ((need + 1) / 2);
  }
  const int rows = per * opt.circles;

  const Series2 Jser = J1_series(opt.j1_series_degree);
  const RealPoly J(Jser), Jh(partial(Jser, Var::first));

  const Real pi = pi_v<Real>();
  const Real rmax(opt.r_max);
  RMat A(rows, n);
  RVec rhs(rows);
  int row = 0;
  for (int c = 0; c < opt.circles; ++c) {
    const Real r = opt.circles == 1 ? Real(opt.r_min)
                                    : Real(opt.r_min) + (Real(opt.r_max) - Real(opt.r_min)) * c / (opt.circles - 1);
    for (int k = 0; k < per; ++k, ++row) {
      const Real t = 2 * pi * (Real(k) + Real(1) / 2) / per;
      const Real j1 = r * cos(t), j2 = r * sin(t);
      const Real h = solve_h(J, Jh, j1, j2);
      const Real I = 2 * pi * action_I1_quadrature(h, j2);
      const Real known = 8 - 2 * pi * abs(j2) + j2 * atan2(j2, j1) - j1 * log(r) + j1;
      rhs(row) = I - known;
      const std::vector<Real> xp = powers(j1 / rmax, opt.degree), yp = powers(j2 / rmax, opt.degree);
      for (int i = 0; i < n; ++i) A(row, i) = xp[mono[i].first] * yp[mono[i].second];
    }
  }
  // Columns carry the r_max^-d scaling, undone below.
  const RVec x = A.colPivHouseholderQr().solve(rhs);
  const RVec res = A * x - rhs;

  InvariantSeries out;
  out.samples = rows;
  out.unknowns = n;
  out.precision_bits = opt.precision_bits;
  for (int i = 0; i < rows; ++i) out.residual_max = std::max(out.residual_max, static_cast<double>(abs(res(i))));

  const auto& pub = published_S();
  out.S_poly = Series2(opt.degree, {"j1", "j2"});
  for (int i = 0; i < n; ++i) {
    const auto [a, b] = mono[i];
    Real v = x(i);
    for (int d = 0; d < a + b; ++d) v /= rmax;
    FittedCoefficient fc;
    fc.a = a;
    fc.b = b;
    fc.value = static_cast<double>(v);
    fc.value_text = v.str(36, std::ios_base::scientific);
    if (a == 1 && b == 0) {
      out.ln32_fitted = fc.value;
      out.ln32_error = std::abs(fc.value - std::log(32.0));
      out.coefficients.push_back(fc);
      continue;  // j1 ln 32 is kept symbolic
    }
    if (auto it = pub.find({a, b}); it != pub.end()) {
      fc.published = it->second;
      const double gap = std::abs(fc.value - static_cast<double>(it->second));
      fc.snapped = gap <= kSnapTolerance;
      char buf[160];
      std::snprintf(buf, sizeof buf, "j1^%d j2^%d: fitted %.12g, published %s, |diff| %.3g -> %s", a, b, fc.value,
                    to_string(it->second).c_str(), gap, fc.snapped ? "snapped" : "kept fitted");
      out.snap_log.emplace_back(buf);
    }
    out.S_poly.at(a, b) = fc.snapped ? *fc.published : Rational(fc.value);
    out.coefficients.push_back(fc);
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  double smallest = std::numeric_limits<double>::infinity();
  for (const auto& c : out.coefficients)
    if (c.a + c.b >= 2 && c.a + c.b <= 4) smallest = std::min(smallest, std::abs(c.value));
  if (out.residual_max > 1e-3 * smallest) {
    throw ConvergenceError("fit_invariant_S: residual " + std::to_string(out.residual_max) +
                           " exceeds 1e-3 x smallest low-degree coefficient; raise precision or degree");
  }
  return out;
}

// ----------------------------------------------------------------------- model

namespace detail {

struct DPoly {
  std::vector<int> a, b;
  std::vector<double> c;
  int order = 0;

  DPoly() = default;
  explicit DPoly(const Series2& s) : order(s.order()) {
    for (int d = 0; d <= s.order(); ++d)
      for (int j = 0; j <= d; ++j)
        if (!s.coeff(d - j, j).is_zero()) {
          a.push_back(d - j);
          b.push_back(j);
          c.push_back(static_cast<double>(s.coeff(d - j, j)));
        }
  }
  double operator()(double x, double y) const {
    double xp[64], yp[64];
    const int n = std::min(order, 63);
    xp[0] = yp[0] = 1;
    for (int i = 1; i <= n; ++i) {
      xp[i] = xp[i - 1] * x;
      yp[i] = yp[i - 1] * y;
    }
    double v = 0;
    for (std::size_t i = 0; i < c.size(); ++i) v += c[i] * xp[a[i]] * yp[b[i]];
    return v;
  }
};

struct ModelPolys {
  DPoly S, S1, S2, S11, S12, S22, J1, H, H1, A, A1, A2;
};

}  // namespace detail

namespace {

std::shared_ptr<const detail::ModelPolys> build_polys(const InvariantModel& m) {
  auto p = std::make_shared<detail::ModelPolys>();
  const Series2 s1 = partial(m.S_poly, Var::first), s2 = partial(m.S_poly, Var::second);
  p->S = detail::DPoly(m.S_poly);
  p->S1 = detail::DPoly(s1);
  p->S2 = detail::DPoly(s2);
  p->S11 = detail::DPoly(partial(s1, Var::first));
  p->S12 = detail::DPoly(partial(s1, Var::second));
  p->S22 = detail::DPoly(partial(s2, Var::second));
  p->J1 = detail::DPoly(m.J1);
  p->H = detail::DPoly(m.H);
  p->H1 = detail::DPoly(partial(m.H, Var::first));
  p->A = detail::DPoly(m.A);
  p->A1 = detail::DPoly(partial(m.A, Var::first));
  p->A2 = detail::DPoly(partial(m.A, Var::second));
  return p;
}

const double kLn32 = std::log(32.0);
const double kTwoPi = 2 * pi_v<double>();

double sgn0(double x) { return x < 0 ? -1.0 : 1.0; }

}  // namespace

InvariantModel InvariantModel::displayed() {
  InvariantModel m;
  m.S_poly = Series2(4, {"j1", "j2"});
  for (const auto& [k, v] : published_S())
    if (k.first + k.second <= 4) m.S_poly.at(k.first, k.second) = v;
  m.J1 = J1_series(4);
  m.H = birkhoff_by_inversion(10, false);
  m.A = A_series(4);
  m.label = "displayed";
  m.polys = build_polys(m);
  return m;
}

InvariantModel InvariantModel::fitted(const InvariantSeries& fit, int degree) {
  InvariantModel m;
  m.S_poly = fit.S_poly;
  m.J1 = J1_series(degree);
  m.H = birkhoff_by_inversion(2 * degree, false);
  m.A = A_series(degree);
  m.label = "fitted";
  m.polys = build_polys(m);
  return m;
}

double InvariantModel::S(double j1, double j2) const { return kLn32 * j1 + polys->S(j1, j2); }
double InvariantModel::S1(double j1, double j2) const { return kLn32 + polys->S1(j1, j2); }
double InvariantModel::S2(double j1, double j2) const { return polys->S2(j1, j2); }
double InvariantModel::j1_of(double h, double j2) const { return polys->J1(h, j2); }
double InvariantModel::h_of(double j1, double j2) const { return polys->H(j1, j2); }

double InvariantModel::action_2pi(double h, double j2) const { return action_2pi_j(j1_of(h, j2), j2); }

double InvariantModel::action_2pi_j(double j1, double j2) const {
  const double rho = std::hypot(j1, j2);
  if (rho == 0) return 8;
  return 8 - kTwoPi * std::abs(j2) + j2 * std::atan2(j2, j1) - j1 * std::log(rho) + j1 + S(j1, j2);
}

double InvariantModel::rotation_W(double j1, double j2) const {
  const double rho = std::hypot(j1, j2);
  if (rho == 0) throw DomainError("rotation_W: undefined at the critical value");
  const double A = polys->A(j1, j2);
  return (kTwoPi * sgn0(j2) - std::atan2(j2, j1) - A * std::log(rho) + A * S1(j1, j2) - S2(j1, j2)) / kTwoPi;
}

double InvariantModel::period_T(double j1, double j2) const {
  const double rho = std::hypot(j1, j2);
  if (rho == 0) throw DomainError("period_T: diverges at the critical value");
  return (-std::log(rho) + S1(j1, j2)) / polys->H1(j1, j2);
}

double InvariantModel::twist_2pi(double j1, double j2) const {
  const double r2 = j1 * j1 + j2 * j2;
  if (r2 == 0) throw DomainError("twist: undefined at the critical value");
  const double lr = 0.5 * std::log(r2);
  const auto& p = *polys;
  const double A = p.A(j1, j2), A1 = p.A1(j1, j2), A2 = p.A2(j1, j2);
  const double s1 = S1(j1, j2), s11 = p.S11(j1, j2), s12 = p.S12(j1, j2), s22 = p.S22(j1, j2);
  // Partials of 2 pi W in j1 and j2.
  const double w1 = j2 / r2 - A1 * lr - A * j1 / r2 + A1 * s1 + A * s11 - s12;
  const double w2 = -j1 / r2 - A2 * lr - A * j2 / r2 + A2 * s1 + A * s12 - s22;
  return -A * w1 + w2;
}

double rotation_W_model(double j1, double j2) {
  static const InvariantModel m = InvariantModel::displayed();
  return m.rotation_W(j1, j2);
}

double period_T_model(double j1, double j2) {
  static const InvariantModel m = InvariantModel::displayed();
  return m.period_T(j1, j2);
}

double I1_expansion_displayed(double h, double j2) {
  const double r2 = h * h + j2 * j2, rho = std::sqrt(r2);
  if (rho == 0) return 8;
  static const detail::DPoly J(J1_series(4));
  return 8 - kTwoPi * std::abs(j2) + j2 * std::atan2(j2, h) + J(h, j2) * std::log(32 / rho) + h +
         3.0 / 32 * (h * h + 3 * j2 * j2) -
         h * (6 * h * h * h * h + 43 * j2 * j2 * h * h + 39 * j2 * j2 * j2 * j2) / (256 * r2);
}

double W_expansion_displayed(double h, double j2) {
  const double r2 = h * h + j2 * j2, rho = std::sqrt(r2);
  if (rho == 0) throw DomainError("rotation-number expansion: undefined at the critical value");
  const double v = kTwoPi * sgn0(j2) - std::atan2(j2, h) +
                   0.375 * j2 * (1 - 5 * h / 16 + 35 * r2 / 256) * std::log(32 / rho) -
                   j2 / 8 * (5 * h * h + 6 * j2 * j2) / r2 +
                   j2 * h / 256 * (77 * h * h * h * h + 174 * j2 * j2 * h * h + 93 * j2 * j2 * j2 * j2) / (r2 * r2);
  return v / kTwoPi;
}

WExpansionReport W_expansion_check(double tolerance) {
  WExpansionReport rep;
  const Series2 L = W_log_coefficient(3);
  rep.log_coefficient_leading = L.coeff(0, 1) == make_rational(3, 8) && L.coeff(1, 0) == 0 && L.coeff(0, 0) == 0;
  // (3/8) j2 (1 - 5h/16 + 35 (h^2 + j2^2)/256)
  Series2 bracket(3, {"h", "j2"});
  bracket.at(0, 1) = make_rational(3, 8);
  bracket.at(1, 1) = make_rational(3, 8) * make_rational(-5, 16);
  bracket.at(2, 1) = make_rational(3, 8) * make_rational(35, 256);
  bracket.at(0, 3) = make_rational(3, 8) * make_rational(35, 256);
  rep.log_coefficient_bracket = L == bracket;

  const ASeries a = A_series_both(6);
  rep.reproduces_A = compose_first(W_log_coefficient(6), birkhoff_by_inversion(14, false)).with_order(6) == a.ratio_route;

  rep.max_grid_error = 0;
  for (double r : {0.01, 0.03, 0.05, rep.grid_radius})
    for (int k = 0; k < 36; ++k) {
      const double t = 2 * pi_v<double>() * (k + 0.5) / 36;
      const double h = r * std::cos(t), j2 = r * std::sin(t);
      rep.max_grid_error = std::max(rep.max_grid_error, std::abs(rotation_W_numeric(h, j2) - W_expansion_displayed(h, j2)));
    }
  rep.grid_ok = rep.max_grid_error < tolerance;
  return rep;
}

// ----------------------------------------------------------------------- twist

double twist_polar(const InvariantModel& m, double r, double s) {
  return m.twist_2pi(r * std::sin(s), r * std::cos(s));
}

double twistless_curve(const InvariantModel& m, double r) {
  const double lo = -pi_v<double>() / 2 + 1e-9, hi = pi_v<double>() / 2 - 1e-9;
  const int n = 400;
  double best = std::numeric_limits<double>::quiet_NaN();
  double prev_s = lo, prev_v = twist_polar(m, r, lo);
  for (int i = 1; i <= n; ++i) {
    const double s = lo + (hi - lo) * i / n;
    const double v = twist_polar(m, r, s);
    if ((prev_v <= 0) != (v <= 0)) {
      auto f = [&](double x) { return twist_polar(m, r, x); };
      std::uintmax_t it = 100;
      const auto br = boost::math::tools::toms748_solve(f, prev_s, s, prev_v, v,
                                                        boost::math::tools::eps_tolerance<double>(50), it);
      const double root = 0.5 * (br.first + br.second);
      if (std::isnan(best) || std::abs(root) < std::abs(best)) best = root;
    }
    prev_s = s;
    prev_v = v;
  }
  if (std::isnan(best)) throw ConvergenceError("twistless_curve: twist has no sign change at this radius");
  return best;
}

double W_star(const InvariantModel& m, double r) {
  const double s = twistless_curve(m, r);
  return m.rotation_W(r * std::sin(s), r * std::cos(s));
}

double W_star_approx(double r) { return 0.75 + 3 * r / (8 * pi_v<double>()) * (std::log(32 / r) - 2.5); }

// ----------------------------------------------------------------------- monodromy

MonodromyResult monodromy_check(double r, int steps, bool counterclockwise) {
  if (steps < 16 || r <= 0) throw DomainError("monodromy_check: need r > 0 and at least 16 steps");
  MonodromyResult out;
  out.steps = steps;
  out.counterclockwise = counterclockwise;
  const double dir = counterclockwise ? 1 : -1;
  const double dth = kTwoPi / steps;
  // Start half a step off the top of the circle so no node lands on j2 = 0.
  const double th0 = pi_v<double>() / 2 + dth / 2;
  auto point = [&](int k) {
    const double th = th0 + dir * dth * k;
    return std::pair{r * std::cos(th), r * std::sin(th)};
  };
  std::vector<double> F;
  F.reserve(steps + 1);
  int n = 0;
  for (int k = 0; k <= steps; ++k) {
    const auto [h, j2] = point(k);
    const double I = action_I1(h, j2).value;
    if (k < 4) {
      F.push_back(I);
      continue;
    }
    // Cubic extrapolation from the last four values picks the branch.
    const std::size_t m = F.size();
    const double pred = 4 * F[m - 1] - 6 * F[m - 2] + 4 * F[m - 3] - F[m - 4];
    int best = n;
    double best_err = std::abs(I + n * j2 - pred);
    for (int c = n - 3; c <= n + 3; ++c) {
      const double e = std::abs(I + c * j2 - pred);
      if (e < best_err) {
        best = c;
        best_err = e;
      }
    }
    n = best;
    F.push_back(I + n * j2);
  }
  out.start_j2 = point(0).second;
  out.raw = (F.back() - F.front()) / out.start_j2;
  out.mu = static_cast<int>(std::lround(out.raw));
  if (std::abs(out.raw - out.mu) > 1e-6) {
    throw ConvergenceError("monodromy_check: continuation did not close on an integer shift (raw " +
                           std::to_string(out.raw) + ")");
  }
  return out;
}

// ----------------------------------------------------------------------- CSV

std::string scalar_csv_header() { return "h,j2,I1,J1,W,T,method"; }

std::string scalar_csv_row(double h, double j2) {
  auto num = [](auto f) {
    try {
      char b[40];
      std::snprintf(b, sizeof b, "%.17g", f());
      return std::string(b);
    } catch (const std::exception&) {
      return std::string("nan");
    }
  };
  const ActionValue I = action_I1(h, j2);
  std::string row;
  row += num([&] { return h; }) + "," + num([&] { return j2; }) + ",";
  row += num([&] { return I.value; }) + ",";
  row += num([&] { return action_J1_numeric(h, j2).value; }) + ",";
  row += num([&] { return rotation_W_numeric(h, j2); }) + ",";
  row += num([&] { return period_T_numeric(h, j2); }) + ",";
  row += to_string(I.method);
  return row;
}

}  // namespace pendinv
