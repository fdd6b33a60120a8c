#include "pendinv/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint/stepper/runge_kutta_fehlberg78.hpp>

#include "pendinv/actions.hpp"
#include "pendinv/elliptic.hpp"
#include "pendinv/errors.hpp"

namespace pendinv {

namespace {

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

using State6 = std::array<double, 6>;

State6 pack(const PhaseState& s) { return {s.r[0], s.r[1], s.r[2], s.p[0], s.p[1], s.p[2]}; }
PhaseState unpack(const State6& x) { return {{x[0], x[1], x[2]}, {x[3], x[4], x[5]}}; }

void rhs(const State6& x, State6& dx, double) {
  const Tangent t = vector_field(unpack(x));
  for (int i = 0; i < 3; ++i) {
    dx[i] = t.dr[i];
    dx[i + 3] = t.dp[i];
  }
}

// Back onto |r| = 1, (r, p) = 0.
void project(State6& x) {
  Vec3 r{x[0], x[1], x[2]}, p{x[3], x[4], x[5]};
  const double n = std::sqrt(dot(r, r));
  for (double& c : r) c /= n;
  const double rp = dot(r, p);
  for (int i = 0; i < 3; ++i) p[i] -= rp * r[i];
  x = {r[0], r[1], r[2], p[0], p[1], p[2]};
}

double zdot(const State6& x) { return vector_field(unpack(x)).dr[2]; }

double wrap(double a) {
  const double two_pi = 2 * pi_v<double>();
  a = std::fmod(a + pi_v<double>(), two_pi);
  if (a < 0) a += two_pi;
  return a - pi_v<double>();
}

class Stepper {
 public:
  Stepper(const IntegrateOptions& o, double dir) : opt_(o), dir_(dir) {}

  // One trial step; returns the error ratio (<= 1 accepts).
  double trial(const State6& x, double dt, State6& out) {
    State6 err;
    rk_.do_step(rhs, x, 0.0, out, dir_ * dt, err);
    double e = 0;
    for (int i = 0; i < 6; ++i) e = std::max(e, std::abs(err[i]) / (opt_.tol * (1 + std::abs(x[i]))));
    return e;
  }

  // Advance x by one accepted step of at most dt_max; updates the suggested dt.
  double step(State6& x, double& dt, double dt_max) {
    for (int tries = 0; tries < 200; ++tries) {
      const double h = std::min(dt, dt_max);
      State6 out;
      const double e = trial(x, h, out);
      if (e <= 1) {
        project(out);
        x = out;
        const double grow = e == 0 ? 4.0 : std::min(4.0, 0.9 * std::pow(e, -1.0 / 8));
        dt = std::min(opt_.max_step, h * grow);
        return h;
      }
      dt = h * std::max(0.1, 0.9 * std::pow(e, -1.0 / 8));
      if (dt < 1e-14) break;
    }
    throw ConvergenceError("integrate: step size underflow");
  }

  State6 plain(const State6& x, double dt) {
    State6 out, err;
    rk_.do_step(rhs, x, 0.0, out, dir_ * dt, err);
    project(out);
    return out;
  }

 private:
  IntegrateOptions opt_;
  double dir_;
  boost::numeric::odeint::runge_kutta_fehlberg78<State6> rk_;
};

struct Tracker {
  OrbitRecord& rec;
  const IntegrateOptions& opt;
  double h0, j0;

  void add(double t, const State6& x) {
    const PhaseState s = unpack(x);
    rec.energy_drift = std::max(rec.energy_drift, std::abs(s.energy() - h0));
    rec.momentum_drift = std::max(rec.momentum_drift, std::abs(s.momentum() - j0));
    rec.constraint_max = std::max(rec.constraint_max, s.constraint_residual());
    if (opt.record) {
      rec.t.push_back(t);
      rec.states.push_back(s);
      rec.trace.push_back(stereographic(s.r));
    }
  }
};

}  // namespace

Vec3 PhaseState::L() const { return cross(r, p); }

double PhaseState::energy() const {
  const Vec3 l = L();
  return 0.5 * dot(l, l) + r[2] / std::sqrt(dot(r, r)) - 1;
}

double PhaseState::momentum() const { return r[0] * p[1] - r[1] * p[0]; }

double PhaseState::constraint_residual() const {
  return std::max(std::abs(dot(r, r) - 1), std::abs(dot(r, p)));
}

Tangent vector_field(const PhaseState& s) {
  const Vec3 l = s.L();
  const double n = std::sqrt(dot(s.r, s.r));
  Tangent t;
  t.dr = cross(l, s.r);
  const Vec3 lp = cross(l, s.p);
  const double c = s.r[2] / (n * n * n);
  for (int i = 0; i < 3; ++i) t.dp[i] = lp[i] + c * s.r[i];
  t.dp[2] -= 1 / n;
  return t;
}

PhaseState turning_point_state(double h, double j2) {
  const EllipticData e = cubic_roots(h, j2);
  const double z = e.zeta1;
  const double sn = std::sqrt(std::max(0.0, 1 - z * z));
  if (sn == 0) throw DomainError("turning_point_state: the orbit passes through a pole (j2 = 0)");
  PhaseState s;
  s.r = {sn, 0, z};
  s.p = {0, j2 / sn, 0};
  return s;
}

std::array<double, 2> stereographic(const Vec3& r) {
  const double d = 1 + r[2];
  if (d <= 0) return {INFINITY, INFINITY};
  return {r[0] / d, r[1] / d};
}

OrbitRecord integrate(const PhaseState& s0, double t_end, const IntegrateOptions& opt) {
  if (opt.tol < 1e-13 || opt.tol > 1e-6) throw DomainError("integrate: tol must lie in [1e-13, 1e-6]");
  OrbitRecord rec;
  Tracker tr{rec, opt, s0.energy(), s0.momentum()};
  const double dir = t_end >= 0 ? 1 : -1;
  Stepper st(opt, dir);
  State6 x = pack(s0);
  double t = 0, dt = 1e-3;
  tr.add(t, x);
  while (dir * (t_end - t) > 0) {
    const double taken = st.step(x, dt, std::abs(t_end - t));
    t += dir * taken;
    ++rec.steps;
    tr.add(t, x);
  }
  if (!opt.record) {
    rec.t.push_back(t);
    rec.states.push_back(unpack(x));
  }
  return rec;
}

OrbitRecord integrate_periods(const PhaseState& s0, int periods, const IntegrateOptions& opt) {
  if (periods < 1) throw DomainError("integrate_periods: need at least one period");
  if (opt.tol < 1e-13 || opt.tol > 1e-6) throw DomainError("integrate: tol must lie in [1e-13, 1e-6]");
  OrbitRecord rec;
  Tracker tr{rec, opt, s0.energy(), s0.momentum()};
  Stepper st(opt, 1);
  State6 x = pack(s0);
  double t = 0, dt = 1e-3;
  double phi = std::atan2(x[1], x[0]);
  const double phi0 = phi;
  double g_prev = 0;
  tr.add(t, x);
  int found = 0;
  while (found < periods) {
    const State6 x_start = x;
    const double taken = st.step(x, dt, opt.max_step);
    ++rec.steps;
    const double g = zdot(x);
    if (g_prev > 0 && g <= 0) {
      // z maximum inside this step: find the step length that lands on it.
      auto f = [&](double tau) { return tau == 0 ? g_prev : zdot(st.plain(x_start, tau)); };
      std::uintmax_t it = 200;
      const auto br = boost::math::tools::toms748_solve(f, 0.0, taken, g_prev, g,
                                                        boost::math::tools::eps_tolerance<double>(52), it);
      const double tau = 0.5 * (br.first + br.second);
      x = st.plain(x_start, tau);
      t += tau;
      phi += wrap(std::atan2(x[1], x[0]) - std::atan2(x_start[1], x_start[0]));
      ++found;
      tr.add(t, x);
      g_prev = 0;  // ready for the next descent
      if (rec.steps > 50'000'000) throw ConvergenceError("integrate_periods: too many steps");
      continue;
    }
    t += taken;
    phi += wrap(std::atan2(x[1], x[0]) - std::atan2(x_start[1], x_start[0]));
    g_prev = g;
    tr.add(t, x);
  }
  rec.periods = periods;
  rec.T = t / periods;
  rec.dphi = (phi - phi0) / periods;
  rec.W = rec.dphi / (2 * pi_v<double>());
  const State6 a = pack(s0);
  double c = 0;
  for (int i = 0; i < 6; ++i) c += (x[i] - a[i]) * (x[i] - a[i]);
  rec.closure_error = std::sqrt(c);
  if (!opt.record) {
    rec.t.push_back(t);
    rec.states.push_back(unpack(x));
  }
  return rec;
}

double rotation_W_orbit(double h, double j2, double tol) {
  IntegrateOptions o;
  o.tol = tol;
  o.record = false;
  return integrate_periods(turning_point_state(h, j2), 1, o).W;
}

double energy_from_actions(double j1, double j2) {
  static const Series2 J = J1_series(40);
  static const Series2 Jh = partial(J, Var::first);
  double h = j1;
  for (int it = 0; it < 60; ++it) {
    const double step = (evaluate(J, h, j2) - j1) / evaluate(Jh, h, j2);
    h -= step;
    if (std::abs(step) < 1e-15 * (1 + std::abs(h))) return h;
  }
  throw ConvergenceError("energy_from_actions: Newton did not converge");
}

double j2_max(double h) {
  if (h <= -2) throw DomainError("j2_max: h <= -2");
  // Double root of the cubic inside [-1, 1]: 6 z^2 - 4 (h + 1) z - 2 = 0.
  const double b = h + 1;
  const double z = (4 * b - std::sqrt(16 * b * b + 48)) / 12;
  return std::sqrt(2 * (1 - z * z) * (b - z));
}

namespace {

OrbitSearchResult close_orbit(OrbitSearchResult res, const IntegrateOptions& opt) {
  const double target = static_cast<double>(res.p) / res.q;
  // Refine h at fixed j2 with the elliptic W so q periods close.
  auto f = [&](double h) { return rotation_W_numeric(h, res.j2) - target; };
  double lo = res.h - 0.02, hi = res.h + 0.02;
  const double hmin = -2 + 1e-9;
  lo = std::max(lo, hmin);
  double flo = f(lo), fhi = f(hi);
  for (int k = 0; k < 20 && flo * fhi > 0; ++k) {
    lo = std::max(hmin, lo - 0.02);
    hi += 0.02;
    flo = f(lo);
    fhi = f(hi);
  }
  if (flo * fhi > 0) throw ConvergenceError("periodic orbit: no bracket for the energy refinement");
  std::uintmax_t it = 200;
  const auto br = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi,
                                                    boost::math::tools::eps_tolerance<double>(52), it);
  res.h = 0.5 * (br.first + br.second);
  res.W_numeric = rotation_W_numeric(res.h, res.j2);
  res.orbit = integrate_periods(turning_point_state(res.h, res.j2), static_cast<int>(res.q), opt);
  res.closure_error = res.orbit.closure_error;
  if (res.closure_error >= 1e-6) {
    throw ConvergenceError("periodic orbit " + std::to_string(res.p) + "/" + std::to_string(res.q) +
                           ": closure error " + std::to_string(res.closure_error));
  }
  return res;
}

}  // namespace

OrbitSearchResult periodic_orbit_search(long p, long q, double r, const IntegrateOptions& opt) {
  if (q <= 0 || p <= 0) throw DomainError("periodic_orbit_search: need p, q > 0");
  const double target = static_cast<double>(p) / q;
  if (!(target > 0.5 && target < 1)) throw DomainError("periodic_orbit_search: W = p/q must lie in (1/2, 1) for j2 > 0");
  if (r <= 0 || r > 1) throw DomainError("periodic_orbit_search: need 0 < r <= 1");
  static const InvariantModel m = InvariantModel::displayed();
  auto W = [&](double s) { return m.rotation_W(r * std::sin(s), r * std::cos(s)) - target; };
  const double lo = -pi_v<double>() / 2 + 1e-9, hi = pi_v<double>() / 2 - 1e-9;
  const int n = 720;
  OrbitSearchResult res;
  res.p = p;
  res.q = q;
  res.r = r;
  std::optional<double> root;
  double s_prev = lo, w_prev = W(lo);
  for (int i = 1; i <= n; ++i) {
    const double s = lo + (hi - lo) * i / n;
    const double w = W(s);
    if ((w_prev < 0) != (w < 0)) {
      ++res.roots_on_circle;
      if (!root) {
        std::uintmax_t it = 200;
        const auto br = boost::math::tools::toms748_solve(W, s_prev, s, w_prev, w,
                                                          boost::math::tools::eps_tolerance<double>(50), it);
        root = 0.5 * (br.first + br.second);
      }
    }
    s_prev = s;
    w_prev = w;
  }
  if (!root) throw DomainError("periodic_orbit_search: W = p/q is not attained on this circle");
  res.s = *root;
  const double j1 = r * std::sin(res.s);
  res.j2 = r * std::cos(res.s);
  res.W_model = m.rotation_W(j1, res.j2);
  res.h = energy_from_actions(j1, res.j2);
  return close_orbit(res, opt);
}

std::vector<OrbitSearchResult> periodic_orbits_at_energy(long p, long q, double h, const IntegrateOptions& opt) {
  const double target = static_cast<double>(p) / q;
  const double top = j2_max(h);
  auto f = [&](double j2) { return rotation_W_numeric(h, j2) - target; };
  std::vector<OrbitSearchResult> out;
  const int n = 400;
  double a = top * 1e-4, fa = f(a);
  for (int i = 1; i <= n; ++i) {
    const double b = top * (1e-4 + (1 - 2e-4) * i / n), fb = f(b);
    if ((fa < 0) != (fb < 0)) {
      std::uintmax_t it = 200;
      const auto br = boost::math::tools::toms748_solve(f, a, b, fa, fb, boost::math::tools::eps_tolerance<double>(52), it);
      OrbitSearchResult res;
      res.p = p;
      res.q = q;
      res.j2 = 0.5 * (br.first + br.second);
      res.h = h;
      const double j1 = action_J1_numeric(h, res.j2).value;
      res.r = std::hypot(j1, res.j2);
      res.s = std::atan2(j1, res.j2);
      res.W_numeric = rotation_W_numeric(h, res.j2);
      res.orbit = integrate_periods(turning_point_state(h, res.j2), static_cast<int>(q), opt);
      res.closure_error = res.orbit.closure_error;
      if (res.closure_error >= 1e-6) throw ConvergenceError("periodic orbit at fixed energy did not close");
      out.push_back(std::move(res));
    }
    a = b;
    fa = fb;
  }
  return out;
}

GeometryReport geometry_report(double r, double s) {
  GeometryReport g;
  g.r = r;
  g.s = s;
  const double j1 = r * std::sin(s);
  g.j2 = r * std::cos(s);
  g.h = energy_from_actions(j1, g.j2);
  const EllipticData e = cubic_roots(g.h, g.j2);
  const double pi = pi_v<double>();
  g.north_distance = std::acos(std::clamp(e.zeta1, -1.0, 1.0));
  g.south_distance = pi - std::acos(std::clamp(e.zeta0, -1.0, 1.0));
  g.north_leading = std::sqrt(r * (1 - std::sin(s)));
  g.south_leading = r * std::abs(std::cos(s)) / 2;
  g.excluded_radius = std::tan(g.north_distance / 2);
  g.excluded_leading = g.north_leading / 2;
  g.outer_size = g.south_distance > 0 ? 1 / std::tan(g.south_distance / 2) : INFINITY;
  g.outer_leading = 4 / (r * std::abs(std::cos(s)));
  g.north_pole_reachable = g.north_distance < 1e-8;
  return g;
}

double WTriangle::max_gap() const {
  return std::max({std::abs(W_elliptic - W_difference), std::abs(W_elliptic - W_orbit), std::abs(W_difference - W_orbit)});
}

std::vector<WTriangle> rotation_triangle_grid() {
  std::vector<WTriangle> out;
  for (int i = 1; i <= 5; ++i)
    for (int k = 0; k < 5; ++k) {
      const double rad = 0.1 * i, ang = pi_v<double>() * (k + 0.5) / 5;
      WTriangle w;
      w.h = rad * std::cos(ang);
      w.j2 = rad * std::sin(ang);
      w.W_elliptic = rotation_W_numeric(w.h, w.j2);
      w.W_difference = rotation_W_finite_difference(w.h, w.j2);
      w.W_orbit = rotation_W_orbit(w.h, w.j2);
      out.push_back(w);
    }
  return out;
}

std::string orbit_csv(const OrbitRecord& o) {
  std::ostringstream os;
  os << "t,x,y,z,px,py,pz,u,v\n";
  char buf[400];
  for (std::size_t i = 0; i < o.states.size(); ++i) {
    const PhaseState& s = o.states[i];
    const auto uv = stereographic(s.r);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", o.t[i], s.r[0], s.r[1],
                  s.r[2], s.p[0], s.p[1], s.p[2], uv[0], uv[1]);
    os << buf;
  }
  return os.str();
}

}  // namespace pendinv
