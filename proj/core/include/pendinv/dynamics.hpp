#pragma once

// The spherical pendulum in redundant coordinates (r, p) in R^6 with the
// constraints (r, r) = 1 and (r, p) = 0, scaled so that m = g = l = 1. The
// upper equilibrium r = e_z has energy 0.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "pendinv/numeric.hpp"

namespace pendinv {

using Vec3 = std::array<double, 3>;

struct PhaseState {
  Vec3 r{0, 0, 1};
  Vec3 p{0, 0, 0};

  Vec3 L() const;
  double energy() const;     // h
  double momentum() const;   // j2 = L_z
  double constraint_residual() const;  // max(|(r,r) - 1|, |(r,p)|)
};

struct Tangent {
  Vec3 dr, dp;
};

Tangent vector_field(const PhaseState& s);

// State at the top of the oscillation in z (z = zeta1, closest to the north
// pole), in the x-z plane with x > 0 and moving in +y for j2 > 0.
PhaseState turning_point_state(double h, double j2);

// South-pole stereographic projection: the north pole goes to the origin.
std::array<double, 2> stereographic(const Vec3& r);

struct IntegrateOptions {
  double tol = 1e-12;
  double max_step = 0.25;
  bool record = true;
};

struct OrbitRecord {
  std::vector<double> t;
  std::vector<PhaseState> states;
  std::vector<std::array<double, 2>> trace;  // stereographic image of the samples
  int periods = 0;
  double T = 0;        // mean reduced period (time between z maxima)
  double dphi = 0;     // mean azimuthal advance per reduced period
  double W = 0;        // dphi / 2 pi
  double energy_drift = 0;
  double momentum_drift = 0;
  double constraint_max = 0;
  double closure_error = 0;  // |state(end) - state(0)| in R^6
  long steps = 0;
};

// Adaptive RKF78 with projection onto the constraints after each step.
// Throws ConvergenceError when the step size underflows.
OrbitRecord integrate(const PhaseState& s0, double t_end, const IntegrateOptions& opt = {});

// Starting at a z maximum, integrate through `periods` further z maxima
// (located to round-off) and measure T, dphi and W.
OrbitRecord integrate_periods(const PhaseState& s0, int periods, const IntegrateOptions& opt = {});

// W and T from integrating one reduced period from turning_point_state(h, j2).
double rotation_W_orbit(double h, double j2, double tol = 1e-12);

// Energy on the torus with actions (j1, j2): Newton on the J1 series.
double energy_from_actions(double j1, double j2);
// Largest |j2| at energy h (relative equilibrium), with its height z.
double j2_max(double h);

struct OrbitSearchResult {
  long p = 0, q = 1;
  double s = 0;   // polar angle on the circle j2 = r cos s, j1 = r sin s (model)
  double r = 0;
  double h = 0, j2 = 0;
  double W_model = 0;
  double W_numeric = 0;
  double closure_error = 0;
  int roots_on_circle = 0;
  OrbitRecord orbit;
};

// p/q on the circle of radius r: root of the model W in s, then h refined at
// fixed j2 with the elliptic W, then q reduced periods integrated.
OrbitSearchResult periodic_orbit_search(long p, long q, double r, const IntegrateOptions& opt = {});

// All j2 > 0 with W(h, j2) = p/q at fixed energy, each integrated and closed.
std::vector<OrbitSearchResult> periodic_orbits_at_energy(long p, long q, double h, const IntegrateOptions& opt = {});

struct GeometryReport {
  double r = 0, s = 0, h = 0, j2 = 0;
  double north_distance = 0, north_leading = 0;  // min theta vs sqrt(r (1 - sin s))
  double south_distance = 0, south_leading = 0;  // min (pi - theta) vs r |cos s| / 2
  double excluded_radius = 0, excluded_leading = 0;  // stereographic
  double outer_size = 0, outer_leading = 0;
  bool north_pole_reachable = false;
};
GeometryReport geometry_report(double r, double s);

struct WTriangle {
  double h = 0, j2 = 0;
  double W_elliptic = 0, W_difference = 0, W_orbit = 0;
  double max_gap() const;
};
// 5 x 5 polar grid on h^2 + j2^2 <= 0.25, j2 > 0.
std::vector<WTriangle> rotation_triangle_grid();

std::string orbit_csv(const OrbitRecord& o);  // t,x,y,z,px,py,pz,u,v

}  // namespace pendinv
