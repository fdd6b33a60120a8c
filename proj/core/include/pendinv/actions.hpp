#pragma once

// Actions of the spherical pendulum near the focus-focus value (h, j2) = (0, 0):
// the real action I1 and the imaginary action J1 (numeric and as series), the
// Birkhoff normal form by series inversion, the semi-global invariant S, and
// the quantities derived from it (rotation number, period, twist, monodromy).
//
// Conventions: "2pi I1" is what the invariant model describes; the functions
// named action_I1* return I1 itself. Arg is principal, sgn(0) := +1.

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pendinv/elliptic.hpp"
#include "pendinv/series.hpp"

namespace pendinv {

enum class ActionMethod { legendre_form, lambda0_form, quadrature, contour, series_model };
std::string to_string(ActionMethod m);

struct ActionValue {
  double value = 0;
  ActionMethod method = ActionMethod::legendre_form;
  double error_estimate = 0;
  bool flagged = false;  // near-degenerate input, value from a limit
};

// ---------------------------------------------------------------- numerics

// I1 three ways. T is double or Real.
template <class T> T action_I1_legendre(const T& h, const T& j2);
template <class T> T action_I1_lambda0(const T& h, const T& j2);
template <class T> T action_I1_quadrature(const T& h, const T& j2);

// Picks the Legendre form, or the Lambda0 form when |j2| is tiny, and fills
// in the error estimate. Closed form at the critical value.
ActionValue action_I1(double h, double j2);
ActionValue action_I1(double h, double j2, ActionMethod method);

struct ContourResult {
  double value = 0;       // J1
  double imag_residue = 0;
  int nodes = 0;
};
// (1/(pi i)) times the clockwise contour integral of w/(1 - zeta^2) around a
// rectangle enclosing [zeta1, zeta2] (the doubled vanishing cycle). Throws
// DomainError when the rectangle cannot avoid zeta0 or -1.
ContourResult action_J1_contour(double h, double j2);
ActionValue action_J1_numeric(double h, double j2);

// W = -dI1/dj2 from the third-kind integrals; odd in j2, axis limits 1 / 1/2.
template <class T> T rotation_W_legendre(const T& h, const T& j2);
double rotation_W_numeric(double h, double j2);
// Reduced period T = 2 pi dI1/dh = 2 sqrt(2) K / sqrt(zeta2 - zeta0).
double period_T_numeric(double h, double j2);

// Central differences of the Legendre form at extended precision.
double rotation_W_finite_difference(double h, double j2, double step = 1e-5);
double period_T_finite_difference(double h, double j2, double step = 1e-5);

// ---------------------------------------------------------------- exact series

// J1(h, j2) through total degree `degree`, from the residue at zeta = 1 of
// each epsilon-order of w/(1 - zeta^2), doubled for the twice-traversed cycle.
Series2 J1_series(int degree);

// H(j1, j2) = inverse of J1 in its first argument. `grade` counts like the
// Lie normal form (degree = grade / 2). With verify set, the result is
// compared with lie_normalize(grade) and ConsistencyError thrown on mismatch.
Series2 birkhoff_by_inversion(int grade, bool verify = true);

struct ASeries {
  Series2 ratio_route;     // H_j2 / H_j1
  Series2 residue_route;   // -(dJ1/dj2) o H
  bool agree = false;
};
// A(j1, j2) through degree `degree` by both routes; throws ConsistencyError if
// they differ.
ASeries A_series_both(int degree);
Series2 A_series(int degree);

// -dJ1/dj2: the series multiplying ln(32/rho) in the rotation-number expansion.
Series2 W_log_coefficient(int degree);

// ---------------------------------------------------------------- invariant S

struct FitOptions {
  int degree = 14;
  unsigned precision_bits = 256;
  int circles = 8;
  double r_min = 0.05;
  double r_max = 0.40;
  int points_per_circle = 0;  // 0: chosen from the coefficient count
  int j1_series_degree = 60;
};

struct FittedCoefficient {
  int a = 0, b = 0;           // j1^a j2^b
  double value = 0;           // fitted, rounded to double
  std::string value_text;     // fitted, full working precision
  std::optional<Rational> published;
  bool snapped = false;       // |value - published| <= snap tolerance
};

struct InvariantSeries {
  // Exact part (snapped coefficients, degree >= 2) plus the linear j1 ln 32 kept
  // symbolic; unsnapped coefficients are stored here rounded to binary.
  Series2 S_poly;
  double ln32_fitted = 0;      // diagnostic estimate of the j1 coefficient
  double ln32_error = 0;       // |ln32_fitted - ln 32|
  std::vector<FittedCoefficient> coefficients;
  double residual_max = 0;     // max |A x - b| over the samples
  int samples = 0;
  int unknowns = 0;
  unsigned precision_bits = 0;
  double seconds = 0;
  std::vector<std::string> snap_log;
};

constexpr double kSnapTolerance = 1e-6;

// Published coefficients of S (j1^a j2^b -> value), two-variable terms
// and the ordinary-pendulum series.
const std::map<std::pair<int, int>, Rational>& published_S();

InvariantSeries fit_invariant_S(const FitOptions& opt = {});

// ---------------------------------------------------------------- model

namespace detail {
struct ModelPolys;  // double-coefficient copies of the series and their partials
}

struct InvariantModel {
  Series2 S_poly;  // S minus j1 ln 32
  Series2 J1;      // J1(h, j2), maps energy to j1
  Series2 H;       // H(j1, j2)
  Series2 A;       // A(j1, j2)
  std::string label;
  std::shared_ptr<const detail::ModelPolys> polys;

  // S, J1, H and A at the printed truncations (S, J1, A to degree 4, H to 5).
  static InvariantModel displayed();
  // Fitted S with series of the given degree for J1, H and A.
  static InvariantModel fitted(const InvariantSeries& fit, int degree = 10);

  double S(double j1, double j2) const;
  double S1(double j1, double j2) const;
  double S2(double j1, double j2) const;
  double j1_of(double h, double j2) const;
  double h_of(double j1, double j2) const;

  // 2 pi I1 from the invariant form, at given (h, j2).
  double action_2pi(double h, double j2) const;
  // Same, already in (j1, j2).
  double action_2pi_j(double j1, double j2) const;
  double rotation_W(double j1, double j2) const;
  double period_T(double j1, double j2) const;
  // T with T-cal defined by 2 pi T = 2 pi (-A W1 + W2); returns 2 pi T.
  double twist_2pi(double j1, double j2) const;
};

double rotation_W_model(double j1, double j2);  // displayed model
double period_T_model(double j1, double j2);

// Printed truncation of the I1 expansion in (h, j2), 2 pi I1 units.
double I1_expansion_displayed(double h, double j2);

// Printed rotation-number expansion in (h, j2), W units.
double W_expansion_displayed(double h, double j2);

struct WExpansionReport {
  bool log_coefficient_leading = false;  // -dJ1/dj2 starts with (3/8) j2
  bool log_coefficient_bracket = false;  // matches (3/8) j2 (1 - 5h/16 + 35 rho^2/256) through degree 3
  bool reproduces_A = false;             // (-dJ1/dj2) o H == A exactly
  double max_grid_error = 0;             // W units, |(h, j2)| <= grid_radius
  double grid_radius = 0.07;
  bool grid_ok = false;
  bool ok() const {
    return log_coefficient_leading && log_coefficient_bracket && reproduces_A && grid_ok;
  }
};
WExpansionReport W_expansion_check(double tolerance = 1e-5);

// Twist along the circle j2 = r cos s, j1 = r sin s.
double twist_polar(const InvariantModel& m, double r, double s);
// Root of the twist in s on (-pi/2, pi/2); throws ConvergenceError without a sign change.
double twistless_curve(const InvariantModel& m, double r);
double W_star(const InvariantModel& m, double r);
double W_star_approx(double r);

struct MonodromyResult {
  int mu = 0;
  double raw = 0;  // Delta I1 / j2 before rounding
  double start_j2 = 0;
  int steps = 0;
  bool counterclockwise = true;
};
// Continues I1 + n j2 (n integer, chosen for smoothness) around the circle of
// radius r in the (h, j2) plane.
MonodromyResult monodromy_check(double r, int steps, bool counterclockwise = true);

// One CSV row "h,j2,I1,J1,W,T,method".
std::string scalar_csv_header();
std::string scalar_csv_row(double h, double j2);

}  // namespace pendinv
