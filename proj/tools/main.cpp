// pendinv: command line front end. Every subcommand builds an ordered JSON
// value and hands it to one of three renderers, so json/csv/pretty always
// carry the same numbers.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pendinv/actions.hpp"
#include "pendinv/dynamics.hpp"
#include "pendinv/elliptic.hpp"
#include "pendinv/normalform.hpp"
#include "pendinv/pendulum.hpp"
#include "pendinv/series_json.hpp"
#include "suites.hpp"

using namespace pendinv;
using Json = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kFailed = 1, kDomain = 2 };

struct Global {
  std::string format = "pretty";
  std::uint64_t seed = 0;
  int jobs = 1;
  int order = 10;
  unsigned precision = 0;  // 0: PENDINV_PRECISION or 256
  std::string output;      // file instead of stdout
};

unsigned fit_bits(const Global& g) { return g.precision ? g.precision : precision_bits_from_env(256); }

Json series_json(const Series2& s) { return Json::parse(to_json(s).dump()); }
Json series_json(const Series1& s) { return Json::parse(to_json(s).dump()); }

std::string scalar_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
    return buf;
  }
  return v.dump();
}

// A "rows" array of flat objects renders as a table; other keys as key/value.
void render_pretty(const Json& j, std::ostream& os) {
  for (const auto& [k, v] : j.items()) {
    if (k == "rows" && v.is_array()) continue;
    if (v.is_object() && v.contains("terms")) continue;  // series: the "text" twin is printed
    if (v.is_array()) {
      os << k << ":\n";
      for (const auto& e : v) os << "  " << scalar_text(e) << "\n";
      continue;
    }
    os << k << ": " << scalar_text(v) << "\n";
  }
  if (j.contains("rows") && !j["rows"].empty()) {
    std::vector<std::string> cols;
    for (const auto& [k, v] : j["rows"][0].items()) cols.push_back(k);
    std::vector<std::size_t> w(cols.size());
    std::vector<std::vector<std::string>> cells;
    for (std::size_t c = 0; c < cols.size(); ++c) w[c] = cols[c].size();
    for (const auto& row : j["rows"]) {
      std::vector<std::string> line;
      for (std::size_t c = 0; c < cols.size(); ++c) {
        line.push_back(row.contains(cols[c]) ? scalar_text(row[cols[c]]) : "");
        w[c] = std::max(w[c], line.back().size());
      }
      cells.push_back(std::move(line));
    }
    auto put = [&](const std::vector<std::string>& line) {
      for (std::size_t c = 0; c < line.size(); ++c) {
        os << line[c];
        if (c + 1 < line.size()) os << std::string(w[c] - line[c].size() + 2, ' ');
      }
      os << "\n";
    };
    put(cols);
    for (const auto& l : cells) put(l);
  }
}

void render_csv(const Json& j, std::ostream& os) {
  auto cell = [](const Json& v) {
    std::string s = scalar_text(v);
    if (s.find_first_of(",\"\n") != std::string::npos) {
      std::string q = "\"";
      for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
      return q + "\"";
    }
    return s;
  };
  if (j.contains("rows") && !j["rows"].empty()) {
    std::vector<std::string> cols;
    for (const auto& [k, v] : j["rows"][0].items()) cols.push_back(k);
    for (std::size_t c = 0; c < cols.size(); ++c) os << cols[c] << (c + 1 < cols.size() ? "," : "\n");
    for (const auto& row : j["rows"])
      for (std::size_t c = 0; c < cols.size(); ++c)
        os << (row.contains(cols[c]) ? cell(row[cols[c]]) : "") << (c + 1 < cols.size() ? "," : "\n");
    return;
  }
  os << "key,value\n";
  for (const auto& [k, v] : j.items()) {
    if (v.is_structured()) continue;
    os << k << "," << cell(v) << "\n";
  }
}

void emit(const Global& g, const Json& j) {
  std::ofstream file;
  if (!g.output.empty()) {
    file.open(g.output);
    if (!file) throw DomainError("cannot open output file " + g.output);
  }
  std::ostream& os = g.output.empty() ? std::cout : file;
  if (g.format == "json") {
    os << j.dump(2) << "\n";
  } else if (g.format == "csv") {
    render_csv(j, os);
  } else {
    render_pretty(j, os);
  }
}

// Evaluates fn over items with up to `jobs` threads; results keep input order.
template <class T, class F>
std::vector<Json> parallel_map(const std::vector<T>& items, int jobs, F fn) {
  std::vector<Json> out(items.size());
  const std::size_t n = items.size(), k = static_cast<std::size_t>(std::max(1, jobs));
  std::vector<std::future<void>> workers;
  for (std::size_t w = 0; w < k; ++w)
    workers.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < n; i += k) out[i] = fn(items[i]);
    }));
  for (auto& f : workers) f.get();
  return out;
}

// ------------------------------------------------------------------ commands

int cmd_nf(const Global& g) {
  const Series2 lie = lie_normalize(g.order);
  const Series2 inv = birkhoff_by_inversion(g.order, false);
  const bool equal = lie == inv;
  Json j;
  j["order"] = g.order;
  j["degree"] = lie.order();
  j["lie_text"] = format_series(lie);
  j["inversion_text"] = format_series(inv);
  j["equal"] = equal ? "yes" : "NO";
  j["lie"] = series_json(lie);
  j["inversion"] = series_json(inv);
  if (g.format == "csv") {
    Json rows = Json::array();
    for (int d = 0; d <= lie.order(); ++d)
      for (int b = 0; b <= d; ++b) {
        if (lie.coeff(d - b, b) == 0 && inv.coeff(d - b, b) == 0) continue;
        rows.push_back({{"a", d - b}, {"b", b}, {"lie", to_string(lie.coeff(d - b, b))},
                        {"inversion", to_string(inv.coeff(d - b, b))}});
      }
    j["rows"] = rows;
  }
  emit(g, j);
  return equal ? kOk : kFailed;
}

int cmd_invariants(const Global& g) {
  FitOptions fo;
  fo.degree = std::max(14, g.order);
  fo.precision_bits = fit_bits(g);
  const InvariantSeries f = fit_invariant_S(fo);
  Json j;
  j["degree"] = fo.degree;
  j["precision_bits"] = f.precision_bits;
  j["samples"] = f.samples;
  j["residual"] = f.residual_max;
  j["ln32_fitted"] = f.ln32_fitted;
  j["ln32_error"] = f.ln32_error;
  Json rows = Json::array();
  for (const FittedCoefficient& c : f.coefficients) {
    if (c.a + c.b < 2 || c.a + c.b > g.order) continue;
    Json r;
    r["a"] = c.a;
    r["b"] = c.b;
    r["fitted"] = c.value;
    r["published"] = c.published ? to_string(*c.published) : "";
    r["published_value"] = c.published ? static_cast<double>(*c.published) : NAN;
    r["diff"] = c.published ? std::abs(c.value - static_cast<double>(*c.published)) : NAN;
    r["snapped"] = c.snapped ? "yes" : "no";
    rows.push_back(r);
  }
  j["rows"] = rows;
  emit(g, j);
  return kOk;
}

ActionMethod parse_method(const std::string& s) {
  if (s == "legendre") return ActionMethod::legendre_form;
  if (s == "lambda0") return ActionMethod::lambda0_form;
  if (s == "quadrature") return ActionMethod::quadrature;
  throw DomainError("unknown method " + s);
}

int cmd_action(const Global& g, double h, double j2, const std::string& method) {
  const ActionValue I = method == "auto" ? action_I1(h, j2) : action_I1(h, j2, parse_method(method));
  Json j;
  j["h"] = h;
  j["j2"] = j2;
  j["I1"] = I.value;
  j["two_pi_I1"] = 2 * pi_v<double>() * I.value;
  j["method"] = to_string(I.method);
  j["flagged"] = I.flagged;
  if (h != 0 || j2 != 0) {
    const ActionValue J = action_J1_numeric(h, j2);
    j["J1"] = J.value;
    j["J1_series"] = evaluate(J1_series(20), h, j2);
  } else {
    j["J1"] = 0.0;
  }
  emit(g, j);
  return kOk;
}

Json rotation_row(double h, double j2, bool orbit) {
  Json j;
  j["h"] = h;
  j["j2"] = j2;
  j["W_elliptic"] = rotation_W_numeric(h, j2);
  j["W_difference"] = rotation_W_finite_difference(h, j2);
  if (orbit) j["W_orbit"] = j2 != 0 ? rotation_W_orbit(h, j2) : NAN;
  j["T_elliptic"] = period_T_numeric(h, j2);
  j["T_difference"] = period_T_finite_difference(h, j2);
  const double j1 = action_J1_numeric(h, j2).value;
  j["j1"] = j1;
  j["W_model"] = rotation_W_model(j1, j2);
  return j;
}

int cmd_rotation(const Global& g, std::optional<double> h, std::optional<double> j2, int grid, double radius) {
  if (grid > 0) {
    std::vector<std::pair<double, double>> pts;
    for (int i = 1; i <= grid; ++i)
      for (int k = 0; k < grid; ++k) {
        const double r = radius * i / grid, a = pi_v<double>() * (k + 0.5) / grid;
        pts.emplace_back(r * std::cos(a), r * std::sin(a));
      }
    Json j;
    j["grid"] = grid;
    j["radius"] = radius;
    j["rows"] = parallel_map(pts, g.jobs, [](const auto& p) { return rotation_row(p.first, p.second, true); });
    emit(g, j);
    return kOk;
  }
  if (!h || !j2) throw DomainError("rotation needs --h and --j2, or --grid");
  emit(g, rotation_row(*h, *j2, true));
  return kOk;
}

int cmd_twist(const Global& g, double r, std::optional<double> s) {
  const InvariantModel m = InvariantModel::displayed();
  Json j;
  j["r"] = r;
  const double st = twistless_curve(m, r);
  j["s_twistless"] = st;
  j["W_star"] = W_star(m, r);
  j["W_star_approx"] = W_star_approx(r);
  if (s) {
    j["s"] = *s;
    j["twist_2pi"] = twist_polar(m, r, *s);
    j["W"] = m.rotation_W(r * std::sin(*s), r * std::cos(*s));
  }
  emit(g, j);
  return kOk;
}

int cmd_pendulum(const Global& g, std::optional<double> h, const std::string& series, bool true_pendulum) {
  Json j;
  if (!series.empty()) {
    Series1 s;
    if (series == "J") {
      s = pendulum_J_series(g.order);
    } else if (series == "q_of_l") {
      s = nome_from_invariant(std::min(g.order, 8)).q_of_l;
    } else if (series == "l_of_q") {
      s = nome_from_invariant(std::min(g.order, 8)).l_of_q;
    } else if (series == "J_of_q") {
      s = J_of_q_theta(g.order);
    } else if (series == "S") {
      s = pendulum_S_from_theta(g.order);
    } else if (series == "theta4") {
      s = theta4_series(g.order);
    } else {
      throw DomainError("unknown series " + series + " (J, q_of_l, l_of_q, J_of_q, S, theta4)");
    }
    j["series"] = series;
    j["order"] = s.order();
    j["text"] = format_series(s);
    j["integral"] = all_integer(s);
    j["value"] = series_json(s);
    if (g.format == "csv") {
      Json rows = Json::array();
      for (int n = 0; n <= s.order(); ++n) rows.push_back({{"n", n}, {"coefficient", to_string(s.coeff(n))}});
      j["rows"] = rows;
    }
    emit(g, j);
    return kOk;
  }
  if (!h) throw DomainError("pendulum needs --h or --series");
  const PendulumQuadruple q = pendulum_quadruple(*h, true_pendulum);
  j["h"] = q.h;
  j["branch"] = q.branch == PendulumBranch::above ? "above" : "below";
  j["I"] = q.I;
  j["J"] = q.J;
  j["T"] = q.T;
  j["U"] = q.U;
  j["IU_minus_JT"] = q.I * q.U - q.J * q.T;
  emit(g, j);
  return kOk;
}

std::pair<long, long> parse_ratio(const std::string& s) {
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) throw std::invalid_argument(s);
    return {std::stol(s.substr(0, slash)), std::stol(s.substr(slash + 1))};
  } catch (const std::exception&) {
    throw DomainError("--W expects p/q, got '" + s + "'");
  }
}

int cmd_orbit(const Global& g, const std::string& W, std::optional<double> r, std::optional<double> h,
              const std::string& trace) {
  const auto [p, q] = parse_ratio(W);
  IntegrateOptions io;
  std::vector<OrbitSearchResult> found;
  if (h) {
    found = periodic_orbits_at_energy(p, q, *h, io);
    if (found.empty()) throw DomainError("W = " + W + " is not attained at this energy");
  } else {
    found.push_back(periodic_orbit_search(p, q, r.value_or(0.75), io));
  }
  if (!trace.empty()) {
    for (std::size_t i = 0; i < found.size(); ++i) {
      const std::string path = found.size() == 1 ? trace : trace + "." + std::to_string(i);
      std::ofstream f(path);
      if (!f) throw DomainError("cannot open " + path);
      f << orbit_csv(found[i].orbit);
    }
  }
  if (g.format == "csv" && trace.empty()) {
    std::ostream& os = std::cout;
    os << orbit_csv(found.front().orbit);
    return kOk;
  }
  Json j;
  j["target"] = W;
  Json rows = Json::array();
  for (const OrbitSearchResult& o : found) {
    Json row;
    row["target"] = W;
    row["s"] = o.s;
    row["r"] = o.r;
    row["h"] = o.h;
    row["j2"] = o.j2;
    row["closure_error"] = o.closure_error;
    row["W_orbit"] = o.orbit.W;
    row["W_numeric"] = o.W_numeric;
    if (!h) row["W_model"] = o.W_model;
    rows.push_back(row);
  }
  j["rows"] = rows;
  emit(g, j);
  return kOk;
}

int cmd_verify(const Global& g, const std::string& name) {
  std::vector<const suites::Suite*> todo;
  if (name == "all" || name == "acceptance") {
    for (const auto& s : suites::all())
      if (name == "all" || s.criterion > 0) todo.push_back(&s);
  } else if (const suites::Suite* s = suites::find(name)) {
    todo.push_back(s);
  } else {
    std::string known;
    for (const auto& s : suites::all()) known += " " + s.name;
    throw DomainError("unknown suite '" + name + "'; known:" + known + " all acceptance");
  }
  suites::Options so;
  so.seed = g.seed;
  so.precision_bits = fit_bits(g);
  so.jobs = g.jobs;
  bool ok = true;
  Json j;
  Json rows = Json::array();
  for (const suites::Suite* s : todo) {
    const suites::Result r = suites::run(*s, so);
    ok = ok && r.pass;
    Json row;
    row["suite"] = r.name;
    row["result"] = r.pass ? "PASS" : "FAIL";
    row["seconds"] = std::round(r.seconds * 100) / 100;
    row["details"] = r.details;
    rows.push_back(row);
  }
  if (g.format == "pretty") {
    for (const auto& row : rows) {
      std::cout << row["result"].get<std::string>() << "  " << row["suite"].get<std::string>() << "\n";
      for (const auto& d : row["details"]) std::cout << "    " << d.get<std::string>() << "\n";
    }
  } else {
    if (g.format == "csv")
      for (auto& row : rows) row.erase("details");
    j["rows"] = rows;
    emit(g, j);
  }
  return ok ? kOk : kFailed;
}

int cmd_special(const Global& g, const std::string& fn, double m, double n, double phi, double h, double j2) {
  Json j;
  j["function"] = fn;
  const unsigned bits = g.precision ? g.precision : 256;
  PrecisionScope scope(bits);
  const Real M(m), N(n), PHI(phi);
  auto both = [&](double d, const Real& r) {
    j["value"] = d;
    j["value_mp"] = r.str(static_cast<std::streamsize>(digits_for_bits(bits)));
    j["bits"] = bits;
  };
  if (fn == "K") {
    both(ellint_K(m), ellint_K(M));
  } else if (fn == "E") {
    both(ellint_E(m), ellint_E(M));
  } else if (fn == "Pi") {
    both(ellint_Pi(n, m), ellint_Pi(N, M));
  } else if (fn == "F") {
    both(ellint_F(phi, m), ellint_F(PHI, M));
  } else if (fn == "Einc") {
    both(ellint_E(phi, m), ellint_E(PHI, M));
  } else if (fn == "Lambda0") {
    both(heuman_lambda0(phi, m), heuman_lambda0(PHI, M));
  } else if (fn == "roots") {
    const EllipticData e = cubic_roots(h, j2);
    j["h"] = h;
    j["j2"] = j2;
    j["zeta0"] = e.zeta0;
    j["zeta1"] = e.zeta1;
    j["zeta2"] = e.zeta2;
    j["k2"] = e.k2;
  } else {
    throw DomainError("unknown function " + fn + " (K, E, Pi, F, Einc, Lambda0, roots)");
  }
  emit(g, j);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semi-global invariants of the spherical pendulum"};
  // --h is the energy, so help is long-form only (subcommands inherit this).
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv", "pretty"}))->capture_default_str();
  app.add_option("--seed", g.seed, "Seed for sampled checks")->capture_default_str();
  app.add_option("--jobs", g.jobs, "Threads for grid sweeps")->check(CLI::Range(1, 256))->capture_default_str();
  app.add_option("--order", g.order, "Series order")->check(CLI::Range(1, 200))->capture_default_str();
  app.add_option("--precision", g.precision, "Fit precision in bits (default: $PENDINV_PRECISION or 256)")
      ->check(CLI::Range(53u, 65536u));
  app.add_option("-o,--output", g.output, "Write to a file instead of stdout");

  auto* nf = app.add_subcommand("nf", "Birkhoff normal form by Lie series and by inverting J1 (--order is the grade)");

  auto* inv = app.add_subcommand("invariants", "Fit the invariant S and compare with the published coefficients");

  double h = 0, j2 = 0;
  std::string method = "auto";
  auto* act = app.add_subcommand("action", "Actions I1 and J1 at (h, j2)");
  act->add_option("--h", h)->required();
  act->add_option("--j2", j2)->required();
  act->add_option("--method", method)->check(CLI::IsMember({"auto", "legendre", "lambda0", "quadrature"}));

  std::optional<double> rh, rj2;
  int grid = 0;
  double radius = 0.5;
  auto* rot = app.add_subcommand("rotation", "Rotation number and period by three routes");
  rot->add_option("--h", rh);
  rot->add_option("--j2", rj2);
  rot->add_option("--grid", grid, "Polar n x n grid on the half disk j2 > 0")->check(CLI::Range(1, 100));
  rot->add_option("--radius", radius, "Grid radius")->capture_default_str();

  double tr = 0.1;
  std::optional<double> ts;
  auto* tw = app.add_subcommand("twist", "Twistless torus on the circle of radius r");
  tw->add_option("--r", tr)->required();
  tw->add_option("--s", ts, "Also evaluate the twist at this polar angle");

  std::optional<double> ph;
  std::string series;
  bool true_pendulum = false;
  auto* pen = app.add_subcommand("pendulum", "Ordinary pendulum (j2 = 0) integrals and series");
  pen->add_option("--h", ph);
  pen->add_option("--series", series, "J, q_of_l, l_of_q, J_of_q, S, theta4");
  pen->add_flag("--true-pendulum", true_pendulum, "Full swing below the separatrix");

  std::string W;
  std::optional<double> orb_r, orb_h;
  std::string trace;
  auto* orb = app.add_subcommand("orbit", "Periodic orbit with rotation number p/q");
  orb->add_option("--W", W, "Rotation number p/q")->required();
  orb->add_option("--r", orb_r, "Circle radius in (j1, j2) (default 0.75)");
  orb->add_option("--h", orb_h, "Fixed energy instead of a circle");
  orb->add_option("--trace", trace, "CSV file for the orbit trace");

  std::string suite = "acceptance";
  auto* ver = app.add_subcommand("verify", "Run a named verification suite");
  ver->add_option("--suite", suite, "Suite name, 'acceptance' or 'all'")->capture_default_str();

  std::string fn = "K";
  double sm = 0.5, sn = 0.1, sphi = 0.5;
  auto* sp = app.add_subcommand("special", "Elliptic integrals in double and MPFR");
  sp->add_option("--fn", fn, "K, E, Pi, F, Einc, Lambda0, roots")->capture_default_str();
  sp->add_option("--m", sm, "Parameter k^2");
  sp->add_option("--n", sn, "Characteristic");
  sp->add_option("--phi", sphi, "Amplitude");
  sp->add_option("--h", h);
  sp->add_option("--j2", j2);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kDomain;
  }

  try {
    if (*nf) return cmd_nf(g);
    if (*inv) return cmd_invariants(g);
    if (*act) return cmd_action(g, h, j2, method);
    if (*rot) return cmd_rotation(g, rh, rj2, grid, radius);
    if (*tw) return cmd_twist(g, tr, ts);
    if (*pen) return cmd_pendulum(g, ph, series, true_pendulum);
    if (*orb) return cmd_orbit(g, W, orb_r, orb_h, trace);
    if (*ver) return cmd_verify(g, suite);
    if (*sp) return cmd_special(g, fn, sm, sn, sphi, h, j2);
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomain;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomain;
  } catch (const std::exception& e) {
    std::cerr << "failed: " << e.what() << "\n";
    return kFailed;
  }
  return kDomain;
}
