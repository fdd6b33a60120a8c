#include "pendinv/series.hpp"

#include <sstream>

namespace pendinv {
namespace {

std::string monomial(const std::array<std::string, 2>& vars, int a, int b, const char* mul) {
  std::string m;
  auto factor = [&](const std::string& v, int e) {
    if (e == 0) return;
    if (!m.empty()) m += mul;
    m += v;
    if (e > 1) m += "^" + std::to_string(e);
  };
  factor(vars[0], a);
  factor(vars[1], b);
  return m;
}

void append_term(std::string& out, const Rational& c, const std::string& mono) {
  if (c.is_zero()) return;
  const bool neg = c < 0;
  const Rational mag = neg ? Rational(-c) : c;
  if (out.empty()) {
    if (neg) out += "-";
  } else {
    out += neg ? " - " : " + ";
  }
  if (mono.empty()) {
    out += to_string(mag);
  } else if (mag == 1) {
    out += mono;
  } else {
    out += to_string(mag) + "*" + mono;
  }
}

Integer gcd_int(Integer a, Integer b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Integer t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

std::string format_series(const Series2& f) {
  std::string out;
  for (int d = 0; d <= f.order(); ++d)
    for (int b = 0; b <= d; ++b) append_term(out, f.coeff(d - b, b), monomial(f.vars(), d - b, b, "*"));
  return out.empty() ? "0" : out;
}

std::string format_series(const Series1& f) {
  std::string out;
  for (int n = 0; n <= f.order(); ++n) {
    std::string mono;
    if (n >= 1) mono = f.var() + (n > 1 ? "^" + std::to_string(n) : std::string());
    append_term(out, f.coeff(n), mono);
  }
  return out.empty() ? "0" : out;
}

std::string format_series(const ComplexSeries2& f) {
  std::string out;
  for (int d = 0; d <= f.order(); ++d) {
    for (int b = 0; b <= d; ++b) {
      const GaussianRational& c = f.coeff(d - b, b);
      if (is_zero(c)) continue;
      std::string coef;
      if (c.im.is_zero()) {
        coef = to_string(c.re);
      } else if (c.re.is_zero()) {
        coef = to_string(c.im) + "i";
      } else {
        coef = "(" + to_string(c.re) + (c.im < 0 ? " - " : " + ") +
               to_string(c.im < 0 ? Rational(-c.im) : c.im) + "i)";
      }
      const std::string mono = monomial(f.vars(), d - b, b, "*");
      if (!out.empty()) out += " + ";
      out += mono.empty() ? coef : coef + "*" + mono;
    }
  }
  return out.empty() ? "0" : out;
}

std::string format_by_degree(const Series2& f) {
  std::ostringstream os;
  for (int d = 0; d <= f.order(); ++d) {
    Integer g = 0;
    Integer l = 1;
    int lead_sign = 0;
    for (int b = 0; b <= d; ++b) {
      const Rational& c = f.coeff(d - b, b);
      if (c.is_zero()) continue;
      if (lead_sign == 0) lead_sign = c < 0 ? -1 : 1;
      g = gcd_int(g, boost::multiprecision::numerator(c));
      const Integer den = boost::multiprecision::denominator(c);
      l = l / gcd_int(l, den) * den;
    }
    if (lead_sign == 0) continue;
    const Rational factor = Rational(g, l) * lead_sign;
    std::string poly;
    int nterms = 0;
    for (int b = 0; b <= d; ++b) {
      const Rational c = f.coeff(d - b, b) / factor;
      if (c.is_zero()) continue;
      ++nterms;
      std::string mono = monomial(f.vars(), d - b, b, " ");
      const bool neg = c < 0;
      const Rational mag = neg ? Rational(-c) : c;
      if (!poly.empty()) poly += neg ? " - " : " + ";
      else if (neg) poly += "-";
      if (mono.empty()) poly += to_string(mag);
      else poly += (mag == 1 ? std::string() : to_string(mag) + " ") + mono;
    }
    const bool neg = factor < 0;
    const Rational mag = neg ? Rational(-factor) : factor;
    os << (neg ? "- " : "+ ");
    if (mag != 1) os << to_string(mag) << " ";
    os << (nterms > 1 && mag != 1 ? "(" + poly + ")" : poly) << "\n";
  }
  return os.str();
}

}  // namespace pendinv
