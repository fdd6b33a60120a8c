#include "pendinv/series_json.hpp"

namespace pendinv {
namespace {

nlohmann::json rational_fields(const Rational& c) {
  return {{"num", boost::multiprecision::numerator(c).str()},
          {"den", boost::multiprecision::denominator(c).str()}};
}

Rational read_rational(const nlohmann::json& t) {
  const Integer num(t.at("num").get<std::string>());
  const Integer den(t.at("den").get<std::string>());
  if (den <= 0) throw SeriesError("series JSON: denominator must be positive");
  return Rational(num, den);
}

}  // namespace

nlohmann::json to_json(const Series2& f) {
  nlohmann::json terms = nlohmann::json::array();
  for (int d = 0; d <= f.order(); ++d)
    for (int b = 0; b <= d; ++b) {
      const Rational& c = f.coeff(d - b, b);
      if (c.is_zero()) continue;
      nlohmann::json t = rational_fields(c);
      t["a"] = d - b;
      t["b"] = b;
      terms.push_back(std::move(t));
    }
  return {{"order", f.order()}, {"vars", {f.vars()[0], f.vars()[1]}}, {"terms", terms}};
}

nlohmann::json to_json(const Series1& f) {
  nlohmann::json terms = nlohmann::json::array();
  for (int n = 0; n <= f.order(); ++n) {
    if (f.coeff(n).is_zero()) continue;
    nlohmann::json t = rational_fields(f.coeff(n));
    t["a"] = n;
    terms.push_back(std::move(t));
  }
  return {{"order", f.order()}, {"vars", {f.var()}}, {"terms", terms}};
}

nlohmann::json to_json(const ComplexSeries2& f) {
  nlohmann::json terms = nlohmann::json::array();
  for (int d = 0; d <= f.order(); ++d)
    for (int b = 0; b <= d; ++b) {
      const GaussianRational& c = f.coeff(d - b, b);
      if (is_zero(c)) continue;
      terms.push_back({{"a", d - b}, {"b", b}, {"re", rational_fields(c.re)}, {"im", rational_fields(c.im)}});
    }
  return {{"order", f.order()}, {"vars", {f.vars()[0], f.vars()[1]}}, {"terms", terms}};
}

Series2 series2_from_json(const nlohmann::json& j) {
  const auto vars = j.at("vars").get<std::vector<std::string>>();
  if (vars.size() != 2) throw SeriesError("series JSON: expected two variable labels");
  Series2 f(j.at("order").get<int>(), {vars[0], vars[1]});
  for (const auto& t : j.at("terms")) f.at(t.at("a").get<int>(), t.at("b").get<int>()) = read_rational(t);
  return f;
}

Series1 series1_from_json(const nlohmann::json& j) {
  const auto vars = j.at("vars").get<std::vector<std::string>>();
  if (vars.size() != 1) throw SeriesError("series JSON: expected one variable label");
  Series1 f(j.at("order").get<int>(), vars[0]);
  for (const auto& t : j.at("terms")) f.at(t.at("a").get<int>()) = read_rational(t);
  return f;
}

}  // namespace pendinv
