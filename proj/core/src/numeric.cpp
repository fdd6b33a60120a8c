#include "pendinv/numeric.hpp"

#include <cmath>
#include <cstdlib>

#include "pendinv/errors.hpp"

namespace pendinv {

std::string to_string(const Rational& r) {
  const Integer num = boost::multiprecision::numerator(r);
  const Integer den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Rational parse_rational(std::string_view text) {
  try {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(Integer(std::string(text)));
    const Integer num(std::string(text.substr(0, slash)));
    const Integer den(std::string(text.substr(slash + 1)));
    if (den == 0) throw DomainError("zero denominator in rational '" + std::string(text) + "'");
    return Rational(num, den);
  } catch (const std::runtime_error&) {
    throw DomainError("malformed rational '" + std::string(text) + "'");
  }
}

unsigned digits_for_bits(unsigned bits) {
  return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
}

namespace {
std::recursive_mutex& precision_mutex() {
  static std::recursive_mutex m;
  return m;
}
}  // namespace

PrecisionScope::PrecisionScope(unsigned bits)
    : lock_(precision_mutex()), saved_digits_(Real::default_precision()) {
  Real::default_precision(digits_for_bits(bits));
}

PrecisionScope::~PrecisionScope() { Real::default_precision(saved_digits_); }

unsigned precision_bits_from_env(unsigned fallback) {
  const char* env = std::getenv("PENDINV_PRECISION");
  if (env == nullptr || *env == '\0') return fallback;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 53 || v > 1 << 16)
    throw DomainError("PENDINV_PRECISION must be an integer number of bits in [53, 65536]");
  return static_cast<unsigned>(v);
}

}  // namespace pendinv
