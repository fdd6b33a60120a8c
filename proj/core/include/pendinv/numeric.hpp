#pragma once

#include <cstdint>
#include <mutex>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

namespace pendinv {

using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
// Runtime-precision binary float; precision is set through PrecisionScope.
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;

// Boost's two-argument rational constructor misreads negative built-in
// denominators, so build from a quotient instead.
inline Rational make_rational(long num, long den = 1) { return Rational(num) / Rational(den); }

std::string to_string(const Rational& r);
Rational parse_rational(std::string_view text);

// Converts an exact coefficient to the evaluation type.
template <class T>
T to_real(const Rational& r) {
  if constexpr (std::is_same_v<T, Real>) {
    return Real(r);
  } else {
    return static_cast<T>(r);
  }
}

template <class T>
T pi_v() {
  if constexpr (std::is_floating_point_v<T>) {
    return static_cast<T>(3.141592653589793238462643383279502884L);
  } else {
    return boost::multiprecision::acos(T(-1));
  }
}

unsigned digits_for_bits(unsigned bits);

// Sets the default MPFR precision for the lifetime of the scope. Boost keeps
// that default in a process-wide static, so scopes also hold a recursive lock:
// MPFR sections on different threads run one at a time.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  std::unique_lock<std::recursive_mutex> lock_;
  unsigned saved_digits_;
};

// Fit precision in bits: PENDINV_PRECISION if set and valid, otherwise fallback.
unsigned precision_bits_from_env(unsigned fallback = 256);

}  // namespace pendinv
