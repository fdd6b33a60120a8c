#pragma once

// Truncated power series with exact coefficients.
//
// BasicSeries2 stores a bivariate polynomial truncated at total degree N in a
// dense triangle; BasicSeries1 is the univariate analogue. Both are templated
// on the coefficient ring so the same code serves Rational and
// GaussianRational coefficients.

#include <algorithm>
#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "pendinv/errors.hpp"
#include "pendinv/numeric.hpp"

namespace pendinv {

struct GaussianRational {
  Rational re;
  Rational im;

  GaussianRational() = default;
  GaussianRational(long v) : re(v) {}  // NOLINT(google-explicit-constructor)
  GaussianRational(Rational r) : re(std::move(r)) {}  // NOLINT
  GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  friend bool operator==(const GaussianRational&, const GaussianRational&) = default;
  friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
    Rational n = b.re * b.re + b.im * b.im;
    if (n == 0) throw SeriesError("division by zero Gaussian rational");
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
  }
  friend GaussianRational operator/(const GaussianRational& a, long d) {
    return {a.re / d, a.im / d};
  }
  GaussianRational& operator+=(const GaussianRational& o) { return *this = *this + o; }
  GaussianRational& operator-=(const GaussianRational& o) { return *this = *this - o; }
  GaussianRational conj() const { return {re, -im}; }
};

inline bool is_zero(const Rational& c) { return c.is_zero(); }
inline bool is_zero(const GaussianRational& c) { return c.re.is_zero() && c.im.is_zero(); }

namespace detail {
inline std::size_t tri_index(int a, int b) {
  const int d = a + b;
  return static_cast<std::size_t>(d) * (d + 1) / 2 + static_cast<std::size_t>(b);
}
}  // namespace detail

template <class C>
class BasicSeries2 {
 public:
  using Labels = std::array<std::string, 2>;

  BasicSeries2() : BasicSeries2(0) {}
  explicit BasicSeries2(int order, Labels vars = {"x", "y"})
      : order_(order), vars_(std::move(vars)),
        c_(static_cast<std::size_t>(order + 1) * (order + 2) / 2, C(0)) {
    if (order < 0) throw SeriesError("negative truncation order");
  }

  static BasicSeries2 constant(C value, int order, Labels vars = {"x", "y"}) {
    BasicSeries2 s(order, std::move(vars));
    s.c_[0] = std::move(value);
    return s;
  }
  static BasicSeries2 variable(int which, int order, Labels vars = {"x", "y"}) {
    BasicSeries2 s(order, std::move(vars));
    if (order >= 1) s.at(which == 0 ? 1 : 0, which == 0 ? 0 : 1) = C(1);
    return s;
  }

  int order() const { return order_; }
  const Labels& vars() const { return vars_; }

  const C& coeff(int a, int b) const {
    static const C zero(0);
    if (a < 0 || b < 0 || a + b > order_) return zero;
    return c_[detail::tri_index(a, b)];
  }
  C& at(int a, int b) {
    if (a < 0 || b < 0 || a + b > order_) throw SeriesError("coefficient index beyond truncation order");
    return c_[detail::tri_index(a, b)];
  }
  void set(int a, int b, C value) { at(a, b) = std::move(value); }

  bool is_zero_series() const {
    return std::all_of(c_.begin(), c_.end(), [](const C& c) { return is_zero(c); });
  }

  // Keeps degrees <= n (n may exceed the current order; new slots are zero).
  BasicSeries2 with_order(int n) const {
    BasicSeries2 r(n, vars_);
    const int m = std::min(n, order_);
    for (int d = 0; d <= m; ++d)
      for (int b = 0; b <= d; ++b) r.at(d - b, b) = coeff(d - b, b);
    return r;
  }
  BasicSeries2 relabeled(Labels vars) const {
    BasicSeries2 r = *this;
    r.vars_ = std::move(vars);
    return r;
  }
  // Homogeneous part of total degree d.
  BasicSeries2 homogeneous(int d) const {
    BasicSeries2 r(order_, vars_);
    if (d <= order_)
      for (int b = 0; b <= d; ++b) r.at(d - b, b) = coeff(d - b, b);
    return r;
  }

  friend bool operator==(const BasicSeries2& a, const BasicSeries2& b) {
    return a.order_ == b.order_ && a.vars_ == b.vars_ && a.c_ == b.c_;
  }

  friend BasicSeries2 operator+(const BasicSeries2& a, const BasicSeries2& b) {
    BasicSeries2 r = binary_shape(a, b);
    for (int d = 0; d <= r.order_; ++d)
      for (int j = 0; j <= d; ++j) r.at(d - j, j) = a.coeff(d - j, j) + b.coeff(d - j, j);
    return r;
  }
  friend BasicSeries2 operator-(const BasicSeries2& a, const BasicSeries2& b) {
    BasicSeries2 r = binary_shape(a, b);
    for (int d = 0; d <= r.order_; ++d)
      for (int j = 0; j <= d; ++j) r.at(d - j, j) = a.coeff(d - j, j) - b.coeff(d - j, j);
    return r;
  }
  friend BasicSeries2 operator-(const BasicSeries2& a) {
    BasicSeries2 r(a.order_, a.vars_);
    for (std::size_t i = 0; i < a.c_.size(); ++i) r.c_[i] = -a.c_[i];
    return r;
  }
  friend BasicSeries2 operator*(const BasicSeries2& a, const BasicSeries2& b) {
    BasicSeries2 r = binary_shape(a, b);
    const int n = r.order_;
    for (int d1 = 0; d1 <= n; ++d1) {
      for (int j1 = 0; j1 <= d1; ++j1) {
        const C& x = a.coeff(d1 - j1, j1);
        if (is_zero(x)) continue;
        for (int d2 = 0; d1 + d2 <= n; ++d2) {
          for (int j2 = 0; j2 <= d2; ++j2) {
            const C& y = b.coeff(d2 - j2, j2);
            if (is_zero(y)) continue;
            r.at(d1 - j1 + d2 - j2, j1 + j2) += x * y;
          }
        }
      }
    }
    return r;
  }
  friend BasicSeries2 operator*(const BasicSeries2& a, const C& s) {
    BasicSeries2 r = a;
    for (auto& c : r.c_) c = c * s;
    return r;
  }
  friend BasicSeries2 operator*(const C& s, const BasicSeries2& a) { return a * s; }

  BasicSeries2& operator+=(const BasicSeries2& o) { return *this = *this + o; }
  BasicSeries2& operator-=(const BasicSeries2& o) { return *this = *this - o; }
  BasicSeries2& operator*=(const BasicSeries2& o) { return *this = *this * o; }

  // Applies fn to every coefficient, producing a series over another ring.
  template <class D, class Fn>
  BasicSeries2<D> map(Fn fn) const {
    BasicSeries2<D> r(order_, vars_);
    for (int d = 0; d <= order_; ++d)
      for (int b = 0; b <= d; ++b) r.at(d - b, b) = fn(coeff(d - b, b));
    return r;
  }

 private:
  static BasicSeries2 binary_shape(const BasicSeries2& a, const BasicSeries2& b) {
    if (a.vars_ != b.vars_)
      throw LabelError("series variable labels differ: (" + a.vars_[0] + "," + a.vars_[1] +
                       ") vs (" + b.vars_[0] + "," + b.vars_[1] + ")");
    return BasicSeries2(std::min(a.order_, b.order_), a.vars_);
  }

  int order_;
  Labels vars_;
  std::vector<C> c_;
};

template <class C>
class BasicSeries1 {
 public:
  BasicSeries1() : BasicSeries1(0) {}
  explicit BasicSeries1(int order, std::string var = "x")
      : order_(order), var_(std::move(var)), c_(static_cast<std::size_t>(order + 1), C(0)) {
    if (order < 0) throw SeriesError("negative truncation order");
  }
  BasicSeries1(int order, std::string var, std::vector<C> coeffs)
      : BasicSeries1(order, std::move(var)) {
    for (std::size_t i = 0; i < coeffs.size() && i <= static_cast<std::size_t>(order); ++i)
      c_[i] = std::move(coeffs[i]);
  }

  static BasicSeries1 variable(int order, std::string var = "x") {
    BasicSeries1 s(order, std::move(var));
    if (order >= 1) s.c_[1] = C(1);
    return s;
  }

  int order() const { return order_; }
  const std::string& var() const { return var_; }
  const C& coeff(int n) const {
    static const C zero(0);
    if (n < 0 || n > order_) return zero;
    return c_[static_cast<std::size_t>(n)];
  }
  C& at(int n) {
    if (n < 0 || n > order_) throw SeriesError("coefficient index beyond truncation order");
    return c_[static_cast<std::size_t>(n)];
  }
  void set(int n, C value) { at(n) = std::move(value); }

  BasicSeries1 with_order(int n) const {
    BasicSeries1 r(n, var_);
    for (int i = 0; i <= std::min(n, order_); ++i) r.c_[i] = c_[i];
    return r;
  }
  BasicSeries1 relabeled(std::string var) const {
    BasicSeries1 r = *this;
    r.var_ = std::move(var);
    return r;
  }

  friend bool operator==(const BasicSeries1& a, const BasicSeries1& b) {
    return a.order_ == b.order_ && a.var_ == b.var_ && a.c_ == b.c_;
  }
  friend BasicSeries1 operator+(const BasicSeries1& a, const BasicSeries1& b) {
    BasicSeries1 r = shape(a, b);
    for (int i = 0; i <= r.order_; ++i) r.c_[i] = a.coeff(i) + b.coeff(i);
    return r;
  }
  friend BasicSeries1 operator-(const BasicSeries1& a, const BasicSeries1& b) {
    BasicSeries1 r = shape(a, b);
    for (int i = 0; i <= r.order_; ++i) r.c_[i] = a.coeff(i) - b.coeff(i);
    return r;
  }
  friend BasicSeries1 operator-(const BasicSeries1& a) {
    BasicSeries1 r(a.order_, a.var_);
    for (int i = 0; i <= a.order_; ++i) r.c_[i] = -a.c_[i];
    return r;
  }
  friend BasicSeries1 operator*(const BasicSeries1& a, const BasicSeries1& b) {
    BasicSeries1 r = shape(a, b);
    for (int i = 0; i <= r.order_; ++i) {
      if (is_zero(a.c_[i])) continue;
      for (int j = 0; i + j <= r.order_; ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
    }
    return r;
  }
  friend BasicSeries1 operator*(const BasicSeries1& a, const C& s) {
    BasicSeries1 r = a;
    for (auto& c : r.c_) c = c * s;
    return r;
  }
  friend BasicSeries1 operator*(const C& s, const BasicSeries1& a) { return a * s; }

 private:
  static BasicSeries1 shape(const BasicSeries1& a, const BasicSeries1& b) {
    if (a.var_ != b.var_) throw LabelError("series variable labels differ: " + a.var_ + " vs " + b.var_);
    return BasicSeries1(std::min(a.order_, b.order_), a.var_);
  }

  int order_;
  std::string var_;
  std::vector<C> c_;
};

using Series2 = BasicSeries2<Rational>;
using Series1 = BasicSeries1<Rational>;
using ComplexSeries2 = BasicSeries2<GaussianRational>;

// ---------------------------------------------------------------------------
// Bivariate operations

enum class Var { first, second };

template <class C>
BasicSeries2<C> partial(const BasicSeries2<C>& f, Var which) {
  const int n = std::max(f.order() - 1, 0);
  BasicSeries2<C> r(n, f.vars());
  for (int d = 1; d <= f.order(); ++d) {
    for (int b = 0; b <= d; ++b) {
      const int a = d - b;
      const C& c = f.coeff(a, b);
      if (is_zero(c)) continue;
      if (which == Var::first && a > 0) r.at(a - 1, b) += c * C(a);
      if (which == Var::second && b > 0) r.at(a, b - 1) += c * C(b);
    }
  }
  return r;
}

// f(g(x,y), y): substitutes g for the first variable of f.
template <class C>
BasicSeries2<C> compose_first(const BasicSeries2<C>& f, const BasicSeries2<C>& g) {
  if (!is_zero(g.coeff(0, 0)))
    throw SeriesError("compose_first: substituted series has a nonzero constant term");
  if (f.vars()[1] != g.vars()[1])
    throw LabelError("compose_first: second variable '" + f.vars()[1] + "' of f differs from '" +
                     g.vars()[1] + "' of g");
  const int n = std::min(f.order(), g.order());
  auto slice = [&](int a) {
    BasicSeries2<C> s(n, g.vars());
    for (int b = 0; a + b <= f.order() && b <= n; ++b) s.at(0, b) = f.coeff(a, b);
    return s;
  };
  const BasicSeries2<C> gn = g.with_order(n);
  BasicSeries2<C> r = slice(f.order());
  for (int a = f.order() - 1; a >= 0; --a) r = r * gn + slice(a);
  return r;
}

// f(gx(u,v), gy(u,v)) for two substitutions without constant terms.
template <class C>
BasicSeries2<C> compose(const BasicSeries2<C>& f, const BasicSeries2<C>& gx,
                        const BasicSeries2<C>& gy) {
  if (!is_zero(gx.coeff(0, 0)) || !is_zero(gy.coeff(0, 0)))
    throw SeriesError("compose: substituted series has a nonzero constant term");
  const int n = std::min({f.order(), gx.order(), gy.order()});
  const BasicSeries2<C> x = gx.with_order(n);
  const BasicSeries2<C> y = gy.relabeled(gx.vars()).with_order(n);
  BasicSeries2<C> result(n, gx.vars());
  BasicSeries2<C> xa = BasicSeries2<C>::constant(C(1), n, gx.vars());
  for (int a = 0; a <= n; ++a) {
    BasicSeries2<C> inner(n, gx.vars());
    for (int b = n - a; b >= 0; --b) {
      inner = inner * y;
      inner.at(0, 0) += f.coeff(a, b);
    }
    result += xa * inner;
    xa = xa * x;
  }
  return result;
}

template <class C>
BasicSeries2<C> reciprocal(const BasicSeries2<C>& f) {
  const C& c0 = f.coeff(0, 0);
  if (is_zero(c0)) throw SeriesError("reciprocal: series has zero constant term");
  const C inv = C(1) / c0;
  BasicSeries2<C> r(f.order(), f.vars());
  r.at(0, 0) = inv;
  for (int d = 1; d <= f.order(); ++d) {
    for (int b = 0; b <= d; ++b) {
      const int a = d - b;
      C acc(0);
      for (int a1 = 0; a1 <= a; ++a1)
        for (int b1 = 0; b1 <= b; ++b1) {
          if (a1 == 0 && b1 == 0) continue;
          const C& x = f.coeff(a1, b1);
          if (!is_zero(x)) acc += x * r.coeff(a - a1, b - b1);
        }
      r.at(a, b) = -(acc * inv);
    }
  }
  return r;
}

// exp of a series with zero constant term, via n F_n = sum_k k G_k F_{n-k}
// on homogeneous components.
template <class C>
BasicSeries2<C> exp_series(const BasicSeries2<C>& g) {
  if (!is_zero(g.coeff(0, 0))) throw SeriesError("exp_series: nonzero constant term");
  const int n = g.order();
  BasicSeries2<C> f(n, g.vars());
  f.at(0, 0) = C(1);
  for (int d = 1; d <= n; ++d) {
    for (int b = 0; b <= d; ++b) {
      const int a = d - b;
      C acc(0);
      for (int a1 = 0; a1 <= a; ++a1)
        for (int b1 = 0; b1 <= b; ++b1) {
          const int k = a1 + b1;
          if (k == 0) continue;
          const C& x = g.coeff(a1, b1);
          if (!is_zero(x)) acc += x * f.coeff(a - a1, b - b1) * C(k);
        }
      f.at(a, b) = acc / d;
    }
  }
  return f;
}

// g with f(g(x,y), y) = x, by Newton iteration on series. The result is
// certified by an exact composition round trip.
template <class C>
BasicSeries2<C> invert_first(const BasicSeries2<C>& f) {
  if (!is_zero(f.coeff(0, 0))) throw SeriesError("invert_first: nonzero constant term");
  if (!(f.coeff(1, 0) == C(1)))
    throw SeriesError("invert_first: coefficient of the first variable must be 1");
  const int n = f.order();
  const BasicSeries2<C> x = BasicSeries2<C>::variable(0, n, f.vars());
  const BasicSeries2<C> fx = partial(f, Var::first).with_order(n);
  BasicSeries2<C> g = x;
  for (int iter = 0; iter <= 2 * n + 2; ++iter) {
    const BasicSeries2<C> residual = compose_first(f, g) - x;
    if (residual.is_zero_series()) return g;
    g = g - residual * reciprocal(compose_first(fx, g));
  }
  throw ConvergenceError("invert_first: Newton iteration did not reach an exact inverse");
}

template <class T, class C>
T evaluate(const BasicSeries2<C>& f, const T& x, const T& y) {
  T result(0);
  for (int a = f.order(); a >= 0; --a) {
    T inner(0);
    for (int b = f.order() - a; b >= 0; --b) inner = inner * y + to_real<T>(f.coeff(a, b));
    result = result * x + inner;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Univariate operations

template <class C>
BasicSeries1<C> derivative(const BasicSeries1<C>& f) {
  BasicSeries1<C> r(std::max(f.order() - 1, 0), f.var());
  for (int i = 1; i <= f.order(); ++i) r.at(i - 1) = f.coeff(i) * C(i);
  return r;
}

// Antiderivative with zero constant term, order raised by one.
template <class C>
BasicSeries1<C> integral(const BasicSeries1<C>& f) {
  BasicSeries1<C> r(f.order() + 1, f.var());
  for (int i = 0; i <= f.order(); ++i) r.at(i + 1) = f.coeff(i) / (i + 1);
  return r;
}

template <class C>
BasicSeries1<C> reciprocal(const BasicSeries1<C>& f) {
  const C& c0 = f.coeff(0);
  if (is_zero(c0)) throw SeriesError("reciprocal: series has zero constant term");
  const C inv = C(1) / c0;
  BasicSeries1<C> r(f.order(), f.var());
  r.at(0) = inv;
  for (int n = 1; n <= f.order(); ++n) {
    C acc(0);
    for (int k = 1; k <= n; ++k)
      if (!is_zero(f.coeff(k))) acc += f.coeff(k) * r.coeff(n - k);
    r.at(n) = -(acc * inv);
  }
  return r;
}

template <class C>
BasicSeries1<C> exp_series(const BasicSeries1<C>& g) {
  if (!is_zero(g.coeff(0))) throw SeriesError("exp_series: nonzero constant term");
  BasicSeries1<C> f(g.order(), g.var());
  f.at(0) = C(1);
  for (int n = 1; n <= g.order(); ++n) {
    C acc(0);
    for (int k = 1; k <= n; ++k)
      if (!is_zero(g.coeff(k))) acc += g.coeff(k) * f.coeff(n - k) * C(k);
    f.at(n) = acc / n;
  }
  return f;
}

// log f for f(0) = 1.
template <class C>
BasicSeries1<C> log_series(const BasicSeries1<C>& f) {
  if (!(f.coeff(0) == C(1))) throw SeriesError("log_series: constant term must be 1");
  const BasicSeries1<C> q = derivative(f) * reciprocal(f.with_order(std::max(f.order() - 1, 0)));
  return integral(q).with_order(f.order());
}

// f^alpha for f(0) = 1.
template <class C>
BasicSeries1<C> pow_series(const BasicSeries1<C>& f, const C& alpha) {
  return exp_series(log_series(f) * alpha);
}

template <class C>
BasicSeries1<C> compose(const BasicSeries1<C>& f, const BasicSeries1<C>& g) {
  if (!is_zero(g.coeff(0))) throw SeriesError("compose: substituted series has a nonzero constant term");
  const int n = std::min(f.order(), g.order());
  const BasicSeries1<C> gn = g.with_order(n);
  BasicSeries1<C> r(n, g.var());
  for (int a = f.order(); a >= 0; --a) {
    r = r * gn;
    if (a <= n) r.at(0) += f.coeff(a);
  }
  return r;
}

// Compositional inverse of f = x + ..., certified by round trip.
template <class C>
BasicSeries1<C> reversion(const BasicSeries1<C>& f) {
  if (!is_zero(f.coeff(0))) throw SeriesError("reversion: nonzero constant term");
  if (!(f.coeff(1) == C(1))) throw SeriesError("reversion: linear coefficient must be 1");
  const int n = f.order();
  const BasicSeries1<C> x = BasicSeries1<C>::variable(n, f.var());
  const BasicSeries1<C> fx = derivative(f).with_order(n);
  BasicSeries1<C> g = x;
  for (int iter = 0; iter <= 2 * n + 2; ++iter) {
    BasicSeries1<C> residual = compose(f, g) - x;
    bool zero = true;
    for (int i = 0; i <= n; ++i) zero = zero && is_zero(residual.coeff(i));
    if (zero) return g;
    g = g - residual * reciprocal(compose(fx, g));
  }
  throw ConvergenceError("reversion: Newton iteration did not reach an exact inverse");
}

template <class T, class C>
T evaluate(const BasicSeries1<C>& f, const T& x) {
  T r(0);
  for (int i = f.order(); i >= 0; --i) r = r * x + to_real<T>(f.coeff(i));
  return r;
}

// ---------------------------------------------------------------------------
// Formatting

std::string format_series(const Series2& f);
std::string format_series(const Series1& f);
std::string format_series(const ComplexSeries2& f);
// One line per total degree, each homogeneous part written as
// rational_factor * (integer polynomial).
std::string format_by_degree(const Series2& f);

}  // namespace pendinv
