#pragma once

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "dedekind/bernoulli.hpp"
#include "dedekind/pi_power.hpp"
#include "dedekind/rational.hpp"

namespace dedekind {

// Raised when a realness or convergence assertion inside the numeric kernel fails.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// High-precision real; each value carries the mantissa precision that produced it.
// Binary operations round to the lower of the two operand precisions.
class Real {
 public:
  Real() { mpfr_init2(v_, kMinPrec); mpfr_set_zero(v_, 1); }
  explicit Real(mpfr_prec_t prec) {
    mpfr_init2(v_, std::max<mpfr_prec_t>(prec, kMinPrec));
    mpfr_set_zero(v_, 1);
  }
  Real(const Real& o) { mpfr_init2(v_, o.precision()); mpfr_set(v_, o.v_, MPFR_RNDN); }
  Real(Real&& o) noexcept { mpfr_init2(v_, kMinPrec); mpfr_swap(v_, o.v_); }
  Real& operator=(const Real& o) {
    if (this != &o) {
      mpfr_set_prec(v_, o.precision());
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    if (this != &o) mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  static Real of(long n, mpfr_prec_t prec) {
    Real r(prec);
    mpfr_set_si(r.v_, n, MPFR_RNDN);
    return r;
  }
  static Real of(const Rational& q, mpfr_prec_t prec) {
    Real r(prec);
    mpfr_set_q(r.v_, q.raw().get_mpq_t(), MPFR_RNDN);
    return r;
  }
  static Real pi(mpfr_prec_t prec) {
    Real r(prec);
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
  }
  // 2^e, exact.
  static Real pow2(long e, mpfr_prec_t prec) {
    Real r(prec);
    mpfr_set_si_2exp(r.v_, 1, e, MPFR_RNDN);
    return r;
  }

  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
  mpfr_srcptr raw() const { return v_; }

  int sign() const { return mpfr_sgn(v_); }
  bool is_zero() const { return mpfr_zero_p(v_); }

  friend Real operator+(const Real& a, const Real& b) { return binop(a, b, mpfr_add); }
  friend Real operator-(const Real& a, const Real& b) { return binop(a, b, mpfr_sub); }
  friend Real operator*(const Real& a, const Real& b) { return binop(a, b, mpfr_mul); }
  friend Real operator/(const Real& a, const Real& b) { return binop(a, b, mpfr_div); }
  Real& operator+=(const Real& o) { return *this = *this + o; }
  Real& operator-=(const Real& o) { return *this = *this - o; }
  Real& operator*=(const Real& o) { return *this = *this * o; }
  Real& operator/=(const Real& o) { return *this = *this / o; }

  Real operator-() const {
    Real r(precision());
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
  }
  friend Real operator*(const Real& a, long b) {
    Real r(a.precision());
    mpfr_mul_si(r.v_, a.v_, b, MPFR_RNDN);
    return r;
  }
  friend Real operator/(const Real& a, long b) {
    Real r(a.precision());
    mpfr_div_si(r.v_, a.v_, b, MPFR_RNDN);
    return r;
  }
  friend Real operator*(const Real& a, const Rational& b) {
    Real r(a.precision());
    mpfr_mul_q(r.v_, a.v_, b.raw().get_mpq_t(), MPFR_RNDN);
    return r;
  }

  Real abs() const {
    Real r(precision());
    mpfr_abs(r.v_, v_, MPFR_RNDN);
    return r;
  }
  Real pow_int(long e) const {
    Real r(precision());
    mpfr_pow_si(r.v_, v_, e, MPFR_RNDN);
    return r;
  }
  Real log() const {
    Real r(precision());
    mpfr_log(r.v_, v_, MPFR_RNDN);
    return r;
  }
  Real sqrt() const {
    Real r(precision());
    mpfr_sqrt(r.v_, v_, MPFR_RNDN);
    return r;
  }
  // (sin theta, cos theta), both at theta's precision.
  static std::pair<Real, Real> sin_cos(const Real& theta) {
    Real s(theta.precision()), c(theta.precision());
    mpfr_sin_cos(s.v_, c.v_, theta.v_, MPFR_RNDN);
    return {std::move(s), std::move(c)};
  }

  friend bool operator<(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) <= 0; }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) > 0; }
  friend bool operator>=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) >= 0; }
  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend bool operator!=(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) == 0; }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  // Decimal string with the given number of significant digits.
  std::string str(int digits) const {
    char* s = nullptr;
    mpfr_asprintf(&s, "%.*Rg", digits, v_);
    std::string out(s);
    mpfr_free_str(s);
    return out;
  }
  // Hexadecimal float, exact round-trip at the value's own precision.
  std::string hex() const {
    char* s = nullptr;
    mpfr_asprintf(&s, "%Ra", v_);
    std::string out(s);
    mpfr_free_str(s);
    return out;
  }
  static Real from_hex(const std::string& s, mpfr_prec_t prec) {
    Real r(prec);
    if (mpfr_set_str(r.v_, s.c_str(), 16, MPFR_RNDN) != 0)
      throw std::invalid_argument("Real::from_hex: bad literal: " + s);
    return r;
  }

 private:
  static constexpr mpfr_prec_t kMinPrec = 16;
  using MpfrBinop = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);
  static Real binop(const Real& a, const Real& b, MpfrBinop op) {
    Real r(std::min(a.precision(), b.precision()));
    op(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  mpfr_t v_;
};

struct Complex {
  Real re, im;

  Complex() = default;
  explicit Complex(mpfr_prec_t prec) : re(prec), im(prec) {}
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

  static Complex of(const Real& r) { return {r, Real(r.precision())}; }

  friend Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
  friend Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
  friend Complex operator*(const Complex& a, const Complex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Complex operator*(const Complex& a, const Real& s) { return {a.re * s, a.im * s}; }
  friend Complex operator*(const Complex& a, const Rational& s) { return {a.re * s, a.im * s}; }
  Complex& operator+=(const Complex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Complex& operator-=(const Complex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Complex operator-() const { return {-re, -im}; }

  Complex conj() const { return {re, -im}; }
  Real norm() const { return re * re + im * im; }
  Real abs() const { return norm().sqrt(); }
};

// Working precision plus the comparison tolerance derived from it (2^{-bits/2}
// unless overridden). pi is computed once at construction.
class PrecisionContext {
 public:
  explicit PrecisionContext(long bits) : PrecisionContext(bits, Real::pow2(-(bits / 2), 64)) {}
  PrecisionContext(long bits, Real tol)
      : bits_(bits), pi_(Real::pi(bits)), tol_(std::move(tol)) {
    if (bits < 64) throw std::invalid_argument("PrecisionContext: bits must be >= 64");
    if (!(tol_ > Real::of(0L, 64))) throw std::invalid_argument("PrecisionContext: tol must be positive");
  }

  long bits() const { return bits_; }
  const Real& pi() const { return pi_; }
  const Real& tol() const { return tol_; }
  Real zero() const { return Real(bits_); }
  Real of(long n) const { return Real::of(n, bits_); }
  Real of(const Rational& q) const { return Real::of(q, bits_); }

  // bits = max(floor_bits, 128 + 8*ceil(log2 q)): keeps >= 60 guard bits for the
  // O(q^2) summations at desk-scale moduli.
  static PrecisionContext for_modulus(long long q, long floor_bits = 192) {
    long lg = 0;
    while ((1LL << lg) < q) ++lg;
    return PrecisionContext(std::max(floor_bits, 128 + 8 * lg));
  }

 private:
  long bits_;
  Real pi_;
  Real tol_;
};

inline Real pi_power_value(const PiPower& p, const PrecisionContext& ctx) {
  if (p.exponent == 0) return ctx.of(p.coeff);
  return ctx.pi().pow_int(p.exponent) * p.coeff;
}

// e(t) = exp(2 pi i t); t is reduced mod 1 exactly before conversion.
inline Complex unit_exp(const Rational& t, const PrecisionContext& ctx) {
  const Real theta = ctx.pi() * 2L * t.frac();
  auto [s, c] = Real::sin_cos(theta);
  return {std::move(c), std::move(s)};
}

// Hurwitz zeta(s, x) for integer s >= 2, rational x in (0, 1], by Euler-Maclaurin:
// N direct terms, then tail (N+x)^{1-s}/(s-1) + (N+x)^{-s}/2 plus Bernoulli
// corrections until the next term falls below 2^{-bits-8}; both bounds asserted.
inline Real hurwitz_zeta(long s, const Rational& x, const PrecisionContext& ctx) {
  if (s < 2) throw std::invalid_argument("hurwitz_zeta: s must be >= 2");
  if (!(x > Rational(0)) || x > Rational(1)) throw std::invalid_argument("hurwitz_zeta: x outside (0,1]");
  const long bits = ctx.bits();
  const long N = std::max<long>(bits, 2 * s);

  Real acc(bits);
  for (long k = 0; k < N; ++k) {
    Real base = ctx.of(Rational(k) + x);
    acc += base.pow_int(-s);
  }
  const Real w = ctx.of(Rational(N) + x);
  acc += w.pow_int(1 - s) / (s - 1);
  acc += w.pow_int(-s) / 2L;

  // Correction terms: B_{2j}/(2j)! * s(s+1)...(s+2j-2) * w^{-(s+2j-1)}.
  const Real bound = Real::pow2(-(bits + 8), 64) * acc.abs();
  Real winv2 = w.pow_int(-2);
  Real wpow = w.pow_int(-(s + 1));
  Rational poch_over_fact(Rational(s) / 2);  // j=1: s / 2!
  bool converged = false;
  for (long j = 1; j <= 256; ++j) {
    Real term = ctx.of(poch_over_fact * bernoulli_number(2 * j)) * wpow;
    acc += term;
    if (term.abs() < bound) {
      converged = true;
      break;
    }
    poch_over_fact *= Rational(s + 2 * j - 1) * Rational(s + 2 * j);
    poch_over_fact /= Rational(2 * j + 1) * Rational(2 * j + 2);
    wpow *= winv2;
  }
  if (!converged) throw NumericError("hurwitz_zeta: Euler-Maclaurin correction did not reach bound");
  return acc;
}

// Digamma psi(x) for rational x > 0: upward recurrence past a precision-dependent
// threshold, then the asymptotic series ln x - 1/(2x) - sum B_{2j}/(2j x^{2j}),
// truncated once the next term is below 2^{-bits-8} relative; asserted.
inline Real digamma(const Rational& x, const PrecisionContext& ctx) {
  if (!(x > Rational(0))) throw std::invalid_argument("digamma: x must be positive");
  const long bits = ctx.bits();
  const long threshold = std::max<long>(32, bits / 4);

  Real shift(bits);
  Rational y = x;
  while (y < Rational(threshold)) {
    shift += ctx.of(y).pow_int(-1);
    y += Rational(1);
  }

  const Real yr = ctx.of(y);
  Real acc = yr.log() - yr.pow_int(-1) / 2L;
  const Real bound = Real::pow2(-(bits + 8), 64) * acc.abs();
  Real yinv2 = yr.pow_int(-2);
  Real ypow = yinv2;
  Real prev_mag(bits);
  bool converged = false;
  for (long j = 1; j <= 512; ++j) {
    Real term = ctx.of(bernoulli_number(2 * j) / Rational(2 * j)) * ypow;
    acc -= term;
    const Real mag = term.abs();
    if (mag < bound) {
      converged = true;
      break;
    }
    if (j > 1 && mag >= prev_mag)
      throw NumericError("digamma: asymptotic series diverging before reaching bound");
    prev_mag = mag;
    ypow *= yinv2;
  }
  if (!converged) throw NumericError("digamma: asymptotic series did not reach bound");
  return acc - shift;
}

}  // namespace dedekind
