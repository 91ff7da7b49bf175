#include <catch2/catch_amalgamated.hpp>

#include <mpfr.h>

#include <random>

#include "dedekind/hp.hpp"

using namespace dedekind;

namespace {

bool within(const Real& a, const Real& b, const Real& tol) { return (a - b).abs() < tol; }

Real euler_gamma(long bits) {
  Real g(bits);
  mpfr_const_euler(const_cast<mpfr_ptr>(g.raw()), MPFR_RNDN);
  return g;
}

Real riemann_zeta(unsigned long s, long bits) {
  Real z(bits);
  mpfr_zeta_ui(const_cast<mpfr_ptr>(z.raw()), s, MPFR_RNDN);
  return z;
}

Real mpfr_digamma_oracle(const Rational& x, long bits) {
  Real r = Real::of(x, bits);
  Real out(bits);
  mpfr_digamma(const_cast<mpfr_ptr>(out.raw()), r.raw(), MPFR_RNDN);
  return out;
}

}  // namespace

TEST_CASE("real value semantics and precision rules") {
  const Real a = Real::of(Rational(1, 3), 256);
  const Real b = Real::of(Rational(1, 3), 128);
  CHECK(a.precision() == 256);
  CHECK((a + b).precision() == 128);
  CHECK((a * b).precision() == 128);
  Real c = a;
  CHECK(c.precision() == 256);
  CHECK(Real::pow2(-10, 64).to_double() == Catch::Approx(1.0 / 1024));
  CHECK(Real::from_hex(a.hex(), 256) == a);
}

TEST_CASE("precision context") {
  PrecisionContext ctx(192);
  CHECK(ctx.bits() == 192);
  CHECK(within(ctx.pi(), Real::pi(192), Real::pow2(-190, 64)));
  CHECK(ctx.tol() == Real::pow2(-96, 64));
  CHECK_THROWS_AS(PrecisionContext(32), std::invalid_argument);
  CHECK(PrecisionContext::for_modulus(3).bits() == 192);
  CHECK(PrecisionContext::for_modulus(10000).bits() == 128 + 8 * 14);
}

TEST_CASE("unit exponential") {
  PrecisionContext ctx(192);
  const auto one = unit_exp(Rational(0), ctx);
  CHECK(one.re == Real::of(1L, 192));
  CHECK(one.im.is_zero());
  const auto minus_one = unit_exp(Rational(1, 2), ctx);
  CHECK(within(minus_one.re, Real::of(-1L, 192), ctx.tol()));
  CHECK(minus_one.im.abs() < ctx.tol());
  const auto third = unit_exp(Rational(1, 3), ctx);
  CHECK(within(third.re, Real::of(Rational(-1, 2), 192), ctx.tol()));
  CHECK(within(third.im, Real::of(3L, 192).sqrt() / 2L, ctx.tol()));

  SECTION("modulus one and conjugate symmetry on random rationals") {
    std::mt19937 rng(20240901);
    std::uniform_int_distribution<long> num(-1000, 1000), den(1, 1000);
    for (int i = 0; i < 200; ++i) {
      const Rational t(num(rng), den(rng));
      const auto z = unit_exp(t, ctx);
      CHECK((z.abs() - ctx.of(1)).abs() < ctx.tol());
      const auto w = z * unit_exp(-t, ctx);
      CHECK(within(w.re, ctx.of(1), ctx.tol()));
      CHECK(w.im.abs() < ctx.tol());
    }
  }
  SECTION("full root sums vanish") {
    for (long p : {2, 3, 5, 7, 11}) {
      Complex acc(ctx.bits());
      for (long a = 0; a < p; ++a) acc += unit_exp(Rational(a, p), ctx);
      CHECK(acc.abs() < ctx.tol());
    }
  }
}

TEST_CASE("hurwitz zeta") {
  PrecisionContext ctx(192);
  const Real pi2 = ctx.pi() * ctx.pi();
  CHECK(within(hurwitz_zeta(2, Rational(1), ctx), pi2 / 6L, ctx.tol()));
  CHECK(within(hurwitz_zeta(2, Rational(1, 2), ctx), pi2 / 2L, ctx.tol()));
  CHECK(within(hurwitz_zeta(4, Rational(1), ctx), pi2 * pi2 / 90L, ctx.tol()));
  CHECK_THROWS_AS(hurwitz_zeta(1, Rational(1, 2), ctx), std::invalid_argument);
  CHECK_THROWS_AS(hurwitz_zeta(2, Rational(3, 2), ctx), std::invalid_argument);
  CHECK_THROWS_AS(hurwitz_zeta(2, Rational(0), ctx), std::invalid_argument);

  SECTION("matches mpfr riemann zeta at x=1") {
    for (long s = 2; s <= 7; ++s)
      CHECK(within(hurwitz_zeta(s, Rational(1), ctx), riemann_zeta(s, 192), ctx.tol()));
  }
  SECTION("zeta(s, 1/2) = (2^s - 1) zeta(s)") {
    for (long s = 2; s <= 6; ++s) {
      const Real expected = riemann_zeta(s, 192) * Rational(Rational(2).pow(s) - Rational(1));
      CHECK(within(hurwitz_zeta(s, Rational(1, 2), ctx), expected, ctx.tol()));
    }
  }
  SECTION("precision escalation agrees to 2^-120") {
    PrecisionContext lo(128), hi(256);
    const Rational xs[] = {Rational(1, 3), Rational(2, 7), Rational(1), Rational(5, 9)};
    for (const auto& x : xs) {
      const Real a = hurwitz_zeta(2, x, lo);
      const Real b = hurwitz_zeta(2, x, hi);
      CHECK((a - b).abs() < Real::pow2(-120, 64));
    }
  }
}

TEST_CASE("digamma") {
  PrecisionContext ctx(192);
  const Real gamma = euler_gamma(192);
  CHECK(within(digamma(Rational(1), ctx), -gamma, ctx.tol()));
  const Real ln2 = Real::of(2L, 192).log();
  CHECK(within(digamma(Rational(1, 2), ctx), -gamma - ln2 * 2L, ctx.tol()));
  CHECK(within(digamma(Rational(2), ctx), ctx.of(1) - gamma, ctx.tol()));
  CHECK_THROWS_AS(digamma(Rational(0), ctx), std::invalid_argument);
  CHECK_THROWS_AS(digamma(Rational(-1, 2), ctx), std::invalid_argument);

  SECTION("recurrence psi(x+1) = psi(x) + 1/x on random rationals") {
    std::mt19937 rng(77);
    std::uniform_int_distribution<long> num(1, 999), den(1, 100);
    for (int i = 0; i < 50; ++i) {
      long d = den(rng);
      Rational x(num(rng) % (10 * d) + 1, d);
      const Real lhs = digamma(x + Rational(1), ctx) - digamma(x, ctx) - ctx.of(x).pow_int(-1);
      CHECK(lhs.abs() < ctx.tol());
    }
  }
  SECTION("matches mpfr digamma") {
    const Rational xs[] = {Rational(1, 7), Rational(3, 4), Rational(13, 9), Rational(55, 7)};
    for (const auto& x : xs) CHECK(within(digamma(x, ctx), mpfr_digamma_oracle(x, 192), ctx.tol()));
  }
}

TEST_CASE("pi power conversion") {
  PrecisionContext ctx(128);
  const Real v = pi_power_value({Rational(1, 27), 2}, ctx);
  CHECK(within(v, ctx.pi() * ctx.pi() * Rational(1, 27), ctx.tol()));
  CHECK(pi_power_value({Rational(3, 4), 0}, ctx) == ctx.of(Rational(3, 4)));
}
