#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "dedekind/arith.hpp"
#include "dedekind/bernoulli.hpp"
#include "dedekind/characters.hpp"
#include "dedekind/hp.hpp"
#include "dedekind/pi_power.hpp"

namespace dedekind {

namespace detail {

// Row of hurwitz_zeta(s, a/d) (or digamma(a/d) for s = 1), a = 1..d, per (d, s, bits).
inline std::shared_ptr<const std::vector<Real>> analytic_row(long long d, long s,
                                                             const PrecisionContext& ctx) {
  static std::mutex mu;
  static std::map<std::tuple<long long, long, long>, std::shared_ptr<const std::vector<Real>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  const auto key = std::make_tuple(d, s, ctx.bits());
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto row = std::make_shared<std::vector<Real>>();
  row->reserve(static_cast<size_t>(d));
  for (long long a = 1; a <= d; ++a) {
    const Rational x(a, d);
    row->push_back(s == 1 ? digamma(x, ctx) : hurwitz_zeta(s, x, ctx));
  }
  auto shared = std::shared_ptr<const std::vector<Real>>(std::move(row));
  cache.emplace(key, shared);
  return shared;
}

}  // namespace detail

// L(m, chi) for non-principal chi mod d:
//   m >= 2: d^{-m} sum_{a=1}^{d} chi(a) zeta(m, a/d)
//   m  = 1: -d^{-1} sum_{a=1}^{d-1} chi(a) psi(a/d)   (valid since sum chi(a) = 0)
inline Complex l_value(int m, const DirichletCharacter& chi, const PrecisionContext& ctx) {
  if (m < 1) throw std::invalid_argument("l_value: m must be positive");
  if (chi.is_principal()) throw std::invalid_argument("l_value: principal character not allowed");
  const long long d = chi.modulus();

  static std::mutex mu;
  static std::map<std::tuple<long long, long long, int, long>, Complex> cache;
  const auto key = std::make_tuple(d, chi.index(), m, ctx.bits());
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }

  const auto row = detail::analytic_row(d, m, ctx);
  Complex acc(ctx.bits());
  for (long long a = 1; a <= d; ++a) {
    if (m == 1 && a == d) break;
    const auto t = chi.angle(a);
    if (!t) continue;
    acc += unit_exp(*t, ctx) * (*row)[static_cast<size_t>(a - 1)];
  }
  Complex result = m == 1 ? -(acc * Rational(1, d)) : acc * rational_pow(d, -m);

  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(key, result);
  return result;
}

// (2 pi i)^{m+n} for even m+n, as an exact PiPower: (-1)^{(m+n)/2} 2^{m+n} pi^{m+n}.
inline PiPower two_pi_i_power(int mn) {
  if (mn % 2 != 0) throw std::invalid_argument("two_pi_i_power: exponent must be even");
  Rational c = rational_pow(2, mn);
  if ((mn / 2) % 2 != 0) c = -c;
  return {c, mn};
}

namespace detail {

inline Rational factorial(int k) {
  Rational f(1);
  for (int i = 2; i <= k; ++i) f *= Rational(i);
  return f;
}

// prod_{p|q} (1 - 1/p)(1 - 1/p^l)(1 - 1/p^{e3}), exact.
inline Rational triple_euler_product(long long q, long l, long e3) {
  Rational r(1);
  for (const auto& pp : factorize(q).factors) {
    const Rational p1 = Rational(1) - rational_pow(pp.prime, -1);
    const Rational p2 = Rational(1) - rational_pow(pp.prime, -l);
    const Rational p3 = Rational(1) - rational_pow(pp.prime, -e3);
    r *= p1 * p2 * p3;
  }
  return r;
}

}  // namespace detail

// sum over all odd chi mod q of L(m,chi) L(n,chibar), closed form:
// -(2 pi i)^{m+n} phi(q) / (4 m! n!) *
//   ( sum_l r_{m,n,l} phi_l(q) q^{l-m-n}  -  B_m B_n phi_{m+n-1}(q) / q )
inline PiPower odd_LL_closed(long long q, int m, int n) {
  if (q < 2) throw std::invalid_argument("odd_LL_closed: q must be >= 2");
  if (m % 2 == 0 || n % 2 == 0) throw std::invalid_argument("odd_LL_closed: m, n must be odd");
  Rational sum(0);
  for (int l = 0; l <= m + n; ++l)
    sum += r_coefficient(m, n, l) * phi_l(q, l) * rational_pow(q, l - m - n);
  sum -= bernoulli_number(m) * bernoulli_number(n) * phi_l(q, m + n - 1) / Rational(q);
  const PiPower tp = two_pi_i_power(m + n);
  const Rational pref =
      -(tp.coeff * Rational(euler_phi(q)) / (Rational(4) * detail::factorial(m) * detail::factorial(n)));
  return {pref * sum, tp.exponent};
}

// sum over odd primitive chi mod square-full q of L(m,chi) L(n,chibar):
// -(2 pi i)^{m+n}/(4 m! n!) sum_l r_{m,n,l} q^{l-m-n+1} prod_p (1-1/p)(1-1/p^l)(1-1/p^{l-m-n+1})
inline PiPower primitive_odd_LL_closed(long long q, int m, int n) {
  if (!is_square_full(q)) throw std::invalid_argument("primitive_odd_LL_closed: q must be square-full");
  if (m % 2 == 0 || n % 2 == 0)
    throw std::invalid_argument("primitive_odd_LL_closed: m, n must be odd");
  Rational sum(0);
  for (int l = 0; l <= m + n; ++l) {
    sum += r_coefficient(m, n, l) * rational_pow(q, l - m - n + 1) *
           detail::triple_euler_product(q, l, l - m - n + 1);
  }
  const PiPower tp = two_pi_i_power(m + n);
  const Rational pref = -(tp.coeff / (Rational(4) * detail::factorial(m) * detail::factorial(n)));
  return {pref * sum, tp.exponent};
}

enum class LLWeight { Plain, Twist2, Char2Bar };

// Lemma-2.7/2.8-style closed forms: the per-l factor is
//   Twist2:   (1 - 2^{-l}) 2^{l-m-n}
//   Char2Bar: (2^l - 2^{m+n} - 2)/(2^m + 2^n)     [printed form, audited as-is]
inline PiPower twisted_primitive_odd_LL_closed(long long q, int m, int n, LLWeight w) {
  if (!is_square_full(q))
    throw std::invalid_argument("twisted_primitive_odd_LL_closed: q must be square-full");
  if (m % 2 == 0 || n % 2 == 0)
    throw std::invalid_argument("twisted_primitive_odd_LL_closed: m, n must be odd");
  if (w == LLWeight::Plain) return primitive_odd_LL_closed(q, m, n);
  if (w == LLWeight::Char2Bar && q % 2 == 0)
    throw std::invalid_argument("twisted_primitive_odd_LL_closed: char2bar requires odd q");
  Rational sum(0);
  for (int l = 0; l <= m + n; ++l) {
    Rational factor;
    if (w == LLWeight::Twist2) {
      factor = (Rational(1) - rational_pow(2, -l)) * rational_pow(2, l - m - n);
    } else {
      factor = (rational_pow(2, l) - rational_pow(2, m + n) - Rational(2)) /
               (rational_pow(2, m) + rational_pow(2, n));
    }
    sum += r_coefficient(m, n, l) * factor * rational_pow(q, l - m - n + 1) *
           detail::triple_euler_product(q, l, l - m - n + 1);
  }
  const PiPower tp = two_pi_i_power(m + n);
  const Rational pref = -(tp.coeff / (Rational(4) * detail::factorial(m) * detail::factorial(n)));
  return {pref * sum, tp.exponent};
}

using CharWeight = std::function<Complex(const DirichletCharacter&)>;

// Brute-force counterpart: sum over odd chi mod q (primitive only if requested)
// of weight(chi) L(m,chi) L(n,chibar).
inline Complex brute_LL_sum(long long q, int m, int n, const CharWeight& weight,
                            bool primitive_only, const PrecisionContext& ctx) {
  if (q < 2) throw std::invalid_argument("brute_LL_sum: q must be >= 2");
  auto group = shared_group(q);
  Complex acc(ctx.bits());
  for (const auto& chi : odd_characters(*group, primitive_only)) {
    Complex w = weight ? weight(chi) : Complex::of(ctx.of(1));
    acc += w * l_value(m, chi, ctx) * l_value(n, chi.conjugate(), ctx);
  }
  return acc;
}

// Brute counterpart of the principal-twist sum: L evaluated at chi * chi0_2,
// i.e. the character induced to lcm(2, q). For even q that is chi itself.
inline Complex brute_LL_twist2(long long q, int m, int n, const PrecisionContext& ctx) {
  if (q % 2 == 0) return brute_LL_sum(q, m, n, nullptr, true, ctx);
  auto group = shared_group(q);
  Complex acc(ctx.bits());
  for (const auto& chi : odd_characters(*group, true)) {
    const auto lifted = induce(chi, 2 * q);
    const auto lifted_bar = induce(chi.conjugate(), 2 * q);
    acc += l_value(m, lifted, ctx) * l_value(n, lifted_bar, ctx);
  }
  return acc;
}

}  // namespace dedekind
