#pragma once

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "dedekind/rational.hpp"

namespace dedekind {

struct PrimePower {
  long long prime;
  int exponent;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// Complete prime factorization, primes ascending. factorize(1) is empty.
struct Factorization {
  std::vector<PrimePower> factors;
};

inline Factorization factorize(long long q) {
  if (q <= 0) throw std::invalid_argument("factorize: q must be positive");
  Factorization f;
  auto strip = [&](long long p) {
    int e = 0;
    while (q % p == 0) {
      q /= p;
      ++e;
    }
    if (e > 0) f.factors.push_back({p, e});
  };
  strip(2);
  strip(3);
  for (long long d = 5; d * d <= q; d += 6) {
    strip(d);
    strip(d + 2);
  }
  if (q > 1) f.factors.push_back({q, 1});
  return f;
}

// Every prime exponent >= 2; vacuously true for q = 1.
inline bool is_square_full(long long q) {
  for (const auto& pp : factorize(q).factors)
    if (pp.exponent < 2) return false;
  return true;
}

inline long long euler_phi(long long q) {
  long long r = 1;
  for (const auto& pp : factorize(q).factors) {
    long long pe = pp.prime;
    for (int i = 1; i < pp.exponent; ++i) pe *= pp.prime;
    r *= pe - pe / pp.prime;
  }
  return r;
}

inline int moebius(long long n) {
  const auto f = factorize(n);
  for (const auto& pp : f.factors)
    if (pp.exponent > 1) return 0;
  return f.factors.size() % 2 == 0 ? 1 : -1;
}

// phi_l(q) = prod_{p|q} (1 - p^{-l}); exact for any integer l, empty product for q=1.
inline Rational phi_l(long long q, long l) {
  Rational r(1);
  for (const auto& pp : factorize(q).factors) r *= Rational(1) - rational_pow(pp.prime, -l);
  return r;
}

// Unique x in [1, q-1] with a*x == 1 (mod q).
inline long long mod_inverse(long long a, long long q) {
  if (q < 2) throw std::invalid_argument("mod_inverse: modulus must be >= 2");
  long long r0 = q, r1 = ((a % q) + q) % q;
  long long t0 = 0, t1 = 1;
  while (r1 != 0) {
    long long k = r0 / r1;
    r0 -= k * r1;
    std::swap(r0, r1);
    t0 -= k * t1;
    std::swap(t0, t1);
  }
  if (r0 != 1) throw std::invalid_argument("mod_inverse: argument not invertible");
  return ((t0 % q) + q) % q;
}

// All a in [1, q] with gcd(a, q) = 1, ascending; reduced_residues(1) = {1}.
inline std::vector<long long> reduced_residues(long long q) {
  if (q <= 0) throw std::invalid_argument("reduced_residues: q must be positive");
  std::vector<long long> out;
  for (long long a = 1; a <= q; ++a)
    if (std::gcd(a, q) == 1) out.push_back(a);
  return out;
}

inline std::vector<long long> divisors(long long q) {
  std::vector<long long> out;
  for (long long d = 1; d * d <= q; ++d) {
    if (q % d == 0) {
      out.push_back(d);
      if (d != q / d) out.push_back(q / d);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// sum_{d|q} mu(d) phi(q/d) phi_l(q/d) (q/d)^s, exact.
inline Rational divisor_moebius_sum(long long q, long l, long s) {
  Rational acc(0);
  for (long long d : divisors(q)) {
    const int mu = moebius(d);
    if (mu == 0) continue;
    const long long qd = q / d;
    acc += Rational(mu) * Rational(euler_phi(qd)) * phi_l(qd, l) * rational_pow(qd, s);
  }
  return acc;
}

}  // namespace dedekind
