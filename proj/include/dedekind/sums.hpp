#pragma once

#include <optional>
#include <stdexcept>

#include "dedekind/bernoulli.hpp"
#include "dedekind/rational.hpp"

namespace dedekind {

// Generalized Dedekind sum S(h,m,n,k) = sum_{j=1}^{k} Bbar_m(j/k) Bbar_n(hj/k).
// No coprimality is required by the definition; h is reduced mod k.
inline Rational dedekind_sum(long long h, int m, int n, long long k) {
  if (k <= 0) throw std::invalid_argument("dedekind_sum: k must be positive");
  if (m < 1 || n < 1) throw std::invalid_argument("dedekind_sum: weights must be positive");
  h %= k;
  if (h < 0) h += k;
  Rational acc(0);
  for (long long j = 1; j <= k; ++j)
    acc += periodic_bernoulli(m, Rational(j, k)) * periodic_bernoulli(n, Rational(h * j, k));
  return acc;
}

enum class HardyVariant { S1, S2, S3, S5 };

inline const char* hardy_name(HardyVariant v) {
  switch (v) {
    case HardyVariant::S1: return "s1";
    case HardyVariant::S2: return "s2";
    case HardyVariant::S3: return "s3";
    case HardyVariant::S5: return "s5";
  }
  return "?";
}

// Generalized Hardy sums, directly from their defining series:
//   s1(h,m,k) = sum (-1)^{floor(hj/k)}       Bbar_m(j/k)
//   s2(h,m,n,k) = sum (-1)^j                 Bbar_m(j/k) Bbar_n(hj/k)
//   s3(h,n,k) = sum (-1)^j                   Bbar_n(hj/k)
//   s5(h,m,k) = sum (-1)^{j+floor(hj/k)}     Bbar_m(j/k)
// The sign (-1)^{floor(hj/k)} has period 2k in h, so h is reduced mod 2k
// (never mod k) before the floor is taken. For s3 the single weight parameter
// m plays the role of n in the series above.
inline Rational hardy_sum(HardyVariant v, long long h, int m, std::optional<int> n, long long k) {
  if (k <= 0) throw std::invalid_argument("hardy_sum: k must be positive");
  if (m < 1) throw std::invalid_argument("hardy_sum: weight must be positive");
  if (v == HardyVariant::S2 && !n) throw std::invalid_argument("hardy_sum: s2 requires n");
  h %= 2 * k;
  if (h < 0) h += 2 * k;
  Rational acc(0);
  for (long long j = 1; j <= k; ++j) {
    const long long floor_sign = (h * j / k) & 1;
    switch (v) {
      case HardyVariant::S1: {
        Rational term = periodic_bernoulli(m, Rational(j, k));
        acc += floor_sign ? -term : term;
        break;
      }
      case HardyVariant::S2: {
        Rational term =
            periodic_bernoulli(m, Rational(j, k)) * periodic_bernoulli(*n, Rational(h * j, k));
        acc += (j & 1) ? -term : term;
        break;
      }
      case HardyVariant::S3: {
        Rational term = periodic_bernoulli(m, Rational(h * j, k));
        acc += (j & 1) ? -term : term;
        break;
      }
      case HardyVariant::S5: {
        Rational term = periodic_bernoulli(m, Rational(j, k));
        acc += ((j + floor_sign) & 1) ? -term : term;
        break;
      }
    }
  }
  return acc;
}

inline Rational hardy_s1(long long h, int m, long long k) {
  return hardy_sum(HardyVariant::S1, h, m, std::nullopt, k);
}
inline Rational hardy_s2(long long h, int m, int n, long long k) {
  return hardy_sum(HardyVariant::S2, h, m, n, k);
}
inline Rational hardy_s3(long long h, int n, long long k) {
  return hardy_sum(HardyVariant::S3, h, n, std::nullopt, k);
}
inline Rational hardy_s5(long long h, int m, long long k) {
  return hardy_sum(HardyVariant::S5, h, m, std::nullopt, k);
}

}  // namespace dedekind
