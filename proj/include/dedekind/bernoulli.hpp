#pragma once

#include <mutex>
#include <stdexcept>
#include <vector>

#include "dedekind/rational.hpp"

namespace dedekind {

inline mpz_class binomial(unsigned long n, unsigned long k) {
  mpz_class r;
  if (k > n) return r;  // 0
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

namespace detail {

// Memoized Bernoulli table under the B_1 = -1/2 convention (B_m(0) = B_m),
// grown via the recurrence sum_{k=0}^{m} C(m+1,k) B_k = 0 (m >= 1).
class BernoulliTable {
 public:
  static BernoulliTable& instance() {
    static BernoulliTable t;
    return t;
  }

  Rational get(unsigned m) {
    std::lock_guard<std::mutex> lock(mu_);
    while (table_.size() <= m) {
      unsigned i = static_cast<unsigned>(table_.size());
      Rational acc(0);
      for (unsigned k = 0; k < i; ++k) acc += Rational(binomial(i + 1, k)) * table_[k];
      table_.push_back(-acc / Rational(static_cast<long>(i) + 1));
    }
    return table_[m];
  }

  // Coefficients of B_m(x) in descending powers: B_m(x) = sum_k C(m,k) B_k x^{m-k}.
  std::vector<Rational> poly_coeffs(unsigned m) {
    get(m);
    std::lock_guard<std::mutex> lock(mu_);
    std::vector<Rational> c;
    c.reserve(m + 1);
    for (unsigned k = 0; k <= m; ++k) c.push_back(Rational(binomial(m, k)) * table_[k]);
    return c;
  }

 private:
  BernoulliTable() { table_ = {Rational(1), Rational(-1, 2)}; }
  std::mutex mu_;
  std::vector<Rational> table_;
};

}  // namespace detail

inline Rational bernoulli_number(unsigned m) {
  return detail::BernoulliTable::instance().get(m);
}

inline Rational bernoulli_polynomial(unsigned m, const Rational& x) {
  const auto coeffs = detail::BernoulliTable::instance().poly_coeffs(m);
  Rational acc(0);
  for (const auto& c : coeffs) acc = acc * x + c;
  return acc;
}

// Periodic Bernoulli function: 0 at integers, B_m(x - floor(x)) otherwise.
inline Rational periodic_bernoulli(unsigned m, const Rational& x) {
  if (m < 1) throw std::invalid_argument("periodic_bernoulli: m must be >= 1");
  if (x.is_integer()) return Rational(0);
  return bernoulli_polynomial(m, x.frac());
}

// r_{m,n,l} = B_{m+n-l} * sum_{a<=m, b<=n, a+b >= m+n-l}
//             B_{m-a} B_{n-b} C(m,a) C(n,b) C(a+b+1, m+n-l) / (a+b+1)
inline Rational r_coefficient(int m, int n, int l) {
  if (m < 1 || n < 1) throw std::invalid_argument("r_coefficient: m, n must be positive");
  if (l < 0 || l > m + n) throw std::invalid_argument("r_coefficient: l outside [0, m+n]");
  const int w = m + n - l;
  Rational acc(0);
  for (int a = 0; a <= m; ++a) {
    for (int b = 0; b <= n; ++b) {
      if (a + b < w) continue;
      Rational term = bernoulli_number(m - a) * bernoulli_number(n - b);
      const mpz_class binprod = binomial(m, a) * binomial(n, b) * binomial(a + b + 1, w);
      term *= Rational(binprod);
      term /= Rational(a + b + 1);
      acc += term;
    }
  }
  return bernoulli_number(w) * acc;
}

}  // namespace dedekind
