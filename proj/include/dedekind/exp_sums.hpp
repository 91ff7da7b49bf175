#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "dedekind/arith.hpp"
#include "dedekind/characters.hpp"
#include "dedekind/hp.hpp"

namespace dedekind {

namespace detail {

// e(r/q) for r in [0, q), computed once per (q, bits).
inline const std::vector<Complex>& root_table(long long q, const PrecisionContext& ctx) {
  static std::mutex mu;
  static std::map<std::pair<long long, long>, std::shared_ptr<std::vector<Complex>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(q, ctx.bits());
  auto it = cache.find(key);
  if (it == cache.end()) {
    auto tab = std::make_shared<std::vector<Complex>>();
    tab->reserve(static_cast<size_t>(q));
    for (long long r = 0; r < q; ++r) tab->push_back(unit_exp(Rational(r, q), ctx));
    it = cache.emplace(key, std::move(tab)).first;
  }
  return *it->second;
}

}  // namespace detail

// All Kloosterman sums K(n, q) for n in [0, q), one pass per modulus.
// Each K is the real part of sum_{(c,q)=1} e((nc + c^-1)/q); the imaginary
// residue is asserted below tolerance before projection.
class KloostermanTable {
 public:
  KloostermanTable(long long q, const PrecisionContext& ctx) : q_(q) {
    if (q < 2) throw std::invalid_argument("KloostermanTable: q must be >= 2");
    const auto& roots = detail::root_table(q, ctx);
    const auto units = reduced_residues(q);
    std::vector<long long> inv(units.size());
    for (size_t i = 0; i < units.size(); ++i) inv[i] = mod_inverse(units[i], q);
    values_.reserve(static_cast<size_t>(q));
    std::vector<long> counts(static_cast<size_t>(q));
    for (long long n = 0; n < q; ++n) {
      std::fill(counts.begin(), counts.end(), 0);
      for (size_t i = 0; i < units.size(); ++i)
        ++counts[static_cast<size_t>((n * units[i] + inv[i]) % q)];
      Complex acc(ctx.bits());
      for (long long r = 0; r < q; ++r)
        if (counts[static_cast<size_t>(r)] != 0)
          acc += roots[static_cast<size_t>(r)] * Real::of(counts[static_cast<size_t>(r)], ctx.bits());
      if (!(acc.im.abs() < ctx.tol()))
        throw NumericError("kloosterman: imaginary residue exceeded tolerance");
      values_.push_back(acc.re);
    }
  }

  long long modulus() const { return q_; }
  const Real& operator[](long long n) const {
    n %= q_;
    if (n < 0) n += q_;
    return values_[static_cast<size_t>(n)];
  }

 private:
  long long q_;
  std::vector<Real> values_;
};

inline std::shared_ptr<const KloostermanTable> shared_kloosterman_table(long long q,
                                                                        const PrecisionContext& ctx) {
  static std::mutex mu;
  static std::map<std::pair<long long, long>, std::shared_ptr<const KloostermanTable>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(q, ctx.bits());
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto t = std::make_shared<const KloostermanTable>(q, ctx);
  cache.emplace(key, t);
  return t;
}

inline Real kloosterman(long long n, long long q, const PrecisionContext& ctx) {
  return (*shared_kloosterman_table(q, ctx))[n];
}

// tau(chi) = sum_{a=1}^{q} chi(a) e(a/q); identical angles are grouped exactly
// before any numeric conversion.
inline Complex gauss_sum(const DirichletCharacter& chi, const PrecisionContext& ctx) {
  const long long q = chi.modulus();
  std::map<Rational, long> groups;
  for (long long a = 1; a <= q; ++a) {
    const auto t = chi.angle(a);
    if (!t) continue;
    ++groups[(*t + Rational(a, q)).frac()];
  }
  Complex acc(ctx.bits());
  for (const auto& [t, count] : groups) acc += unit_exp(t, ctx) * Real::of(count, ctx.bits());
  return acc;
}

// sum over units a of chi(a) K(a,q); equals tau(chi)^2 for non-principal chi.
inline Complex twisted_kloosterman(const DirichletCharacter& chi, const PrecisionContext& ctx) {
  if (chi.is_principal())
    throw std::invalid_argument("twisted_kloosterman: principal character outside hypothesis");
  const long long q = chi.modulus();
  const auto table = shared_kloosterman_table(q, ctx);
  std::map<Rational, Real> groups;
  for (long long a : reduced_residues(q)) {
    const auto t = chi.angle(a);
    auto [it, fresh] = groups.try_emplace(*t, ctx.zero());
    it->second += (*table)[a];
  }
  Complex acc(ctx.bits());
  for (const auto& [t, sum] : groups) acc += unit_exp(t, ctx) * sum;
  return acc;
}

}  // namespace dedekind
