#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "dedekind/arith.hpp"
#include "dedekind/hp.hpp"
#include "dedekind/rational.hpp"

namespace dedekind {

namespace detail {

inline long long pow_mod(long long b, long long e, long long m) {
  long long r = 1 % m;
  b %= m;
  while (e > 0) {
    if (e & 1) r = static_cast<long long>(static_cast<__int128>(r) * b % m);
    b = static_cast<long long>(static_cast<__int128>(b) * b % m);
    e >>= 1;
  }
  return r;
}

inline long long multiplicative_order(long long g, long long pe, long long group_order) {
  long long ord = group_order;
  for (const auto& pp : factorize(group_order).factors) {
    while (ord % pp.prime == 0 && pow_mod(g, ord / pp.prime, pe) == 1) ord /= pp.prime;
  }
  return ord;
}

inline long long smallest_primitive_root(long long pe, long long group_order) {
  for (long long g = 2; g < pe; ++g) {
    if (std::gcd(g, pe) != 1) continue;
    if (multiplicative_order(g, pe, group_order) == group_order) return g;
  }
  throw std::logic_error("smallest_primitive_root: none found");
}

}  // namespace detail

class DirichletCharacter;

// The full character group mod q, decomposed over the prime-power components of q.
// Odd p^e: cyclic on the smallest primitive root. 2: trivial. 4: <3>.
// 2^e (e>=3): <2^e - 1> x <5>. Discrete logs are precomputed for every unit.
class CharacterGroup {
 public:
  explicit CharacterGroup(long long q) : q_(q) {
    if (q <= 0) throw std::invalid_argument("CharacterGroup: q must be positive");
    fac_ = factorize(q);
    for (const auto& pp : fac_.factors) {
      long long pe = 1;
      for (int i = 0; i < pp.exponent; ++i) pe *= pp.prime;
      Component comp;
      comp.modulus = pe;
      if (pp.prime == 2) {
        if (pp.exponent == 1) {
          // trivial unit group
        } else if (pp.exponent == 2) {
          comp.generators = {{3, 2}};
        } else {
          comp.generators = {{pe - 1, 2}, {5, pe / 4}};
        }
      } else {
        const long long go = pe - pe / pp.prime;
        comp.generators = {{detail::smallest_primitive_root(pe, go), go}};
      }
      build_dlog(comp);
      components_.push_back(std::move(comp));
    }
    for (const auto& c : components_)
      for (const auto& g : c.generators) orders_.push_back(g.order);
    phi_ = 1;
    for (long long o : orders_) phi_ *= o;

    dlog_.assign(static_cast<size_t>(q), {});
    for (long long a = 1; a <= q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      std::vector<long long>& row = dlog_[static_cast<size_t>(a % q)];
      for (const auto& c : components_) {
        const auto& e = c.dlog[static_cast<size_t>(a % c.modulus)];
        row.insert(row.end(), e.begin(), e.end());
      }
    }
  }

  long long modulus() const { return q_; }
  long long order() const { return phi_; }
  const std::vector<long long>& generator_orders() const { return orders_; }
  std::vector<long long> generators() const {
    std::vector<long long> gs;
    for (const auto& c : components_)
      for (const auto& g : c.generators) gs.push_back(crt_lift(g.value, c.modulus));
    return gs;
  }

  // Exponent tuple of a (one entry per generator) or nullopt when gcd(a,q) > 1.
  std::optional<std::vector<long long>> dlog(long long a) const {
    a %= q_;
    if (a < 0) a += q_;
    if (std::gcd(a == 0 ? q_ : a, q_) != 1) return std::nullopt;
    return dlog_[static_cast<size_t>(a)];
  }

  DirichletCharacter character(long long index) const;
  DirichletCharacter character_from_exponents(std::vector<long long> expo) const;
  DirichletCharacter principal() const;
  std::vector<DirichletCharacter> all_characters() const;

 private:
  friend class DirichletCharacter;

  struct Generator {
    long long value;
    long long order;
  };
  struct Component {
    long long modulus;
    std::vector<Generator> generators;
    std::vector<std::vector<long long>> dlog;  // per residue mod `modulus`; empty = non-unit
  };

  void build_dlog(Component& c) const {
    c.dlog.assign(static_cast<size_t>(c.modulus), {});
    if (c.generators.empty()) return;  // trivial unit group, nothing to index
    std::vector<long long> idx(c.generators.size(), 0);
    for (;;) {
      long long a = 1;
      for (size_t i = 0; i < c.generators.size(); ++i)
        a = static_cast<long long>(static_cast<__int128>(a) *
                                   detail::pow_mod(c.generators[i].value, idx[i], c.modulus) % c.modulus);
      c.dlog[static_cast<size_t>(a)] = idx;
      size_t i = c.generators.size();
      while (i > 0) {
        --i;
        if (++idx[i] < c.generators[i].order) break;
        idx[i] = 0;
        if (i == 0) return;
      }
    }
  }

  // Unit mod q that is g on the component of modulus pe and 1 elsewhere.
  long long crt_lift(long long g, long long pe) const {
    const long long rest = q_ / pe;
    if (rest == 1) return g % q_;
    // x = 1 + rest*k with k = (g-1) * rest^{-1} (mod pe)
    const long long k = static_cast<long long>(
        static_cast<__int128>((g - 1) % pe) * mod_inverse(rest, pe) % pe);
    return static_cast<long long>((1 + static_cast<__int128>(rest) * k) % q_);
  }

  long long q_;
  Factorization fac_;
  std::vector<Component> components_;
  std::vector<long long> orders_;
  std::vector<std::vector<long long>> dlog_;
  long long phi_;
};

enum class Parity { Even, Odd };

// A character is its exponent tuple over the group's generators; evaluation
// returns the exact rational angle t with chi(a) = e(t), or nullopt on non-units.
class DirichletCharacter {
 public:
  DirichletCharacter(std::shared_ptr<const CharacterGroup> group, std::vector<long long> expo)
      : group_(std::move(group)), expo_(std::move(expo)) {
    const auto& orders = group_->generator_orders();
    if (expo_.size() != orders.size())
      throw std::invalid_argument("DirichletCharacter: exponent tuple size mismatch");
    for (size_t i = 0; i < expo_.size(); ++i) {
      if (expo_[i] < 0 || expo_[i] >= orders[i])
        throw std::invalid_argument("DirichletCharacter: exponent out of range");
    }
  }

  const CharacterGroup& group() const { return *group_; }
  std::shared_ptr<const CharacterGroup> group_ptr() const { return group_; }
  long long modulus() const { return group_->modulus(); }
  const std::vector<long long>& exponents() const { return expo_; }

  // Canonical index: lexicographic rank of the exponent tuple.
  long long index() const {
    long long idx = 0;
    const auto& orders = group_->generator_orders();
    for (size_t i = 0; i < expo_.size(); ++i) idx = idx * orders[i] + expo_[i];
    return idx;
  }

  bool is_principal() const {
    for (long long e : expo_)
      if (e != 0) return false;
    return true;
  }

  std::optional<Rational> angle(long long a) const {
    const auto dl = group_->dlog(a);
    if (!dl) return std::nullopt;
    const auto& orders = group_->generator_orders();
    Rational t(0);
    for (size_t i = 0; i < expo_.size(); ++i) t += Rational(expo_[i] * (*dl)[i], orders[i]);
    return t.frac();
  }

  // chi(a) as a complex value; exact zero on non-units.
  Complex value(long long a, const PrecisionContext& ctx) const {
    const auto t = angle(a);
    if (!t) return Complex(ctx.bits());
    return unit_exp(*t, ctx);
  }

  DirichletCharacter conjugate() const {
    std::vector<long long> e(expo_.size());
    const auto& orders = group_->generator_orders();
    for (size_t i = 0; i < expo_.size(); ++i) e[i] = expo_[i] == 0 ? 0 : orders[i] - expo_[i];
    return {group_, std::move(e)};
  }

  Parity parity() const {
    if (modulus() <= 2) return Parity::Even;
    const auto t = angle(modulus() - 1);
    return (*t == Rational(1, 2)) ? Parity::Odd : Parity::Even;
  }
  bool is_odd() const { return parity() == Parity::Odd; }

  // Smallest f | q such that chi is induced by a character mod f.
  long long conductor() const {
    const long long q = modulus();
    for (long long f : divisors(q)) {
      bool ok = true;
      for (long long a = 1; a <= q && ok; ++a) {
        if (std::gcd(a, q) != 1 || a % f != 1 % f) continue;
        if (!angle(a)->is_zero()) ok = false;
      }
      if (ok) return f;
    }
    return q;
  }

  bool is_primitive() const { return conductor() == modulus(); }

 private:
  std::shared_ptr<const CharacterGroup> group_;
  std::vector<long long> expo_;
};

// Shared, immutable group cache (groups are rebuilt deterministically).
inline std::shared_ptr<const CharacterGroup> shared_group(long long q) {
  static std::mutex mu;
  static std::map<long long, std::shared_ptr<const CharacterGroup>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(q);
  if (it != cache.end()) return it->second;
  auto g = std::make_shared<const CharacterGroup>(q);
  cache.emplace(q, g);
  return g;
}

inline DirichletCharacter CharacterGroup::character_from_exponents(std::vector<long long> expo) const {
  return {shared_group(q_), std::move(expo)};
}

inline DirichletCharacter CharacterGroup::character(long long index) const {
  if (index < 0 || index >= phi_) throw std::invalid_argument("character: index out of range");
  std::vector<long long> expo(orders_.size(), 0);
  for (size_t i = orders_.size(); i > 0; --i) {
    expo[i - 1] = index % orders_[i - 1];
    index /= orders_[i - 1];
  }
  return character_from_exponents(std::move(expo));
}

inline DirichletCharacter CharacterGroup::principal() const {
  return character_from_exponents(std::vector<long long>(orders_.size(), 0));
}

inline std::vector<DirichletCharacter> CharacterGroup::all_characters() const {
  std::vector<DirichletCharacter> out;
  out.reserve(static_cast<size_t>(phi_));
  for (long long i = 0; i < phi_; ++i) out.push_back(character(i));
  return out;
}

inline std::vector<DirichletCharacter> odd_characters(const CharacterGroup& g, bool primitive_only = false) {
  std::vector<DirichletCharacter> out;
  for (auto& chi : g.all_characters()) {
    if (!chi.is_odd()) continue;
    if (primitive_only && !chi.is_primitive()) continue;
    out.push_back(std::move(chi));
  }
  return out;
}

// The character mod q agreeing with chi on units of q (zero elsewhere); d | q.
inline DirichletCharacter induce(const DirichletCharacter& chi, long long q) {
  const long long d = chi.modulus();
  if (q % d != 0) throw std::invalid_argument("induce: d must divide q");
  auto gq = shared_group(q);
  const auto& orders = gq->generator_orders();
  const auto gens = gq->generators();
  std::vector<long long> expo(orders.size());
  for (size_t i = 0; i < gens.size(); ++i) {
    const auto t = chi.angle(gens[i]);  // generators of (Z/q)* are units mod d
    const Rational k = *t * Rational(orders[i]);
    if (!k.is_integer()) throw std::logic_error("induce: angle does not lift");
    long long ki = k.numerator().get_si() % orders[i];
    if (ki < 0) ki += orders[i];
    expo[i] = ki;
  }
  return {gq, std::move(expo)};
}

}  // namespace dedekind
