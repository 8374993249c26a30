#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "typact/errors.hpp"
#include "typact/extent.hpp"

namespace typact {

// Trial division; inputs are human-written expressions with small primes.
inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::uint64_t ipow(std::uint64_t base, std::uint32_t exp) {
  std::uint64_t r = 1;
  while (exp--) {
    if (r > UINT64_MAX / base) throw PreconditionError("integer overflow in prime power");
    r *= base;
  }
  return r;
}

// p-adic valuation v_p(n).
inline std::uint32_t valuation(std::uint64_t n, std::uint64_t p) {
  std::uint32_t v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

inline std::map<std::uint64_t, std::uint32_t> factorize(std::uint64_t n) {
  std::map<std::uint64_t, std::uint32_t> f;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    while (n % d == 0) {
      ++f[d];
      n /= d;
    }
  if (n > 1) ++f[n];
  return f;
}

struct PrimePower {
  std::uint64_t p;
  std::uint32_t k;

  PrimePower(std::uint64_t p_, std::uint32_t k_) : p(p_), k(k_) {
    if (!is_prime(p)) throw PreconditionError("PrimePower: " + std::to_string(p) + " is not prime");
    if (k == 0) throw PreconditionError("PrimePower: exponent must be >= 1");
  }

  std::uint64_t value() const { return ipow(p, k); }

  friend auto operator<=>(const PrimePower&, const PrimePower&) = default;
};

// Finitely supported PrimePower -> Extent map, normalized (no zero entries).
class MultiplicityMap {
 public:
  MultiplicityMap() = default;

  void add(PrimePower pk, Extent count) {
    if (count.is_zero()) return;
    auto [it, fresh] = entries_.emplace(pk, count);
    if (!fresh) it->second += count;
  }

  void set(PrimePower pk, Extent count) {
    if (count.is_zero())
      entries_.erase(pk);
    else
      entries_[pk] = count;
  }

  Extent at(PrimePower pk) const {
    auto it = entries_.find(pk);
    return it == entries_.end() ? Extent(0) : it->second;
  }
  Extent at(std::uint64_t p, std::uint32_t k) const { return at(PrimePower(p, k)); }

  bool empty() const { return entries_.empty(); }
  const std::map<PrimePower, Extent>& entries() const { return entries_; }

  std::set<std::uint64_t> primes() const {
    std::set<std::uint64_t> ps;
    for (const auto& [pk, c] : entries_) ps.insert(pk.p);
    return ps;
  }

  // Largest exponent in the support at p; 0 if none.
  std::uint32_t max_exponent(std::uint64_t p) const {
    std::uint32_t m = 0;
    for (const auto& [pk, c] : entries_)
      if (pk.p == p) m = std::max(m, pk.k);
    return m;
  }

  bool all_finite() const {
    return std::all_of(entries_.begin(), entries_.end(),
                       [](const auto& e) { return e.second.is_finite(); });
  }

  friend bool operator==(const MultiplicityMap&, const MultiplicityMap&) = default;

 private:
  std::map<PrimePower, Extent> entries_;
};

// Symbolic countable abelian group in the class generated by Z, finite cyclic
// groups, Prüfer groups C(p^inf) and towers T(p) = ⊕_{k>=1} Z/p^k (one summand
// per order), closed under countable direct sums.  Groups outside this class
// (e.g. Q, or reduced p-groups with nontrivial Ulm length) are not
// representable; see README.
struct GroupDesc {
  Extent free_rank;
  MultiplicityMap cyclic;
  std::map<std::uint64_t, Extent> prufer;  // prime -> number of C(p^inf) summands (>= 1)
  std::set<std::uint64_t> towers;          // primes with a tower summand

  bool is_trivial() const {
    return free_rank.is_zero() && cyclic.empty() && prufer.empty() && towers.empty();
  }
  bool is_bounded() const { return free_rank.is_zero() && prufer.empty() && towers.empty(); }
  bool is_torsion() const { return free_rank.is_zero(); }
  bool is_finite() const { return is_bounded() && cyclic.all_finite(); }
  bool is_infinite() const { return !is_finite(); }

  std::set<std::uint64_t> torsion_primes() const {
    std::set<std::uint64_t> ps = cyclic.primes();
    for (const auto& [p, c] : prufer) ps.insert(p);
    for (std::uint64_t p : towers) ps.insert(p);
    return ps;
  }

  friend bool operator==(const GroupDesc&, const GroupDesc&) = default;
};

// Drops zero-multiplicity entries and validates primality/exponents.
// Idempotent; all decision procedures compare normalized forms.
inline GroupDesc normalize(const GroupDesc& raw) {
  GroupDesc g;
  g.free_rank = raw.free_rank;
  for (const auto& [pk, c] : raw.cyclic.entries()) g.cyclic.add(pk, c);
  for (const auto& [p, c] : raw.prufer) {
    if (!is_prime(p)) throw PreconditionError("Prüfer part at non-prime " + std::to_string(p));
    if (!c.is_zero()) g.prufer[p] = c;
  }
  for (std::uint64_t p : raw.towers) {
    if (!is_prime(p)) throw PreconditionError("tower at non-prime " + std::to_string(p));
    g.towers.insert(p);
  }
  return g;
}

// m̄_G(p^k) = Σ_{n>=k} m_G(p^n).  A tower at p contributes one cyclic summand
// of every order p^n, hence omega at every k.  Values outside the returned
// support are 0.
inline MultiplicityMap m_bar(const GroupDesc& g) {
  MultiplicityMap out;
  std::set<std::uint64_t> ps = g.cyclic.primes();
  for (std::uint64_t p : g.towers) ps.insert(p);
  for (std::uint64_t p : ps) {
    if (g.towers.count(p)) {
      // Σ_{n>=k} 1 diverges: omega on the whole (infinite) support; report it
      // on the closure of the cyclic support (plus p^1) so the map stays finite.
      std::uint32_t top = std::max<std::uint32_t>(1, g.cyclic.max_exponent(p));
      for (std::uint32_t k = 1; k <= top; ++k) out.set(PrimePower(p, k), Extent::omega());
      continue;
    }
    std::uint32_t top = g.cyclic.max_exponent(p);
    Extent tail(0);
    for (std::uint32_t k = top; k >= 1; --k) {
      tail += g.cyclic.at(p, k);
      out.set(PrimePower(p, k), tail);
    }
  }
  return out;
}

// Queries m̄ beyond the support of the returned map.
inline Extent m_bar_at(const GroupDesc& g, std::uint64_t p, std::uint32_t k) {
  if (g.towers.count(p)) return Extent::omega();
  Extent tail(0);
  for (std::uint32_t j = k; j <= g.cyclic.max_exponent(p); ++j) tail += g.cyclic.at(p, j);
  return tail;
}

// Least upper bound on element orders of a bounded group (= lcm of the cyclic
// support); 1 for the trivial group.
inline std::uint64_t exponent(const GroupDesc& g) {
  if (!g.is_bounded()) throw PreconditionError("exponent: group is unbounded");
  std::uint64_t e = 1;
  for (std::uint64_t p : g.cyclic.primes()) e *= ipow(p, g.cyclic.max_exponent(p));
  return e;
}

// Description of d·G:  d·Z = Z,  d·(Z/p^k) = Z/p^{k-min(k,v_p(d))},
// d·C(p^inf) = C(p^inf) (divisibility), and d·T(p) = T(p) (the shifted tower
// again has one summand of each order).
inline GroupDesc multiply(const GroupDesc& g, std::uint64_t d) {
  if (d == 0) throw PreconditionError("multiply: d must be >= 1");
  GroupDesc out;
  out.free_rank = g.free_rank;
  out.prufer = g.prufer;
  out.towers = g.towers;
  for (const auto& [pk, c] : g.cyclic.entries()) {
    std::uint32_t v = std::min(pk.k, valuation(d, pk.p));
    if (pk.k > v) out.cyclic.add(PrimePower(pk.p, pk.k - v), c);
  }
  return out;
}

// Componentwise addition of extents.  Tower summands collapse to one per
// prime: T(p) ⊕ T(p) and T(p) are mutually embeddable and no decision here
// distinguishes them.
inline GroupDesc direct_sum(const GroupDesc& a, const GroupDesc& b) {
  GroupDesc out;
  out.free_rank = a.free_rank + b.free_rank;
  for (const auto& [pk, c] : a.cyclic.entries()) out.cyclic.add(pk, c);
  for (const auto& [pk, c] : b.cyclic.entries()) out.cyclic.add(pk, c);
  out.prufer = a.prufer;
  for (const auto& [p, c] : b.prufer) {
    auto [it, fresh] = out.prufer.emplace(p, c);
    if (!fresh) it->second += c;
  }
  out.towers = a.towers;
  out.towers.insert(b.towers.begin(), b.towers.end());
  return out;
}

// Per-prime split of a bounded group by the threshold order d_p: the largest
// p^k occurring with multiplicity omega (1 when the p-part is finite).
// H^> collects the (finitely many) summands of order > d_p.
struct BoundedSplit {
  std::map<std::uint64_t, std::uint64_t> d_p;  // prime -> threshold order p^k (or 1)
  GroupDesc h_gt;                              // finite
  GroupDesc h_le;
  std::uint64_t d = 1;                         // product of all d_p
};

inline BoundedSplit bounded_split(const GroupDesc& h) {
  if (!h.is_bounded()) throw PreconditionError("bounded_split: group is unbounded");
  BoundedSplit s;
  for (std::uint64_t p : h.cyclic.primes()) {
    std::uint32_t k_inf = 0;  // largest k with multiplicity omega at p, 0 if none
    for (const auto& [pk, c] : h.cyclic.entries())
      if (pk.p == p && c.is_omega()) k_inf = std::max(k_inf, pk.k);
    std::uint64_t dp = k_inf == 0 ? 1 : ipow(p, k_inf);
    s.d_p[p] = dp;
    if (s.d > UINT64_MAX / dp) throw PreconditionError("bounded_split: d overflows");
    s.d *= dp;
    for (const auto& [pk, c] : h.cyclic.entries()) {
      if (pk.p != p) continue;
      if (pk.value() > dp)
        s.h_gt.cyclic.add(pk, c);
      else
        s.h_le.cyclic.add(pk, c);
    }
  }
  if (!s.h_gt.is_finite()) throw Error("bounded_split: internal: H^> not finite");
  return s;
}

}  // namespace typact
