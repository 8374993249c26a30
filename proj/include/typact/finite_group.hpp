#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <unordered_map>
#include <vector>

#include "typact/errors.hpp"
#include "typact/group_desc.hpp"

namespace typact {

constexpr std::uint64_t kDefaultOracleBound = 256;

// Canonical invariant-factor chain n_1 | n_2 | ... from a list of cyclic
// orders (entries 1 are dropped; empty result means the trivial group).
inline std::vector<std::uint64_t> invariant_factors(std::vector<std::uint64_t> orders) {
  std::map<std::uint64_t, std::vector<std::uint32_t>> exps;  // prime -> exponents, descending
  for (std::uint64_t n : orders) {
    if (n == 0) throw PreconditionError("cyclic order 0");
    for (const auto& [p, k] : factorize(n)) exps[p].push_back(k);
  }
  std::size_t depth = 0;
  for (auto& [p, ks] : exps) {
    std::sort(ks.rbegin(), ks.rend());
    depth = std::max(depth, ks.size());
  }
  std::vector<std::uint64_t> chain(depth, 1);
  for (const auto& [p, ks] : exps)
    for (std::size_t i = 0; i < ks.size(); ++i) chain[i] *= ipow(p, ks[i]);
  std::reverse(chain.begin(), chain.end());  // ascending divisibility
  return chain;
}

// Finite abelian group as residue tuples under its invariant factors.
// Elements are indexed 0..order-1 in mixed radix (last factor fastest).
class FiniteGroupTable {
 public:
  explicit FiniteGroupTable(std::vector<std::uint64_t> cyclic_orders)
      : factors_(invariant_factors(std::move(cyclic_orders))) {
    order_ = 1;
    for (std::uint64_t f : factors_) {
      if (order_ > (1ull << 40) / f) throw PreconditionError("group order too large");
      order_ *= f;
    }
  }

  const std::vector<std::uint64_t>& factors() const { return factors_; }
  std::uint64_t order() const { return order_; }

  std::vector<std::uint64_t> tuple_of(std::uint64_t index) const {
    std::vector<std::uint64_t> t(factors_.size());
    for (std::size_t i = factors_.size(); i-- > 0;) {
      t[i] = index % factors_[i];
      index /= factors_[i];
    }
    return t;
  }

  std::uint64_t index_of(const std::vector<std::uint64_t>& tuple) const {
    if (tuple.size() != factors_.size())
      throw PreconditionError("element tuple arity mismatch");
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (tuple[i] >= factors_[i]) throw PreconditionError("residue out of range");
      idx = idx * factors_[i] + tuple[i];
    }
    return idx;
  }

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t mul = 1, out = 0;
    for (std::size_t i = factors_.size(); i-- > 0;) {
      std::uint64_t f = factors_[i];
      std::uint64_t ra = a % f, rb = b % f;
      a /= f;
      b /= f;
      out += ((ra + rb) % f) * mul;
      mul *= f;
    }
    return out;
  }

  std::uint64_t neg(std::uint64_t a) const {
    std::uint64_t mul = 1, out = 0;
    for (std::size_t i = factors_.size(); i-- > 0;) {
      std::uint64_t f = factors_[i];
      std::uint64_t ra = a % f;
      a /= f;
      out += ((f - ra) % f) * mul;
      mul *= f;
    }
    return out;
  }

  std::uint64_t scalar_mul(std::uint64_t c, std::uint64_t a) const {
    std::uint64_t mul = 1, out = 0;
    for (std::size_t i = factors_.size(); i-- > 0;) {
      std::uint64_t f = factors_[i];
      std::uint64_t ra = a % f;
      a /= f;
      out += ((c % f) * ra % f) * mul;
      mul *= f;
    }
    return out;
  }

  std::uint64_t element_order(std::uint64_t a) const {
    std::uint64_t ord = 1;
    for (std::size_t i = factors_.size(); i-- > 0;) {
      std::uint64_t f = factors_[i];
      std::uint64_t ra = a % f;
      a /= f;
      std::uint64_t o = f / std::gcd(f, ra == 0 ? f : ra);
      ord = std::lcm(ord, ra == 0 ? 1 : o);
    }
    return ord;
  }

 private:
  std::vector<std::uint64_t> factors_;
  std::uint64_t order_;
};

struct Subgroup {
  std::vector<std::uint32_t> elements;        // sorted ambient indices
  std::vector<std::uint64_t> iso_factors;     // invariant factors of the subgroup
};

// Iso type from element orders: #{x in S : p^k x = 0} = p^{Σ min(k, λ_i)}
// determines the partition λ at every prime.
inline std::vector<std::uint64_t> iso_type_from_orders(const FiniteGroupTable& g,
                                                       const std::vector<std::uint32_t>& elems) {
  std::vector<std::uint64_t> orders;
  orders.reserve(elems.size());
  for (std::uint32_t e : elems) orders.push_back(g.element_order(e));
  std::uint64_t n = elems.size();
  std::vector<std::uint64_t> cyclic;
  for (const auto& [p, e_total] : factorize(n)) {
    (void)e_total;
    std::uint64_t prev_log = 0;
    std::vector<std::uint64_t> mbar;  // mbar[k-1] = #{i : λ_i >= k}
    for (std::uint32_t k = 1;; ++k) {
      std::uint64_t killed = 0;  // elements with order dividing p^k
      for (std::uint64_t o : orders)
        if (ipow(p, k) % o == 0) ++killed;
      std::uint64_t log = valuation(killed, p);
      if (log == prev_log) break;
      mbar.push_back(log - prev_log);
      prev_log = log;
    }
    for (std::size_t k = 0; k < mbar.size(); ++k) {
      std::uint64_t mult = mbar[k] - (k + 1 < mbar.size() ? mbar[k + 1] : 0);
      for (std::uint64_t i = 0; i < mult; ++i)
        cyclic.push_back(ipow(p, static_cast<std::uint32_t>(k + 1)));
    }
  }
  return invariant_factors(cyclic);
}

// Every subgroup exactly once, by closure of generator additions from {0}.
inline std::vector<Subgroup> oracle_subgroups(const FiniteGroupTable& g,
                                              std::uint64_t bound = kDefaultOracleBound) {
  if (g.order() > bound)
    throw BudgetError("oracle_subgroups: order " + std::to_string(g.order()) +
                      " exceeds bound " + std::to_string(bound));
  std::uint64_t n = g.order();

  struct VecHash {
    std::size_t operator()(const std::vector<std::uint32_t>& v) const {
      std::size_t h = 1469598103934665603ull;
      for (std::uint32_t x : v) {
        h ^= x;
        h *= 1099511628211ull;
      }
      return h;
    }
  };
  std::unordered_map<std::vector<std::uint32_t>, std::size_t, VecHash> seen;
  std::vector<Subgroup> out;
  std::vector<std::vector<std::uint32_t>> queue;

  std::vector<std::uint32_t> trivial{0};
  seen.emplace(trivial, 0);
  out.push_back({trivial, {}});
  queue.push_back(trivial);

  std::vector<char> member(n);
  while (!queue.empty()) {
    std::vector<std::uint32_t> s = std::move(queue.back());
    queue.pop_back();
    std::fill(member.begin(), member.end(), 0);
    for (std::uint32_t e : s) member[e] = 1;
    for (std::uint32_t x = 1; x < n; ++x) {
      if (member[x]) continue;
      // closure of s ∪ {x} = s + <x>
      std::vector<std::uint32_t> t;
      std::vector<char> tm(n, 0);
      std::uint64_t mx = x;
      for (std::uint32_t e : s) {
        t.push_back(e);
        tm[e] = 1;
      }
      while (mx != 0) {
        for (std::uint32_t e : s) {
          std::uint32_t y = static_cast<std::uint32_t>(g.add(e, mx));
          if (!tm[y]) {
            tm[y] = 1;
            t.push_back(y);
          }
        }
        mx = g.add(mx, x);
      }
      std::sort(t.begin(), t.end());
      if (seen.emplace(t, out.size()).second) {
        out.push_back({t, {}});
        queue.push_back(std::move(t));
      }
    }
  }
  for (Subgroup& s : out) s.iso_factors = iso_type_from_orders(g, s.elements);
  return out;
}

// Yes iff some subgroup of g is isomorphic to h.
inline bool oracle_embeds(const FiniteGroupTable& h, const FiniteGroupTable& g,
                          std::uint64_t bound = kDefaultOracleBound) {
  if (h.order() > bound || g.order() > bound)
    throw BudgetError("oracle_embeds: order exceeds bound");
  if (g.order() % h.order() != 0) return false;
  std::vector<std::uint64_t> want = h.factors();
  for (const Subgroup& s : oracle_subgroups(g, bound))
    if (s.iso_factors == want) return true;
  return false;
}

// All partitions of e, each as a descending exponent list.
inline std::vector<std::vector<std::uint32_t>> partitions_of(std::uint32_t e) {
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> cur;
  auto rec = [&](auto&& self, std::uint32_t rest, std::uint32_t max_part) -> void {
    if (rest == 0) {
      out.push_back(cur);
      return;
    }
    for (std::uint32_t part = std::min(rest, max_part); part >= 1; --part) {
      cur.push_back(part);
      self(self, rest - part, part);
      cur.pop_back();
    }
  };
  rec(rec, e, e);
  return out;
}

// Every abelian group of order n, as lists of prime-power cyclic orders.
inline std::vector<std::vector<std::uint64_t>> abelian_groups_of_order(std::uint64_t n) {
  std::vector<std::vector<std::uint64_t>> acc{{}};
  for (const auto& [p, e] : factorize(n)) {
    std::vector<std::vector<std::uint64_t>> next;
    for (const auto& part : partitions_of(e))
      for (const auto& base : acc) {
        std::vector<std::uint64_t> cur = base;
        for (std::uint32_t k : part) cur.push_back(ipow(p, k));
        next.push_back(std::move(cur));
      }
    acc = std::move(next);
  }
  return acc;
}

inline GroupDesc desc_from_cyclic_orders(const std::vector<std::uint64_t>& orders) {
  GroupDesc g;
  for (std::uint64_t n : orders)
    for (const auto& [p, k] : factorize(n)) g.cyclic.add(PrimePower(p, k), 1);
  return g;
}

inline FiniteGroupTable table_from_desc(const GroupDesc& g) {
  if (!g.is_finite()) throw PreconditionError("table_from_desc: group is not finite");
  std::vector<std::uint64_t> orders;
  for (const auto& [pk, c] : g.cyclic.entries())
    for (std::uint64_t i = 0; i < c.value(); ++i) orders.push_back(pk.value());
  return FiniteGroupTable(orders);
}

}  // namespace typact
