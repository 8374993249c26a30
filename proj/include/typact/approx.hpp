#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include "typact/action.hpp"
#include "typact/finite_group.hpp"
#include "typact/lnk.hpp"

namespace typact {

// Marked parametrization of a transitive free block action (the map
// g ↦ P_g C_1 is a bijection): basis elements realizing the invariant-factor
// decomposition of the image, plus the induced labeling of blocks by
// exponent tuples.
struct Parametrization {
  std::vector<std::vector<long long>> basis;   // over the action's generators
  std::vector<std::uint64_t> orders;           // invariant factors n_1 | n_2 | ...
  std::vector<std::uint32_t> block_of_tuple;   // mixed-radix tuple index -> block
  std::vector<std::vector<std::uint64_t>> tuple_of_block;

  std::uint64_t tuple_index(const std::vector<std::uint64_t>& t) const {
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < orders.size(); ++i) idx = idx * orders[i] + t[i];
    return idx;
  }
};

namespace detail {

inline std::vector<std::uint64_t> invariant_factors_of_orders(
    const std::vector<std::uint64_t>& element_orders) {
  std::vector<std::uint64_t> cyclic;
  std::uint64_t n = element_orders.size();
  for (const auto& [p, e] : factorize(n)) {
    (void)e;
    std::uint64_t prev_log = 0;
    std::vector<std::uint64_t> mbar;
    for (std::uint32_t k = 1;; ++k) {
      std::uint64_t killed = 0;
      for (std::uint64_t o : element_orders)
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

}  // namespace detail

// Checks the two conditions of a transitive, fixed-block-free action and
// returns the canonical parametrization (invariant-factor basis; ties broken
// by the deterministic image enumeration order).
inline Parametrization canonical_parametrization(const FiniteAction& a) {
  a.validate();
  ImageGroup img = image_group(a);
  std::vector<char> hit(a.q, 0);
  for (const auto& e : img.elems) hit[e(a.marked)] = 1;
  if (std::count(hit.begin(), hit.end(), char(1)) != static_cast<std::ptrdiff_t>(a.q))
    throw PreconditionError("parametrization: action is not transitive on blocks");
  for (const auto& e : img.elems)
    if (!e.is_identity())
      for (std::uint32_t c = 0; c < a.q; ++c)
        if (e(c) == c)
          throw PreconditionError("parametrization: a non-identity element fixes a block");
  if (img.size() != a.q) throw Error("parametrization: internal: image not regular");

  std::vector<std::uint64_t> elem_orders;
  for (const auto& e : img.elems) elem_orders.push_back(e.order());
  std::vector<std::uint64_t> chain = detail::invariant_factors_of_orders(elem_orders);

  // pick basis slots largest factor first, then reverse into chain order
  std::vector<std::uint64_t> want(chain.rbegin(), chain.rend());
  std::vector<std::size_t> picked;
  auto closure_size = [&](const std::vector<std::size_t>& sel) {
    std::map<Permutation, char> seen;
    std::vector<Permutation> frontier{Permutation::identity(a.q)};
    seen[frontier[0]] = 1;
    for (std::size_t head = 0; head < frontier.size(); ++head)
      for (std::size_t s : sel) {
        Permutation nxt = img.elems[s] * frontier[head];
        if (!seen.count(nxt)) {
          seen[nxt] = 1;
          frontier.push_back(nxt);
        }
      }
    return frontier.size();
  };
  auto rec = [&](auto&& self, std::size_t slot, std::uint64_t span) -> bool {
    if (slot == want.size()) return true;
    for (std::size_t cand = 0; cand < img.size(); ++cand) {
      if (img.elems[cand].order() != want[slot]) continue;
      picked.push_back(cand);
      if (closure_size(picked) == span * want[slot] && self(self, slot + 1, span * want[slot]))
        return true;
      picked.pop_back();
    }
    return false;
  };
  if (!rec(rec, 0, 1)) throw Error("parametrization: internal: no basis found");

  Parametrization out;
  out.orders = chain;
  std::vector<std::size_t> in_chain_order(picked.rbegin(), picked.rend());
  for (std::size_t s : in_chain_order) out.basis.push_back(img.witnesses[s]);

  std::uint64_t total = 1;
  for (std::uint64_t o : chain) total *= o;
  if (total != a.q) throw Error("parametrization: internal: order mismatch");
  out.block_of_tuple.assign(a.q, 0);
  out.tuple_of_block.assign(a.q, {});
  std::vector<std::uint64_t> tup(chain.size(), 0);
  for (std::uint64_t idx = 0;; ++idx) {
    Permutation p = Permutation::identity(a.q);
    for (std::size_t i = 0; i < chain.size(); ++i)
      p = p * img.elems[in_chain_order[i]].pow(static_cast<std::int64_t>(tup[i]));
    std::uint32_t blk = p(a.marked);
    out.block_of_tuple[idx] = blk;
    out.tuple_of_block[blk] = tup;
    // odometer
    std::size_t i = chain.size();
    while (i > 0) {
      if (++tup[i - 1] < chain[i - 1]) break;
      tup[i - 1] = 0;
      --i;
    }
    if (i == 0) break;
  }
  return out;
}

struct CentralizerOptions {
  std::uint64_t full_search_bound = 10;  // q <= bound: scan all of Sym(q)
  bool force_full_search = false;
  std::uint64_t result_budget = 3'000'000;
};

// All block permutations commuting with every generator.  Small q uses the
// full symmetric-group scan; otherwise images of orbit representatives are
// enumerated (stabilizers must match, orbits map bijectively).
inline std::vector<Permutation> centralizer(const FiniteAction& a,
                                            const CentralizerOptions& opts = {}) {
  a.validate();
  auto commutes_all = [&](const Permutation& s) {
    for (const auto& g : a.perms)
      if (!s.commutes_with(g)) return false;
    return true;
  };

  if (opts.force_full_search || a.q <= opts.full_search_bound) {
    std::uint64_t fact = 1;
    for (std::uint64_t i = 2; i <= a.q; ++i) fact *= i;
    if (fact > opts.result_budget * 50)
      throw BudgetError("centralizer: full search beyond budget");
    std::vector<std::uint32_t> idx(a.q);
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<Permutation> out;
    do {
      Permutation cand(idx);
      if (commutes_all(cand)) out.push_back(std::move(cand));
    } while (std::next_permutation(idx.begin(), idx.end()));
    return out;
  }

  ImageGroup img = image_group(a);
  // orbits and their stabilizers (constant on orbits for abelian images)
  std::vector<std::int64_t> orbit_of(a.q, -1);
  std::vector<std::vector<std::uint32_t>> orbits;
  std::vector<std::vector<std::uint32_t>> stabs;  // sorted img element indices
  for (std::uint32_t c = 0; c < a.q; ++c) {
    if (orbit_of[c] >= 0) continue;
    std::vector<std::uint32_t> orb;
    std::vector<char> seen(a.q, 0);
    std::vector<std::uint32_t> stab;
    for (std::size_t e = 0; e < img.size(); ++e) {
      std::uint32_t y = img.elems[e](c);
      if (!seen[y]) {
        seen[y] = 1;
        orb.push_back(y);
      }
      if (y == c) stab.push_back(static_cast<std::uint32_t>(e));
    }
    for (std::uint32_t y : orb) orbit_of[y] = static_cast<std::int64_t>(orbits.size());
    orbits.push_back(std::move(orb));
    stabs.push_back(std::move(stab));
  }

  // classes of orbits with identical stabilizer
  std::map<std::vector<std::uint32_t>, std::vector<std::size_t>> classes;
  for (std::size_t o = 0; o < orbits.size(); ++o) classes[stabs[o]].push_back(o);

  // result count = Π_classes m! · |O|^m
  long double estimate = 1;
  for (const auto& [stab, members] : classes) {
    std::size_t m = members.size();
    std::uint64_t osz = orbits[members[0]].size();
    for (std::size_t i = 1; i <= m; ++i) estimate *= static_cast<long double>(i * osz);
    if (estimate > static_cast<long double>(opts.result_budget))
      throw BudgetError("centralizer: result budget exceeded");
  }

  std::vector<Permutation> out;
  std::vector<std::uint32_t> sigma(a.q, 0);
  std::vector<const std::vector<std::size_t>*> class_list;
  for (const auto& [stab, members] : classes) class_list.push_back(&members);

  auto emit_orbit = [&](std::size_t src_orbit, std::uint32_t y) {
    std::uint32_t rep = orbits[src_orbit][0];
    for (std::size_t e = 0; e < img.size(); ++e) sigma[img.elems[e](rep)] = img.elems[e](y);
  };
  auto rec = [&](auto&& self, std::size_t ci) -> void {
    if (ci == class_list.size()) {
      Permutation cand(sigma);
      if (!commutes_all(cand)) throw Error("centralizer: internal: candidate fails");
      out.push_back(std::move(cand));
      return;
    }
    const std::vector<std::size_t>& members = *class_list[ci];
    std::vector<std::size_t> perm = members;
    std::sort(perm.begin(), perm.end());
    do {
      // members[t] maps onto orbit perm[t]; choose the image of each rep
      std::vector<std::size_t> choice(members.size(), 0);
      auto rec2 = [&](auto&& self2, std::size_t t) -> void {
        if (t == members.size()) {
          self(self, ci + 1);
          return;
        }
        for (std::uint32_t y : orbits[perm[t]]) {
          emit_orbit(members[t], y);
          self2(self2, t + 1);
        }
      };
      rec2(rec2, 0);
      (void)choice;
    } while (std::next_permutation(perm.begin(), perm.end()));
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end());
  return out;
}

struct ClosureWitness {
  std::vector<long long> element;      // over the action's generators
  std::vector<std::uint64_t> tuple;    // coordinates in K(n) = Π [0, p_i)
};

// Finds g in K(n) with P_g equal to the commuting permutation s, through the
// marked-block parametrization.
inline ClosureWitness weak_closure_witness(const FiniteAction& a, const Permutation& s) {
  if (s.size() != a.q) throw PreconditionError("witness: permutation size mismatch");
  for (const auto& g : a.perms)
    if (!s.commutes_with(g)) throw PreconditionError("witness: permutation is not in the centralizer");
  Parametrization par = canonical_parametrization(a);
  std::vector<std::uint64_t> tup = par.tuple_of_block[s(a.marked)];
  std::vector<long long> elem(a.arity(), 0);
  for (std::size_t i = 0; i < par.basis.size(); ++i)
    for (std::size_t j = 0; j < a.arity(); ++j)
      elem[j] += static_cast<long long>(tup[i]) * par.basis[i][j];
  if (!(a.evaluate(elem).perm == s))
    throw PreconditionError("witness: permutation commutes but is not an action element");
  return {elem, tup};
}

struct DefectResult {
  Rat defect;
  std::uint64_t window_terms = 0;
};

// Good-approximation defect ω² Σ_{|c_i| <= 2p_i} μ(T_g C_1 Δ P_g C_1) over the
// integer window, g = Σ c_i g_i(n) in the parametrization of p.
inline DefectResult good_approx_defect(const FiniteAction& target, const FiniteAction& p) {
  target.validate();
  p.validate();
  if (!(target.pres == p.pres))
    throw PreconditionError("defect: actions of different presentations");
  if (target.q % p.q != 0) throw PreconditionError("defect: incompatible levels");
  Parametrization par = canonical_parametrization(p);
  std::uint64_t k0 = target.q / p.q;
  std::uint64_t omega = p.q;

  std::size_t r = par.orders.size();
  std::vector<std::int64_t> c(r);
  for (std::size_t i = 0; i < r; ++i) c[i] = -2 * static_cast<std::int64_t>(par.orders[i]);
  DefectResult res;
  Rat sum(0);
  while (true) {
    std::vector<long long> g(p.arity(), 0);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < p.arity(); ++j) g[j] += c[i] * par.basis[i][j];
    Permutation tg = target.evaluate(g).perm;
    std::uint32_t pg_block = p.evaluate(g).perm(p.marked);
    // μ(T_g C_1 Δ P_g C_1) on the fine grid
    std::uint64_t mismatch = 0;
    for (std::uint64_t f = p.marked * k0; f < (p.marked + 1) * k0; ++f) {
      std::uint32_t img = tg(static_cast<std::uint32_t>(f));
      if (img / k0 != pg_block) ++mismatch;  // in T_g C_1 but not in P_g C_1
    }
    sum += Rat(2 * Int(mismatch), Int(target.q));  // both sets have measure 1/ω
    ++res.window_terms;
    std::size_t i = r;
    while (i > 0) {
      if (++c[i - 1] <= 2 * static_cast<std::int64_t>(par.orders[i - 1])) break;
      c[i - 1] = -2 * static_cast<std::int64_t>(par.orders[i - 1]);
      --i;
    }
    if (i == 0) break;
  }
  res.defect = Rat(Int(omega) * Int(omega)) * sum;
  return res;
}

}  // namespace typact
