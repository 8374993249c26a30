#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "typact/action.hpp"
#include "typact/metric.hpp"

namespace typact {

// The set L_{n,k} of all actions of the presented group preserving ξ_n by
// block translations is exactly the set of homomorphisms into the block
// symmetric group: tuples of commuting permutations satisfying the
// presentation relations.

struct LnkOptions {
  bool transitive = false;           // L'_{n,k}: transitive on blocks
  std::uint64_t node_budget = 2'000'000;
};

namespace detail {

inline std::vector<Permutation> all_permutations(std::uint64_t q, std::uint64_t budget) {
  std::uint64_t fact = 1;
  for (std::uint64_t i = 2; i <= q; ++i) {
    if (fact > budget / i)
      throw BudgetError("enumeration budget: " + std::to_string(q) + "! too big");
    fact *= i;
  }
  std::vector<std::uint32_t> idx(q);
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<Permutation> out;
  out.reserve(fact);
  do {
    out.push_back(Permutation(idx));
  } while (std::next_permutation(idx.begin(), idx.end()));
  return out;
}

inline bool order_divides(const Permutation& p, Extent declared) {
  if (declared.is_omega()) return true;
  return p.pow(static_cast<std::int64_t>(declared.value())).is_identity();
}

inline bool transitive_on_blocks(const std::vector<Permutation>& gens, std::uint64_t q) {
  if (q == 0) return false;
  std::vector<char> seen(q, 0);
  std::vector<std::uint32_t> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    std::uint32_t c = stack.back();
    stack.pop_back();
    for (const auto& g : gens) {
      for (std::uint32_t n : {g(c), g.inverse()(c)}) {
        if (!seen[n]) {
          seen[n] = 1;
          ++count;
          stack.push_back(n);
        }
      }
    }
  }
  return count == q;
}

}  // namespace detail

// Full enumeration of L_{n,k} (or L'_{n,k} with the transitive flag) at block
// count q.  Throws BudgetError when the search space exceeds the budget.
inline std::vector<FiniteAction> build_lnk(const Presentation& pres, std::uint64_t q,
                                           const LnkOptions& opts = {}) {
  std::vector<Permutation> sym = detail::all_permutations(q, opts.node_budget);
  std::size_t r = pres.arity();

  // relations become checkable once their top generator is assigned
  std::vector<std::vector<std::vector<long long>>> rel_by_top(r);
  for (const auto& rel : pres.relations) {
    std::size_t top = 0;
    bool any = false;
    for (std::size_t i = 0; i < rel.size(); ++i)
      if (rel[i] != 0) {
        top = i;
        any = true;
      }
    if (any) rel_by_top[top].push_back(rel);
  }

  std::vector<FiniteAction> out;
  std::vector<Permutation> chosen;
  std::uint64_t nodes = 0;
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == r) {
      if (opts.transitive && !detail::transitive_on_blocks(chosen, q)) return;
      FiniteAction a;
      a.pres = pres;
      a.q = q;
      a.perms = chosen;
      out.push_back(std::move(a));
      return;
    }
    for (const Permutation& cand : sym) {
      if (++nodes > opts.node_budget) throw BudgetError("L_{n,k} enumeration budget exceeded");
      if (!detail::order_divides(cand, pres.orders[i])) continue;
      bool ok = true;
      for (const Permutation& prev : chosen)
        if (!cand.commutes_with(prev)) {
          ok = false;
          break;
        }
      if (!ok) continue;
      chosen.push_back(cand);
      for (const auto& rel : rel_by_top[i]) {
        Permutation acc = Permutation::identity(q);
        for (std::size_t j = 0; j <= i; ++j)
          if (rel[j] != 0) acc = acc * chosen[j].pow(rel[j]);
        if (!acc.is_identity()) {
          ok = false;
          break;
        }
      }
      if (ok) self(self, i + 1);
      chosen.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

// Random member of L_{n,k}; rejection sampling over per-generator random
// permutations with admissible cycle types.
inline FiniteAction sample_lnk(const Presentation& pres, std::uint64_t q, const LnkOptions& opts,
                               std::mt19937_64& rng, int max_attempts = 20000) {
  auto random_perm_with_order_dividing = [&](Extent declared) {
    std::vector<std::uint32_t> idx(q);
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    std::vector<std::uint64_t> lengths;
    if (declared.is_omega()) {
      for (std::uint64_t l = 1; l <= q; ++l) lengths.push_back(l);
    } else {
      for (std::uint64_t l = 1; l <= std::min<std::uint64_t>(q, declared.value()); ++l)
        if (declared.value() % l == 0) lengths.push_back(l);
    }
    std::vector<std::uint32_t> img(q);
    std::size_t pos = 0;
    while (pos < q) {
      std::vector<std::uint64_t> fit;
      for (std::uint64_t l : lengths)
        if (l <= q - pos) fit.push_back(l);
      std::uint64_t len = fit[rng() % fit.size()];
      for (std::uint64_t i = 0; i < len; ++i)
        img[idx[pos + i]] = idx[pos + (i + 1) % len];
      pos += len;
    }
    return Permutation(img);
  };

  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    std::vector<Permutation> chosen;
    bool ok = true;
    for (std::size_t i = 0; i < pres.arity() && ok; ++i) {
      Permutation cand = random_perm_with_order_dividing(pres.orders[i]);
      for (const Permutation& prev : chosen)
        if (!cand.commutes_with(prev)) {
          ok = false;
          break;
        }
      if (ok) chosen.push_back(std::move(cand));
    }
    if (!ok) continue;
    FiniteAction a;
    a.pres = pres;
    a.q = q;
    a.perms = std::move(chosen);
    try {
      a.validate();
    } catch (const PreconditionError&) {
      continue;
    }
    if (opts.transitive && !detail::transitive_on_blocks(a.perms, q)) continue;
    return a;
  }
  throw BudgetError("sample_lnk: no member found within the attempt budget");
}

// Distance between two actions of the same presentation: the cylinder radius
// max_i d(T_{g_i}, P_{g_i}).
inline MetricValue action_distance(const PartitionSequence& seq, const FiniteAction& a,
                                   const FiniteAction& b) {
  if (a.arity() != b.arity()) throw PreconditionError("action_distance: arity mismatch");
  MetricValue best;  // zero
  for (std::size_t i = 0; i < a.arity(); ++i) {
    MetricValue d = metric_d(seq, a.generator_map(i), b.generator_map(i));
    if (d > best) best = d;
  }
  return best;
}

struct ProbeOptions {
  Rat eps;
  std::optional<std::uint64_t> max_q;     // restrict candidate levels
  std::uint64_t enumeration_budget = 2'000'000;
  std::uint64_t samples_per_level = 0;    // fallback when enumeration is over budget
  std::uint64_t seed = 0;
  bool transitive = false;
};

struct ProbeResult {
  std::optional<FiniteAction> best;
  std::optional<MetricValue> distance;
  bool certified = false;         // distance < eps
  bool budget_exhausted = false;  // at least one level was skipped or sampled
  std::uint64_t candidates = 0;
  std::vector<std::uint64_t> levels_searched;
};

// Bounded search for the nearest member of ∪ L_{n,k} to the target action.
// This is an empirical density probe, not the infinitary construction: it
// certifies d < eps when it finds a witness and reports budget exhaustion
// otherwise.
inline ProbeResult density_probe(const PartitionSequence& seq, const FiniteAction& target,
                                 const ProbeOptions& opts) {
  target.validate();
  ProbeResult res;
  std::mt19937_64 rng(opts.seed);
  for (std::size_t n = 1; n <= seq.size(); ++n) {
    std::uint64_t qn = seq.q_at(n);
    if (opts.max_q && qn > *opts.max_q) continue;
    if (!seq.common_refinement(qn, target.q)) continue;
    std::vector<FiniteAction> candidates;
    LnkOptions lopts;
    lopts.transitive = opts.transitive;
    lopts.node_budget = opts.enumeration_budget;
    bool enumerated = true;
    try {
      candidates = build_lnk(target.pres, qn, lopts);
    } catch (const BudgetError&) {
      enumerated = false;
      res.budget_exhausted = true;
      for (std::uint64_t s = 0; s < opts.samples_per_level; ++s) {
        try {
          candidates.push_back(sample_lnk(target.pres, qn, lopts, rng));
        } catch (const BudgetError&) {
          break;
        }
      }
    }
    (void)enumerated;
    res.levels_searched.push_back(qn);
    for (const FiniteAction& cand : candidates) {
      ++res.candidates;
      MetricValue d = action_distance(seq, cand, target);
      if (!res.distance || d < *res.distance) {
        res.distance = d;
        res.best = cand;
      }
    }
  }
  if (res.distance) res.certified = *res.distance < MetricValue{opts.eps, 0};
  return res;
}

}  // namespace typact
