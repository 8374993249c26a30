#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "typact/action.hpp"
#include "typact/metric.hpp"

namespace typact {

// --- extending a finite action by one generator -----------------------------
//
// Adjoins g_new with k·g_new = h (k = minimal positive multiple landing in
// the base group; k = omega when no multiple does, in which case g_new acts
// as the identity).  Blocks are split k-fold; on sub-block (c, i) the new
// generator steps i -> i+1 and closes the cycle through P_h:
//     (c, i)   -> (c, i+1)        for i < k-1,
//     (c, k-1) -> (P_h(c), 0),
// which commutes with every lifted base map and satisfies π^k = lift(P_h)
// exactly.  (In the block-translation model the equal-orbit decomposition
// degenerates: uniform sub-block cycling already commutes with every base
// map, whatever the orbit structure.)
inline FiniteAction extend_finite_action(const FiniteAction& base, Extent k,
                                         const std::optional<std::vector<long long>>& h,
                                         std::optional<std::uint64_t> expected_order = {}) {
  base.validate();
  FiniteAction out;
  out.pres = base.pres;

  if (k.is_omega()) {
    out.q = base.q;
    out.marked = base.marked;
    out.perms = base.perms;
    out.pres.orders.push_back(Extent::omega());
    out.perms.push_back(Permutation::identity(base.q));
    for (auto& rel : out.pres.relations) rel.resize(out.pres.arity(), 0);
    if (expected_order && *expected_order != 0)
      throw PreconditionError("extend: generator with no multiple in the base has infinite order");
    return out;
  }

  std::uint64_t kk = k.value();
  if (kk == 0) throw PreconditionError("extend: k must be >= 1");
  if (!h) throw PreconditionError("extend: finite multiple requires a base element");
  if (h->size() != base.arity()) throw PreconditionError("extend: base element arity mismatch");

  Permutation ph = base.evaluate(*h).perm;
  std::uint64_t fq = base.q * kk;
  out.q = fq;
  out.marked = static_cast<std::uint32_t>(base.marked * kk);
  for (const auto& p : base.perms) out.perms.push_back(BlockMap(base.q, p).lift_to(fq).perm);

  std::vector<std::uint32_t> img(fq);
  for (std::uint64_t c = 0; c < base.q; ++c)
    for (std::uint64_t i = 0; i < kk; ++i)
      img[c * kk + i] = i + 1 < kk
                            ? static_cast<std::uint32_t>(c * kk + i + 1)
                            : static_cast<std::uint32_t>(ph(static_cast<std::uint32_t>(c)) * kk);
  out.perms.push_back(Permutation(std::move(img)));

  std::vector<long long> rel(base.arity() + 1, 0);
  for (std::size_t i = 0; i < h->size(); ++i) rel[i] = (*h)[i];
  rel[base.arity()] = -static_cast<long long>(kk);
  for (auto& r : out.pres.relations) r.resize(base.arity() + 1, 0);
  out.pres.relations.push_back(rel);

  Presentation enlarged = out.pres;
  enlarged.orders.push_back(Extent::omega());  // placeholder while computing the true order
  std::vector<long long> e_new(enlarged.arity(), 0);
  e_new.back() = 1;
  Extent ord = abstract_order(enlarged, e_new);
  if (expected_order && Extent(*expected_order) != ord)
    throw PreconditionError("extend: inconsistent relation: the adjoined generator has order " +
                            ord.str());
  out.pres.orders.push_back(ord);
  return out;
}

// --- relation-guided extension ----------------------------------------------

// Defining relation of new generator i:  s_i·g̃_i = h(i) + Σ_{j<i} k_j(i)·g̃_j,
// with s_i = omega when no multiple of g̃_i lands in the base chain.
struct RelationSpec {
  Extent s;
  std::vector<long long> base_element;  // h(i), over the base generators
  std::vector<long long> k_coeffs;      // k_j(i) for j < i
};

struct RelationData {
  std::vector<RelationSpec> items;

  std::size_t rank() const { return items.size(); }

  // c = max |k_j(i)|, clamped to >= 1 so that λ = 36(3c)^r stays positive
  // (the all-omega and all-zero-coefficient cases degenerate otherwise).
  std::uint64_t c() const {
    std::uint64_t c = 1;
    for (const auto& it : items)
      for (long long k : it.k_coeffs)
        c = std::max<std::uint64_t>(c, static_cast<std::uint64_t>(k < 0 ? -k : k));
    return c;
  }

  Rat lambda() const {
    Int v = 36;
    for (std::size_t i = 0; i < rank(); ++i) v *= Int(3 * c());
    return Rat(v);
  }

  void check_consistent(std::size_t base_arity) const {
    for (std::size_t i = 0; i < items.size(); ++i) {
      const RelationSpec& it = items[i];
      if (it.s.is_finite() && it.s.value() == 0)
        throw PreconditionError("RelationData: s_i must be >= 1");
      if (it.s.is_finite() && it.base_element.size() != base_arity)
        throw PreconditionError("RelationData: h(i) arity mismatch");
      if (it.k_coeffs.size() > i)
        throw PreconditionError("RelationData: k_j(i) defined only for j < i");
    }
  }
};

struct RgeHypotheses {
  bool approx_close = false;      // d(T_{h_i}, T_{g̃_i}) < γ/(λ(1+rc)) in the target
  bool tail_small = false;        // metric tail beyond the base level < γ/λ
  bool base_close = false;        // d(T_{h_i}, S_{h_i}) < γ/λ
  bool powers_close = false;      // d(T_{h_i}^{s_i}, S_{h_i}^{s_i}) < γ/λ
  bool composites_close = false;  // d(T_{h(i)}·Π T_{h_j}^{k_j}, S_{h(i)}·Π S_{h_j}^{k_j}) < γ/λ
  bool all() const {
    return approx_close && tail_small && base_close && powers_close && composites_close;
  }
};

struct RgeResult {
  FiniteAction extended;
  std::vector<MetricValue> deviation;  // d(T̃_{g̃_i}, T̃_{h_i}) per new generator
  std::vector<Rat> bound;              // γ/(3(3c)^{r-i})
  bool bound_holds = false;            // deviation_i < bound_i for every i
  std::optional<RgeHypotheses> hypotheses;
};

// Builds the extension of `base` by generators g̃_1..g̃_r: every block is cut
// into s̃_1···s̃_r sub-intervals; generator i advances coordinate i and closes
// the cycle through its defining relation (wrapping applies the composite
// T̃_{h(i)}·Π_{j<i} T̃_{g̃_j}^{k_j(i)}·T̃_{h_i}^{1-s_i} after the step).
// When `target` (an action of the enlarged presentation that base
// approximates) is supplied, the closeness hypotheses are evaluated for γ, λ
// and the deviation bound below is reported.
inline RgeResult relation_guided_extension(const PartitionSequence& seq, const FiniteAction& base,
                                           const std::vector<std::vector<long long>>& approx,
                                           const RelationData& rel, const Rat& gamma,
                                           const std::optional<FiniteAction>& target = {}) {
  base.validate();
  rel.check_consistent(base.arity());
  std::size_t r = rel.rank();
  if (approx.size() != r)
    throw PreconditionError("rge: one approximating base element per new generator required");
  for (const auto& h : approx)
    if (h.size() != base.arity()) throw PreconditionError("rge: approximating element arity");

  std::vector<std::uint64_t> s_tilde(r, 1);
  for (std::size_t i = 0; i < r; ++i)
    if (rel.items[i].s.is_finite()) s_tilde[i] = rel.items[i].s.value();
  std::uint64_t cells = 1;
  for (std::uint64_t s : s_tilde) cells *= s;
  std::uint64_t fq = base.q * cells;

  // fine block index = B·cells + Σ j_i·stride_i
  std::vector<std::uint64_t> stride(r, 1);
  for (std::size_t i = r; i-- > 1;) stride[i - 1] = stride[i] * s_tilde[i];

  FiniteAction out;
  out.pres = base.pres;
  out.q = fq;
  out.marked = static_cast<std::uint32_t>(base.marked * cells);
  for (const auto& p : base.perms) out.perms.push_back(BlockMap(base.q, p).lift_to(fq).perm);

  auto lift_base = [&](const std::vector<long long>& elem) {
    return base.evaluate(elem).lift_to(fq).perm;
  };

  std::vector<Permutation> new_gens;
  for (std::size_t i = 0; i < r; ++i) {
    const RelationSpec& spec = rel.items[i];
    Permutation lifted_hi = lift_base(approx[i]);
    if (spec.s.is_omega()) {
      new_gens.push_back(lifted_hi);
      continue;
    }
    // W = lift(h(i)) · Π_{j<i} g̃_j^{k_j(i)}
    Permutation w = lift_base(spec.base_element);
    for (std::size_t j = 0; j < spec.k_coeffs.size(); ++j)
      if (spec.k_coeffs[j] != 0) w = w * new_gens[j].pow(spec.k_coeffs[j]);
    std::uint64_t si = spec.s.value();
    if (si == 1) {
      new_gens.push_back(w);
      continue;
    }
    Permutation correction = w * lifted_hi.pow(1 - static_cast<std::int64_t>(si));
    std::vector<std::uint32_t> img(fq);
    for (std::uint64_t f = 0; f < fq; ++f) {
      std::uint64_t ji = (f / stride[i]) % s_tilde[i];
      std::uint64_t stepped = ji + 1 < si ? f + stride[i] : f - ji * stride[i];
      img[f] = ji + 1 < si ? lifted_hi(static_cast<std::uint32_t>(stepped))
                           : correction(static_cast<std::uint32_t>(stepped));
    }
    new_gens.push_back(Permutation(std::move(img)));
  }

  // enlarged presentation: new generators after the base ones
  std::size_t ba = base.arity();
  for (auto& rr : out.pres.relations) rr.resize(ba + r, 0);
  for (std::size_t i = 0; i < r; ++i) {
    out.pres.orders.push_back(Extent::omega());
    out.perms.push_back(new_gens[i]);
    if (rel.items[i].s.is_omega()) continue;
    std::vector<long long> row(ba + r, 0);
    for (std::size_t j = 0; j < ba; ++j) row[j] = rel.items[i].base_element[j];
    for (std::size_t j = 0; j < rel.items[i].k_coeffs.size(); ++j)
      row[ba + j] = rel.items[i].k_coeffs[j];
    row[ba + i] = -static_cast<long long>(rel.items[i].s.value());
    out.pres.relations.push_back(std::move(row));
  }
  for (std::size_t i = 0; i < r; ++i) {
    std::vector<long long> e(ba + r, 0);
    e[ba + i] = 1;
    out.pres.orders[ba + i] = abstract_order(out.pres, e);
  }
  out.validate();

  RgeResult res;
  res.extended = out;
  std::uint64_t c = rel.c();
  Rat lambda = rel.lambda();
  res.bound_holds = true;
  for (std::size_t i = 0; i < r; ++i) {
    MetricValue dev =
        metric_d(seq, BlockMap(fq, new_gens[i]), BlockMap(fq, lift_base(approx[i])));
    Rat denom = 3;  // γ/(3(3c)^{r-i}) with 1-based i
    for (std::size_t t = i + 1; t < r; ++t) denom *= Rat(3 * Int(c));
    res.deviation.push_back(dev);
    res.bound.push_back(gamma / denom);
    if (!(dev < MetricValue{gamma / denom, 0})) res.bound_holds = false;
  }

  if (target) {
    target->validate();
    if (target->arity() != ba + r)
      throw PreconditionError("rge: target must act for the enlarged presentation");
    RgeHypotheses hyp;
    Rat rc = Rat(Int(r) * Int(c));
    Rat bound_approx = gamma / (lambda * (1 + rc));
    Rat bound_l = gamma / lambda;
    hyp.approx_close = hyp.tail_small = hyp.base_close = hyp.powers_close =
        hyp.composites_close = true;

    // base level index for the tail hypothesis
    std::size_t n0 = 0;
    for (std::size_t n = 1; n <= seq.size(); ++n)
      if (seq.q_at(n) == base.q) {
        n0 = n;
        break;
      }
    if (n0 == 0) throw PreconditionError("rge: base level is not a member of the sequence");
    Rat partial_sum(0);
    for (std::size_t n = 1; n <= n0; ++n) partial_sum += Rat(1, Int(n) * Int(n));
    hyp.tail_small = MetricValue{-partial_sum, 1} < MetricValue{bound_l, 0};

    for (std::size_t i = 0; i < r; ++i) {
      std::vector<long long> hi_t(ba + r, 0);
      std::copy(approx[i].begin(), approx[i].end(), hi_t.begin());
      std::vector<long long> gi_t(ba + r, 0);
      gi_t[ba + i] = 1;
      BlockMap t_hi = target->evaluate(hi_t);
      BlockMap t_gi = target->evaluate(gi_t);
      BlockMap s_hi = base.evaluate(approx[i]);
      if (!(metric_d(seq, t_hi, t_gi) < MetricValue{bound_approx, 0})) hyp.approx_close = false;
      if (!(metric_d(seq, t_hi, s_hi) < MetricValue{bound_l, 0})) hyp.base_close = false;
      if (rel.items[i].s.is_finite() && rel.items[i].s.value() >= 1) {
        std::int64_t si = static_cast<std::int64_t>(rel.items[i].s.value());
        if (!(metric_d(seq, t_hi.pow(si), s_hi.pow(si)) < MetricValue{bound_l, 0}))
          hyp.powers_close = false;
        std::vector<long long> hofi_t(ba + r, 0);
        std::copy(rel.items[i].base_element.begin(), rel.items[i].base_element.end(),
                  hofi_t.begin());
        BlockMap t_comp = target->evaluate(hofi_t);
        BlockMap s_comp = base.evaluate(rel.items[i].base_element);
        for (std::size_t j = 0; j < rel.items[i].k_coeffs.size(); ++j) {
          long long kj = rel.items[i].k_coeffs[j];
          if (kj == 0) continue;
          std::vector<long long> hj_t(ba + r, 0);
          std::copy(approx[j].begin(), approx[j].end(), hj_t.begin());
          t_comp = t_comp * target->evaluate(hj_t).pow(kj);
          s_comp = s_comp * base.evaluate(approx[j]).pow(kj);
        }
        if (!(metric_d(seq, t_comp, s_comp) < MetricValue{bound_l, 0})) hyp.composites_close = false;
      }
    }
    res.hypotheses = hyp;
  }
  return res;
}

}  // namespace typact
