#pragma once

#include <compare>
#include <cstdint>
#include <vector>

#include "typact/errors.hpp"
#include "typact/partition.hpp"
#include "typact/permutation.hpp"
#include "typact/rational.hpp"

namespace typact {

// A measure-preserving map of [0,1) permuting the q equal blocks of a
// partition, acting on each block by a translation.  The block permutation
// determines the map completely.
struct BlockMap {
  std::uint64_t q = 1;
  Permutation perm = Permutation::identity(1);

  BlockMap() = default;
  BlockMap(std::uint64_t q_, Permutation p) : q(q_), perm(std::move(p)) {
    if (perm.size() != q) throw PreconditionError("BlockMap: permutation size != q");
  }

  // The same transformation of [0,1) viewed on a finer partition.
  BlockMap lift_to(std::uint64_t fine_q) const {
    if (fine_q % q != 0) throw PreconditionError("BlockMap: lift target must refine q");
    std::uint64_t k = fine_q / q;
    std::vector<std::uint32_t> img(fine_q);
    for (std::uint64_t c = 0; c < q; ++c)
      for (std::uint64_t i = 0; i < k; ++i)
        img[c * k + i] = static_cast<std::uint32_t>(perm(static_cast<std::uint32_t>(c)) * k + i);
    return BlockMap(fine_q, Permutation(std::move(img)));
  }

  friend BlockMap operator*(const BlockMap& a, const BlockMap& b) {
    if (a.q != b.q) throw PreconditionError("BlockMap: level mismatch");
    return BlockMap(a.q, a.perm * b.perm);
  }

  BlockMap inverse() const { return BlockMap(q, perm.inverse()); }
  BlockMap pow(std::int64_t e) const { return BlockMap(q, perm.pow(e)); }

  friend bool operator==(const BlockMap&, const BlockMap&) = default;
};

// Rational enclosure of ζ(2) = Σ 1/n²; all compared values at desk scale
// differ by rationals with small denominators, so this width suffices.
inline const Rat& zeta2_low() {
  static const Rat v(1644934066, 1000000000);
  return v;
}
inline const Rat& zeta2_high() {
  static const Rat v(1644934068, 1000000000);
  return v;
}

// Exact metric value a + b·ζ(2) with rational a, b and b >= 0.
struct MetricValue {
  Rat a{0};
  Rat b{0};

  static MetricValue zero() { return {}; }
  bool is_zero() const { return a == 0 && b == 0; }

  friend MetricValue operator+(const MetricValue& x, const MetricValue& y) {
    return {x.a + y.a, x.b + y.b};
  }
  MetricValue scaled(const Rat& c) const { return {a * c, b * c}; }

  double approx() const { return rat_double(a) + rat_double(b) * 1.6449340668482264; }

  friend bool operator==(const MetricValue& x, const MetricValue& y) {
    return x.a == y.a && x.b == y.b;
  }

  // Sign of (a + b·ζ(2)) decided through the enclosure; throws when the
  // enclosure cannot separate (never happens for desk-scale denominators).
  std::strong_ordering sign() const {
    if (b == 0) {
      if (a > 0) return std::strong_ordering::greater;
      if (a < 0) return std::strong_ordering::less;
      return std::strong_ordering::equal;
    }
    Rat low = b > 0 ? a + b * zeta2_low() : a + b * zeta2_high();
    Rat high = b > 0 ? a + b * zeta2_high() : a + b * zeta2_low();
    if (low > 0) return std::strong_ordering::greater;
    if (high < 0) return std::strong_ordering::less;
    if (a == 0 && b == 0) return std::strong_ordering::equal;
    throw Error("MetricValue: zeta(2) enclosure cannot separate comparison");
  }

  friend std::strong_ordering operator<=>(const MetricValue& x, const MetricValue& y) {
    return MetricValue{x.a - y.a, x.b - y.b}.sign();
  }
};

namespace detail {

// d_n at the exact resolution of ρ: (2/q)·Σ_cycles ⌊L/2⌋ — within one cycle
// the best block subset takes alternating elements.
inline Rat dn_cycle_formula(const Permutation& rho, std::uint64_t q) {
  std::uint64_t total = 0;
  for (const auto& c : rho.cycles()) total += c.size() / 2;
  return Rat(2 * Int(total), Int(q));
}

// max over ξ_coarse-measurable A of μ(ρA Δ A), with ρ a permutation of the
// fine blocks and coarse_q | fine_q.  Gray-code walk over coarse subsets.
inline Rat dn_coarse_bruteforce(const Permutation& rho, std::uint64_t fine_q,
                                std::uint64_t coarse_q, std::uint64_t subset_budget) {
  if (coarse_q > 62 || (1ull << coarse_q) > subset_budget)
    throw BudgetError("coarse d_n: 2^" + std::to_string(coarse_q) + " subsets exceed budget");
  std::uint64_t k = fine_q / coarse_q;
  // w[i][j] = #fine blocks in coarse block i mapped into coarse block j
  std::vector<std::vector<std::uint32_t>> w(coarse_q, std::vector<std::uint32_t>(coarse_q, 0));
  for (std::uint64_t f = 0; f < fine_q; ++f) ++w[f / k][rho(static_cast<std::uint32_t>(f)) / k];

  // value(S) = Σ_{i∈S, j∉S} w[i][j]; Gray-code walk updates it in O(q) per flip
  std::vector<char> in(coarse_q, 0);
  std::int64_t value = 0;
  std::int64_t best = 0;  // value(∅) = 0
  std::uint64_t gray_prev = 0;
  for (std::uint64_t it = 1; it < (1ull << coarse_q); ++it) {
    std::uint64_t gray = it ^ (it >> 1);
    std::uint32_t x = static_cast<std::uint32_t>(std::countr_zero(gray ^ gray_prev));
    gray_prev = gray;
    if (!in[x]) {
      in[x] = 1;
      for (std::uint32_t j = 0; j < coarse_q; ++j) {
        if (!in[j]) value += w[x][j];                 // new escaping pairs (x, j)
        if (in[j] && j != x) value -= w[j][x];        // (i, x) no longer escapes
      }
    } else {
      in[x] = 0;
      for (std::uint32_t j = 0; j < coarse_q; ++j) {
        if (!in[j] && j != x) value -= w[x][j];
        if (in[j]) value += w[j][x];
      }
    }
    best = std::max(best, value);
  }
  return Rat(2 * Int(best), Int(fine_q));
}

}  // namespace detail

// d_n(s,t) = max_{A ξ_n-measurable} μ(sA Δ tA) at level n of the sequence.
// Both maps must act on partitions that the level refines.
inline Rat metric_dn(const PartitionSequence& seq, const BlockMap& s, const BlockMap& t,
                     std::size_t n, std::uint64_t subset_budget = (1ull << 22)) {
  std::uint64_t qn = seq.q_at(n);
  auto fine = seq.common_refinement(s.q, t.q);
  if (!fine)
    throw PreconditionError("metric_dn: no common refinement in the configured sequence");
  if (qn % s.q == 0 && qn % t.q == 0) {
    Permutation rho = (s.lift_to(qn).perm.inverse() * t.lift_to(qn).perm);
    return detail::dn_cycle_formula(rho, qn);
  }
  // coarser level than the maps: restricted subset maximization
  std::uint64_t fq = fine->q;
  Permutation rho = (s.lift_to(fq).perm.inverse() * t.lift_to(fq).perm);
  if (fq % qn != 0)
    throw PreconditionError("metric_dn: level incompatible with the map resolution");
  return detail::dn_coarse_bruteforce(rho, fq, qn, subset_budget);
}

// d(s,t) = Σ_n d_n/n², evaluated in closed form: for maps resolved at level
// N, d_n is constant for n >= N (a block translation lifts cycle-by-cycle),
// so the tail contributes d_N·(ζ(2) − Σ_{n<N} 1/n²).
inline MetricValue metric_d(const PartitionSequence& seq, const BlockMap& s, const BlockMap& t,
                            std::uint64_t subset_budget = (1ull << 22)) {
  auto fine = seq.common_refinement(s.q, t.q);
  if (!fine)
    throw PreconditionError("metric_d: no common refinement in the configured sequence");
  std::size_t N = fine->n;
  std::uint64_t fq = fine->q;
  Permutation rho = (s.lift_to(fq).perm.inverse() * t.lift_to(fq).perm);

  Rat dN = detail::dn_cycle_formula(rho, fq);
  MetricValue out;
  out.b = dN;
  for (std::size_t n = 1; n < N; ++n) {
    std::uint64_t qn = seq.q_at(n);  // qn | fq along the chain
    Rat dn = qn == fq ? dN : detail::dn_coarse_bruteforce(rho, fq, qn, subset_budget);
    out.a += (dn - dN) / Rat(Int(n) * Int(n));
  }
  return out;
}

struct ProductInequality {
  MetricValue lhs;  // d(T_1···T_m, S_1···S_m)
  MetricValue rhs;  // Σ d(T_i, S_i)
  bool holds;
};

// d(T_1···T_m, S_1···S_m) <= Σ_i d(T_i,S_i) for commuting families.
inline ProductInequality product_inequality_check(const PartitionSequence& seq,
                                                  const std::vector<std::pair<BlockMap, BlockMap>>& pairs) {
  if (pairs.empty()) throw PreconditionError("product_inequality_check: empty input");
  std::uint64_t fq = 1;
  for (const auto& [t, s] : pairs) fq = std::lcm(std::lcm(fq, t.q), s.q);
  std::vector<BlockMap> ts, ss;
  for (const auto& [t, s] : pairs) {
    ts.push_back(t.lift_to(fq));
    ss.push_back(s.lift_to(fq));
  }
  for (std::size_t i = 0; i < ts.size(); ++i)
    for (std::size_t j = 0; j < ts.size(); ++j) {
      if (!ts[i].perm.commutes_with(ts[j].perm) || !ts[i].perm.commutes_with(ss[j].perm) ||
          !ss[i].perm.commutes_with(ss[j].perm))
        throw PreconditionError("product_inequality_check: maps do not commute");
    }
  BlockMap tprod(fq, Permutation::identity(fq)), sprod(fq, Permutation::identity(fq));
  MetricValue sum;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    tprod = tprod * ts[i];
    sprod = sprod * ss[i];
    sum = sum + metric_d(seq, ts[i], ss[i]);
  }
  MetricValue lhs = metric_d(seq, tprod, sprod);
  return {lhs, sum, lhs <= sum};
}

}  // namespace typact
