#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "typact/metric.hpp"

using namespace typact;

namespace {

// Independent oracle: maximize μ(sA Δ tA) over all 2^q block subsets.
Rat dn_subset_oracle(const Permutation& s, const Permutation& t, std::uint64_t q) {
  Permutation rho = s.inverse() * t;
  std::uint64_t best = 0;
  for (std::uint64_t mask = 0; mask < (1ull << q); ++mask) {
    std::uint64_t escaped = 0;
    for (std::uint32_t i = 0; i < q; ++i)
      if ((mask >> i & 1) && !(mask >> rho(i) & 1)) ++escaped;
    best = std::max(best, escaped);
  }
  return Rat(2 * Int(best), Int(q));
}

Permutation random_perm(std::uint64_t q, std::mt19937_64& rng) {
  std::vector<std::uint32_t> idx(q);
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  return Permutation(idx);
}

}  // namespace

TEST_CASE("metric value ordering through the zeta(2) enclosure") {
  MetricValue zeta{Rat(0), Rat(1)};
  CHECK(zeta > MetricValue{Rat(8, 5), Rat(0)});
  CHECK(zeta < MetricValue{Rat(17, 10), Rat(0)});
  CHECK(MetricValue{Rat(1), Rat(1)} > zeta);
  CHECK(MetricValue{} == MetricValue::zero());
  CHECK(MetricValue{Rat(1, 3), Rat(2)}.approx() == Catch::Approx(1.0 / 3 + 2 * 1.6449340668));
}

TEST_CASE("d_n cycle formula on pinned cases") {
  PartitionSequence seq({4});
  BlockMap id4(4, Permutation::identity(4));
  BlockMap cyc4(4, Permutation::rotation(4));
  CHECK(metric_dn(seq, cyc4, cyc4, 1) == Rat(0));
  CHECK(metric_dn(seq, id4, cyc4, 1) == Rat(1));

  PartitionSequence seq3({3});
  BlockMap id3(3, Permutation::identity(3));
  BlockMap cyc3(3, Permutation::rotation(3));
  CHECK(metric_dn(seq3, id3, cyc3, 1) == Rat(2, 3));
}

TEST_CASE("d_n cycle formula equals subset maximization") {
  std::mt19937_64 rng(43);
  for (std::uint64_t q = 2; q <= 8; ++q) {
    PartitionSequence seq({q});
    for (int rep = 0; rep < 40; ++rep) {
      BlockMap s(q, random_perm(q, rng));
      BlockMap t(q, random_perm(q, rng));
      CHECK(metric_dn(seq, s, t, 1) == dn_subset_oracle(s.perm, t.perm, q));
    }
  }
}

TEST_CASE("d_n is stable under refinement") {
  PartitionSequence seq({2, 4, 8, 16});
  BlockMap swap2(2, Permutation::rotation(2));
  BlockMap id2(2, Permutation::identity(2));
  for (std::size_t n = 1; n <= 6; ++n) CHECK(metric_dn(seq, swap2, id2, n) == Rat(1));

  std::mt19937_64 rng(47);
  for (int rep = 0; rep < 25; ++rep) {
    BlockMap s(4, random_perm(4, rng));
    BlockMap t(4, random_perm(4, rng));
    Rat base = metric_dn(seq, s, t, 2);
    CHECK(metric_dn(seq, s, t, 3) == base);
    CHECK(metric_dn(seq, s, t, 4) == base);
  }
}

TEST_CASE("d_n at a coarser level maximizes over coarse subsets only") {
  PartitionSequence seq({2, 4});
  BlockMap rot(4, Permutation::rotation(4));
  BlockMap id4(4, Permutation::identity(4));
  CHECK(metric_dn(seq, rot, id4, 1) == Rat(1, 2));  // either half escapes by one block
  CHECK(metric_dn(seq, rot, id4, 2) == Rat(1));
}

TEST_CASE("metric closed form") {
  PartitionSequence seq({2});
  BlockMap swap2(2, Permutation::rotation(2));
  BlockMap id2(2, Permutation::identity(2));
  MetricValue d = metric_d(seq, swap2, id2);
  CHECK(d.a == 0);
  CHECK(d.b == 1);  // Σ 1/n² = ζ(2)
  CHECK(metric_d(seq, swap2, swap2).is_zero());
}

TEST_CASE("metric axioms on random triples") {
  PartitionSequence seq = PartitionSequence::lcm_chain(12);
  std::mt19937_64 rng(53);
  for (int rep = 0; rep < 60; ++rep) {
    BlockMap a(12, random_perm(12, rng));
    BlockMap b(12, random_perm(12, rng));
    BlockMap c(12, random_perm(12, rng));
    MetricValue dab = metric_d(seq, a, b);
    MetricValue dba = metric_d(seq, b, a);
    CHECK(dab == dba);
    CHECK((dab + metric_d(seq, b, c)) >= metric_d(seq, a, c));
    CHECK((metric_d(seq, a, a)).is_zero());
  }
}

TEST_CASE("no common refinement is rejected") {
  PartitionSequence seq({2, 4});
  BlockMap a(3, Permutation::rotation(3));
  BlockMap b(2, Permutation::rotation(2));
  CHECK_THROWS_AS(metric_d(seq, a, b), PreconditionError);
}

TEST_CASE("product inequality") {
  PartitionSequence seq = PartitionSequence::lcm_chain(12);
  std::mt19937_64 rng(59);

  BlockMap t(12, Permutation::rotation(12, 5));
  BlockMap s(12, Permutation::rotation(12, 1));
  auto single = product_inequality_check(seq, {{t, s}});
  CHECK(single.holds);
  CHECK(single.lhs == single.rhs);  // n = 1: equality

  auto zero = product_inequality_check(seq, {{t, t}, {s, s}});
  CHECK(zero.holds);
  CHECK(zero.lhs.is_zero());
  CHECK(zero.rhs.is_zero());

  // commuting families built from powers of two commuting rotations
  for (int rep = 0; rep < 40; ++rep) {
    std::vector<std::pair<BlockMap, BlockMap>> pairs;
    std::size_t m = 2 + rng() % 3;
    for (std::size_t i = 0; i < m; ++i) {
      pairs.emplace_back(BlockMap(12, Permutation::rotation(12, rng() % 12)),
                         BlockMap(12, Permutation::rotation(12, rng() % 12)));
    }
    CHECK(product_inequality_check(seq, pairs).holds);
  }

  BlockMap noncomm(12, Permutation({1, 0, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11}));
  CHECK_THROWS_AS(product_inequality_check(seq, {{t, noncomm}}), PreconditionError);
}
