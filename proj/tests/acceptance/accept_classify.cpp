#include <catch2/catch_amalgamated.hpp>
#include <map>
#include <random>
#include <set>

#include "typact/classify.hpp"
#include "typact/finite_group.hpp"
#include "typact/group_expr.hpp"

using namespace typact;

namespace {

std::vector<std::vector<std::uint64_t>> groups_up_to(std::uint64_t max_order) {
  std::vector<std::vector<std::uint64_t>> out;
  for (std::uint64_t n = 1; n <= max_order; ++n)
    for (const auto& w : abelian_groups_of_order(n)) out.push_back(w);
  return out;
}

// Exhaustive feasibility search for a bounded multiplicity map m' with
// m' <= cap pointwise and cumulative tails equal to those of h.  Values range
// over {0..B, omega}; feasibility is monotone in B, and entries above the
// omega threshold are forced, so B = max finite multiplicity of h suffices.
bool oracle_extend_any_bounded(const GroupDesc& h, const GroupDesc& g) {
  for (std::uint64_t p : h.cyclic.primes()) {
    std::uint32_t top = std::max(h.cyclic.max_exponent(p), g.cyclic.max_exponent(p));
    std::uint64_t max_fin = 1;
    for (const auto& [pk, c] : h.cyclic.entries())
      if (pk.p == p && c.is_finite()) max_fin = std::max(max_fin, c.value());
    std::vector<Extent> values;
    for (std::uint64_t v = 0; v <= max_fin; ++v) values.emplace_back(v);
    values.push_back(Extent::omega());

    std::vector<Extent> cand(top, Extent(0));
    bool feasible = false;
    auto rec = [&](auto&& self, std::uint32_t k) -> void {
      if (feasible) return;
      if (k == top) {
        // m' <= cap pointwise, with a tower slot counting one per order
        for (std::uint32_t j = 1; j <= top; ++j) {
          Extent cap = g.cyclic.at(p, j) + Extent(g.towers.count(p) ? 1 : 0);
          if (cand[j - 1] > cap) return;
        }
        // cumulative tails agree with h everywhere
        Extent tail(0);
        for (std::uint32_t j = top; j >= 1; --j) {
          tail += cand[j - 1];
          if (tail != m_bar_at(h, p, j)) return;
        }
        feasible = true;
        return;
      }
      for (const Extent& v : values) {
        cand[k] = v;
        self(self, k + 1);
      }
    };
    rec(rec, 0);
    if (!feasible) return false;
  }
  // primes outside h's support need nothing
  return true;
}

GroupDesc random_bounded(std::mt19937_64& rng, bool force_omega) {
  GroupDesc g;
  for (std::uint64_t p : {2, 3}) {
    for (std::uint32_t k = 1; k <= 3; ++k) {
      switch (rng() % 4) {
        case 0:
          g.cyclic.add(PrimePower(p, k), 1 + rng() % 2);
          break;
        case 1:
          g.cyclic.add(PrimePower(p, k), Extent::omega());
          break;
        default:
          break;
      }
    }
  }
  if (force_omega && g.cyclic.all_finite() && !g.cyclic.empty())
    g.cyclic.set(g.cyclic.entries().begin()->first, Extent::omega());
  if (force_omega && g.cyclic.empty()) g.cyclic.add(PrimePower(2, 1), Extent::omega());
  return g;
}

}  // namespace

TEST_CASE("criterion 1: embeds agrees with the subgroup oracle on orders <= 64") {
  auto groups = groups_up_to(64);
  std::vector<GroupDesc> descs;
  std::vector<std::set<std::vector<std::uint64_t>>> types;
  for (const auto& w : groups) {
    descs.push_back(desc_from_cyclic_orders(w));
    FiniteGroupTable t(w);
    std::set<std::vector<std::uint64_t>> ts;
    for (const Subgroup& s : oracle_subgroups(t)) ts.insert(s.iso_factors);
    types.push_back(std::move(ts));
  }
  std::size_t pairs = 0;
  for (std::size_t hi = 0; hi < groups.size(); ++hi) {
    std::vector<std::uint64_t> h_type = invariant_factors(groups[hi]);
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
      bool by_rule = embeds(descs[hi], descs[gi]).answer;
      bool by_oracle = types[gi].count(h_type) > 0;
      INFO("h = " << serialize_group(descs[hi]) << ", g = " << serialize_group(descs[gi]));
      REQUIRE(by_rule == by_oracle);
      ++pairs;
    }
  }
  CHECK(pairs == groups.size() * groups.size());
}

TEST_CASE("criterion 2: weak isomorphism = isomorphism on orders <= 96, mbar route on goldens") {
  auto groups = groups_up_to(96);
  std::vector<GroupDesc> descs;
  for (const auto& w : groups) descs.push_back(desc_from_cyclic_orders(w));
  for (std::size_t a = 0; a < descs.size(); ++a)
    for (std::size_t b = 0; b < descs.size(); ++b) {
      bool wi = weak_isomorphic(descs[a], descs[b]).answer;
      REQUIRE(wi == (descs[a] == descs[b]));
    }

  // 50 bounded infinite symbolic pairs: mutual embedding route == mbar route
  std::vector<GroupDesc> pool = {
      parse_group("(Z/2)^inf"),
      parse_group("(Z/2)^inf + Z/4"),
      parse_group("(Z/2)^inf + (Z/4)^inf"),
      parse_group("(Z/4)^inf"),
      parse_group("(Z/4)^inf + Z/2"),
      parse_group("(Z/8)^inf + (Z/2)^inf"),
      parse_group("(Z/3)^inf"),
      parse_group("(Z/3)^inf + (Z/9)^2"),
      parse_group("(Z/9)^inf"),
      parse_group("(Z/2)^inf + (Z/3)^inf"),
  };
  std::size_t cases = 0;
  for (std::size_t i = 0; i < pool.size() && cases < 50; ++i)
    for (std::size_t j = i; j < pool.size() && cases < 50; ++j) {
      ++cases;
      bool mutual = embeds(pool[i], pool[j]).answer && embeds(pool[j], pool[i]).answer;
      bool mbar_route = m_bar(pool[i]) == m_bar(pool[j]);
      REQUIRE(mutual == mbar_route);
      REQUIRE(weak_isomorphic(pool[i], pool[j]).answer == mbar_route);
    }
  CHECK(cases == 50);
}

TEST_CASE("criterion 3: free-extension decision table") {
  auto expect = [](const std::string& h, const std::string& g, bool answer,
                   const std::string& rule) {
    Decision d = extends_to_free(parse_group(h), parse_group(g));
    INFO("pair (" << h << ", " << g << ")");
    REQUIRE(d.answer == answer);
    REQUIRE(d.rule == rule);
  };
  expect("Z", "Z^2", true, "H-unbounded");
  // roots of all orders: nZ inside Z is again Z
  for (std::uint64_t n = 1; n <= 10; ++n) {
    GroupDesc nz = multiply(parse_group("Z"), n);
    REQUIRE(nz == parse_group("Z"));
    Decision d = extends_to_free(nz, parse_group("Z"));
    REQUIRE(d.answer);
    REQUIRE(d.rule == "H-unbounded");
  }
  expect("(Z/2)^inf", "(Z/2)^inf + Z/3", false, "bounded-mbar-differ");
  expect("(Z/2)^inf", "(Z/2)^inf + Z/4", false, "bounded-mbar-differ");
  expect("(Z/2)^inf", "(Z/2)^inf", true, "bounded-mbar-equal");
  expect("(Z/2)^inf", "(Z/2)^inf + Z/2", true, "bounded-mbar-equal");
  // finite H extends into anything it embeds in
  expect("Z/4", "Z + Z/4", true, "H-finite");
  expect("Z/4", "Z/8", true, "H-finite");
  expect("Z/2 + Z/2", "(Z/2)^inf", true, "H-finite");
  expect("Z/6", "T(2) + Z/3", true, "H-finite");
  expect("Z/8", "C(2^inf) + Z", true, "H-finite");
  // further unbounded branches
  expect("T(2)", "T(2) + Z/5", true, "H-unbounded");
  expect("C(3^inf)", "C(3^inf) + (Z/2)^inf", true, "H-unbounded");
}

TEST_CASE("criterion 4: any-extension decision with validated witnesses") {
  Decision d = extends_to_any(parse_group("(Z/2)^inf"), parse_group("(Z/2)^inf + Z/3"));
  REQUIRE(d.answer);
  REQUIRE(d.witness.has_value());
  GroupDesc w;
  w.cyclic = *d.witness;
  REQUIRE(w == parse_group("(Z/2)^inf"));
  REQUIRE_FALSE(extends_to_any(parse_group("(Z/2)^inf"), parse_group("(Z/4)^inf")).answer);

  std::mt19937_64 rng(20260810);
  std::size_t cases = 0, yes = 0;
  while (cases < 100) {
    GroupDesc h = random_bounded(rng, /*force_omega=*/true);
    GroupDesc g = rng() % 2 == 0 ? direct_sum(h, random_bounded(rng, false))
                                 : random_bounded(rng, true);
    if (rng() % 4 == 0) g.towers.insert(2 + (rng() % 2));
    if (!h.is_bounded() || !h.is_infinite()) continue;
    if (!embeds(h, g).answer) continue;
    ++cases;
    Decision dec = extends_to_any(h, g);
    bool oracle = oracle_extend_any_bounded(h, g);
    INFO("h = " << serialize_group(h) << ", g = " << serialize_group(g));
    REQUIRE(dec.answer == oracle);
    if (dec.answer) {
      ++yes;
      REQUIRE(dec.witness.has_value());
      const MultiplicityMap& m = *dec.witness;
      // m' <= m_g pointwise with tower credit, and mbar' = mbar_h
      for (const auto& [pk, c] : m.entries()) {
        Extent cap = g.cyclic.at(pk) + Extent(g.towers.count(pk.p) ? 1 : 0);
        REQUIRE(c <= cap);
      }
      GroupDesc hw;
      hw.cyclic = m;
      for (std::uint64_t p : h.cyclic.primes()) {
        std::uint32_t top = std::max(hw.cyclic.max_exponent(p), h.cyclic.max_exponent(p)) + 1;
        for (std::uint32_t k = 1; k <= top; ++k)
          REQUIRE(m_bar_at(hw, p, k) == m_bar_at(h, p, k));
      }
    }
  }
  CHECK(cases == 100);
  CHECK(yes >= 20);
  CHECK(yes <= 95);
}
