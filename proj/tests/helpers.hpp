#pragma once

#include <random>
#include <vector>

#include "typact/group_desc.hpp"

namespace typact::testing {

inline const std::vector<std::uint64_t> kSmallPrimes{2, 3, 5, 7};

// Random normalized description.  `allow_unbounded` adds free rank, Prüfer
// parts and towers to the mix.
inline GroupDesc random_desc(std::mt19937_64& rng, bool allow_unbounded,
                             bool allow_omega = true) {
  std::uniform_int_distribution<int> coin(0, 3);
  GroupDesc g;
  for (std::uint64_t p : kSmallPrimes) {
    for (std::uint32_t k = 1; k <= 3; ++k) {
      int roll = coin(rng);
      if (roll == 1) g.cyclic.add(PrimePower(p, k), 1 + rng() % 3);
      if (roll == 2 && allow_omega) g.cyclic.add(PrimePower(p, k), Extent::omega());
    }
    if (allow_unbounded) {
      if (coin(rng) == 0 && rng() % 4 == 0)
        g.prufer[p] = rng() % 3 == 0 ? Extent::omega() : Extent(1 + rng() % 2);
      if (coin(rng) == 0 && rng() % 5 == 0) g.towers.insert(p);
    }
  }
  if (allow_unbounded && rng() % 3 == 0)
    g.free_rank = rng() % 4 == 0 ? Extent::omega() : Extent(rng() % 3);
  return normalize(g);
}

inline GroupDesc random_bounded_desc(std::mt19937_64& rng, bool allow_omega = true) {
  return random_desc(rng, false, allow_omega);
}

}  // namespace typact::testing
