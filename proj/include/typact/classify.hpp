#pragma once

#include <optional>
#include <string>

#include "typact/errors.hpp"
#include "typact/group_desc.hpp"

namespace typact {

// Outcome of a classification decision.  `rule` identifies the branch taken;
// the full rule vocabulary is:
//   embeds:        "embeds-ok", "no-free-rank", "no-prufer", "no-tower",
//                  "no-cyclic-mbar"
//   weak-iso:      "weak-iso-mutual", "not-weak-iso-forward",
//                  "not-weak-iso-backward"
//   extend-free:   "H-finite", "H-unbounded", "bounded-mbar-equal",
//                  "bounded-mbar-differ", "bounded-g-unbounded"
//   extend-any:    "H-finite", "H-unbounded", "bounded-witness",
//                  "bounded-no-witness"
//   monothetic:    "unbounded-yes", "bounded-no", "finite-no"
struct Decision {
  bool answer = false;
  std::string rule;
  std::optional<MultiplicityMap> witness;  // extend-any yes on infinite bounded H
};

// Does a group of type h embed into a group of type g?
//
// Componentwise criterion (derivation shipped in docs/embedding.md, validated
// against the subgroup-enumeration oracle on all finite pairs):
//   (1) free ranks:    fr(h) <= fr(g);
//   (2) per prime:     prufer_h(p) <= prufer_g(p);
//   (3) per prime:     a tower in h needs a tower in g or prufer_g(p) = inf;
//   (4) per prime, k:  prufer_h(p) + mbar_h(p^k) <= prufer_g(p) + mbar_g(p^k),
// where mbar counts cyclic summands of order >= p^k including tower slots.
// A target Prüfer copy can host at most one cyclic source summand (its
// subgroups form a chain), which is why it credits both sides of (4) rather
// than one slot per order.
inline Decision embeds(const GroupDesc& h, const GroupDesc& g) {
  if (h.free_rank > g.free_rank) return {false, "no-free-rank", {}};
  for (const auto& [p, c] : h.prufer) {
    auto it = g.prufer.find(p);
    Extent avail = it == g.prufer.end() ? Extent(0) : it->second;
    if (c > avail) return {false, "no-prufer", {}};
  }
  auto prufer_g_at = [&g](std::uint64_t p) {
    auto it = g.prufer.find(p);
    return it == g.prufer.end() ? Extent(0) : it->second;
  };
  auto prufer_h_at = [&h](std::uint64_t p) {
    auto it = h.prufer.find(p);
    return it == h.prufer.end() ? Extent(0) : it->second;
  };
  for (std::uint64_t p : h.towers)
    if (!g.towers.count(p) && !prufer_g_at(p).is_omega()) return {false, "no-tower", {}};
  for (std::uint64_t p : h.cyclic.primes()) {
    if (h.towers.count(p)) continue;  // covered by (3): both sides infinite at every k
    for (std::uint32_t k = 1; k <= h.cyclic.max_exponent(p); ++k)
      if (prufer_h_at(p) + m_bar_at(h, p, k) > prufer_g_at(p) + m_bar_at(g, p, k))
        return {false, "no-cyclic-mbar", {}};
  }
  return {true, "embeds-ok", {}};
}

// Mutual embeddability.  On bounded pairs the answer must coincide with
// mbar equality; the two routes are computed and compared.
inline Decision weak_isomorphic(const GroupDesc& a, const GroupDesc& b) {
  Decision fwd = embeds(a, b);
  Decision bwd = embeds(b, a);
  Decision out;
  out.answer = fwd.answer && bwd.answer;
  out.rule = !fwd.answer   ? "not-weak-iso-forward"
             : !bwd.answer ? "not-weak-iso-backward"
                           : "weak-iso-mutual";
  if (a.is_bounded() && b.is_bounded()) {
    bool mbar_route = m_bar(a) == m_bar(b);
    if (mbar_route != out.answer)
      throw Error("weak_isomorphic: mutual-embedding route disagrees with mbar route");
  }
  return out;
}

// Can a typical H-action be extended to a free G-action?  Also answers the
// category-preservation question for the restriction map (same criterion).
inline Decision extends_to_free(const GroupDesc& h, const GroupDesc& g) {
  if (!embeds(h, g).answer)
    throw PreconditionError("extends_to_free: h does not embed into g");
  if (h.is_finite()) return {true, "H-finite", {}};
  if (!h.is_bounded()) return {true, "H-unbounded", {}};
  // h infinite bounded: free extendability <=> g weakly isomorphic to h,
  // i.e. g bounded with the same mbar.
  if (!g.is_bounded()) return {false, "bounded-g-unbounded", {}};
  if (m_bar(g) == m_bar(h)) return {true, "bounded-mbar-equal", {}};
  return {false, "bounded-mbar-differ", {}};
}

// Can a typical H-action be extended to a G-action at all?  Decides whether
// G = H' ⊕ G1 with H <= H' <= G and H' weakly isomorphic to H; equivalently
// (and also reported as such) whether some G* <= G has trivial intersection
// with H and weakly-isomorphic quotient.
//
// For infinite bounded H this asks for a bounded multiplicity map m' with
// m' <= m_g pointwise (a tower in g supplies capacity one at each order) and
// mbar' = mbar_h.  Per prime, writing Kinf for the largest k with
// m_h(p^k) = inf: entries above Kinf are forced to m_h, every k <= Kinf
// needs an infinite tail, so m'(p^Kinf) must be inf and hence
// m_g(p^Kinf) = inf.
inline Decision extends_to_any(const GroupDesc& h, const GroupDesc& g) {
  if (!embeds(h, g).answer)
    throw PreconditionError("extends_to_any: h does not embed into g");
  if (h.is_finite()) return {true, "H-finite", {}};
  if (!h.is_bounded()) return {true, "H-unbounded", {}};
  MultiplicityMap witness;
  for (std::uint64_t p : h.cyclic.primes()) {
    std::uint32_t k_inf = 0;
    for (const auto& [pk, c] : h.cyclic.entries())
      if (pk.p == p && c.is_omega()) k_inf = std::max(k_inf, pk.k);
    auto cap = [&](std::uint32_t k) -> Extent {
      return g.cyclic.at(p, k) + Extent(g.towers.count(p) ? 1 : 0);
    };
    for (std::uint32_t k = k_inf + 1; k <= h.cyclic.max_exponent(p); ++k)
      if (h.cyclic.at(p, k) > cap(k)) return {false, "bounded-no-witness", {}};
    if (k_inf >= 1 && !g.cyclic.at(p, k_inf).is_omega())
      return {false, "bounded-no-witness", {}};
    if (k_inf >= 1) witness.set(PrimePower(p, k_inf), Extent::omega());
    for (std::uint32_t k = k_inf + 1; k <= h.cyclic.max_exponent(p); ++k)
      witness.set(PrimePower(p, k), h.cyclic.at(p, k));
  }
  return {true, "bounded-witness", witness};
}

// Is the centralizer of a typical G-action generically monothetic?
// Yes iff G is unbounded; for finite G the centralizer is not even abelian,
// for infinite bounded G not even topologically finitely generated.
inline Decision generically_monothetic(const GroupDesc& g) {
  if (!g.is_bounded()) return {true, "unbounded-yes", {}};
  if (g.is_finite()) return {false, "finite-no", {}};
  return {false, "bounded-no", {}};
}

}  // namespace typact
