#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "typact/errors.hpp"
#include "typact/finite_group.hpp"
#include "typact/rational.hpp"

namespace typact {

// The dual of ⊕ Z/n_i is again ⊕ Z/n_i; characters are coefficient tuples
// indexed exactly like group elements.  All pairings are exact rationals
// modulo 1 — no floating point anywhere.
using FiniteAbelian = FiniteGroupTable;

inline Rat mod1(Rat r) {
  Int num = boost::multiprecision::numerator(r);
  Int den = boost::multiprecision::denominator(r);
  Int q = num / den;
  r -= Rat(q);
  if (r < 0) r += 1;
  return r;
}

// χ(g) = Σ c_i g_i / n_i (mod 1).
inline Rat character_pairing(const FiniteAbelian& g, std::uint64_t chi, std::uint64_t elem) {
  std::vector<std::uint64_t> c = g.tuple_of(chi);
  std::vector<std::uint64_t> e = g.tuple_of(elem);
  Rat sum(0);
  for (std::size_t i = 0; i < c.size(); ++i)
    sum += Rat(Int(c[i]) * Int(e[i]), Int(g.factors()[i]));
  return mod1(sum);
}

// Closure of a generator list inside g, as sorted element indices.
inline std::vector<std::uint32_t> subgroup_closure(const FiniteAbelian& g,
                                                   const std::vector<std::uint64_t>& gens) {
  std::vector<char> member(g.order(), 0);
  std::vector<std::uint32_t> frontier{0};
  member[0] = 1;
  for (std::size_t i = 0; i < frontier.size(); ++i)
    for (std::uint64_t x : gens) {
      if (x >= g.order()) throw PreconditionError("generator outside the group");
      std::uint32_t y = static_cast<std::uint32_t>(g.add(frontier[i], x));
      if (!member[y]) {
        member[y] = 1;
        frontier.push_back(y);
      }
    }
  std::sort(frontier.begin(), frontier.end());
  return frontier;
}

// Ann H = {χ : χ(h) = 0 for all h in H}; |Ann H| = |G| / |H|.
inline std::vector<std::uint32_t> annihilator(const FiniteAbelian& g,
                                              const std::vector<std::uint64_t>& subgroup_gens) {
  std::vector<std::uint32_t> ann;
  for (std::uint64_t chi = 0; chi < g.order(); ++chi) {
    bool kills = true;
    for (std::uint64_t h : subgroup_gens) {
      if (h >= g.order()) throw PreconditionError("generator outside the group");
      if (character_pairing(g, chi, h) != 0) {
        kills = false;
        break;
      }
    }
    if (kills) ann.push_back(static_cast<std::uint32_t>(chi));
  }
  return ann;
}

struct SpectralCriterion {
  bool lhs;  // H + K = G, i.e. the translation action of H on G/K is transitive
  bool rhs;  // Ann H ∩ Ann K trivial in the dual
};

// Finite shadow of the dense-subgroup criterion: both sides are returned so
// callers can test their equality.
inline SpectralCriterion spectral_criterion(const FiniteAbelian& g,
                                            const std::vector<std::uint64_t>& h_gens,
                                            const std::vector<std::uint64_t>& k_gens) {
  std::vector<std::uint64_t> joint;
  joint.insert(joint.end(), h_gens.begin(), h_gens.end());
  joint.insert(joint.end(), k_gens.begin(), k_gens.end());
  bool lhs = subgroup_closure(g, joint).size() == g.order();

  std::vector<std::uint32_t> ann_h = annihilator(g, h_gens);
  std::vector<std::uint32_t> ann_k = annihilator(g, k_gens);
  std::vector<std::uint32_t> both;
  std::set_intersection(ann_h.begin(), ann_h.end(), ann_k.begin(), ann_k.end(),
                        std::back_inserter(both));
  return {lhs, both.size() == 1};
}

// Action of G on X by translations: g acts as x ↦ x + a(g) where a is a
// homomorphism given by the images of G's invariant-factor generators.
struct TranslationAction {
  FiniteAbelian source;
  FiniteAbelian space;
  std::vector<std::uint64_t> gen_images;  // element of `space` per source generator

  TranslationAction(FiniteAbelian g, FiniteAbelian x, std::vector<std::uint64_t> images)
      : source(std::move(g)), space(std::move(x)), gen_images(std::move(images)) {
    if (gen_images.size() != source.factors().size())
      throw PreconditionError("TranslationAction: one image per source generator required");
    for (std::size_t i = 0; i < gen_images.size(); ++i) {
      if (gen_images[i] >= space.order()) throw PreconditionError("generator image outside X");
      if (source.factors()[i] % space.element_order(gen_images[i]) != 0)
        throw PreconditionError("TranslationAction: assignment is not a homomorphism");
    }
  }

  std::uint64_t translate_by(std::uint64_t source_elem) const {
    std::vector<std::uint64_t> t = source.tuple_of(source_elem);
    std::uint64_t a = 0;
    for (std::size_t i = 0; i < t.size(); ++i)
      a = space.add(a, space.scalar_mul(t[i], gen_images[i]));
    return a;
  }
};

struct Spectrum {
  std::vector<std::uint32_t> characters;  // Λ as sorted character indices of the source
  bool ergodic;                           // transitive on X <=> |Λ| = |X|
};

// Λ(T) = {ψ∘a : ψ character of X}, a subgroup of the dual of G.
inline Spectrum spectrum_of_translation(const TranslationAction& act) {
  const FiniteAbelian& g = act.source;
  const FiniteAbelian& x = act.space;
  std::vector<std::uint32_t> chars;
  for (std::uint64_t psi = 0; psi < x.order(); ++psi) {
    std::vector<std::uint64_t> coeff(g.factors().size());
    for (std::size_t i = 0; i < coeff.size(); ++i) {
      Rat v = character_pairing(x, psi, act.gen_images[i]);  // ψ(a(e_i)) in Q/Z
      Rat scaled = v * Rat(g.factors()[i]);
      if (boost::multiprecision::denominator(scaled) != 1)
        throw Error("spectrum: induced coefficient is not integral");
      coeff[i] =
          static_cast<std::uint64_t>(boost::multiprecision::numerator(scaled) % g.factors()[i]);
    }
    chars.push_back(static_cast<std::uint32_t>(g.index_of(coeff)));
  }
  std::sort(chars.begin(), chars.end());
  chars.erase(std::unique(chars.begin(), chars.end()), chars.end());

  std::vector<std::uint32_t> image = subgroup_closure(x, act.gen_images);
  return {chars, image.size() == x.order()};
}

}  // namespace typact
