#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "typact/errors.hpp"
#include "typact/extent.hpp"
#include "typact/metric.hpp"
#include "typact/rational.hpp"

namespace typact {

// Finitely generated abelian presentation: generators with declared orders in
// N ∪ {∞} plus extra relations Σ c_i g_i = 0.  A finite declared order o is
// itself the relation o·g = 0.
struct Presentation {
  std::vector<Extent> orders;
  std::vector<std::vector<long long>> relations;

  std::size_t arity() const { return orders.size(); }

  friend bool operator==(const Presentation&, const Presentation&) = default;

  // All relation rows, including the order rows, padded to arity.
  std::vector<std::vector<long long>> relation_rows() const {
    std::vector<std::vector<long long>> rows;
    for (std::size_t i = 0; i < orders.size(); ++i) {
      if (orders[i].is_omega()) continue;
      std::vector<long long> row(orders.size(), 0);
      row[i] = static_cast<long long>(orders[i].value());
      rows.push_back(std::move(row));
    }
    for (const auto& r : relations) {
      if (r.size() > orders.size()) throw PreconditionError("relation arity exceeds generators");
      std::vector<long long> row(orders.size(), 0);
      std::copy(r.begin(), r.end(), row.begin());
      rows.push_back(std::move(row));
    }
    return rows;
  }
};

namespace detail {

// Diagonalizes the relation matrix by integer row/column operations, applying
// every column operation to `vec` as well, so that membership questions about
// vec stay equivalent.  Returns the diagonal.
inline std::vector<Int> snf_diagonal_with_vector(std::vector<std::vector<Int>> m,
                                                 std::vector<Int>& vec) {
  std::size_t rows = m.size(), cols = vec.size();
  std::size_t r = 0, c = 0;
  auto col_op = [&](std::size_t dst, std::size_t src, const Int& f) {
    for (std::size_t i = 0; i < rows; ++i) m[i][dst] -= f * m[i][src];
    vec[dst] -= f * vec[src];
  };
  auto col_swap = [&](std::size_t x, std::size_t y) {
    for (std::size_t i = 0; i < rows; ++i) std::swap(m[i][x], m[i][y]);
    std::swap(vec[x], vec[y]);
  };
  std::vector<Int> diag;
  while (r < rows && c < cols) {
    // find a pivot
    std::size_t pi = r, pj = c;
    bool found = false;
    for (std::size_t i = r; i < rows && !found; ++i)
      for (std::size_t j = c; j < cols && !found; ++j)
        if (m[i][j] != 0) {
          pi = i;
          pj = j;
          found = true;
        }
    if (!found) break;
    std::swap(m[r], m[pi]);
    col_swap(c, pj);
    // clear row and column at (r, c)
    bool dirty = true;
    while (dirty) {
      dirty = false;
      for (std::size_t i = r + 1; i < rows; ++i)
        while (m[i][c] != 0) {
          Int f = m[i][c] / m[r][c];
          for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
          if (m[i][c] != 0) std::swap(m[r], m[i]);
        }
      for (std::size_t j = c + 1; j < cols; ++j)
        while (m[r][j] != 0) {
          Int f = m[r][j] / m[r][c];
          col_op(j, c, f);
          if (m[r][j] != 0) {
            col_swap(c, j);
            dirty = true;
          }
        }
    }
    diag.push_back(boost::multiprecision::abs(m[r][c]));
    ++r;
    ++c;
  }
  return diag;
}

}  // namespace detail

// Order of Σ v_i g_i in the abelian group presented by `pres`.
inline Extent abstract_order(const Presentation& pres, const std::vector<long long>& v) {
  if (v.size() != pres.arity()) throw PreconditionError("element arity mismatch");
  std::vector<std::vector<long long>> rows = pres.relation_rows();
  std::vector<std::vector<Int>> m(rows.size(), std::vector<Int>(pres.arity()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < pres.arity(); ++j) m[i][j] = rows[i][j];
  std::vector<Int> w(v.begin(), v.end());
  std::vector<Int> diag = detail::snf_diagonal_with_vector(std::move(m), w);
  // order = min m > 0 with m·w in the diagonal lattice
  Int order = 1;
  for (std::size_t j = 0; j < w.size(); ++j) {
    Int d = j < diag.size() ? diag[j] : Int(0);
    if (d == 0) {
      if (w[j] != 0) return Extent::omega();
      continue;
    }
    Int g = boost::multiprecision::gcd(Int(boost::multiprecision::abs(w[j])), d);
    order = boost::multiprecision::lcm(order, d / g);
  }
  return Extent(order.convert_to<std::uint64_t>());
}

// Measure-preserving action on the partition of [0,1) into q equal blocks:
// each generator acts as a block translation (see BlockMap).  Permutations
// commute pairwise and every presentation relation maps to the identity.
struct FiniteAction {
  Presentation pres;
  std::uint64_t q = 1;
  std::vector<Permutation> perms;
  std::uint32_t marked = 0;  // marked block C_1, 0-based

  std::size_t arity() const { return pres.arity(); }

  void validate() const {
    if (perms.size() != pres.arity())
      throw PreconditionError("FiniteAction: one permutation per generator required");
    for (const auto& p : perms)
      if (p.size() != q) throw PreconditionError("FiniteAction: permutation size != q");
    if (marked >= q) throw PreconditionError("FiniteAction: marked block out of range");
    for (std::size_t i = 0; i < perms.size(); ++i)
      for (std::size_t j = i + 1; j < perms.size(); ++j)
        if (!perms[i].commutes_with(perms[j]))
          throw PreconditionError("FiniteAction: generators do not commute");
    for (std::size_t i = 0; i < perms.size(); ++i)
      if (pres.orders[i].is_finite() &&
          !perms[i].pow(static_cast<std::int64_t>(pres.orders[i].value())).is_identity())
        throw PreconditionError("FiniteAction: permutation order does not divide declared order");
    for (const auto& rel : pres.relations)
      if (!evaluate(rel).perm.is_identity())
        throw PreconditionError("FiniteAction: relation does not map to the identity");
  }

  // T_g for g = Σ exps_i · g_i.
  BlockMap evaluate(const std::vector<long long>& exps) const {
    if (exps.size() > perms.size()) throw PreconditionError("element arity mismatch");
    Permutation acc = Permutation::identity(q);
    for (std::size_t i = 0; i < exps.size(); ++i)
      if (exps[i] != 0) acc = acc * perms[i].pow(exps[i]);
    return BlockMap(q, acc);
  }

  BlockMap generator_map(std::size_t i) const { return BlockMap(q, perms.at(i)); }

  // The same action on a k-fold refinement of every block.
  FiniteAction lift_to(std::uint64_t fine_q) const {
    if (fine_q % q != 0) throw PreconditionError("lift target must refine q");
    FiniteAction out;
    out.pres = pres;
    out.q = fine_q;
    out.marked = static_cast<std::uint32_t>(marked * (fine_q / q));
    for (const auto& p : perms) out.perms.push_back(BlockMap(q, p).lift_to(fine_q).perm);
    return out;
  }

  friend bool operator==(const FiniteAction&, const FiniteAction&) = default;
};

// The finite subgroup <T_g : g> of block maps, with one witness exponent
// vector per element (BFS order: small words first, deterministic).
struct ImageGroup {
  std::vector<Permutation> elems;                 // elems[0] = identity
  std::vector<std::vector<long long>> witnesses;  // witness[i] evaluates to elems[i]
  std::map<Permutation, std::size_t> index;

  std::size_t size() const { return elems.size(); }

  std::size_t find(const Permutation& p) const {
    auto it = index.find(p);
    if (it == index.end()) throw PreconditionError("permutation not in the action image");
    return it->second;
  }
};

inline ImageGroup image_group(const FiniteAction& a, std::uint64_t budget = 1u << 20) {
  ImageGroup img;
  Permutation id = Permutation::identity(a.q);
  img.elems.push_back(id);
  img.witnesses.emplace_back(a.arity(), 0);
  img.index[id] = 0;
  for (std::size_t head = 0; head < img.elems.size(); ++head) {
    for (std::size_t i = 0; i < a.arity(); ++i) {
      Permutation next = a.perms[i] * img.elems[head];
      if (img.index.count(next)) continue;
      if (img.elems.size() >= budget) throw BudgetError("image_group: budget exceeded");
      std::vector<long long> w = img.witnesses[head];
      ++w[i];
      img.index[next] = img.elems.size();
      img.elems.push_back(next);
      img.witnesses.push_back(std::move(w));
    }
  }
  return img;
}

}  // namespace typact
