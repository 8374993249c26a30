#pragma once

#include <cstdint>
#include <vector>

#include "typact/errors.hpp"
#include "typact/rational.hpp"

namespace typact {

// Instance of the combinatorial selection lemma: a 0/1 matrix x (k rows, n
// columns), row weights b summing to 1, a set H of columns and a tolerance
// η in (0,1).  The hypothesis asks Σ_j b_j x_{ji} >= 1-η for every i in H.
struct ChaconInstance {
  std::vector<std::vector<int>> x;  // k rows by n columns, entries 0/1
  std::vector<Rat> b;               // k nonnegative weights, Σ b_j = 1
  std::vector<std::size_t> columns; // H, 0-based column indices
  Rat eta;

  std::size_t rows() const { return x.size(); }
  std::size_t cols() const { return x.empty() ? 0 : x[0].size(); }

  void validate() const {
    if (x.empty() || x[0].empty()) throw PreconditionError("chacon: empty matrix");
    for (const auto& row : x) {
      if (row.size() != cols()) throw PreconditionError("chacon: ragged matrix");
      for (int v : row)
        if (v != 0 && v != 1) throw PreconditionError("chacon: entries must be 0/1");
    }
    if (b.size() != rows()) throw PreconditionError("chacon: one weight per row required");
    Rat total(0);
    for (const Rat& w : b) {
      if (w < 0) throw PreconditionError("chacon: negative weight");
      total += w;
    }
    if (total != 1) throw PreconditionError("chacon: weights must sum to 1 exactly");
    for (std::size_t i : columns)
      if (i >= cols()) throw PreconditionError("chacon: column index out of range");
    if (!(eta > 0 && eta < 1)) throw PreconditionError("chacon: eta must lie in (0,1)");
  }

  // Σ_j b_j x_{ji}
  Rat column_load(std::size_t i) const {
    Rat load(0);
    for (std::size_t j = 0; j < rows(); ++j)
      if (x[j][i]) load += b[j];
    return load;
  }

  bool hypothesis_holds() const {
    for (std::size_t i : columns)
      if (column_load(i) < 1 - eta) return false;
    return true;
  }

  // score(γ) = Σ_{i∈H} Σ_j b_j x_{ji} x_{γi}
  Rat score(std::size_t gamma) const {
    if (gamma >= rows()) throw PreconditionError("chacon: row index out of range");
    Rat s(0);
    for (std::size_t i : columns)
      if (x[gamma][i]) s += column_load(i);
    return s;
  }

  Rat bound() const { return Rat(Int(columns.size())) * (1 - 2 * eta); }
};

struct ChaconSelection {
  std::size_t gamma = 0;  // 0-based row
  Rat score;
};

// argmax over rows of the selection score, ties to the smallest index.  When
// the hypothesis holds, the b-average of scores is Σ_{i∈H} (Σ_j b_j x_{ji})²
// >= #H(1-η)² >= #H(1-2η), so the maximum meets the bound.
inline ChaconSelection chacon_select(const ChaconInstance& inst) {
  inst.validate();
  ChaconSelection best{0, inst.score(0)};
  for (std::size_t g = 1; g < inst.rows(); ++g) {
    Rat s = inst.score(g);
    if (s > best.score) best = {g, s};
  }
  return best;
}

struct ChaconReport {
  Rat score;
  Rat bound;          // #H(1-2η)
  bool hypothesis;    // Σ_j b_j x_{ji} >= 1-η for all i in H
  bool pass;          // score >= bound (only asserted when hypothesis holds)
};

inline ChaconReport chacon_verify(const ChaconInstance& inst, std::size_t gamma) {
  inst.validate();
  Rat s = inst.score(gamma);
  return {s, inst.bound(), inst.hypothesis_holds(), s >= inst.bound()};
}

}  // namespace typact
