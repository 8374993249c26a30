#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "typact/errors.hpp"

namespace typact {

struct PartitionLevel {
  std::size_t n;    // 1-based index in the sequence
  std::uint64_t q;  // block count q_n
};

// The generating partition sequence ξ_n of [0,1): q_n half-open intervals of
// equal length, with q_n | q_{n+1}.  The metric depends on this choice; the
// default is q_n = lcm(1..n) truncated by a budget.
class PartitionSequence {
 public:
  explicit PartitionSequence(std::vector<std::uint64_t> qs) : q_(std::move(qs)) {
    if (q_.empty()) throw PreconditionError("partition sequence must be non-empty");
    if (q_[0] == 0) throw PreconditionError("q_1 must be >= 1");
    for (std::size_t i = 1; i < q_.size(); ++i)
      if (q_[i] % q_[i - 1] != 0)
        throw PreconditionError("partition sequence must refine: q_n | q_{n+1}");
  }

  static PartitionSequence lcm_chain(std::uint64_t max_q = 2520) {
    std::vector<std::uint64_t> qs;
    std::uint64_t q = 1;
    for (std::uint64_t n = 1;; ++n) {
      q = std::lcm(q, n);
      if (q > max_q) break;
      qs.push_back(q);
    }
    return PartitionSequence(std::move(qs));
  }

  std::size_t size() const { return q_.size(); }
  const std::vector<std::uint64_t>& qs() const { return q_; }

  // q_n, constant past the truncation point.
  std::uint64_t q_at(std::size_t n) const {
    if (n == 0) throw PreconditionError("levels are 1-based");
    return n <= q_.size() ? q_[n - 1] : q_.back();
  }

  PartitionLevel level(std::size_t n) const { return {n, q_at(n)}; }

  // Smallest level refining both block counts; nullopt if none exists in the
  // configured (truncated) sequence.
  std::optional<PartitionLevel> common_refinement(std::uint64_t qa, std::uint64_t qb) const {
    for (std::size_t n = 1; n <= q_.size(); ++n)
      if (q_[n - 1] % qa == 0 && q_[n - 1] % qb == 0) return level(n);
    return std::nullopt;
  }

 private:
  std::vector<std::uint64_t> q_;
};

}  // namespace typact
