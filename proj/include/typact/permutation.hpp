#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <vector>

#include "typact/errors.hpp"

namespace typact {

// Permutation of {0..n-1}; img_[i] is the image of i.
class Permutation {
 public:
  Permutation() = default;

  explicit Permutation(std::vector<std::uint32_t> img) : img_(std::move(img)) {
    std::vector<char> seen(img_.size(), 0);
    for (std::uint32_t x : img_) {
      if (x >= img_.size() || seen[x]) throw PreconditionError("not a permutation");
      seen[x] = 1;
    }
  }

  static Permutation identity(std::uint64_t n) {
    std::vector<std::uint32_t> img(n);
    std::iota(img.begin(), img.end(), 0);
    return Permutation(std::move(img));
  }

  // i -> i+1 (mod n); as a block map this is the rotation by 1/n.
  static Permutation rotation(std::uint64_t n, std::int64_t shift = 1) {
    std::vector<std::uint32_t> img(n);
    std::int64_t s = ((shift % static_cast<std::int64_t>(n)) + static_cast<std::int64_t>(n)) %
                     static_cast<std::int64_t>(n);
    for (std::uint64_t i = 0; i < n; ++i)
      img[i] = static_cast<std::uint32_t>((i + s) % n);
    return Permutation(std::move(img));
  }

  std::uint64_t size() const { return img_.size(); }
  std::uint32_t operator()(std::uint32_t i) const { return img_[i]; }
  const std::vector<std::uint32_t>& images() const { return img_; }

  bool is_identity() const {
    for (std::uint32_t i = 0; i < img_.size(); ++i)
      if (img_[i] != i) return false;
    return true;
  }

  // (a * b)(x) = a(b(x))
  friend Permutation operator*(const Permutation& a, const Permutation& b) {
    if (a.size() != b.size()) throw PreconditionError("permutation size mismatch");
    std::vector<std::uint32_t> img(a.size());
    for (std::uint32_t i = 0; i < img.size(); ++i) img[i] = a.img_[b.img_[i]];
    Permutation p;
    p.img_ = std::move(img);
    return p;
  }

  Permutation inverse() const {
    std::vector<std::uint32_t> img(img_.size());
    for (std::uint32_t i = 0; i < img_.size(); ++i) img[img_[i]] = i;
    Permutation p;
    p.img_ = std::move(img);
    return p;
  }

  Permutation pow(std::int64_t e) const {
    Permutation base = e >= 0 ? *this : inverse();
    std::uint64_t k = static_cast<std::uint64_t>(e >= 0 ? e : -e);
    Permutation acc = identity(size());
    while (k) {
      if (k & 1) acc = acc * base;
      base = base * base;
      k >>= 1;
    }
    return acc;
  }

  std::vector<std::vector<std::uint32_t>> cycles() const {
    std::vector<std::vector<std::uint32_t>> out;
    std::vector<char> seen(img_.size(), 0);
    for (std::uint32_t i = 0; i < img_.size(); ++i) {
      if (seen[i]) continue;
      std::vector<std::uint32_t> c;
      for (std::uint32_t j = i; !seen[j]; j = img_[j]) {
        seen[j] = 1;
        c.push_back(j);
      }
      out.push_back(std::move(c));
    }
    return out;
  }

  std::uint64_t order() const {
    std::uint64_t o = 1;
    for (const auto& c : cycles()) o = std::lcm(o, static_cast<std::uint64_t>(c.size()));
    return o;
  }

  bool commutes_with(const Permutation& other) const {
    if (size() != other.size()) return false;
    for (std::uint32_t i = 0; i < img_.size(); ++i)
      if (img_[other.img_[i]] != other.img_[img_[i]]) return false;
    return true;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation& a, const Permutation& b) {
    return a.img_ <=> b.img_;
  }

 private:
  std::vector<std::uint32_t> img_;
};

}  // namespace typact
