#pragma once

#include <cctype>
#include <string>

#include "typact/errors.hpp"
#include "typact/group_desc.hpp"

namespace typact {

// Grammar (whitespace-insensitive):
//   expr  := term ("+" term)*
//   term  := atom ("^" power)?
//   atom  := "Z" | "Z/" nat | "C(" prime "^inf" ")" | "T(" prime ")" | "(" term ")"
//   power := nat | "inf"
// "Z/n" is decomposed into primary components; "Z/1" denotes the trivial
// group.  A power multiplies every summand count, so "(Z/2)^inf" is the
// countable direct sum.  Tower summands collapse per prime (see GroupDesc).

namespace detail {

class ExprParser {
 public:
  explicit ExprParser(const std::string& text) : text_(text) {}

  GroupDesc parse() {
    GroupDesc g = parse_term();
    skip_ws();
    while (peek() == '+') {
      ++pos_;
      g = direct_sum(g, parse_term());
      skip_ws();
    }
    if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
    return g;
  }

 private:
  GroupDesc parse_term() {
    GroupDesc atom = parse_atom();
    skip_ws();
    if (peek() != '^') return atom;
    ++pos_;
    Extent e = parse_power();
    return scale(atom, e);
  }

  GroupDesc parse_atom() {
    skip_ws();
    GroupDesc g;
    char c = peek();
    if (c == '(') {
      ++pos_;
      g = parse_term();
      expect(')');
      return g;
    }
    if (c == 'Z') {
      ++pos_;
      skip_ws();
      if (peek() == '/') {
        ++pos_;
        std::uint64_t n = parse_nat();
        if (n == 0) throw ParseError("Z/0 is not a group in this class", pos_);
        for (const auto& [p, k] : factorize(n)) g.cyclic.add(PrimePower(p, k), 1);
      } else {
        g.free_rank = 1;
      }
      return g;
    }
    if (c == 'C') {
      ++pos_;
      expect('(');
      std::uint64_t p = parse_prime();
      expect('^');
      expect_word("inf");
      expect(')');
      g.prufer[p] = 1;
      return g;
    }
    if (c == 'T') {
      ++pos_;
      expect('(');
      std::uint64_t p = parse_prime();
      expect(')');
      g.towers.insert(p);
      return g;
    }
    throw ParseError("expected atom (Z, Z/n, C(p^inf), T(p) or parenthesis)", pos_);
  }

  Extent parse_power() {
    skip_ws();
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      std::uint64_t n = parse_nat();
      if (n == 0) throw ParseError("power 0 is not allowed", pos_);
      return Extent(n);
    }
    expect_word("inf");
    return Extent::omega();
  }

  static Extent scale_extent(Extent a, Extent factor) {
    if (a.is_zero()) return Extent(0);
    if (a.is_omega() || factor.is_omega()) return Extent::omega();
    return Extent(a.value() * factor.value());
  }

  static GroupDesc scale(const GroupDesc& g, Extent e) {
    GroupDesc out;
    out.free_rank = scale_extent(g.free_rank, e);
    for (const auto& [pk, c] : g.cyclic.entries()) out.cyclic.add(pk, scale_extent(c, e));
    for (const auto& [p, c] : g.prufer) out.prufer[p] = scale_extent(c, e);
    out.towers = g.towers;  // countably many towers are one tower
    return out;
  }

  std::uint64_t parse_nat() {
    skip_ws();
    if (!std::isdigit(static_cast<unsigned char>(peek())))
      throw ParseError("expected a number", pos_);
    std::uint64_t n = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      std::uint64_t d = static_cast<std::uint64_t>(text_[pos_] - '0');
      if (n > (UINT64_MAX - d) / 10) throw ParseError("number too large", pos_);
      n = n * 10 + d;
      ++pos_;
    }
    return n;
  }

  std::uint64_t parse_prime() {
    std::size_t at = pos_;
    std::uint64_t p = parse_nat();
    if (!is_prime(p)) throw ParseError(std::to_string(p) + " is not prime", at);
    return p;
  }

  void expect(char c) {
    skip_ws();
    if (peek() != c) throw ParseError(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }

  void expect_word(const std::string& w) {
    skip_ws();
    if (text_.compare(pos_, w.size(), w) != 0) throw ParseError("expected '" + w + "'", pos_);
    pos_ += w.size();
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline GroupDesc parse_group(const std::string& text) {
  detail::ExprParser parser(text);
  return normalize(parser.parse());
}

// Canonical form: free part, then primes descending; within a prime the
// Prüfer part, the tower, then cyclic summands by descending order.  The
// trivial group prints as "Z/1".  parse_group(serialize_group(g)) == g.
inline std::string serialize_group(const GroupDesc& g) {
  std::string out;
  auto emit = [&out](const std::string& term) {
    if (!out.empty()) out += " + ";
    out += term;
  };
  auto powered = [](std::string base, Extent e, bool parens) {
    if (e == Extent(1)) return base;
    if (parens) base = "(" + base + ")";
    return base + "^" + e.str();
  };
  if (!g.free_rank.is_zero()) emit(powered("Z", g.free_rank, false));

  std::set<std::uint64_t, std::greater<>> ps;
  for (std::uint64_t p : g.torsion_primes()) ps.insert(p);
  for (std::uint64_t p : ps) {
    auto pit = g.prufer.find(p);
    if (pit != g.prufer.end())
      emit(powered("C(" + std::to_string(p) + "^inf)", pit->second, false));
    if (g.towers.count(p)) emit("T(" + std::to_string(p) + ")");
    for (std::uint32_t k = g.cyclic.max_exponent(p); k >= 1; --k) {
      Extent c = g.cyclic.at(p, k);
      if (c.is_zero()) continue;
      emit(powered("Z/" + std::to_string(ipow(p, k)), c, true));
    }
  }
  return out.empty() ? "Z/1" : out;
}

}  // namespace typact
