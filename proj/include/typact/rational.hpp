#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>

#include "typact/errors.hpp"

namespace typact {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Rat make_rat(std::int64_t num, std::int64_t den = 1) {
  if (den == 0) throw PreconditionError("rational with zero denominator");
  return Rat(num, den);
}

// Accepts "p", "-p", "p/q"; whitespace is not allowed.
inline Rat parse_rat(const std::string& text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(text));
    Int num(text.substr(0, slash));
    Int den(text.substr(slash + 1));
    if (den == 0) throw PreconditionError("rational with zero denominator: " + text);
    return Rat(num, den);
  } catch (const std::runtime_error&) {
    throw ParseError("invalid rational: " + text);
  }
}

inline std::string rat_str(const Rat& r) {
  std::string s = boost::multiprecision::numerator(r).str();
  if (boost::multiprecision::denominator(r) != 1)
    s += "/" + boost::multiprecision::denominator(r).str();
  return s;
}

inline double rat_double(const Rat& r) { return static_cast<double>(r); }

}  // namespace typact
