#pragma once

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>

#include "typact/errors.hpp"

namespace typact {

// An element of N ∪ {omega}: either a finite count or "countably infinite".
// Arithmetic is total except omega - omega, which is rejected.
class Extent {
 public:
  constexpr Extent() : finite_(0), omega_(false) {}
  constexpr Extent(std::uint64_t n) : finite_(n), omega_(false) {}  // NOLINT(google-explicit-constructor)

  static constexpr Extent omega() {
    Extent e;
    e.omega_ = true;
    return e;
  }

  constexpr bool is_omega() const { return omega_; }
  constexpr bool is_finite() const { return !omega_; }
  constexpr bool is_zero() const { return !omega_ && finite_ == 0; }

  std::uint64_t value() const {
    if (omega_) throw PreconditionError("Extent: finite value requested from omega");
    return finite_;
  }

  friend Extent operator+(Extent a, Extent b) {
    if (a.omega_ || b.omega_) return omega();
    return Extent(a.finite_ + b.finite_);
  }

  // omega - finite = omega; omega - omega is rejected.
  friend Extent operator-(Extent a, Extent b) {
    if (b.omega_) throw PreconditionError("Extent: omega - omega (or finite - omega) is rejected");
    if (a.omega_) return omega();
    if (a.finite_ < b.finite_) throw PreconditionError("Extent: negative result");
    return Extent(a.finite_ - b.finite_);
  }

  Extent& operator+=(Extent b) { return *this = *this + b; }

  friend constexpr bool operator==(Extent a, Extent b) {
    return a.omega_ == b.omega_ && (a.omega_ || a.finite_ == b.finite_);
  }

  // Every finite value < omega.
  friend constexpr std::strong_ordering operator<=>(Extent a, Extent b) {
    if (a.omega_ && b.omega_) return std::strong_ordering::equal;
    if (a.omega_) return std::strong_ordering::greater;
    if (b.omega_) return std::strong_ordering::less;
    return a.finite_ <=> b.finite_;
  }

  std::string str() const { return omega_ ? "inf" : std::to_string(finite_); }

  friend std::ostream& operator<<(std::ostream& os, Extent e) { return os << e.str(); }

 private:
  std::uint64_t finite_;
  bool omega_;
};

}  // namespace typact
