#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <string>

namespace tstar {

/// Exact move cost stored as an integer count of half-units.
///
/// A straight move costs 1 (two halves), a diagonal move costs 1.5 (three
/// halves), so every reachable cost is an integer number of halves and all
/// comparisons are exact. The infinite sentinel is ordered above every
/// finite cost and absorbs addition.
class Cost {
 public:
  constexpr Cost() : halves_(0) {}

  static constexpr Cost from_halves(std::int64_t h) { return Cost(h); }
  static constexpr Cost zero() { return Cost(0); }
  static constexpr Cost straight() { return Cost(2); }
  static constexpr Cost diagonal() { return Cost(3); }
  static constexpr Cost infinity() { return Cost(kInf); }

  constexpr bool is_infinite() const { return halves_ == kInf; }
  constexpr std::int64_t halves() const { return halves_; }
  double value() const { return static_cast<double>(halves_) / 2.0; }

  constexpr Cost operator+(Cost o) const {
    if (is_infinite() || o.is_infinite()) return infinity();
    return Cost(halves_ + o.halves_);
  }
  Cost& operator+=(Cost o) { return *this = *this + o; }

  friend constexpr auto operator<=>(Cost a, Cost b) = default;

  /// "7", "9.5" or "inf".
  std::string str() const {
    if (is_infinite()) return "inf";
    std::string s = std::to_string(halves_ / 2);
    if (halves_ % 2) s += ".5";
    return s;
  }

 private:
  static constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();
  explicit constexpr Cost(std::int64_t h) : halves_(h) {}
  std::int64_t halves_;
};

}  // namespace tstar
