#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace dspc {

/// Closed real interval [lo, hi] with finite endpoints and lo <= hi.
///
/// The constructor enforces the invariant and throws InvalidArgument
/// otherwise, so every Interval in circulation is valid.
class Interval {
 public:
  Interval(double lo, double hi);
  static Interval point(double x) { return {x, x}; }

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double width() const noexcept { return hi_ - lo_; }
  double mid() const noexcept { return 0.5 * (lo_ + hi_); }
  bool is_point() const noexcept { return lo_ == hi_; }

  bool contains(double x) const noexcept { return lo_ <= x && x <= hi_; }
  bool contains(const Interval& other) const noexcept {
    return lo_ <= other.lo_ && other.hi_ <= hi_;
  }
  bool intersects(const Interval& other) const noexcept {
    return lo_ <= other.hi_ && other.lo_ <= hi_;
  }

  // Set intersection of two closed intervals; empty when disjoint.
  std::optional<Interval> intersect(const Interval& other) const noexcept;
  Interval hull(const Interval& other) const noexcept;

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  double lo_;
  double hi_;
};

// Lexicographic on (lo, hi); used for canonical ordering of focal elements.
bool lex_less(const Interval& a, const Interval& b) noexcept;

std::ostream& operator<<(std::ostream& os, const Interval& x);

/// Axis-aligned box: one Interval per dimension.
using Box = std::vector<Interval>;

}  // namespace dspc
