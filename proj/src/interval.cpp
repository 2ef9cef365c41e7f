#include "dspc/interval.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "dspc/errors.hpp"

namespace dspc {

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw InvalidArgument("interval endpoints must be finite");
  }
  if (lo > hi) {
    std::ostringstream os;
    os.precision(17);
    os << "interval lower bound " << lo << " exceeds upper bound " << hi;
    throw InvalidArgument(os.str());
  }
}

std::optional<Interval> Interval::intersect(const Interval& other) const noexcept {
  if (!intersects(other)) return std::nullopt;
  return Interval(std::max(lo_, other.lo_), std::min(hi_, other.hi_));
}

Interval Interval::hull(const Interval& other) const noexcept {
  return {std::min(lo_, other.lo_), std::max(hi_, other.hi_)};
}

bool lex_less(const Interval& a, const Interval& b) noexcept {
  if (a.lo() != b.lo()) return a.lo() < b.lo();
  return a.hi() < b.hi();
}

std::ostream& operator<<(std::ostream& os, const Interval& x) {
  return os << '[' << x.lo() << ", " << x.hi() << ']';
}

}  // namespace dspc
