#include "dspc/evidence.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "dspc/errors.hpp"

namespace dspc {

namespace {

struct LexLess {
  bool operator()(const Interval& a, const Interval& b) const { return lex_less(a, b); }
};

// Accumulates mass per exact interval; iteration order is (lo, hi).
using MassMap = std::map<Interval, double, LexLess>;

std::vector<FocalElement> to_focal(const MassMap& masses) {
  std::vector<FocalElement> out;
  out.reserve(masses.size());
  for (const auto& [interval, mass] : masses) {
    if (mass > 0.0) out.push_back({interval, mass});
  }
  return out;
}

}  // namespace

DSStructure::DSStructure(std::vector<FocalElement> focal) {
  if (focal.empty()) throw InvalidArgument("belief structure needs at least one focal element");
  for (const auto& fe : focal) {
    if (!std::isfinite(fe.mass) || fe.mass <= 0.0) {
      throw InvalidArgument("focal element mass must be positive, got " + std::to_string(fe.mass));
    }
    auto same = std::find_if(focal_.begin(), focal_.end(),
                             [&](const FocalElement& e) { return e.interval == fe.interval; });
    if (same != focal_.end()) {
      same->mass += fe.mass;
    } else {
      focal_.push_back(fe);
    }
  }
  const double total = total_mass();
  if (std::fabs(total - 1.0) > kMassTolerance) {
    throw InvalidArgument("focal masses sum to " + std::to_string(total) + ", not 1");
  }
}

Interval DSStructure::hull() const {
  Interval h = focal_.front().interval;
  for (const auto& fe : focal_) h = h.hull(fe.interval);
  return h;
}

double DSStructure::total_mass() const {
  double total = 0.0;
  for (const auto& fe : focal_) total += fe.mass;
  return total;
}

DSStructure DSStructure::sorted() const {
  std::vector<FocalElement> copy = focal_;
  std::stable_sort(copy.begin(), copy.end(), [](const FocalElement& a, const FocalElement& b) {
    return lex_less(a.interval, b.interval);
  });
  return DSStructure(std::move(copy));
}

double belief(const DSStructure& ds, const Interval& target) {
  double sum = 0.0;
  for (const auto& fe : ds.focal()) {
    if (target.contains(fe.interval)) sum += fe.mass;
  }
  return sum;
}

double plausibility(const DSStructure& ds, const Interval& target) {
  double sum = 0.0;
  for (const auto& fe : ds.focal()) {
    if (target.intersects(fe.interval)) sum += fe.mass;
  }
  return sum;
}

DSStructure dempster_combine(const DSStructure& m1, const DSStructure& m2) {
  MassMap joint;
  double agreeing = 0.0;
  for (const auto& a : m1.focal()) {
    for (const auto& b : m2.focal()) {
      if (auto common = a.interval.intersect(b.interval)) {
        const double product = a.mass * b.mass;
        joint[*common] += product;
        agreeing += product;
      }
    }
  }
  if (joint.empty()) throw TotalConflict();
  // 1 - K, summed directly rather than subtracted from one.
  for (auto& entry : joint) entry.second /= agreeing;
  return DSStructure(to_focal(joint));
}

DSStructure mix(std::span<const DSStructure> structures, std::span<const double> weights) {
  if (structures.empty()) throw InvalidArgument("mix needs at least one structure");
  if (structures.size() != weights.size()) {
    throw InvalidArgument("mix: " + std::to_string(structures.size()) + " structures but " +
                          std::to_string(weights.size()) + " weights");
  }
  double weight_sum = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) throw InvalidArgument("mix weights must be non-negative");
    weight_sum += w;
  }
  if (weight_sum <= 0.0) throw InvalidArgument("mix weights are all zero");

  MassMap mixed;
  for (std::size_t i = 0; i < structures.size(); ++i) {
    if (weights[i] == 0.0) continue;
    const double w = weights[i] / weight_sum;
    for (const auto& fe : structures[i].focal()) mixed[fe.interval] += w * fe.mass;
  }
  return DSStructure(to_focal(mixed));
}

CumulativeBounds cumulative(const DSStructure& ds, double x) {
  CumulativeBounds out{0.0, 0.0};
  for (const auto& fe : ds.focal()) {
    if (fe.interval.hi() <= x) out.cbf += fe.mass;
    if (fe.interval.lo() <= x) out.cpf += fe.mass;
  }
  return out;
}

ComplementaryBounds complementary_cumulative(const DSStructure& ds, double x) {
  ComplementaryBounds out{0.0, 0.0};
  for (const auto& fe : ds.focal()) {
    if (fe.interval.lo() > x) out.ccbf += fe.mass;
    if (fe.interval.hi() > x) out.ccpf += fe.mass;
  }
  return out;
}

ProbabilityBounds exceedance_bounds(const DSStructure& ds, double threshold) {
  const auto c = complementary_cumulative(ds, threshold);
  return {c.ccbf, c.ccpf};
}

}  // namespace dspc
