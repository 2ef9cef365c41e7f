#pragma once

#include <span>
#include <vector>

#include "dspc/interval.hpp"

namespace dspc {

struct FocalElement {
  Interval interval;
  double mass;

  friend bool operator==(const FocalElement&, const FocalElement&) = default;
};

/// Normalized Dempster-Shafer structure whose focal elements are closed
/// intervals (closed world: no mass on the empty set).
///
/// Construction validates and canonicalizes the input:
///   - every mass is finite and strictly positive,
///   - the masses sum to one within kMassTolerance,
///   - entries with bit-identical intervals are merged by adding masses.
/// Entries keep their first-occurrence order, which is what box numbering
/// during propagation follows. Combinators return entries sorted by
/// (lo, hi) instead.
class DSStructure {
 public:
  static constexpr double kMassTolerance = 1e-12;

  explicit DSStructure(std::vector<FocalElement> focal);

  std::span<const FocalElement> focal() const noexcept { return focal_; }
  std::size_t size() const noexcept { return focal_.size(); }
  const FocalElement& operator[](std::size_t i) const { return focal_[i]; }

  // Convex hull of all focal intervals.
  Interval hull() const;
  double total_mass() const;

  // Same focal elements sorted by (lo, hi).
  DSStructure sorted() const;

  friend bool operator==(const DSStructure&, const DSStructure&) = default;

 private:
  std::vector<FocalElement> focal_;
};

struct CumulativeBounds {
  double cbf;  // lower CDF bound: mass with hi <= x
  double cpf;  // upper CDF bound: mass with lo <= x
};

struct ComplementaryBounds {
  double ccbf;  // lower bound on P(X > x): mass with lo > x
  double ccpf;  // upper bound on P(X > x): mass with hi > x
};

struct ProbabilityBounds {
  double lower;
  double upper;
};

// Mass of focal intervals contained in `target`.
double belief(const DSStructure& ds, const Interval& target);
// Mass of focal intervals intersecting `target`.
double plausibility(const DSStructure& ds, const Interval& target);

/// Dempster's rule: products of masses land on the intersections of the
/// focal intervals and are renormalized by the non-conflicting mass 1 - K.
/// Throws TotalConflict when no pair of focal intervals intersects.
DSStructure dempster_combine(const DSStructure& m1, const DSStructure& m2);

/// Weighted mixture m(A) = sum_i w_i m_i(A) / sum_i w_i.
/// Throws InvalidArgument on empty input, mismatched lengths, negative or
/// all-zero weights.
DSStructure mix(std::span<const DSStructure> structures, std::span<const double> weights);

CumulativeBounds cumulative(const DSStructure& ds, double x);
ComplementaryBounds complementary_cumulative(const DSStructure& ds, double x);

// Bounds on P(X > threshold); identical to complementary_cumulative.
ProbabilityBounds exceedance_bounds(const DSStructure& ds, double threshold);

}  // namespace dspc
