#pragma once

#include <span>
#include <vector>

#include "dspc/chaos.hpp"
#include "dspc/interval.hpp"
#include "dspc/multi_index.hpp"

namespace dspc {

/// Multivariate polynomial in power form, sum_{I <= N} alpha_I x^I, stored
/// densely over all I <= N.
class PolySeries {
 public:
  // All-zero series with max degree N.
  explicit PolySeries(const MultiIndex& max_degree);
  PolySeries(const MultiIndex& max_degree, std::vector<double> coeffs);

  std::size_t n_vars() const noexcept { return degree_.size(); }
  const MultiIndex& max_degree() const noexcept { return degree_; }
  const TensorShape& shape() const noexcept { return shape_; }
  std::span<const double> coeffs() const noexcept { return coeffs_; }

  // Zero for indices outside the stored range.
  double coeff(const MultiIndex& index) const;
  void set(const MultiIndex& index, double value);
  void add(const MultiIndex& index, double value);

  double evaluate(std::span<const double> x) const;

  // Copy whose max degree is the componentwise max over nonzero terms.
  PolySeries trimmed() const;

 private:
  MultiIndex degree_;
  TensorShape shape_;
  std::vector<double> coeffs_;
};

/// Bernstein coefficients of a polynomial of degree N over a box.
struct BernsteinPatch {
  Box box;
  MultiIndex degree;
  std::vector<double> coeffs;  // row-major over I <= degree

  double coeff(const MultiIndex& index) const;
  // Value of sum_I beta_I B_I^N(x) at a point in the box.
  double evaluate(std::span<const double> x) const;
};

/// Exact power-form coefficients in the standardized variables xi.
/// Legendre-to-monomial tables come from the three-term recurrence in exact
/// rational arithmetic and are rounded to double once.
PolySeries legendre_to_power(const PCExpansion& pce);

// The two intermediate stages of Garloff's transformation.
struct GarloffStages {
  PolySeries shifted;  // tilde-alpha_I = sum_{I<=J<=N} C(J,I) alpha_J lo^(J-I)
  PolySeries scaled;   // hat-alpha_I = tilde-alpha_I (hi - lo)^I
};

GarloffStages garloff_stages(const PolySeries& poly, const Box& box);

/// beta_I = sum_{J <= I} C(I,J) / C(N,J) hat-alpha_J.
/// Throws DegenerateBox for a zero-width component.
BernsteinPatch garloff_coefficients(const PolySeries& poly, const Box& box);

// [min beta, max beta].
Interval enclosure(const BernsteinPatch& patch);

/// Splits the box into k equal parts per axis and returns the hull of the
/// enclosures of all k^n sub-boxes.
Interval bounded_range(const PolySeries& poly, const Box& box, unsigned k);

}  // namespace dspc
