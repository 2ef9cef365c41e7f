#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dspc/expr.hpp"
#include "dspc/interval.hpp"
#include "dspc/multi_index.hpp"

namespace dspc {

/// Ordered (name, interval) pairs; the order fixes the surrogate's dimensions.
using NamedBox = std::vector<std::pair<std::string, Interval>>;

// Degree-k Legendre polynomial by the three-term recurrence.
double legendre(unsigned k, double xi);

// E[psi_I^2] under the uniform density on [-1,1]^n: prod_d 1 / (2 i_d + 1).
double legendre_norm_sq(const MultiIndex& index);

struct QuadratureRule {
  std::vector<double> nodes;    // strictly increasing, in (-1, 1)
  std::vector<double> weights;  // positive, sum to 2

  std::size_t size() const noexcept { return nodes.size(); }
};

/// q-point Gauss-Legendre rule on [-1, 1], exact for polynomials of degree
/// up to 2q - 1. Roots are found by Newton iteration from Chebyshev-like
/// initial guesses; throws std::logic_error if an iteration fails to
/// converge.
QuadratureRule gauss_legendre(std::size_t q);

// Affine map xi -> center + half_width * xi from [-1,1] onto an interval.
struct AffineEncoding {
  double center;
  double half_width;

  double to_physical(double xi) const noexcept { return center + half_width * xi; }
};

AffineEncoding encode_input(const Interval& interval);

/// Tensor Legendre basis of total degree <= order, graded lexicographic.
class PCBasis {
 public:
  PCBasis(std::size_t n_vars, unsigned order);

  std::size_t n_vars() const noexcept { return n_vars_; }
  unsigned order() const noexcept { return order_; }
  std::size_t size() const noexcept { return indices_.size(); }
  const std::vector<MultiIndex>& indices() const noexcept { return indices_; }
  const MultiIndex& operator[](std::size_t k) const { return indices_[k]; }

  std::optional<std::size_t> position(const MultiIndex& index) const;

  // psi_k(xi) = prod_d P_{i_d}(xi_d).
  double evaluate(std::size_t k, std::span<const double> xi) const;

 private:
  std::size_t n_vars_;
  unsigned order_;
  std::vector<MultiIndex> indices_;
};

/// Polynomial chaos surrogate y(xi) = sum_k y_k psi_k(xi) for xi in [-1,1]^n,
/// representing a function over the physical `box`.
struct PCExpansion {
  PCBasis basis;
  std::vector<double> coeffs;
  Box box;

  PCExpansion(PCBasis basis, std::vector<double> coeffs, Box box);

  double coefficient(const MultiIndex& index) const;
  double evaluate(std::span<const double> xi) const;
  // Maps a physical point to xi first.
  double evaluate_physical(std::span<const double> x) const;
};

using ScalarField = std::function<double(std::span<const double>)>;

/// Non-intrusive Galerkin projection onto the order-p basis:
/// y_k = <f, psi_k> / <psi_k^2>, with the inner product taken on the full
/// q^n tensor Gauss-Legendre grid and inputs uniform on each box component.
/// `f` receives physical coordinates in box order.
PCExpansion project(const ScalarField& f, const Box& box, unsigned order, std::size_t quad_points);

// Same, for an expression; `box` names must match f.variables() exactly.
PCExpansion project(const Expr& f, const NamedBox& box, unsigned order, std::size_t quad_points);

}  // namespace dspc
