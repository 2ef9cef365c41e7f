#include "dspc/chaos.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dspc/errors.hpp"

namespace dspc {

double legendre(unsigned k, double xi) {
  if (k == 0) return 1.0;
  double prev = 1.0;
  double cur = xi;
  for (unsigned j = 1; j < k; ++j) {
    const double next = ((2.0 * j + 1.0) * xi * cur - j * prev) / (j + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

double legendre_norm_sq(const MultiIndex& index) {
  double v = 1.0;
  for (unsigned i : index) v /= (2.0 * i + 1.0);
  return v;
}

QuadratureRule gauss_legendre(std::size_t q) {
  if (q == 0) throw InvalidArgument("quadrature needs at least one point");
  QuadratureRule rule;
  rule.nodes.assign(q, 0.0);
  rule.weights.assign(q, 0.0);
  const double n = static_cast<double>(q);

  // Roots are symmetric; solve for the positive half and mirror.
  for (std::size_t i = 0; i < (q + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (n + 0.5));
    double derivative = 0.0;
    bool converged = false;
    for (int iter = 0; iter < 100; ++iter) {
      double p_prev = 1.0;
      double p = x;
      for (std::size_t j = 1; j < q; ++j) {
        const double next = ((2.0 * j + 1.0) * x * p - j * p_prev) / (j + 1.0);
        p_prev = p;
        p = next;
      }
      derivative = n * (x * p - p_prev) / (x * x - 1.0);
      const double dx = p / derivative;
      x -= dx;
      if (std::fabs(dx) <= 1e-15) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      throw std::logic_error("Gauss-Legendre Newton iteration did not converge for q=" +
                             std::to_string(q));
    }
    if (q % 2 == 1 && i == (q - 1) / 2) x = 0.0;
    // Derivative at the converged root.
    double p_prev = 1.0;
    double p = x;
    for (std::size_t j = 1; j < q; ++j) {
      const double next = ((2.0 * j + 1.0) * x * p - j * p_prev) / (j + 1.0);
      p_prev = p;
      p = next;
    }
    derivative = (q == 1) ? 1.0 : n * (x * p - p_prev) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * derivative * derivative);
    rule.nodes[i] = -x;
    rule.nodes[q - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[q - 1 - i] = w;
  }
  return rule;
}

AffineEncoding encode_input(const Interval& interval) {
  return {0.5 * (interval.hi() + interval.lo()), 0.5 * (interval.hi() - interval.lo())};
}

// ---------------------------------------------------------------------------

PCBasis::PCBasis(std::size_t n_vars, unsigned order) : n_vars_(n_vars), order_(order) {
  if (n_vars == 0) throw InvalidArgument("basis needs at least one variable");
  // Enumerate every index with total degree <= order, then sort.
  MultiIndex current(n_vars);
  for (;;) {
    indices_.push_back(current);
    std::size_t d = 0;
    while (d < n_vars) {
      ++current[d];
      if (current.total_degree() <= order) break;
      current[d] = 0;
      ++d;
    }
    if (d == n_vars) break;
  }
  std::sort(indices_.begin(), indices_.end(), graded_lex_less);
}

std::optional<std::size_t> PCBasis::position(const MultiIndex& index) const {
  auto it = std::find(indices_.begin(), indices_.end(), index);
  if (it == indices_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - indices_.begin());
}

double PCBasis::evaluate(std::size_t k, std::span<const double> xi) const {
  if (xi.size() != n_vars_) throw InvalidArgument("basis evaluated at wrong dimension");
  double v = 1.0;
  for (std::size_t d = 0; d < n_vars_; ++d) v *= legendre(indices_[k][d], xi[d]);
  return v;
}

PCExpansion::PCExpansion(PCBasis basis_in, std::vector<double> coeffs_in, Box box_in)
    : basis(std::move(basis_in)), coeffs(std::move(coeffs_in)), box(std::move(box_in)) {
  if (coeffs.size() != basis.size()) {
    throw InvalidArgument("expansion has " + std::to_string(coeffs.size()) +
                          " coefficients for a basis of size " + std::to_string(basis.size()));
  }
  if (box.size() != basis.n_vars()) throw InvalidArgument("expansion box dimension mismatch");
}

double PCExpansion::coefficient(const MultiIndex& index) const {
  auto k = basis.position(index);
  return k ? coeffs[*k] : 0.0;
}

double PCExpansion::evaluate(std::span<const double> xi) const {
  double sum = 0.0;
  for (std::size_t k = 0; k < basis.size(); ++k) sum += coeffs[k] * basis.evaluate(k, xi);
  return sum;
}

double PCExpansion::evaluate_physical(std::span<const double> x) const {
  if (x.size() != box.size()) throw InvalidArgument("point dimension mismatch");
  std::vector<double> xi(x.size());
  for (std::size_t d = 0; d < x.size(); ++d) {
    const auto enc = encode_input(box[d]);
    xi[d] = enc.half_width == 0.0 ? 0.0 : (x[d] - enc.center) / enc.half_width;
  }
  return evaluate(xi);
}

// ---------------------------------------------------------------------------

PCExpansion project(const ScalarField& f, const Box& box, unsigned order,
                    std::size_t quad_points) {
  const std::size_t n = box.size();
  PCBasis basis(n, order);
  const QuadratureRule rule = gauss_legendre(quad_points);
  const std::size_t q = rule.size();

  // legendre_table[node][degree], shared by all dimensions.
  std::vector<std::vector<double>> legendre_table(q, std::vector<double>(order + 1));
  for (std::size_t i = 0; i < q; ++i) {
    for (unsigned k = 0; k <= order; ++k) legendre_table[i][k] = legendre(k, rule.nodes[i]);
  }
  std::vector<AffineEncoding> encodings;
  for (const auto& component : box) encodings.push_back(encode_input(component));

  std::vector<double> sums(basis.size(), 0.0);
  std::vector<std::size_t> node(n, 0);
  std::vector<double> physical(n);
  for (;;) {
    double weight = 1.0;
    for (std::size_t d = 0; d < n; ++d) {
      physical[d] = encodings[d].to_physical(rule.nodes[node[d]]);
      weight *= 0.5 * rule.weights[node[d]];  // uniform density 1/2 per axis
    }
    const double fw = f(physical) * weight;
    for (std::size_t k = 0; k < basis.size(); ++k) {
      double psi = 1.0;
      for (std::size_t d = 0; d < n; ++d) psi *= legendre_table[node[d]][basis[k][d]];
      sums[k] += fw * psi;
    }
    std::size_t d = n;
    while (d-- > 0) {
      if (++node[d] < q) break;
      node[d] = 0;
    }
    if (d == static_cast<std::size_t>(-1)) break;
  }

  for (std::size_t k = 0; k < basis.size(); ++k) sums[k] /= legendre_norm_sq(basis[k]);
  return PCExpansion(std::move(basis), std::move(sums), box);
}

PCExpansion project(const Expr& f, const NamedBox& box, unsigned order,
                    std::size_t quad_points) {
  if (box.size() != f.variables().size()) {
    throw InvalidArgument("projection box has " + std::to_string(box.size()) +
                          " variables, expression has " + std::to_string(f.variables().size()));
  }
  std::vector<std::size_t> slots;
  Box plain;
  for (const auto& [name, interval] : box) {
    const std::size_t slot = f.slot_of(name);
    if (std::find(slots.begin(), slots.end(), slot) != slots.end()) {
      throw InvalidArgument("variable '" + name + "' appears twice in projection box");
    }
    slots.push_back(slot);
    plain.push_back(interval);
  }
  std::vector<double> values(slots.size());
  ScalarField field = [&](std::span<const double> x) {
    for (std::size_t d = 0; d < x.size(); ++d) values[slots[d]] = x[d];
    return eval_point(f, values);
  };
  return project(field, plain, order, quad_points);
}

}  // namespace dspc
