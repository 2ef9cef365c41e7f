#include "dspc/bernstein.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <limits>

#include "dspc/errors.hpp"

namespace dspc {

PolySeries::PolySeries(const MultiIndex& max_degree)
    : degree_(max_degree), shape_(max_degree), coeffs_(shape_.size(), 0.0) {}

PolySeries::PolySeries(const MultiIndex& max_degree, std::vector<double> coeffs)
    : degree_(max_degree), shape_(max_degree), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != shape_.size()) {
    throw InvalidArgument("power series needs " + std::to_string(shape_.size()) +
                          " coefficients, got " + std::to_string(coeffs_.size()));
  }
}

double PolySeries::coeff(const MultiIndex& index) const {
  if (index.size() != n_vars()) throw InvalidArgument("multi-index dimension mismatch");
  if (!componentwise_le(index, degree_)) return 0.0;
  return coeffs_[shape_.flat(index)];
}

void PolySeries::set(const MultiIndex& index, double value) { coeffs_[shape_.flat(index)] = value; }

void PolySeries::add(const MultiIndex& index, double value) { coeffs_[shape_.flat(index)] += value; }

double PolySeries::evaluate(std::span<const double> x) const {
  if (x.size() != n_vars()) throw InvalidArgument("point dimension mismatch");
  double sum = 0.0;
  for (std::size_t f = 0; f < coeffs_.size(); ++f) {
    if (coeffs_[f] == 0.0) continue;
    const MultiIndex index = shape_.unflat(f);
    double term = coeffs_[f];
    for (std::size_t d = 0; d < x.size(); ++d) term *= std::pow(x[d], static_cast<int>(index[d]));
    sum += term;
  }
  return sum;
}

PolySeries PolySeries::trimmed() const {
  MultiIndex top(n_vars());
  for (std::size_t f = 0; f < coeffs_.size(); ++f) {
    if (coeffs_[f] != 0.0) top = componentwise_max(top, shape_.unflat(f));
  }
  PolySeries out(top);
  for (std::size_t f = 0; f < out.coeffs_.size(); ++f) {
    out.coeffs_[f] = coeff(out.shape_.unflat(f));
  }
  return out;
}

double BernsteinPatch::coeff(const MultiIndex& index) const {
  return coeffs[TensorShape(degree).flat(index)];
}

double BernsteinPatch::evaluate(std::span<const double> x) const {
  if (x.size() != box.size()) throw InvalidArgument("point dimension mismatch");
  const TensorShape shape(degree);
  // basis[d][i] = B_i^{n_d}(x_d) on box[d]
  std::vector<std::vector<double>> basis(box.size());
  for (std::size_t d = 0; d < box.size(); ++d) {
    const unsigned n = degree[d];
    const double lo = box[d].lo();
    const double w = box[d].width();
    for (unsigned i = 0; i <= n; ++i) {
      basis[d].push_back(static_cast<double>(binomial(n, i)) *
                         std::pow(x[d] - lo, static_cast<int>(i)) *
                         std::pow(box[d].hi() - x[d], static_cast<int>(n - i)) /
                         std::pow(w, static_cast<int>(n)));
    }
  }
  double sum = 0.0;
  for (std::size_t f = 0; f < coeffs.size(); ++f) {
    const MultiIndex index = shape.unflat(f);
    double term = coeffs[f];
    for (std::size_t d = 0; d < box.size(); ++d) term *= basis[d][index[d]];
    sum += term;
  }
  return sum;
}

// ---------------------------------------------------------------------------

namespace {

using Rational = boost::multiprecision::cpp_rational;

// table[k][j] = coefficient of xi^j in P_k(xi), for k <= max_degree.
std::vector<std::vector<double>> legendre_monomial_table(unsigned max_degree) {
  std::vector<std::vector<Rational>> exact(max_degree + 1);
  exact[0] = {Rational(1)};
  if (max_degree >= 1) exact[1] = {Rational(0), Rational(1)};
  for (unsigned k = 1; k < max_degree; ++k) {
    std::vector<Rational> next(k + 2, Rational(0));
    for (unsigned j = 0; j <= k; ++j) next[j + 1] += Rational(2 * k + 1) * exact[k][j];
    for (unsigned j = 0; j < k; ++j) next[j] -= Rational(k) * exact[k - 1][j];
    for (auto& c : next) c /= Rational(k + 1);
    exact[k + 1] = std::move(next);
  }
  std::vector<std::vector<double>> table(max_degree + 1);
  for (unsigned k = 0; k <= max_degree; ++k) {
    for (const auto& c : exact[k]) table[k].push_back(c.convert_to<double>());
  }
  return table;
}

}  // namespace

PolySeries legendre_to_power(const PCExpansion& pce) {
  const std::size_t n = pce.basis.n_vars();
  MultiIndex top(n);
  for (std::size_t k = 0; k < pce.basis.size(); ++k) {
    if (pce.coeffs[k] != 0.0) top = componentwise_max(top, pce.basis[k]);
  }
  unsigned max_degree = 0;
  for (unsigned t : top) max_degree = std::max(max_degree, t);
  const auto table = legendre_monomial_table(max_degree);

  PolySeries series(top);
  for (std::size_t k = 0; k < pce.basis.size(); ++k) {
    const double y = pce.coeffs[k];
    if (y == 0.0) continue;
    const MultiIndex& term = pce.basis[k];
    // All monomials J <= term contribute y * prod_d table[term_d][j_d].
    const TensorShape sub(term);
    for (std::size_t f = 0; f < sub.size(); ++f) {
      const MultiIndex j = sub.unflat(f);
      double c = y;
      for (std::size_t d = 0; d < n; ++d) c *= table[term[d]][j[d]];
      if (c != 0.0) series.add(j, c);
    }
  }
  return series.trimmed();
}

// ---------------------------------------------------------------------------

namespace {

// Applies a per-axis linear map to every 1-D fiber of a dense tensor.
template <class Transform>
void sweep(std::vector<double>& data, const TensorShape& shape, std::size_t d,
           Transform&& transform) {
  const std::size_t len = shape.extent(d);
  const std::size_t stride = shape.stride(d);
  std::vector<double> in(len), out(len);
  shape.for_each_fiber(d, [&](std::size_t offset) {
    for (std::size_t j = 0; j < len; ++j) in[j] = data[offset + j * stride];
    transform(in, out);
    for (std::size_t j = 0; j < len; ++j) data[offset + j * stride] = out[j];
  });
}

void check_box(const PolySeries& poly, const Box& box) {
  if (box.size() != poly.n_vars()) {
    throw InvalidArgument("box has " + std::to_string(box.size()) +
                          " components, polynomial has " + std::to_string(poly.n_vars()) +
                          " variables");
  }
}

}  // namespace

GarloffStages garloff_stages(const PolySeries& poly, const Box& box) {
  check_box(poly, box);
  const TensorShape& shape = poly.shape();
  std::vector<double> data(poly.coeffs().begin(), poly.coeffs().end());

  for (std::size_t d = 0; d < poly.n_vars(); ++d) {
    const double lo = box[d].lo();
    sweep(data, shape, d, [&](const std::vector<double>& in, std::vector<double>& out) {
      const unsigned n = static_cast<unsigned>(in.size() - 1);
      for (unsigned i = 0; i <= n; ++i) {
        double s = 0.0;
        for (unsigned j = i; j <= n; ++j) {
          s += static_cast<double>(binomial(j, i)) * in[j] * std::pow(lo, static_cast<int>(j - i));
        }
        out[i] = s;
      }
    });
  }
  PolySeries shifted(poly.max_degree(), data);

  for (std::size_t d = 0; d < poly.n_vars(); ++d) {
    const double w = box[d].width();
    sweep(data, shape, d, [&](const std::vector<double>& in, std::vector<double>& out) {
      for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i] * std::pow(w, static_cast<int>(i));
    });
  }
  return {std::move(shifted), PolySeries(poly.max_degree(), std::move(data))};
}

BernsteinPatch garloff_coefficients(const PolySeries& poly, const Box& box) {
  check_box(poly, box);
  for (std::size_t d = 0; d < box.size(); ++d) {
    if (box[d].is_point()) throw DegenerateBox(d);
  }
  GarloffStages stages = garloff_stages(poly, box);
  const TensorShape& shape = poly.shape();
  std::vector<double> data(stages.scaled.coeffs().begin(), stages.scaled.coeffs().end());

  for (std::size_t d = 0; d < poly.n_vars(); ++d) {
    sweep(data, shape, d, [&](const std::vector<double>& in, std::vector<double>& out) {
      const unsigned n = static_cast<unsigned>(in.size() - 1);
      for (unsigned i = 0; i <= n; ++i) {
        double s = 0.0;
        for (unsigned j = 0; j <= i; ++j) {
          s += static_cast<double>(binomial(i, j)) / static_cast<double>(binomial(n, j)) * in[j];
        }
        out[i] = s;
      }
    });
  }
  return {box, poly.max_degree(), std::move(data)};
}

Interval enclosure(const BernsteinPatch& patch) {
  auto [lo, hi] = std::minmax_element(patch.coeffs.begin(), patch.coeffs.end());
  return {*lo, *hi};
}

Interval bounded_range(const PolySeries& poly, const Box& box, unsigned k) {
  check_box(poly, box);
  if (k == 0) throw InvalidArgument("subdivision count must be at least 1");
  for (std::size_t d = 0; d < box.size(); ++d) {
    if (box[d].is_point()) throw DegenerateBox(d);
  }
  const std::size_t n = box.size();
  // edges[d][i], i = 0..k; the last edge is exactly hi.
  std::vector<std::vector<double>> edges(n);
  for (std::size_t d = 0; d < n; ++d) {
    for (unsigned i = 0; i < k; ++i) {
      edges[d].push_back(box[d].lo() + box[d].width() * static_cast<double>(i) / k);
    }
    edges[d].push_back(box[d].hi());
  }

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  std::vector<unsigned> cell(n, 0);
  Box sub = box;
  for (;;) {
    for (std::size_t d = 0; d < n; ++d) sub[d] = Interval(edges[d][cell[d]], edges[d][cell[d] + 1]);
    const Interval r = enclosure(garloff_coefficients(poly, sub));
    lo = std::min(lo, r.lo());
    hi = std::max(hi, r.hi());
    std::size_t d = n;
    while (d-- > 0) {
      if (++cell[d] < k) break;
      cell[d] = 0;
    }
    if (d == static_cast<std::size_t>(-1)) break;
  }
  return {lo, hi};
}

}  // namespace dspc
