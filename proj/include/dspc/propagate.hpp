#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dspc/chaos.hpp"
#include "dspc/evidence.hpp"
#include "dspc/expr.hpp"

namespace dspc {

enum class Method { chaos_bernstein, interval_baseline, grid_oracle };

std::string_view to_string(Method method) noexcept;
std::optional<Method> parse_method(std::string_view name) noexcept;

struct PropagationConfig {
  unsigned order = 5;
  std::size_t quad_points = 20;
  unsigned subdivisions = 11;
  Method method = Method::chaos_bernstein;
  std::size_t oracle_grid = 101;
  std::size_t oracle_refine = 50;

  // Throws InvalidArgument unless order >= 1, quad_points >= order + 1,
  // subdivisions >= 1 and oracle_grid >= 2.
  void validate() const;
};

using NamedStructures = std::vector<std::pair<std::string, DSStructure>>;

struct BoxRecord {
  std::size_t box_id;  // 1-based, first input varies fastest
  Box inputs;          // one interval per input, in input order
  Interval output;
  double mass;
};

struct PropagationResult {
  DSStructure output;
  std::vector<BoxRecord> boxes;  // ordered by box_id
  Method method;
};

/// Image of one product box under f with the configured method.
///
/// chaos-bernstein: project onto the Legendre basis, convert to power form,
/// bound with Bernstein subdivision. Zero-width inputs are bound as constants
/// first; if every input is a point the function is evaluated directly.
/// interval-baseline: natural interval extension. grid-oracle: oracle_bounds.
Interval propagate_box(const Expr& f, const NamedBox& box, const PropagationConfig& cfg);

/// Range estimate from a grid^n lattice (faces and corners included)
/// followed by `refine_iters` passes of coordinate search from the best and
/// worst lattice points, halving the step after each pass. Deterministic,
/// and an inner approximation of the true range.
Interval oracle_bounds(const Expr& f, const NamedBox& box, std::size_t grid,
                       std::size_t refine_iters);

/// Pushes the product of the input structures through f. Each product box
/// gets the product of its input masses; bit-identical images are merged.
/// Failures are rethrown as PropagationError naming the box.
PropagationResult map_ds(const Expr& f, const NamedStructures& inputs,
                         const PropagationConfig& cfg);

struct MethodComparison {
  std::size_t box_id;
  Box inputs;
  double mass;
  Interval chaos;
  Interval baseline;
  Interval oracle;

  bool baseline_contains_oracle() const noexcept { return baseline.contains(oracle); }
  // Surrogate bound strictly inside the oracle range (truncation error).
  bool chaos_lower_above_oracle() const noexcept { return chaos.lo() > oracle.lo(); }
  bool chaos_upper_below_oracle() const noexcept { return chaos.hi() < oracle.hi(); }
};

std::vector<MethodComparison> compare_methods(const Expr& f, const NamedStructures& inputs,
                                              const PropagationConfig& cfg);

}  // namespace dspc
