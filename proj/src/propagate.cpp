#include "dspc/propagate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "dspc/bernstein.hpp"
#include "dspc/errors.hpp"

namespace dspc {

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::chaos_bernstein: return "chaos-bernstein";
    case Method::interval_baseline: return "interval-baseline";
    case Method::grid_oracle: return "grid-oracle";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) noexcept {
  for (Method m : {Method::chaos_bernstein, Method::interval_baseline, Method::grid_oracle}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

void PropagationConfig::validate() const {
  if (order < 1) throw InvalidArgument("order must be at least 1");
  if (quad_points < order + 1) {
    throw InvalidArgument("quad_points must be at least order + 1 (" +
                          std::to_string(order + 1) + "), got " + std::to_string(quad_points));
  }
  if (subdivisions < 1) throw InvalidArgument("subdivisions must be at least 1");
  if (oracle_grid < 2) throw InvalidArgument("oracle grid must have at least 2 points per axis");
}

namespace {

// Checks that the box names are exactly the expression's variables.
void check_names(const Expr& f, const NamedBox& box) {
  if (box.size() != f.variables().size()) {
    throw InvalidArgument("box has " + std::to_string(box.size()) + " variables, function has " +
                          std::to_string(f.variables().size()));
  }
  std::vector<bool> seen(box.size(), false);
  for (const auto& entry : box) {
    const std::size_t slot = f.slot_of(entry.first);
    if (seen[slot]) throw InvalidArgument("variable '" + entry.first + "' given twice");
    seen[slot] = true;
  }
}

Interval chaos_bernstein_box(const Expr& f, const NamedBox& box, const PropagationConfig& cfg) {
  Expr reduced_f = f;
  NamedBox reduced;
  for (const auto& [name, interval] : box) {
    if (interval.is_point()) {
      reduced_f = bind_variable(reduced_f, name, interval.lo());
    } else {
      reduced.emplace_back(name, interval);
    }
  }
  if (reduced.empty()) {
    const double v = eval_point(reduced_f, std::span<const double>{});
    return Interval::point(v);
  }
  const PCExpansion pce = project(reduced_f, reduced, cfg.order, cfg.quad_points);
  const PolySeries poly = legendre_to_power(pce);
  const Box standard(reduced.size(), Interval(-1.0, 1.0));
  return bounded_range(poly, standard, cfg.subdivisions);
}

template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
}

struct ProductBox {
  std::size_t box_id;
  NamedBox named;
  Box inputs;
  double mass;
};

std::vector<ProductBox> product_boxes(const Expr& f, const NamedStructures& inputs) {
  if (inputs.empty()) throw InvalidArgument("no input structures");
  NamedBox names_only;
  for (const auto& [name, ds] : inputs) names_only.emplace_back(name, ds.hull());
  check_names(f, names_only);

  std::size_t total = 1;
  for (const auto& entry : inputs) total *= entry.second.size();
  std::vector<ProductBox> boxes;
  boxes.reserve(total);
  for (std::size_t id = 0; id < total; ++id) {
    ProductBox pb{id + 1, {}, {}, 1.0};
    std::size_t rest = id;
    for (const auto& [name, ds] : inputs) {
      const FocalElement& fe = ds[rest % ds.size()];
      rest /= ds.size();
      pb.named.emplace_back(name, fe.interval);
      pb.inputs.push_back(fe.interval);
      pb.mass *= fe.mass;
    }
    boxes.push_back(std::move(pb));
  }
  return boxes;
}

// Runs fn on every box concurrently; rethrows the failure with the lowest
// box id as a PropagationError.
template <class Result, class Fn>
std::vector<Result> run_boxes(const std::vector<ProductBox>& boxes, Fn&& fn) {
  std::vector<std::optional<Result>> results(boxes.size());
  std::vector<std::exception_ptr> errors(boxes.size());
  parallel_for(boxes.size(), [&](std::size_t i) {
    try {
      results[i].emplace(fn(boxes[i]));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  });
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      throw PropagationError(boxes[i].box_id, e.what());
    }
  }
  std::vector<Result> out;
  out.reserve(results.size());
  for (auto& r : results) out.push_back(std::move(*r));
  return out;
}

}  // namespace

Interval propagate_box(const Expr& f, const NamedBox& box, const PropagationConfig& cfg) {
  cfg.validate();
  check_names(f, box);
  switch (cfg.method) {
    case Method::chaos_bernstein:
      return chaos_bernstein_box(f, box, cfg);
    case Method::interval_baseline: {
      std::vector<Interval> values(box.size(), Interval(0.0, 0.0));
      for (const auto& [name, interval] : box) values[f.slot_of(name)] = interval;
      return eval_interval(f, values);
    }
    case Method::grid_oracle:
      return oracle_bounds(f, box, cfg.oracle_grid, cfg.oracle_refine);
  }
  throw InvalidArgument("unknown propagation method");
}

Interval oracle_bounds(const Expr& f, const NamedBox& box, std::size_t grid,
                       std::size_t refine_iters) {
  if (grid < 2) throw InvalidArgument("oracle grid must have at least 2 points per axis");
  check_names(f, box);
  const std::size_t n = box.size();
  std::vector<std::size_t> slots;
  for (const auto& entry : box) slots.push_back(f.slot_of(entry.first));

  std::vector<double> values(n);
  auto eval_at = [&](const std::vector<double>& x) {
    for (std::size_t d = 0; d < n; ++d) values[slots[d]] = x[d];
    return eval_point(f, values);
  };

  // Lattice coordinates per axis; a point interval contributes one value.
  std::vector<std::vector<double>> axes(n);
  for (std::size_t d = 0; d < n; ++d) {
    const Interval& iv = box[d].second;
    if (iv.is_point()) {
      axes[d] = {iv.lo()};
      continue;
    }
    for (std::size_t i = 0; i + 1 < grid; ++i) {
      axes[d].push_back(iv.lo() + iv.width() * static_cast<double>(i) / static_cast<double>(grid - 1));
    }
    axes[d].push_back(iv.hi());
  }

  std::vector<double> x(n), argmin(n), argmax(n);
  double fmin = std::numeric_limits<double>::infinity();
  double fmax = -fmin;
  std::vector<std::size_t> at(n, 0);
  for (;;) {
    for (std::size_t d = 0; d < n; ++d) x[d] = axes[d][at[d]];
    const double v = eval_at(x);
    if (v < fmin) {
      fmin = v;
      argmin = x;
    }
    if (v > fmax) {
      fmax = v;
      argmax = x;
    }
    std::size_t d = n;
    while (d-- > 0) {
      if (++at[d] < axes[d].size()) break;
      at[d] = 0;
    }
    if (d == static_cast<std::size_t>(-1)) break;
  }

  // sign = +1 searches downhill, -1 uphill.
  auto refine = [&](std::vector<double> point, double best, double sign) {
    std::vector<double> step(n);
    for (std::size_t d = 0; d < n; ++d) {
      step[d] = box[d].second.width() / static_cast<double>(grid - 1);
    }
    for (std::size_t pass = 0; pass < refine_iters; ++pass) {
      for (std::size_t d = 0; d < n; ++d) {
        if (step[d] == 0.0) continue;
        for (double dir : {1.0, -1.0}) {
          std::vector<double> cand = point;
          cand[d] = std::clamp(point[d] + dir * step[d], box[d].second.lo(), box[d].second.hi());
          if (cand[d] == point[d]) continue;
          const double v = eval_at(cand);
          if (sign * v < sign * best) {
            best = v;
            point = std::move(cand);
          }
        }
      }
      for (double& s : step) s *= 0.5;
    }
    return best;
  };

  const double lo = refine(argmin, fmin, 1.0);
  const double hi = refine(argmax, fmax, -1.0);
  return {lo, hi};
}

PropagationResult map_ds(const Expr& f, const NamedStructures& inputs,
                         const PropagationConfig& cfg) {
  cfg.validate();
  const auto boxes = product_boxes(f, inputs);
  const auto images = run_boxes<Interval>(
      boxes, [&](const ProductBox& pb) { return propagate_box(f, pb.named, cfg); });

  std::vector<BoxRecord> records;
  std::vector<FocalElement> focal;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    records.push_back({boxes[i].box_id, boxes[i].inputs, images[i], boxes[i].mass});
    focal.push_back({images[i], boxes[i].mass});
  }
  return {DSStructure(std::move(focal)), std::move(records), cfg.method};
}

std::vector<MethodComparison> compare_methods(const Expr& f, const NamedStructures& inputs,
                                              const PropagationConfig& cfg) {
  cfg.validate();
  const auto boxes = product_boxes(f, inputs);
  return run_boxes<MethodComparison>(boxes, [&](const ProductBox& pb) {
    PropagationConfig c = cfg;
    c.method = Method::chaos_bernstein;
    const Interval chaos = propagate_box(f, pb.named, c);
    c.method = Method::interval_baseline;
    const Interval baseline = propagate_box(f, pb.named, c);
    c.method = Method::grid_oracle;
    const Interval oracle = propagate_box(f, pb.named, c);
    return MethodComparison{pb.box_id, pb.inputs, pb.mass, chaos, baseline, oracle};
  });
}

}  // namespace dspc
