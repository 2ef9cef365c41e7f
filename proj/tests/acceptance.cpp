// Acceptance suite for the challenge problem and the numerical core.
//
// Usage: acceptance [criterion ...]   (no arguments runs all of 1..7)
// Prints one [PASS]/[FAIL] line per criterion; exit status is non-zero if
// any selected criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "dspc/bernstein.hpp"
#include "dspc/errors.hpp"
#include "dspc/evidence.hpp"
#include "dspc/propagate.hpp"
#include "test_support.hpp"

using namespace dspc;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double budget_ms;  // runtime ceiling, 0 for none
  std::function<Outcome()> check;
};

// Reference induced structure for the challenge problem; loose_lo marks lower
// bounds known to sit above the true minimum.
struct TableRow {
  double lo, hi, mass;
  bool loose_lo;
};

constexpr TableRow kTable[18] = {
    {0.687, 0.909, 0.011, false}, {0.721, 1.222, 0.044, true},  {0.741, 1.097, 0.056, true},
    {0.804, 0.961, 0.014, false}, {0.853, 1.426, 0.058, true},  {0.880, 1.275, 0.072, true},
    {0.850, 1.012, 0.014, false}, {0.912, 1.528, 0.058, true},  {0.945, 1.363, 0.072, true},
    {0.890, 1.061, 0.023, false}, {0.967, 1.630, 0.093, true},  {1.007, 1.450, 0.117, true},
    {0.953, 1.152, 0.030, false}, {1.069, 1.834, 0.120, true},  {1.123, 1.623, 0.150, true},
    {0.952, 1.236, 0.007, false}, {1.068, 2.039, 0.027, true},  {1.122, 1.794, 0.033, true},
};

const Expr& challenge_function() {
  static const Expr f = parse("(a+b)^a", {"a", "b"});
  return f;
}

NamedStructures challenge_inputs() {
  return {{"a", test::challenge_a()}, {"b", test::challenge_b()}};
}

std::string fmt(const char* format, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

// Best of a few repetitions, in milliseconds.
template <class Fn>
double time_ms(Fn&& fn, int reps = 5) {
  double best = INFINITY;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = Clock::now();
    fn();
    best = std::min(best, std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
  }
  return best;
}

Outcome garloff_example() {
  // y = 5 psi_0 + psi_1 + psi_3 + psi_4 with psi_1 = xi_1, psi_3 = xi_2,
  // psi_4 = xi_1 xi_2 in the reference numbering.
  const PCBasis basis(2, 3);
  std::vector<double> y(basis.size(), 0.0);
  y[*basis.position({0, 0})] = 5.0;
  y[*basis.position({1, 0})] = 1.0;
  y[*basis.position({0, 1})] = 1.0;
  y[*basis.position({1, 1})] = 1.0;
  const PCExpansion pce(basis, y, Box(2, Interval(-1.0, 1.0)));
  const BernsteinPatch patch = garloff_coefficients(legendre_to_power(pce), pce.box);
  const Interval range = enclosure(patch);
  const bool ok = patch.coeffs == std::vector<double>{4.0, 4.0, 4.0, 8.0} &&
                  range == Interval(4.0, 8.0);
  return {ok, fmt("beta = {%g, %g, %g, %g}, enclosure [%g, %g]", patch.coeffs[0], patch.coeffs[1],
                  patch.coeffs[2], patch.coeffs[3], range.lo(), range.hi())};
}

Outcome aggregation() {
  const DSStructure a = test::challenge_a();
  const DSStructure b = test::challenge_b();
  const double want_a[] = {0.1, 0.4, 0.5};
  const double want_b[] = {0.111, 0.144, 0.144, 0.233, 0.3, 0.067};
  const Interval iv_a[] = {{0.1, 0.5}, {0.5, 1.0}, {0.6, 0.9}};
  const Interval iv_b[] = {{0.0, 0.2}, {0.2, 0.4}, {0.3, 0.5}, {0.4, 0.6}, {0.6, 0.8}, {0.6, 1.0}};
  bool ok = a.size() == 3 && b.size() == 6;
  double worst_b = 0.0;
  if (ok) {
    for (std::size_t i = 0; i < 3; ++i) ok = ok && a[i].interval == iv_a[i] && a[i].mass == want_a[i];
    for (std::size_t i = 0; i < 6; ++i) {
      ok = ok && b[i].interval == iv_b[i];
      worst_b = std::max(worst_b, std::abs(b[i].mass - want_b[i]));
    }
  }
  ok = ok && worst_b <= 5e-4;
  return {ok, fmt("A masses exact: %s, max |B mass - reference| = %.2e (tol 5e-4)",
                  ok ? "yes" : "check", worst_b)};
}

Outcome table_masses() {
  PropagationConfig cfg;
  cfg.method = Method::interval_baseline;
  const PropagationResult r = map_ds(challenge_function(), challenge_inputs(), cfg);
  int matched = 0;
  std::string bad;
  for (std::size_t i = 0; i < r.boxes.size() && i < 18; ++i) {
    const double rounded = std::round(r.boxes[i].mass * 1000.0) / 1000.0;
    if (std::abs(rounded - kTable[i].mass) < 1e-12) {
      ++matched;
    } else {
      bad += fmt(" box %zu: %.3f vs %.3f;", i + 1, rounded, kTable[i].mass);
    }
  }
  return {matched == 18 && r.boxes.size() == 18, fmt("%d/18 masses match at 3 decimals", matched) + bad};
}

Outcome table_bounds() {
  const PropagationResult r = map_ds(challenge_function(), challenge_inputs(), PropagationConfig{});
  int within_02 = 0, strict_total = 0, strict_ok = 0;
  double worst = 0.0;
  std::string misses;
  for (std::size_t i = 0; i < 18; ++i) {
    const Interval y = r.boxes[i].output;
    const double dlo = y.lo() - kTable[i].lo;
    const double dhi = y.hi() - kTable[i].hi;
    worst = std::max({worst, std::abs(dlo), std::abs(dhi)});
    within_02 += (std::abs(dlo) <= 0.02) + (std::abs(dhi) <= 0.02);
    if (!kTable[i].loose_lo) {
      ++strict_total;
      strict_ok += std::abs(dlo) <= 0.01;
    }
    ++strict_total;
    strict_ok += std::abs(dhi) <= 0.01;
    if (std::abs(dlo) > 0.02) misses += fmt(" %zu.lo %+.4f", i + 1, dlo);
    if (std::abs(dhi) > 0.02) misses += fmt(" %zu.hi %+.4f", i + 1, dhi);
  }
  const bool ok = within_02 == 36 && strict_ok == strict_total;
  std::string detail = fmt("%d/36 endpoints within 0.02, %d/%d strict endpoints within 0.01, worst %.4f",
                           within_02, strict_ok, strict_total, worst);
  if (!misses.empty()) detail += "; beyond 0.02:" + misses;
  return {ok, detail};
}

Outcome exceedance() {
  const PropagationResult r = map_ds(challenge_function(), challenge_inputs(), PropagationConfig{});
  ProbabilityBounds p{};
  const double ms = time_ms([&] { p = exceedance_bounds(r.output, 1.7); });
  const bool ok = p.lower == 0.0 && std::abs(p.upper - 0.18) <= 1e-12 && ms < 1.0;
  return {ok, fmt("P(y > 1.7) in [%.6g, %.6g], query %.3f ms", p.lower, p.upper, ms)};
}

Outcome property_suite() {
  std::vector<std::string> failures;
  auto g = test::rng(2024);

  // Enclosure soundness and subdivision monotonicity.
  std::size_t violations = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = test::uniform_int(g, 1, 3);
    const PolySeries p = test::random_poly(g, n, 5);
    Box box;
    for (std::size_t d = 0; d < n; ++d) box.push_back(test::random_interval(g, -2.0, 2.0, 0.05));
    Interval prev = bounded_range(p, box, 1);
    for (unsigned k : {1u, 2u, 4u}) {
      const Interval r = bounded_range(p, box, k);
      if (r.lo() < prev.lo() - 1e-12 || r.hi() > prev.hi() + 1e-12) ++violations;
      prev = r;
      for (int s = 0; s < 200; ++s) {
        std::vector<double> x;
        for (const Interval& iv : box) x.push_back(test::uniform(g, iv.lo(), iv.hi()));
        const double v = p.evaluate(x);
        if (v < r.lo() - 1e-9 || v > r.hi() + 1e-9) ++violations;
      }
    }
  }
  if (violations) failures.push_back(fmt("enclosure: %zu violations", violations));

  // Quadrature exactness.
  for (std::size_t q : {1, 2, 5, 20}) {
    const QuadratureRule rule = gauss_legendre(q);
    for (unsigned m = 0; m <= 2 * q - 1; ++m) {
      double s = 0.0;
      for (std::size_t i = 0; i < q; ++i) s += rule.weights[i] * std::pow(rule.nodes[i], m);
      const double exact = m % 2 ? 0.0 : 2.0 / (m + 1);
      if (std::abs(s - exact) >= 1e-10) failures.push_back(fmt("quadrature q=%zu m=%u", q, m));
    }
  }

  // Projection reproduces polynomials of degree <= p.
  double worst_projection = 0.0;
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = test::uniform_int(g, 1, 3);
    const unsigned order = test::uniform_int(g, 1, 5);
    const PCBasis basis(n, order);
    std::vector<double> truth(basis.size());
    for (double& c : truth) c = test::uniform(g, -1.0, 1.0);
    Box box;
    for (std::size_t d = 0; d < n; ++d) box.push_back(test::random_interval(g, -2.0, 2.0, 0.1));
    const PCExpansion ref(basis, truth, box);
    const PCExpansion got =
        project([&](std::span<const double> x) { return ref.evaluate_physical(x); }, box, order, order + 1);
    for (std::size_t k = 0; k < truth.size(); ++k) {
      worst_projection = std::max(worst_projection, std::abs(got.coeffs[k] - truth[k]));
    }
  }
  if (worst_projection >= 1e-9) failures.push_back(fmt("projection error %.2e", worst_projection));

  // Vertex sharpness.
  double worst_vertex = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = test::uniform_int(g, 1, 3);
    const PolySeries p = test::random_poly(g, n, 5);
    Box box;
    for (std::size_t d = 0; d < n; ++d) box.push_back(test::random_interval(g, -2.0, 2.0, 0.05));
    const BernsteinPatch patch = garloff_coefficients(p, box);
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      MultiIndex corner(n);
      std::vector<double> vertex(n);
      for (std::size_t d = 0; d < n; ++d) {
        const bool high = mask & (1u << d);
        corner[d] = high ? patch.degree[d] : 0;
        vertex[d] = high ? box[d].hi() : box[d].lo();
      }
      worst_vertex = std::max(worst_vertex, std::abs(patch.coeff(corner) - p.evaluate(vertex)));
    }
  }
  if (worst_vertex >= 1e-9) failures.push_back(fmt("vertex sharpness %.2e", worst_vertex));

  // Mass normalization after every evidence operation.
  double worst_mass = 0.0;
  auto mass_error = [](const DSStructure& ds) {
    double s = 0.0;
    for (const auto& fe : ds.focal()) s += fe.mass;
    return std::abs(s - 1.0);
  };
  for (int trial = 0; trial < 200; ++trial) {
    const DSStructure x = test::random_structure(g, test::uniform_int(g, 1, 6), 0.0, 10.0);
    const DSStructure y = test::random_structure(g, test::uniform_int(g, 1, 6), 0.0, 10.0);
    const std::vector<DSStructure> both{x, y};
    const std::vector<double> w{test::uniform(g, 0.1, 1.0), test::uniform(g, 0.1, 1.0)};
    worst_mass = std::max(worst_mass, mass_error(mix(both, w)));
    try {
      worst_mass = std::max(worst_mass, mass_error(dempster_combine(x, y)));
    } catch (const TotalConflict&) {
    }
  }
  PropagationConfig baseline;
  baseline.method = Method::interval_baseline;
  worst_mass = std::max(worst_mass,
                        mass_error(map_ds(challenge_function(), challenge_inputs(), baseline).output));
  if (worst_mass > 1e-12) failures.push_back(fmt("mass normalization %.2e", worst_mass));

  // Bound ordering at random abscissae.
  const DSStructure induced = map_ds(challenge_function(), challenge_inputs(), PropagationConfig{}).output;
  int order_violations = 0;
  for (int i = 0; i < 1000; ++i) {
    const double x = test::uniform(g, 0.0, 2.5);
    const CumulativeBounds c = cumulative(induced, x);
    const ComplementaryBounds cc = complementary_cumulative(induced, x);
    order_violations += (c.cbf > c.cpf) + (cc.ccbf > cc.ccpf);
  }
  if (order_violations) failures.push_back(fmt("bound ordering: %d violations", order_violations));

  // Baseline contains oracle on every challenge box.
  int not_contained = 0;
  for (const auto& row : compare_methods(challenge_function(), challenge_inputs(), PropagationConfig{})) {
    not_contained += !row.baseline_contains_oracle();
  }
  if (not_contained) failures.push_back(fmt("baseline misses oracle on %d boxes", not_contained));

  std::string detail = "7 properties checked";
  for (const auto& f : failures) detail += "; " + f;
  return {failures.empty(), detail};
}

Outcome baseline_contrast() {
  const NamedBox box1{{"a", {0.1, 0.5}}, {"b", {0.0, 0.2}}};
  PropagationConfig cfg;
  const Interval chaos = propagate_box(challenge_function(), box1, cfg);
  cfg.method = Method::interval_baseline;
  const Interval base = propagate_box(challenge_function(), box1, cfg);
  const double ratio = base.width() / chaos.width();
  const bool near_reference = std::abs(base.lo() - 0.316) < 5e-4 && std::abs(base.hi() - 0.965) < 5e-4;
  return {ratio >= 2.0 && near_reference,
          fmt("baseline [%.4f, %.4f] vs chaos [%.4f, %.4f], width ratio %.2f", base.lo(), base.hi(),
              chaos.lo(), chaos.hi(), ratio)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "Garloff worked example", 1.0, garloff_example},
      {2, "aggregation of the challenge inputs", 1.0, aggregation},
      {3, "induced masses at 3 decimals", 1.0, table_masses},
      {4, "induced bounds against the reference table", 10000.0, table_bounds},
      {5, "exceedance query at 1.7", 0.0, exceedance},
      {6, "property suite", 0.0, property_suite},
      {7, "baseline contrast on box 1", 0.0, baseline_contrast},
  };

  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty()) {
    for (const auto& c : criteria) selected.push_back(c.id);
  }

  int failed = 0;
  for (int id : selected) {
    if (id < 1 || id > static_cast<int>(criteria.size())) {
      std::printf("[FAIL] C%d unknown criterion\n", id);
      ++failed;
      continue;
    }
    const Criterion& c = criteria[id - 1];
    Outcome outcome{false, ""};
    double ms = 0.0;
    try {
      // Time the whole check; tight budgets take the best of a few runs.
      ms = time_ms([&] { outcome = c.check(); }, c.budget_ms > 0.0 && c.budget_ms < 100.0 ? 5 : 1);
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const bool in_budget = c.budget_ms <= 0.0 || ms < c.budget_ms;
    const bool pass = outcome.pass && in_budget;
    std::string budget = c.budget_ms > 0.0 ? fmt(", budget %g ms", c.budget_ms) : "";
    std::printf("[%s] C%d %s: %s (%.3f ms%s)\n", pass ? "PASS" : "FAIL", c.id, c.title,
                outcome.detail.c_str(), ms, budget.c_str());
    failed += !pass;
  }
  return failed == 0 ? 0 : 1;
}
