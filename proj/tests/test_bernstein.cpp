#include <cmath>

#include "doctest.h"
#include "dspc/bernstein.hpp"
#include "dspc/errors.hpp"
#include "test_support.hpp"

using namespace dspc;

namespace {

PolySeries worked_example() {
  PolySeries p(MultiIndex{1, 1});
  p.set({0, 0}, 5.0);
  p.set({1, 0}, 1.0);
  p.set({0, 1}, 1.0);
  p.set({1, 1}, 1.0);
  return p;
}

PolySeries univariate(std::vector<double> coeffs) {
  const unsigned degree = static_cast<unsigned>(coeffs.size() - 1);
  return PolySeries(MultiIndex{degree}, std::move(coeffs));
}

Box random_box(std::mt19937_64& g, std::size_t n) {
  Box box;
  for (std::size_t d = 0; d < n; ++d) box.push_back(test::random_interval(g, -2.0, 2.0, 0.05));
  return box;
}

std::vector<double> random_point(std::mt19937_64& g, const Box& box) {
  std::vector<double> x;
  for (const Interval& iv : box) x.push_back(test::uniform(g, iv.lo(), iv.hi()));
  return x;
}

}  // namespace

TEST_CASE("legendre to power conversion") {
  const PCBasis basis(2, 3);
  std::vector<double> y(basis.size(), 0.0);
  y[*basis.position({0, 0})] = 5.0;
  y[*basis.position({1, 0})] = 1.0;
  y[*basis.position({0, 1})] = 1.0;
  y[*basis.position({1, 1})] = 1.0;
  const Box standard(2, Interval(-1.0, 1.0));
  const PolySeries p = legendre_to_power(PCExpansion(basis, y, standard));
  CHECK(p.max_degree() == MultiIndex{1, 1});
  CHECK(p.coeff({0, 0}) == 5.0);
  CHECK(p.coeff({1, 0}) == 1.0);
  CHECK(p.coeff({0, 1}) == 1.0);
  CHECK(p.coeff({1, 1}) == 1.0);

  std::vector<double> psi2(basis.size(), 0.0);
  psi2[*basis.position({2, 0})] = 1.0;
  const PolySeries q = legendre_to_power(PCExpansion(basis, psi2, standard));
  CHECK(q.coeff({0, 0}) == -0.5);
  CHECK(q.coeff({2, 0}) == 1.5);
  CHECK(q.coeff({1, 0}) == 0.0);

  const PolySeries zero =
      legendre_to_power(PCExpansion(basis, std::vector<double>(basis.size(), 0.0), standard));
  for (double c : zero.coeffs()) CHECK(c == 0.0);
}

TEST_CASE("garloff worked example") {
  const Box standard(2, Interval(-1.0, 1.0));
  const GarloffStages stages = garloff_stages(worked_example(), standard);
  CHECK(stages.shifted.coeff({0, 0}) == 4.0);
  CHECK(stages.shifted.coeff({0, 1}) == 0.0);
  CHECK(stages.shifted.coeff({1, 0}) == 0.0);
  CHECK(stages.shifted.coeff({1, 1}) == 1.0);
  CHECK(stages.scaled.coeff({0, 0}) == 4.0);
  CHECK(stages.scaled.coeff({0, 1}) == 0.0);
  CHECK(stages.scaled.coeff({1, 0}) == 0.0);
  CHECK(stages.scaled.coeff({1, 1}) == 4.0);

  const BernsteinPatch patch = garloff_coefficients(worked_example(), standard);
  CHECK(patch.coeff({0, 0}) == 4.0);
  CHECK(patch.coeff({0, 1}) == 4.0);
  CHECK(patch.coeff({1, 0}) == 4.0);
  CHECK(patch.coeff({1, 1}) == 8.0);
  CHECK(enclosure(patch) == Interval(4.0, 8.0));
  CHECK(bounded_range(worked_example(), standard, 1) == Interval(4.0, 8.0));
}

TEST_CASE("univariate square") {
  const PolySeries sq = univariate({0.0, 0.0, 1.0});
  const Box standard{Interval(-1.0, 1.0)};
  const BernsteinPatch patch = garloff_coefficients(sq, standard);
  REQUIRE(patch.coeffs.size() == 3);
  CHECK(patch.coeffs[0] == 1.0);
  CHECK(patch.coeffs[1] == -1.0);
  CHECK(patch.coeffs[2] == 1.0);
  CHECK(enclosure(patch) == Interval(-1.0, 1.0));
  CHECK(bounded_range(sq, standard, 2) == Interval(0.0, 1.0));
}

TEST_CASE("constant and affine polynomials") {
  const PolySeries c = univariate({2.5});
  CHECK(enclosure(garloff_coefficients(c, {Interval(-3.0, 7.0)})) == Interval(2.5, 2.5));

  PolySeries affine(MultiIndex{1, 1, 1});
  affine.set({0, 0, 0}, 1.0);
  affine.set({1, 0, 0}, 2.0);
  affine.set({0, 1, 0}, -3.0);
  affine.set({0, 0, 1}, 0.5);
  const Box box{Interval(0.0, 1.0), Interval(-1.0, 2.0), Interval(1.0, 3.0)};
  // corners: max at (1, -1, 3) = 1 + 2 + 3 + 1.5, min at (0, 2, 1) = 1 - 6 + 0.5
  for (unsigned k : {1u, 2u, 5u}) {
    const Interval r = bounded_range(affine, box, k);
    CHECK(r.lo() == doctest::Approx(-4.5).epsilon(1e-14));
    CHECK(r.hi() == doctest::Approx(7.5).epsilon(1e-14));
  }
}

TEST_CASE("degenerate boxes are rejected") {
  const Box flat{Interval(0.0, 1.0), Interval(2.0, 2.0)};
  CHECK_THROWS_AS(garloff_coefficients(worked_example(), flat), DegenerateBox);
  CHECK_THROWS_AS(bounded_range(worked_example(), flat, 3), DegenerateBox);
  CHECK_THROWS_AS(bounded_range(worked_example(), Box(2, Interval(-1.0, 1.0)), 0),
                  InvalidArgument);
  CHECK_THROWS_AS(garloff_coefficients(worked_example(), Box{Interval(0.0, 1.0)}),
                  InvalidArgument);
}

TEST_CASE("patch evaluation matches the power form") {
  auto g = test::rng(30);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = test::uniform_int(g, 1, 3);
    const PolySeries p = test::random_poly(g, n, 5);
    const Box box = random_box(g, n);
    const BernsteinPatch patch = garloff_coefficients(p, box);
    for (int s = 0; s < 20; ++s) {
      const auto x = random_point(g, box);
      CHECK(patch.evaluate(x) == doctest::Approx(p.evaluate(x)).epsilon(1e-9).scale(1.0));
    }
  }
}

TEST_CASE("property: enclosure soundness and subdivision monotonicity") {
  auto g = test::rng(31);
  std::size_t violations = 0;
  for (int trial = 0; trial < 250; ++trial) {
    const std::size_t n = test::uniform_int(g, 1, 3);
    const PolySeries p = test::random_poly(g, n, 5);
    const Box box = random_box(g, n);
    const Interval r1 = bounded_range(p, box, 1);
    const Interval r2 = bounded_range(p, box, 2);
    const Interval r4 = bounded_range(p, box, 4);
    for (int s = 0; s < 1000; ++s) {
      const double v = p.evaluate(random_point(g, box));
      for (const Interval& r : {r1, r2, r4}) {
        if (v < r.lo() - 1e-9 || v > r.hi() + 1e-9) ++violations;
      }
    }
    CHECK(r2.lo() >= r1.lo() - 1e-12);
    CHECK(r2.hi() <= r1.hi() + 1e-12);
    CHECK(r4.lo() >= r2.lo() - 1e-12);
    CHECK(r4.hi() <= r2.hi() + 1e-12);
  }
  CHECK(violations == 0);
}

TEST_CASE("property: corner coefficients equal vertex values") {
  auto g = test::rng(32);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = test::uniform_int(g, 1, 3);
    const PolySeries p = test::random_poly(g, n, 5);
    const Box box = random_box(g, n);
    const BernsteinPatch patch = garloff_coefficients(p, box);
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      MultiIndex corner(n);
      std::vector<double> vertex(n);
      for (std::size_t d = 0; d < n; ++d) {
        const bool high = mask & (1u << d);
        corner[d] = high ? patch.degree[d] : 0;
        vertex[d] = high ? box[d].hi() : box[d].lo();
      }
      CHECK(std::abs(patch.coeff(corner) - p.evaluate(vertex)) < 1e-9);
    }
  }
}

TEST_CASE("property: basis conversion is exact") {
  auto g = test::rng(33);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = test::uniform_int(g, 1, 3);
    const unsigned p = test::uniform_int(g, 1, 6);
    const PCBasis basis(n, p);
    std::vector<double> y(basis.size());
    for (double& c : y) c = test::uniform(g, -1.0, 1.0);
    const PCExpansion pce(basis, y, Box(n, Interval(-1.0, 1.0)));
    const PolySeries power = legendre_to_power(pce);
    for (int s = 0; s < 100; ++s) {
      std::vector<double> xi(n);
      for (double& v : xi) v = test::uniform(g, -1.0, 1.0);
      CHECK(std::abs(power.evaluate(xi) - pce.evaluate(xi)) < 1e-10);
    }
  }
}

TEST_CASE("box-14 surrogate enclosure converges") {
  const Expr f = parse("(a+b)^a", {"a", "b"});
  const PCExpansion pce = project(f, {{"a", {0.5, 1.0}}, {"b", {0.6, 0.8}}}, 5, 20);
  const PolySeries poly = legendre_to_power(pce);
  const Interval r = bounded_range(poly, Box(2, Interval(-1.0, 1.0)), 11);
  const double oracle_width = 1.8 - std::pow(1.1, 0.5);
  CHECK(r.width() < 1.05 * oracle_width);
  CHECK(r.width() > 0.95 * oracle_width);
}
