#include <cmath>

#include "doctest.h"
#include "symkit/functionals.hpp"
#include "symkit/random.hpp"
#include "symkit/rearrange.hpp"
#include "symkit/stability.hpp"
#include "symkit/suite.hpp"

using namespace symkit;

TEST_CASE("asymmetry of translated balls vanishes") {
  const Grid g = Grid::cube(2, 24, 0.25);
  const ScalarField ball = bathtub_fill(2.0, g);
  CHECK(asymmetry(ball) == 0.0);
  std::vector<double> v(g.size(), 0.0);
  for_each_index(g, [&](const Index &i, std::size_t f) {
    const Index j{i[0] - 3, i[1] + 2, 0};
    if (g.contains(j))
      v[f] = ball.at(j);
  });
  const AsymmetryResult r = asymmetry_search(ScalarField(g, v));
  CHECK(r.value == 0.0);
  CHECK(r.shift[0] == 3);
  CHECK(r.shift[1] == -2);
}

TEST_CASE("asymmetry search matches exhaustive search") {
  const Grid g = Grid::cube(2, 16, 0.25);
  for (int k = 0; k < 8; ++k) {
    Rng rng(derive_seed(1, "asym", k));
    const ScalarField rho = transform(random_cells(rng, g, 0.3, false), [](double x) { return std::min(1.0, x); });
    CHECK(asymmetry(rho) == asymmetry_brute_force(rho));
    CHECK(asymmetry(rho) >= 0.0);
    CHECK(asymmetry(rho) <= 1.0);
  }
}

TEST_CASE("deficits vanish on balls and are nonnegative otherwise") {
  const Grid g = Grid::cube(2, 32, 0.25);
  const ScalarField ball = bathtub_fill(3.0, g);
  const DeficitReport a = ball_kernel_deficit(ball, 0.8);
  CHECK(a.deficit == doctest::Approx(0.0).scale(a.right));
  CHECK(a.ratio == 0.0);
  CHECK(a.parameter == "R");
  CHECK(a.mass == doctest::Approx(3.0));
  CHECK(a.window > 0.0);

  const ScalarField split = ScalarField::sample(g, [](const Point &x) {
    return std::hypot(x[0] - 1.5, x[1]) < 0.7 || std::hypot(x[0] + 1.5, x[1]) < 0.7 ? 1.0 : 0.0;
  });
  const DeficitReport b = riesz_deficit(split, 1.0);
  CHECK(b.deficit > 0.0);
  CHECK(b.asymmetry > 0.0);
  CHECK(b.ratio > 0.0);

  const GridSet s = superlevel_set(split, 0.5);
  const DeficitReport c = fractional_isoperimetric_deficit(s, 0.5);
  CHECK(c.deficit > 0.0);
  CHECK(c.left == doctest::Approx(fractional_perimeter(s, 0.5)));
  CHECK(c.right == doctest::Approx(fractional_perimeter(set_symmetrize(s), 0.5)));
  CHECK_THROWS_AS(riesz_deficit(ScalarField(g), 1.0), DomainError);
}

TEST_CASE("residual distribution of a plateau") {
  const Grid g = Grid::cube(2, 40, 0.1);
  const ScalarField u = ScalarField::sample(g, [](const Point &x) {
    return std::min(1.0, std::max(0.0, 1.5 - std::hypot(x[0], x[1])));
  });
  const ResidualDistribution r = residual_distribution(u);
  CHECK(r.eta == doctest::Approx(0.1));
  CHECK(r.levels.front() == 0.0);
  // the flat top {|x| < 0.5} keeps zero gradient at every level below 1
  const double top = r(0.99);
  CHECK(top > 0.5);
  CHECK(top < std::numbers::pi * 0.25 * 1.2);
  CHECK(r(1.0) == 0.0);
}

TEST_CASE("continuity probe amplitudes halve") {
  const Grid g = Grid::cube(2, 24, 4.0 / 24);
  const ScalarField u = ScalarField::sample(g, [](const Point &x) { return std::exp(-2 * (x[0] * x[0] + x[1] * x[1])); });
  const ContinuityProbe p = continuity_probe(u, ProbeKind::Smooth, 4, ProbeSpace::wsp(0.5, 2.0));
  REQUIRE(p.amplitudes.size() == 4);
  for (int k = 0; k < 4; ++k)
    CHECK(p.amplitudes[k] == std::ldexp(1.0, -k));
  for (int k = 1; k < 4; ++k)
    CHECK(p.perturbation[k] == doctest::Approx(0.5 * p.perturbation[k - 1]));
  CHECK(p.distance.back() < p.distance.front());
  CHECK_THROWS_AS(continuity_probe(u, ProbeKind::Smooth, 0, ProbeSpace::w1p(2.0)), DomainError);
}
