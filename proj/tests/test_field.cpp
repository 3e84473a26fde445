#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "doctest.h"
#include "symkit/field.hpp"
#include "symkit/field_io.hpp"
#include "symkit/random.hpp"

using namespace symkit;

TEST_CASE("grid geometry") {
  SUBCASE("centers are symmetric about the origin for both parities") {
    for (int n : {4, 5}) {
      const Grid g = Grid::cube(1, n, 0.5);
      for (int i = 0; i < n; ++i)
        CHECK(g.coord(0, i) == doctest::Approx(-g.coord(0, n - 1 - i)));
      CHECK(g.half_width(0) == doctest::Approx(0.25 * n));
    }
  }
  SUBCASE("flat and unflat are inverse") {
    const Grid g(3, {3, 4, 5}, 1.0);
    for (std::size_t f = 0; f < g.size(); ++f)
      CHECK(g.flat(g.unflat(f)) == f);
    CHECK(g.flat({1, 2, 3}) == (1 * 4 + 2) * 5 + 3);
  }
  SUBCASE("doubled radius matches the real center") {
    const Grid g(2, {6, 7}, 0.3);
    for_each_index(g, [&](const Index &i, std::size_t) {
      const Point x = g.center(i);
      const double r2 = (x[0] * x[0] + x[1] * x[1]) / (0.15 * 0.15);
      CHECK(double(g.doubled_radius2(i)) == doctest::Approx(r2));
    });
  }
  SUBCASE("trailing axes collapse") {
    const Grid g(1, {7, 9, 9}, 1.0);
    CHECK(g.size() == 7);
    CHECK(g.displacement_grid().extents[0] == 13);
    CHECK(g.on_displacement_lattice());
  }
  CHECK_THROWS_AS(Grid(4, {1, 1, 1}, 1.0), DomainError);
  CHECK_THROWS_AS(Grid(1, {3, 1, 1}, 0.0), DomainError);
  CHECK_THROWS_AS(Grid(2, {3, 0, 1}, 1.0), DomainError);
}

TEST_CASE("field construction rejects bad input") {
  const Grid g = Grid::cube(1, 3, 1.0);
  CHECK_THROWS_AS(ScalarField(g, {1.0, 2.0}), DomainError);
  CHECK_THROWS_AS(ScalarField(g, {1.0, NAN, 0.0}), DomainError);
  CHECK_FALSE(ScalarField(g, {1.0, -2.0, 0.0}).nonneg());
  CHECK(ScalarField(g, {1.0, 2.0, 0.0}).nonneg());
  CHECK(ScalarField(g, {1.0, 2.0, 3.0}).at_or_zero({3, 0, 0}) == 0.0);
  CHECK_THROWS_AS(ScalarField(g) + ScalarField(Grid::cube(1, 4, 1.0)), GridMismatch);
}

TEST_CASE("distribution function") {
  const Grid g = Grid::cube(1, 6, 0.5);
  const ScalarField f(g, {0.0, 2.0, -1.0, 2.0, 3.0, 0.0});
  const DistributionFunction mu = distribution_function(f);
  CHECK(mu.levels == std::vector<double>{0.0, 1.0, 2.0, 3.0});
  CHECK(mu.measures == std::vector<double>{2.0, 1.5, 0.5, 0.0});
  CHECK(mu(0.5) == 2.0);
  CHECK(mu(2.0) == 0.5);
  CHECK(mu(10.0) == 0.0);
  CHECK(measure(superlevel_set(f, 1.0)) == 1.5);
  CHECK(measure(support(f)) == 2.0);
}

TEST_CASE("layer cake reconstruction") {
  Rng rng(7);
  const Grid g = Grid::cube(2, 12, 0.25);
  const ScalarField f = random_cells(rng, g, 0.6, true, 5);
  const ScalarField a = abs(f);
  const ScalarField exact = layer_cake_reconstruct(f, 1000);
  for (std::size_t k = 0; k < f.size(); ++k)
    CHECK(exact[k] == doctest::Approx(a[k]).epsilon(1e-14));

  // fewer layers round every value up to the next retained level
  const ScalarField coarse = layer_cake_reconstruct(f, 2);
  std::set<double> kept;
  for (std::size_t k = 0; k < f.size(); ++k) {
    CHECK(coarse[k] >= a[k] - 1e-14);
    if (a[k] > 0.0)
      kept.insert(coarse[k]);
  }
  CHECK(kept.size() <= 2);
}

TEST_CASE("pointwise operations") {
  const Grid g = Grid::cube(1, 3, 1.0);
  const ScalarField a(g, {1.0, -2.0, 3.0}), b(g, {0.5, 0.5, 0.5});
  CHECK((a + b)[1] == -1.5);
  CHECK((a - b)[2] == 2.5);
  CHECK((2.0 * a)[0] == 2.0);
  CHECK(transform(a, [](double v) { return v * v; })[1] == 4.0);
  CHECK(abs(a)[1] == 2.0);
  CHECK(indicator(superlevel_set(a, 1.5))[1] == 1.0);
}

TEST_CASE("file round trip is bit exact") {
  Rng rng(11);
  const Grid g(3, {3, 4, 2}, 0.1);
  const ScalarField f = random_cells(rng, g, 0.8, true);
  std::stringstream ss;
  write_field(ss, f);
  const ScalarField back = read_field(ss);
  CHECK(back.grid() == g);
  for (std::size_t k = 0; k < f.size(); ++k)
    CHECK(back[k] == f[k]);

  const GridSet a = superlevel_set(f, 0.3);
  std::stringstream st;
  write_set(st, a);
  const GridSet b = read_set(st);
  CHECK(std::equal(a.mask().begin(), a.mask().end(), b.mask().begin(), b.mask().end()));
}

TEST_CASE("parse errors name the line") {
  auto line_of = [](const std::string &text) {
    std::istringstream is(text);
    try {
      read_field(is);
    } catch (const ParseError &e) {
      return e.line();
    }
    return std::size_t(-1);
  };
  CHECK(line_of("SYMKIT-FIELD 2\n1\n2\n1\n0\n0\n") == 1);
  CHECK(line_of("SYMKIT-FIELD 1\n4\n2\n1\n0\n0\n") == 2);
  CHECK(line_of("SYMKIT-FIELD 1\n1\n2\n1\n0\nxyz\n") == 6);
  CHECK(line_of("SYMKIT-FIELD 1\n1\n2\n-1\n0\n0\n") == 4);
  CHECK(line_of("SYMKIT-FIELD 1\n1\n3\n1\n0\n0\n") > 0);
}
