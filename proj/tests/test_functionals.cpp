#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/zeta.hpp>

#include "doctest.h"
#include "symkit/functionals.hpp"
#include "symkit/random.hpp"
#include "symkit/rearrange.hpp"

using namespace symkit;

namespace {

/// O(N^2) reference for sum f(x) K(x - y) g(y) h^2d with K given pointwise.
double direct_triple(const ScalarField &f, const std::function<double(double)> &k, const ScalarField &g,
                     double central) {
  const Grid &grid = f.grid();
  double s = 0.0;
  for (std::size_t a = 0; a < f.size(); ++a)
    for (std::size_t b = 0; b < g.size(); ++b) {
      const Point x = grid.center(grid.unflat(a)), y = grid.center(grid.unflat(b));
      double r2 = 0.0;
      for (int j = 0; j < grid.dim; ++j)
        r2 += (x[j] - y[j]) * (x[j] - y[j]);
      s += f[a] * g[b] * (a == b ? central : k(std::sqrt(r2)));
    }
  return s * grid.cell_volume() * grid.cell_volume();
}

} // namespace

TEST_CASE("lp norms and pairings") {
  const Grid g = Grid::cube(1, 4, 0.5);
  const ScalarField f(g, {1.0, -2.0, 0.0, 2.0});
  CHECK(lp_norm(f, 1.0) == doctest::Approx(2.5));
  CHECK(lp_norm(f, 2.0) == doctest::Approx(std::sqrt(4.5)));
  CHECK(lp_norm(f, INFINITY) == 2.0);
  CHECK_THROWS_AS(lp_norm(f, 0.0), DomainError);
  const ScalarField h(g, {1.0, 1.0, 1.0, 1.0});
  CHECK(pairing(f, h) == doctest::Approx(0.5));
  CHECK(supermodular_pairing(SupermodularF::product(), f, h) == doctest::Approx(0.5));
  CHECK(hanner_sum(f, h, 2.0) == doctest::Approx(2.0 * (std::pow(lp_norm(f, 2.0), 2) + 2.0)));
}

TEST_CASE("convex profiles") {
  const ConvexProfile j = ConvexProfile::piecewise_linear({0.0, 1.0, 3.0}, {0.5, 1.0, 4.0});
  CHECK(j(0.0) == 0.0);
  CHECK(j(0.5) == doctest::Approx(0.25));
  CHECK(j(2.0) == doctest::Approx(1.5));
  CHECK(j(4.0) == doctest::Approx(2.5 + 4.0));
  CHECK(ConvexProfile::power(1.5)(4.0) == doctest::Approx(8.0));
  CHECK_THROWS_AS(ConvexProfile::piecewise_linear({0.0, 1.0}, {2.0, 1.0}), DomainError);
  CHECK_THROWS_AS(ConvexProfile::power(0.5), DomainError);

  const SupermodularF F = SupermodularF::j_expansion(ConvexProfile::power(2.0));
  CHECK(F(2.0, 3.0) == doctest::Approx(2.0 * 2.0 * 3.0));
  CHECK(SupermodularF::min()(2.0, 3.0) == 2.0);
}

TEST_CASE("convolution matches the direct sum") {
  Rng rng(21);
  const Grid a = Grid::cube(2, 6, 0.5), b(2, {3, 5}, 0.5);
  const ScalarField g = random_cells(rng, a, 0.8, true);
  const ScalarField h = random_cells(rng, b, 0.8, true);
  const ScalarField c = convolve(g, h);
  REQUIRE(c.grid().extents[0] == 8);
  REQUIRE(c.grid().extents[1] == 10);
  for_each_index(c.grid(), [&](const Index &z, std::size_t f) {
    double s = 0.0;
    for_each_index(b, [&](const Index &y, std::size_t fy) {
      // output cell z pairs with operand cells i, y where i + y = z after recentering
      const Index i{z[0] - y[0], z[1] - y[1], 0};
      if (a.contains(i))
        s += g.at(i) * h[fy];
    });
    CHECK(c[f] == doctest::Approx(s * 0.25).epsilon(1e-12).scale(1.0));
  });
}

TEST_CASE("convolution padding is checked") {
  const Grid a = Grid::cube(1, 8, 1.0);
  const ScalarField g(a, {1, 1, 1, 1, 1, 1, 1, 1});
  CHECK_THROWS_AS(convolve(g, g, 2), InsufficientPadding);
  CHECK_NOTHROW(convolve(g, g, 8));
  CHECK_THROWS_AS(convolve(g, ScalarField(Grid::cube(1, 8, 0.5))), GridMismatch);
}

TEST_CASE("riesz triple matches the direct sum") {
  Rng rng(23);
  const Grid grid = Grid::cube(2, 7, 0.4);
  const ScalarField f = random_cells(rng, grid, 0.7, false);
  const ScalarField h = random_cells(rng, grid, 0.7, false);
  const double t = 0.3;
  const auto gauss = [&](double r) { return std::exp(-r * r / (4 * t)) / (4 * std::numbers::pi * t); };
  CHECK(riesz_triple(f, HeatGaussian{t}, h) ==
        doctest::Approx(direct_triple(f, gauss, h, gauss(0.0))).epsilon(1e-12));
  const double c = kernel_central_value(PowerLaw{1.0}, 2, 0.4);
  CHECK(riesz_triple(f, PowerLaw{1.0}, h) ==
        doctest::Approx(direct_triple(f, [](double r) { return 1.0 / r; }, h, c)).epsilon(1e-12));
}

TEST_CASE("kernel validation and central values") {
  CHECK_THROWS_AS(validate(PowerLaw{1.0}, 1), DomainError);
  CHECK_THROWS_AS(validate(FracKernel{1.2, 2.0}, 1), DomainError);
  CHECK_THROWS_AS(validate(HeatGaussian{-1.0}, 2), DomainError);
  CHECK_NOTHROW(validate(BallIndicator{0.5}, 3));
  // 32-point midpoint rule for the cell average of |z|^-1/2, which is 2 (h/2)^-1/2 exactly
  const double h = 0.2;
  double mid = 0.0;
  for (int k = 0; k < 32; ++k)
    mid += std::pow(std::fabs((k + 0.5) / 32.0 - 0.5) * h, -0.5) / 32.0;
  const double c = kernel_central_value(PowerLaw{0.5}, 1, h);
  CHECK(c == doctest::Approx(mid).epsilon(1e-12));
  CHECK(c < 2.0 / std::sqrt(h / 2));
  CHECK(kernel_central_value(BallIndicator{1.0}, 2, h) == doctest::Approx(1.0));
  CHECK(kernel_central_value(FracKernel{0.5, 2.0}, 1, h) == 0.0);
  CHECK(kernel_profile(PowerGrowth{2.0}, 2, 3.0) == doctest::Approx(9.0));
}

TEST_CASE("lattice zeta against closed forms") {
  using boost::math::zeta;
  CHECK(lattice_zeta(1, 2.0) == doctest::Approx(std::numbers::pi * std::numbers::pi / 3).epsilon(1e-10));
  CHECK(lattice_zeta(1, 1.5) == doctest::Approx(2 * zeta(1.5)).epsilon(1e-10));
  // sum over Z^2 of |z|^-2s is 4 zeta(s) beta(s), and beta(2) is Catalan's constant
  const double catalan = boost::math::constants::catalan<double>();
  CHECK(lattice_zeta(2, 4.0) == doctest::Approx(4 * zeta(2.0) * catalan).epsilon(1e-10));
  CHECK_THROWS_AS(lattice_zeta(2, 2.0), DomainError);
}

TEST_CASE("fractional functionals") {
  using boost::math::zeta;
  const double h = 0.25, s = 0.4;
  const Grid g = Grid::cube(1, 9, h);
  GridSet one(g);
  one = GridSet::from_predicate(g, [](const Point &x) { return std::fabs(x[0]) < 0.1; });
  REQUIRE(one.count() == 1);
  CHECK(fractional_perimeter(one, s) == doctest::Approx(std::pow(h, 1 - s) * 2 * zeta(1 + s)).epsilon(1e-9));
  CHECK_THROWS_AS(fractional_perimeter(GridSet(g), s), DomainError);

  Rng rng(29);
  const GridSet a = superlevel_set(random_cells(rng, Grid::cube(2, 10, 0.3), 0.5, false), 0.0);
  CHECK(fractional_seminorm(indicator(a), 0.25, 2.0) ==
        doctest::Approx(2 * fractional_perimeter(a, 0.5)).epsilon(1e-10));
  CHECK_THROWS_AS(fractional_seminorm(indicator(a), 1.0, 2.0), DomainError);
}

TEST_CASE("perimeter, gradient and Minkowski content") {
  const double h = 0.1;
  const Grid g = Grid::cube(2, 20, h);
  const GridSet sq = GridSet::from_predicate(g, [](const Point &x) { return std::fabs(x[0]) < 0.5 && std::fabs(x[1]) < 0.5; });
  REQUIRE(sq.count() == 100);
  CHECK(perimeter(sq) == doctest::Approx(4.0));
  // forward differences merge the two jumps at the upper corner into one cell
  const double tv = gradient_pnorm(indicator(sq), 1.0);
  CHECK(tv == doctest::Approx(4.0 - (2 - std::sqrt(2.0)) * h));

  const Grid line = Grid::cube(1, 5, h);
  const ScalarField spike(line, {0, 0, 1, 0, 0});
  CHECK(gradient_pnorm(spike, 2.0) == doctest::Approx(std::sqrt(2.0 / h)));
  CHECK(gradient_pnorm(spike, INFINITY) == doctest::Approx(1.0 / h));

  const Grid fine = Grid::cube(2, 200, 0.02);
  const GridSet disk = GridSet::from_predicate(fine, [](const Point &x) { return std::hypot(x[0], x[1]) < 1.0; });
  CHECK(minkowski_content(disk, 0.06) == doctest::Approx(2 * std::numbers::pi).epsilon(0.05));
  CHECK_THROWS_AS(minkowski_content(disk, 0.01), DomainError);
}

TEST_CASE("heat pairing of a single cell") {
  const double h = 0.5, t = 0.7;
  const Grid g = Grid::cube(2, 5, h);
  ScalarField u(g, std::vector<double>(25, 0.0));
  std::vector<double> v(25, 0.0);
  v[12] = 1.0;
  u = ScalarField(g, v);
  CHECK(heat_pairing(u, t) == doctest::Approx(std::pow(h, 4) / (4 * std::numbers::pi * t)));
}

TEST_CASE("Dirichlet spectrum of an interval") {
  const int n = 40;
  const double h = 1.0 / (n + 1);
  const Grid g = Grid::cube(1, n, h);
  const GridSet all = GridSet::from_predicate(g, [](const Point &) { return true; });
  const std::vector<double> ev = dirichlet_spectrum(all, ScalarField(g), 5);
  REQUIRE(ev.size() == 5);
  for (int k = 1; k <= 5; ++k) {
    const double exact = 4 / (h * h) * std::pow(std::sin(k * std::numbers::pi / (2.0 * (n + 1))), 2);
    CHECK(ev[k - 1] == doctest::Approx(exact).epsilon(1e-10));
  }
  const std::vector<double> full = dirichlet_spectrum(all, ScalarField(g));
  CHECK(full.size() == std::size_t(n));
  double tr = 0.0;
  for (double l : full)
    tr += std::exp(-0.01 * l);
  CHECK(heat_trace(all, ScalarField(g), 0.01) == doctest::Approx(tr));
  CHECK(heat_trace_from_spectrum(full, 0.01) == doctest::Approx(tr));

  // a constant potential shifts every eigenvalue
  const std::vector<double> shifted =
      dirichlet_spectrum(all, ScalarField::sample(g, [](const Point &) { return 3.0; }), 5);
  for (int k = 0; k < 5; ++k)
    CHECK(shifted[k] == doctest::Approx(ev[k] + 3.0));

  const Grid big = Grid::cube(2, 80, 0.1);
  CHECK_THROWS_AS(dirichlet_spectrum(GridSet::from_predicate(big, [](const Point &) { return true; }), ScalarField(big), 1),
                  DomainError);
}

TEST_CASE("energies") {
  const double h = 0.5;
  const Grid g = Grid::cube(1, 7, h);
  std::vector<double> v(7, 0.0);
  v[1] = 1.0;
  v[4] = 2.0;
  const ScalarField rho(g, v);
  const double r = 3 * h;
  CHECK(power_energy(rho, 2.0) == doctest::Approx(2 * 2.0 * r * r * h * h));
  CHECK(ball_kernel_energy(rho, 1.0) == doctest::Approx((1.0 + 4.0) * h * h));
  CHECK(ball_kernel_energy(rho, 2.0) == doctest::Approx((1.0 + 4.0 + 4.0) * h * h));
  const double c = kernel_central_value(PowerLaw{0.5}, 1, h);
  CHECK(riesz_energy(rho, 0.5) == doctest::Approx((5.0 * c + 4.0 / std::sqrt(r)) * h * h));
  CHECK_THROWS_AS(choquard_energy(rho), DomainError);
}

TEST_CASE("weighted F energy with a point weight") {
  Rng rng(31);
  const Grid g = Grid::cube(1, 6, 0.5);
  const ScalarField f = random_cells(rng, g, 1.0, false), u = random_cells(rng, g, 1.0, false);
  // W(x - y) is 1 on the diagonal and 0 elsewhere on the lattice
  const ScalarField w(Grid::cube(1, 3, 0.5), {0.0, 1.0, 0.0});
  const double e = weighted_F_energy(SupermodularF::product(), f, u, w, 1.0, -1.0);
  CHECK(e == doctest::Approx(pairing(f, u) * 0.5));
}

TEST_CASE("BLL integral") {
  const Grid g = Grid::cube(1, 8, 0.25);
  const ScalarField f = ScalarField::sample(g, [](const Point &x) { return std::fabs(x[0]) < 0.5 ? 1.0 : 0.0; });
  BLLSpec one{1, 1, {1.0}, {f}};
  const MCEstimate m = bll_integral(one, 10000, 1);
  CHECK(m.value == doctest::Approx(1.0));
  CHECK(m.std_error == doctest::Approx(0.0));

  Rng rng(37);
  const ScalarField a = random_cells(rng, g, 0.8, false), b = random_cells(rng, g, 0.8, false);
  BLLSpec pair{2, 2, {1.0, 0.0, 1.0, -1.0}, {a, b}};
  const MCEstimate x = bll_integral(pair, 200000, 5, 1);
  const MCEstimate y = bll_integral(pair, 200000, 5, 4);
  CHECK(x.value == y.value);
  CHECK(x.std_error == y.std_error);
  // integral of a(x) b(x - y) over both variables factorizes
  CHECK(std::fabs(x.value - lp_norm(a, 1.0) * lp_norm(b, 1.0)) <= 4 * x.std_error);

  BLLSpec bad{2, 1, {1.0, 0.0}, {a, b}};
  CHECK_THROWS_AS(bad.validate(), DomainError);
}
