#include <cmath>
#include <numbers>

#include "ladder.hpp"
#include "symkit/functionals.hpp"
#include "symkit/rearrange.hpp"

namespace symkit {
namespace {

/// First positive zero of J_0 by bisection on its first sign change.
double bessel_j0_first_zero() {
  double a = 2.0, b = 3.0;
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    (std::cyl_bessel_j(0.0, m) > 0.0 ? a : b) = m;
  }
  return 0.5 * (a + b);
}

ExperimentReport faber_krahn(const SuiteConfig &c) {
  ExperimentReport r = suite::start_report(c, "spectral/faber-krahn");
  suite::Stopwatch clock;
  const int m = c.spectral_cells_per_unit;
  const double h = 1.0 / m;
  // the equal-area disk has radius 1/sqrt(pi) > 1/2
  const Grid grid = Grid::cube(2, 2 * ((13 * m / 10) / 2) + 4, h);
  const GridSet square = GridSet::from_predicate(
      grid, [](const Point &x) { return std::fabs(x[0]) < 0.5 && std::fabs(x[1]) < 0.5; });
  const GridSet disk = set_symmetrize(square);
  const ScalarField zero(grid);
  const double ls = dirichlet_spectrum(square, zero, 1).at(0);
  const double ld = dirichlet_spectrum(disk, zero, 1).at(0);
  const double j = bessel_j0_first_zero();
  const double as = 2.0 * std::numbers::pi * std::numbers::pi, ad = std::numbers::pi * j * j;
  const double rel = std::fabs((ls - ld) / (as - ad) - 1.0);

  r.data["h"] = h;
  r.data["cells"] = square.count();
  r.data["lambda1_square"] = ls;
  r.data["lambda1_disk"] = ld;
  r.data["analytic_square"] = as;
  r.data["analytic_disk"] = ad;
  r.data["gap"] = ls - ld;
  r.data["analytic_gap"] = as - ad;
  r.data["relative_gap_error"] = rel;
  r.value = rel;
  r.tolerance = 0.15;
  r.verdict = ls > ld && rel <= 0.15 ? Verdict::Pass : Verdict::Fail;
  r.wall_seconds = clock.seconds();
  return r;
}

ExperimentReport perimeter_fit(const SuiteConfig &c) {
  ExperimentReport r = suite::start_report(c, "spectral/perimeter");
  suite::Stopwatch clock;
  const int m = c.spectral_cells_per_unit;
  const double h = 1.0 / m;
  const Grid grid = Grid::cube(2, m + 4, h);
  const GridSet square = GridSet::from_predicate(
      grid, [](const Point &x) { return std::fabs(x[0]) < 0.5 && std::fabs(x[1]) < 0.5; });
  std::vector<double> ts;
  for (double k : {36.0, 49.0, 64.0, 81.0, 100.0})
    ts.push_back(k * h * h);
  const double per = heat_perimeter_estimate(square, ts);
  const double rel = std::fabs(per / 4.0 - 1.0);
  r.data["h"] = h;
  r.data["t"] = ts;
  r.data["estimate"] = per;
  r.data["exact"] = 4.0;
  r.value = rel;
  r.tolerance = 0.1;
  r.verdict = rel <= 0.1 ? Verdict::Pass : Verdict::Fail;
  r.wall_seconds = clock.seconds();
  return r;
}

} // namespace

std::vector<ExperimentReport> run_spectral(const SuiteConfig &c) {
  std::vector<ExperimentReport> out;
  out.push_back(faber_krahn(c));
  if (!c.ladder_for(2).empty())
    out.push_back(suite::ladder_experiment(
        c, "spectral", "heat-trace", 2,
        [&](std::size_t k, const Grid &grid) {
          Rng rng(derive_seed(c.seed, "spectral/heat-trace", k));
          return suite::heat_trace_comparison(suite::spectral_case(rng, k, grid, c.fields),
                                              {0.02, 0.05, 0.1, 0.2});
        },
        c.spectral_pairs));
  out.push_back(perimeter_fit(c));
  return out;
}

} // namespace symkit
