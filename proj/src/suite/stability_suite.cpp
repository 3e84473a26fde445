#include <algorithm>
#include <cmath>

#include "common.hpp"
#include "symkit/functionals.hpp"
#include "symkit/rearrange.hpp"
#include "symkit/stability.hpp"

namespace symkit {
namespace {

nlohmann::ordered_json deficit_json(const DeficitReport &d) {
  return {{"left", d.left},           {"right", d.right},
          {"deficit", d.deficit},     {"asymmetry", d.asymmetry},
          {"ratio", d.ratio},         {"mass", d.mass},
          {"window", d.window},       {"parameter", d.parameter},
          {"parameter_value", d.parameter_value}};
}

ScalarField random_density(Rng &rng, const Grid &grid, const RandomFieldParams &fields) {
  const BumpSum b = random_bumps(rng, grid.dim, grid.half_width(0), fields);
  return transform(b.sample(grid), [](double v) { return std::min(1.0, 1.5 * v); });
}

ExperimentReport equality_cases(const SuiteConfig &c) {
  ExperimentReport r = suite::start_report(c, "stability/equality");
  suite::Stopwatch clock;
  const double slack = c.slack_for("stability").front();
  const Grid grid = Grid::cube(2, 64, 6.0 / 64);
  const ScalarField ball = bathtub_fill(3.0, grid);
  const DeficitReport a = ball_kernel_deficit(ball, 1.0);
  const DeficitReport b = riesz_deficit(ball, 1.0);
  const GridSet prefix = superlevel_set(bathtub_fill(2.0, grid), 0.0);
  const DeficitReport s = fractional_isoperimetric_deficit(set_symmetrize(prefix), 0.5);
  double worst = 0.0;
  for (const DeficitReport *d : {&a, &b, &s})
    worst = std::max(worst, std::fabs(d->deficit) / std::max(std::fabs(d->right), 1e-300));
  r.data["ball_kernel"] = deficit_json(a);
  r.data["riesz"] = deficit_json(b);
  r.data["fractional_isoperimetric"] = deficit_json(s);
  r.value = worst;
  r.tolerance = slack;
  r.verdict = worst <= slack ? Verdict::Pass : Verdict::Fail;
  r.wall_seconds = clock.seconds();
  return r;
}

ExperimentReport two_ball_sweep(const SuiteConfig &c) {
  ExperimentReport r = suite::start_report(c, "stability/two-ball");
  suite::Stopwatch clock;
  const double radius = 1.0;
  const Grid grid = Grid::cube(2, 128, 6.0 / 128);
  const std::vector<double> eps = {0.05, 0.1, 0.2};
  const auto reports = suite::parallel_map<std::pair<DeficitReport, DeficitReport>>(
      eps.size(), c.jobs, [&](std::size_t k) {
        const double e = eps[k];
        const ScalarField rho = ScalarField::sample(grid, [&](const Point &x) {
          const double a = std::hypot(x[0] - e * radius, x[1]);
          const double b = std::hypot(x[0] + e * radius, x[1]);
          return a < radius || b < radius ? 1.0 : 0.0;
        });
        return std::pair{ball_kernel_deficit(rho, radius), riesz_deficit(rho, 1.0)};
      });
  nlohmann::ordered_json members = nlohmann::ordered_json::array();
  double lo = INFINITY, hi = 0.0;
  for (std::size_t k = 0; k < eps.size(); ++k) {
    members.push_back({{"epsilon", eps[k]},
                       {"ball_kernel", deficit_json(reports[k].first)},
                       {"riesz", deficit_json(reports[k].second)}});
    lo = std::min(lo, reports[k].first.ratio);
    hi = std::max(hi, reports[k].first.ratio);
  }
  const double spread = lo > 0.0 ? hi / lo : INFINITY;
  r.data["radius"] = radius;
  r.data["grid"] = {{"d", 2}, {"n", 128}, {"h", grid.spacing}};
  r.data["members"] = members;
  r.data["ratio_spread"] = std::isfinite(spread) ? nlohmann::ordered_json(spread) : nlohmann::ordered_json("inf");
  r.value = std::isfinite(spread) ? spread : 1e300;
  r.tolerance = 3.0;
  r.verdict = lo > 0.0 && spread <= 3.0 ? Verdict::Pass : Verdict::Fail;
  r.wall_seconds = clock.seconds();
  return r;
}

ExperimentReport asymmetry_audit(const SuiteConfig &c) {
  ExperimentReport r = suite::start_report(c, "stability/asymmetry-audit");
  suite::Stopwatch clock;
  const Grid grid = Grid::cube(2, 24, 0.25);
  const auto pairs = suite::parallel_map<std::pair<double, double>>(
      std::size_t(c.asymmetry_cases), c.jobs, [&](std::size_t k) {
        Rng rng(derive_seed(c.seed, "stability/asymmetry", k));
        RandomFieldParams p = c.fields;
        p.bumps = rng.integer(1, 3);
        p.support_fraction = 0.6;
        const ScalarField base = random_density(rng, grid, p);
        std::vector<double> v(base.values().begin(), base.values().end());
        for (double &x : v)
          x = std::clamp(x * rng.uniform(0.7, 1.0), 0.0, 1.0);
        const ScalarField rho(grid, std::move(v));
        return std::pair{asymmetry(rho), asymmetry_brute_force(rho)};
      });
  int mismatches = 0;
  nlohmann::ordered_json values = nlohmann::ordered_json::array();
  for (const auto &[search, brute] : pairs) {
    mismatches += search != brute;
    values.push_back({search, brute});
  }
  r.data["cases"] = c.asymmetry_cases;
  r.data["search_vs_brute_force"] = values;
  r.data["mismatches"] = mismatches;
  r.value = mismatches;
  r.tolerance = 0.0;
  r.verdict = mismatches == 0 ? Verdict::Pass : Verdict::Fail;
  r.wall_seconds = clock.seconds();
  return r;
}

/// lambda int_0^inf R^(-lambda-1) B(R) dR with B the ball-kernel energy, by the
/// midpoint rule in log R. B vanishes below the nearest central-cell subsample.
double layered_riesz_energy(const ScalarField &rho, double lambda, int points, int jobs) {
  const Grid &g = rho.grid();
  const double h = g.spacing;
  double diameter = 0.0;
  for (int k = 0; k < g.dim; ++k)
    diameter += std::pow(g.extents[k] * h, 2);
  const double r0 = h / 128.0, r1 = 1.01 * std::sqrt(diameter);
  const double du = std::log(r1 / r0) / points;
  const auto terms = suite::parallel_map<double>(std::size_t(points), jobs, [&](std::size_t k) {
    const double R = r0 * std::exp((double(k) + 0.5) * du);
    return lambda * std::pow(R, -lambda) * ball_kernel_energy(rho, R) * du;
  });
  double sum = 0.0;
  for (double t : terms)
    sum += t;
  double mass = 0.0;
  for (double v : rho.values())
    mass += v;
  mass *= g.cell_volume();
  return sum + mass * mass * std::pow(r1, -lambda);
}

ExperimentReport layered_identity(const SuiteConfig &c, int d, int n, int points) {
  const std::string id = "stability/layered/d" + std::to_string(d);
  ExperimentReport r = suite::start_report(c, id);
  suite::Stopwatch clock;
  const Grid grid = Grid::cube(d, n, 6.0 / n);
  Rng rng(derive_seed(c.seed, id));
  const ScalarField rho = random_density(rng, grid, c.fields);
  const double lambda = 1.0;
  const double direct = riesz_energy(rho, lambda);
  const double layered = layered_riesz_energy(rho, lambda, points, c.jobs);
  const double rel = std::fabs(layered / direct - 1.0);
  r.data["lambda"] = lambda;
  r.data["grid"] = {{"d", d}, {"n", n}, {"h", grid.spacing}};
  r.data["quadrature_points"] = points;
  r.data["direct"] = direct;
  r.data["layered"] = layered;
  if (d == 3)
    r.data["riesz_deficit"] = deficit_json(riesz_deficit(rho, lambda));
  r.value = rel;
  r.tolerance = 0.01;
  r.verdict = rel <= 0.01 ? Verdict::Pass : Verdict::Fail;
  r.wall_seconds = clock.seconds();
  return r;
}

ExperimentReport fractional_deficits(const SuiteConfig &c) {
  ExperimentReport r = suite::start_report(c, "stability/fractional-isoperimetric");
  suite::Stopwatch clock;
  const Grid grid = Grid::cube(2, 64, 6.0 / 64);
  const int cases = c.refine_cases;
  const auto reps = suite::parallel_map<DeficitReport>(std::size_t(cases), c.jobs, [&](std::size_t k) {
    Rng rng(derive_seed(c.seed, "stability/fractional", k));
    RandomFieldParams p = c.fields;
    p.bumps = 2;
    GridSet a = random_balls(rng, 2, grid.half_width(0), p).sample(grid);
    if (a.empty())
      a = set_symmetrize(superlevel_set(bathtub_fill(1.0, grid), 0.0));
    return fractional_isoperimetric_deficit(a, 0.5);
  });
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  double worst = 0.0;
  for (const auto &d : reps) {
    list.push_back(deficit_json(d));
    worst = std::max(worst, -d.deficit / std::max(d.right, 1e-300));
  }
  const double slack = c.slack_for("default").front();
  r.data["members"] = list;
  r.value = worst;
  r.tolerance = slack;
  r.verdict = worst <= slack ? Verdict::Pass : Verdict::Fail;
  r.wall_seconds = clock.seconds();
  return r;
}

} // namespace

double asymmetry_brute_force(const ScalarField &rho) {
  const Grid &g = rho.grid();
  double mass = 0.0;
  for (double v : rho.values())
    mass += v;
  mass *= g.cell_volume();
  if (mass == 0.0)
    return 0.0;
  const ScalarField ball = bathtub_fill(mass, g);
  double best = INFINITY;
  Index a{0, 0, 0};
  const Index lim{g.extents[0] - 1, g.dim > 1 ? g.extents[1] - 1 : 0, g.dim > 2 ? g.extents[2] - 1 : 0};
  for (a[0] = -lim[0]; a[0] <= lim[0]; ++a[0])
    for (a[1] = -lim[1]; a[1] <= lim[1]; ++a[1])
      for (a[2] = -lim[2]; a[2] <= lim[2]; ++a[2])
        best = std::min(best, bathtub_distance(rho, ball, a));
  return best / (2.0 * mass);
}

std::vector<ExperimentReport> run_stability(const SuiteConfig &c) {
  std::vector<ExperimentReport> out;
  out.push_back(equality_cases(c));
  out.push_back(two_ball_sweep(c));
  out.push_back(asymmetry_audit(c));
  out.push_back(layered_identity(c, 2, 48, 3000));
  out.push_back(layered_identity(c, 3, 32, 800));
  out.push_back(fractional_deficits(c));
  return out;
}

} // namespace symkit
