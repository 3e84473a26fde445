#include <cmath>

#include "common.hpp"
#include "symkit/functionals.hpp"
#include "symkit/kernel.hpp"
#include "symkit/rearrange.hpp"

namespace symkit {
namespace {

constexpr double kSlack = 1e-8;

ScalarField normalized(std::vector<double> v, const Grid &g) {
  double s = 0.0;
  for (double x : v)
    s += x * x;
  const double c = 1.0 / std::sqrt(s * g.cell_volume());
  for (double &x : v)
    x *= c;
  return ScalarField(g, std::move(v));
}

/// Zero-extension Laplacian matching the forward-difference gradient norm.
std::vector<double> laplacian(const ScalarField &u) {
  const Grid &g = u.grid();
  const double inv = 1.0 / (g.spacing * g.spacing);
  std::vector<double> out(u.size());
  for_each_index(g, [&](const Index &i, std::size_t f) {
    double s = -2.0 * g.dim * u[f];
    for (int k = 0; k < g.dim; ++k) {
      Index a = i, b = i;
      ++a[k];
      --b[k];
      s += u.at_or_zero(a) + u.at_or_zero(b);
    }
    out[f] = s * inv;
  });
  return out;
}

} // namespace

ChoquardTrace choquard_descent(const ScalarField &start, const ChoquardParams &params) {
  const Grid &g = start.grid();
  if (g.dim != 3)
    throw DomainError("choquard_descent: d = 3 only");
  if (!start.nonneg() || lp_norm(start, 2.0) == 0.0)
    throw DomainError("choquard_descent: start must be nonnegative and nonzero");
  const KernelOperator K(PowerLaw{1.0}, g);
  const double tau = params.step * g.spacing * g.spacing;

  ChoquardTrace tr;
  ScalarField u = normalized({start.values().begin(), start.values().end()}, g);
  double e = choquard_energy(u);
  tr.energy.push_back(e);
  bool last_was_rearrange = false;
  for (int it = 1; it <= params.max_steps; ++it) {
    const ScalarField u2 = transform(u, [](double v) { return v * v; });
    const ScalarField pot = K.apply(u2);
    const std::vector<double> lap = laplacian(u);
    std::vector<double> next(u.size());
    for (std::size_t f = 0; f < u.size(); ++f)
      next[f] = std::max(0.0, u[f] - tau * (-2.0 * lap[f] - 4.0 * pot[f] * u[f]));
    double norm2 = 0.0;
    for (double x : next)
      norm2 += x * x;
    if (!(norm2 > 0.0) || !std::isfinite(norm2)) {
      tr.diverged = true;
      tr.steps = it;
      break;
    }
    u = normalized(std::move(next), g);
    e = choquard_energy(u);
    last_was_rearrange = false;
    if (it % params.rearrange_every == 0) {
      const ScalarField r = rearrange(u);
      const double er = choquard_energy(r);
      tr.rearrange_jumps.push_back(er - e);
      u = r;
      e = er;
      tr.checkpoints.push_back(e);
      last_was_rearrange = true;
    }
    tr.energy.push_back(e);
    tr.steps = it;
    if (!std::isfinite(e)) {
      tr.diverged = true;
      break;
    }
    const auto &cp = tr.checkpoints;
    if (last_was_rearrange && cp.size() >= 2 && std::fabs(cp.back() - cp[cp.size() - 2]) < params.tolerance)
      break;
  }
  if (!tr.diverged && !last_was_rearrange) {
    const ScalarField r = rearrange(u);
    const double er = choquard_energy(r);
    tr.rearrange_jumps.push_back(er - e);
    u = r;
    tr.checkpoints.push_back(er);
    tr.energy.push_back(er);
  }
  tr.profile = u;
  return tr;
}

ExperimentReport run_choquard(const SuiteConfig &c) {
  ExperimentReport r = suite::start_report(c, "choquard");
  suite::Stopwatch clock;
  const ChoquardParams &p = c.choquard;
  const Grid grid = Grid::cube(3, p.n, 2.0 * p.half_width / p.n);
  Rng rng(derive_seed(c.seed, "choquard"));
  RandomFieldParams fp = c.fields;
  fp.blur_width = 0.15;
  const ScalarField start = random_bumps(rng, 3, p.half_width, fp).sample(grid);

  const ChoquardTrace tr = choquard_descent(start, p);
  r.data["grid"] = {{"d", 3}, {"n", p.n}, {"h", grid.spacing}};
  r.data["steps"] = tr.steps;
  r.data["energy"] = tr.energy;
  r.data["checkpoints"] = tr.checkpoints;
  if (tr.diverged) {
    r.data["diverged"] = true;
    r.warnings.push_back("energy diverged; descent aborted");
    r.verdict = Verdict::Fail;
    r.value = NAN;
    r.wall_seconds = clock.seconds();
    return r;
  }

  double worst_checkpoint = 0.0;
  for (std::size_t k = 1; k < tr.checkpoints.size(); ++k)
    worst_checkpoint = std::max(worst_checkpoint, tr.checkpoints[k] - tr.checkpoints[k - 1]);
  double worst_jump = -INFINITY;
  for (double j : tr.rearrange_jumps)
    worst_jump = std::max(worst_jump, j);
  bool early_decrease = true;
  for (std::size_t k = 1; k < tr.energy.size() && k <= 50; ++k)
    early_decrease = early_decrease && tr.energy[k] < tr.energy[k - 1];

  const ScalarField &u = tr.profile;
  const ScalarField again = rearrange(u);
  bool fixed_point = true;
  for (std::size_t f = 0; f < u.size(); ++f)
    fixed_point = fixed_point && again[f] == u[f];
  const CellOrder order(grid);
  bool decreasing = true;
  for (std::size_t k = 1; k < order.cells().size(); ++k)
    decreasing = decreasing && u[order.cells()[k]] <= u[order.cells()[k - 1]];

  // restart from the converged profile without rearranging
  ChoquardParams q = p;
  q.max_steps = 2 * p.rearrange_every;
  q.rearrange_every = q.max_steps + 1;
  q.tolerance = 0.0;
  const ChoquardTrace rest = choquard_descent(u, q);
  double restart_change = 0.0;
  for (std::size_t k = 1; k < rest.energy.size(); ++k)
    restart_change = std::max(restart_change, std::fabs(rest.energy[k] - rest.energy[k - 1]));

  nlohmann::ordered_json profile = nlohmann::ordered_json::array();
  std::int64_t last_r2 = -1;
  for (std::size_t k = 0; k < order.cells().size() && profile.size() < 200; ++k) {
    const std::size_t f = order.cells()[k];
    const std::int64_t r2 = grid.doubled_radius2(grid.unflat(f));
    if (r2 == last_r2)
      continue;
    last_r2 = r2;
    profile.push_back({0.5 * grid.spacing * std::sqrt(double(r2)), u[f]});
  }

  r.data["final_energy"] = tr.checkpoints.back();
  r.data["checkpoint_max_increase"] = worst_checkpoint;
  r.data["rearrange_max_jump"] = worst_jump;
  r.data["first_50_strictly_decreasing"] = early_decrease;
  r.data["fixed_point"] = fixed_point;
  r.data["decreasing_along_cell_order"] = decreasing;
  r.data["restart_max_step_change"] = restart_change;
  r.data["radial_profile"] = profile;
  if (worst_jump > kSlack)
    r.warnings.push_back("a single rearrangement raised the lattice energy by " +
                         nlohmann::json(worst_jump).dump() +
                         "; the lattice Polya-Szego inequality is not exact");
  r.value = worst_checkpoint;
  r.tolerance = kSlack;
  r.verdict = worst_checkpoint <= kSlack && fixed_point && decreasing ? Verdict::Pass : Verdict::Fail;
  r.wall_seconds = clock.seconds();
  return r;
}

} // namespace symkit
