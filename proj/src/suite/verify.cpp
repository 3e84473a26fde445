#include <algorithm>
#include <functional>
#include <map>

#include "common.hpp"
#include "symkit/functionals.hpp"
#include "symkit/rearrange.hpp"

namespace symkit {
namespace {

constexpr double kSlack = 1e-12;

struct Tally {
  double worst = 0.0;
  int evaluations = 0;
  int failures = 0;

  void add(double excess) {
    ++evaluations;
    worst = std::max(worst, excess);
    if (excess > kSlack)
      ++failures;
  }
  void at_most(double small, double large) { add(suite::relative_excess(small, large)); }
  void equal(double a, double b) {
    const double m = std::max({std::fabs(a), std::fabs(b), 1e-300});
    add(std::fabs(a - b) / m);
  }
};

/// Largest pairing over all placements: both magnitude lists sorted the same way.
double sorted_pairing(const ScalarField &f, const ScalarField &g) {
  std::vector<double> a(f.size()), b(g.size());
  for (std::size_t c = 0; c < f.size(); ++c) {
    a[c] = std::fabs(f[c]);
    b[c] = std::fabs(g[c]);
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double s = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c)
    s += a[c] * b[c];
  return s * f.grid().cell_volume();
}

} // namespace

std::vector<ExperimentReport> run_verify(const SuiteConfig &config, const VerifyHooks &hooks) {
  const auto star = hooks.rearrange ? hooks.rearrange
                                    : std::function<ScalarField(const ScalarField &)>(
                                          [](const ScalarField &f) { return rearrange(f); });
  const ConvexProfile pl = ConvexProfile::piecewise_linear({0.0, 0.2, 0.5}, {0.5, 1.0, 3.0});
  const std::vector<std::pair<std::string, SupermodularF>> Fs = {
      {"product", SupermodularF::product()},
      {"min", SupermodularF::min()},
      {"j-power", SupermodularF::j_expansion(ConvexProfile::power(1.5))},
      {"j-piecewise", SupermodularF::j_expansion(pl)},
  };

  std::vector<ExperimentReport> reports;
  for (int d : {1, 2}) {
    const auto rungs = config.ladder_for(d);
    if (rungs.empty())
      continue;
    const Grid grid = suite::rung_grid(rungs.front());
    suite::Stopwatch clock;
    // strictly decreasing along CellOrder; never passed through `star`
    std::vector<double> ranks(grid.size());
    const CellOrder order(grid);
    for (std::size_t k = 0; k < ranks.size(); ++k)
      ranks[order.cells()[k]] = double(ranks.size() - k);
    const ScalarField radial(grid, std::move(ranks));

    using Tallies = std::map<std::string, Tally>;
    const auto per_case = suite::parallel_map<Tallies>(
        std::size_t(config.verify_cases), config.jobs, [&](std::size_t k) {
          Rng rng(derive_seed(config.seed, "verify/d" + std::to_string(d), k));
          const int levels = k % 2 ? 6 : 0;
          const ScalarField f = random_cells(rng, grid, config.fields.support_fraction, false, levels);
          const ScalarField g = random_cells(rng, grid, config.fields.support_fraction, false, levels);
          const ScalarField fs = random_cells(rng, grid, config.fields.support_fraction, true, levels);
          const ScalarField gs = random_cells(rng, grid, config.fields.support_fraction, true, levels);
          const ScalarField F = star(f), G = star(g), FS = star(fs), GS = star(gs);

          Tallies t;
          for (double p : {0.5, 1.0, 2.0, 3.0}) {
            t["norm-preservation"].equal(lp_norm(F, p), lp_norm(f, p));
            t["norm-preservation"].equal(lp_norm(FS, p), lp_norm(fs, p));
          }
          t["pairing"].at_most(pairing(f, g), pairing(F, G));
          t["pairing"].equal(pairing(F, G), sorted_pairing(f, g));
          t["pairing"].at_most(pairing(f, radial), pairing(F, radial));
          t["pairing"].equal(pairing(F, radial), sorted_pairing(f, radial));
          for (const auto &[name, Fn] : Fs)
            t["supermodular-" + name].at_most(supermodular_pairing(Fn, f, g),
                                              supermodular_pairing(Fn, F, G));
          for (const ConvexProfile &j : {ConvexProfile::power(2.0), pl}) {
            const auto before = expansion_gaps(j, f, g), after = expansion_gaps(j, F, G);
            t["expand-difference"].at_most(after.difference, before.difference);
            t["expand-sum"].at_most(before.sum, after.sum);
          }
          for (double p : {1.0, 2.0, 3.0}) {
            t["nonexpansive-difference"].at_most(lp_norm(FS - GS, p), lp_norm(fs - gs, p));
            t["nonexpansive-sum"].at_most(lp_norm(fs + gs, p), lp_norm(FS + GS, p));
          }
          t["hanner-p1.5"].at_most(hanner_sum(F, G, 1.5), hanner_sum(f, g, 1.5));
          t["hanner-p3"].at_most(hanner_sum(f, g, 3.0), hanner_sum(F, G, 3.0));
          return t;
        });

    Tallies total;
    for (const auto &t : per_case)
      for (const auto &[name, x] : t) {
        Tally &acc = total[name];
        acc.worst = std::max(acc.worst, x.worst);
        acc.evaluations += x.evaluations;
        acc.failures += x.failures;
      }
    if (total.empty())
      for (const char *name : {"norm-preservation", "pairing", "supermodular-product",
                               "supermodular-min", "supermodular-j-power",
                               "supermodular-j-piecewise", "expand-difference", "expand-sum",
                               "nonexpansive-difference", "nonexpansive-sum", "hanner-p1.5",
                               "hanner-p3"})
        total[name];

    const double seconds = clock.seconds();
    for (const auto &[name, t] : total) {
      const std::string id = "verify/" + name + "/d" + std::to_string(d);
      ExperimentReport r = suite::start_report(config, id);
      r.value = t.worst;
      r.tolerance = kSlack;
      r.verdict = t.failures == 0 ? Verdict::Pass : Verdict::Fail;
      r.data["cases"] = config.verify_cases;
      r.data["grid"] = {{"d", d}, {"n", grid.extents[0]}, {"h", grid.spacing}};
      r.data["evaluations"] = t.evaluations;
      r.data["failures"] = t.failures;
      r.data["max_relative_violation"] = t.worst;
      if (config.verify_cases == 0)
        r.warnings.push_back("no cases configured; verdict is vacuous");
      r.wall_seconds = seconds / double(total.size());
      reports.push_back(std::move(r));
    }
  }
  return reports;
}

} // namespace symkit
