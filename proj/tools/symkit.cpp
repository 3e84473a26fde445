// symkit command-line driver.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "symkit/field_io.hpp"
#include "symkit/functionals.hpp"
#include "symkit/rearrange.hpp"
#include "symkit/suite.hpp"

namespace {

using namespace symkit;

struct Globals {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<int> jobs;
};

SuiteConfig resolve(const Globals &g) {
  SuiteConfig c = g.config_path.empty() ? SuiteConfig::defaults() : load_config(g.config_path);
  if (g.seed)
    c.seed = *g.seed;
  if (!g.out.empty())
    c.output_dir = g.out;
  if (g.jobs)
    c.jobs = *g.jobs;
  c.validate();
  return c;
}

int finish(const std::vector<ExperimentReport> &reports, const SuiteConfig &c) {
  bool failed = false;
  for (const auto &r : reports) {
    std::printf("%-10s %-44s value=%-12.6g tol=%.3g\n", to_string(r.verdict).c_str(), r.id.c_str(),
                r.value, r.tolerance);
    for (const auto &w : r.warnings)
      std::printf("           warning: %s\n", w.c_str());
    failed = failed || !r.ok();
  }
  write_reports(reports, c.output_dir);
  std::printf("reports written to %s\n", c.output_dir.string().c_str());
  return failed ? 1 : 0;
}

bool is_set_file(const std::string &path) {
  std::ifstream in(path);
  std::string first;
  std::getline(in, first);
  return first.rfind("SYMKIT-SET", 0) == 0;
}

int cmd_rearrange(const std::string &in, const std::string &out) {
  if (is_set_file(in))
    save(set_symmetrize(load_set(in)), out);
  else
    save(rearrange(load_field(in)), out);
  return 0;
}

int cmd_info(const std::string &in) {
  if (is_set_file(in)) {
    const GridSet a = load_set(in);
    const Grid &g = a.grid();
    std::printf("set  d=%d extents=%d,%d,%d h=%.17g\n", g.dim, g.extents[0], g.extents[1],
                g.extents[2], g.spacing);
    std::printf("cells=%zu measure=%.17g perimeter=%.17g\n", a.count(), measure(a), perimeter(a));
    return 0;
  }
  const ScalarField f = load_field(in);
  const Grid &g = f.grid();
  double lo = INFINITY, hi = -INFINITY;
  for (double v : f.values()) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  std::printf("field d=%d extents=%d,%d,%d h=%.17g\n", g.dim, g.extents[0], g.extents[1],
              g.extents[2], g.spacing);
  std::printf("min=%.17g max=%.17g nonneg=%s\n", lo, hi, f.nonneg() ? "yes" : "no");
  std::printf("L1=%.17g L2=%.17g Linf=%.17g support=%.17g\n", lp_norm(f, 1.0), lp_norm(f, 2.0),
              lp_norm(f, INFINITY), measure(support(f)));
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"symkit: rearrangement inequalities on uniform grids"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_path, "symkit-config 1 JSON file")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "override the configured RNG seed");
  app.add_option("--out", g.out, "report directory");
  app.add_option("--jobs", g.jobs, "worker threads")->check(CLI::PositiveNumber);

  auto *verify = app.add_subcommand("verify", "exact discrete inequality suite");
  auto *refine = app.add_subcommand("refine", "refinement contracts");
  std::string refine_id = "all";
  std::string ids = "all";
  for (const auto &id : refine_ids())
    ids += ", " + id;
  refine->add_option("id", refine_id, "experiment: " + ids);
  auto *spectral = app.add_subcommand("spectral", "Faber-Krahn, heat traces, perimeter fit");
  auto *stability = app.add_subcommand("stability", "deficits, asymmetry audits, layered identity");
  auto *choquard = app.add_subcommand("choquard", "Choquard descent with rearrangement");
  auto *probe = app.add_subcommand("probe-continuity", "rearrangement continuity probes");
  auto *rearr = app.add_subcommand("rearrange", "rearrange a field (or symmetrize a set) file");
  std::string in_path, out_path;
  rearr->add_option("input", in_path)->required()->check(CLI::ExistingFile);
  rearr->add_option("output", out_path)->required();
  auto *info = app.add_subcommand("info", "print field or set statistics");
  std::string info_path;
  info->add_option("input", info_path)->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*rearr)
      return cmd_rearrange(in_path, out_path);
    if (*info)
      return cmd_info(info_path);
    const SuiteConfig c = resolve(g);
    if (*verify)
      return finish(run_verify(c), c);
    if (*refine)
      return finish(run_refine(c, refine_id), c);
    if (*spectral)
      return finish(run_spectral(c), c);
    if (*stability)
      return finish(run_stability(c), c);
    if (*choquard)
      return finish({run_choquard(c)}, c);
    if (*probe)
      return finish(run_probe_continuity(c), c);
  } catch (const ConfigError &e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const ParseError &e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return 2;
  } catch (const std::exception &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
