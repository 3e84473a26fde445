// Acceptance driver: one PASS/FAIL line per criterion.
//
//   symkit_acceptance [--criterion N] [--jobs J] [--out DIR]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <string>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "CLI11.hpp"
#include "symkit/rearrange.hpp"
#include "symkit/sharp.hpp"
#include "symkit/suite.hpp"

using namespace symkit;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string &what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("FAILED ") + what;
    }
  }
  void note(const std::string &s) { detail += (detail.empty() ? "" : "; ") + s; }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

const ExperimentReport *find(const std::vector<ExperimentReport> &rs, const std::string &id) {
  for (const auto &r : rs)
    if (r.id == id)
      return &r;
  return nullptr;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Context {
  SuiteConfig config;
  std::string out;

  void keep(const std::vector<ExperimentReport> &rs) const {
    if (!out.empty())
      write_reports(rs, out);
  }
};

Outcome exact_suite(const Context &ctx) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto rs = run_verify(ctx.config);
  const double secs = seconds_since(t0);
  ctx.keep(rs);
  double worst = 0.0;
  for (const auto &r : rs) {
    o.require(r.verdict == Verdict::Pass, r.id);
    o.require(r.data.value("cases", 0) == 200, r.id + " has 200 cases");
    worst = std::max(worst, r.value);
  }
  for (const std::string check :
       {"norm-preservation", "pairing", "supermodular-product", "supermodular-min", "supermodular-j-power",
        "expand-difference", "expand-sum", "nonexpansive-difference", "nonexpansive-sum", "hanner-p1.5", "hanner-p3"})
    for (int d : {1, 2})
      o.require(find(rs, "verify/" + check + "/d" + std::to_string(d)) != nullptr, check + " present");
  o.require(worst <= 1e-12, "relative slack");
  o.require(secs <= 60.0, "runtime <= 60 s");
  o.note(std::to_string(rs.size()) + " checks, max relative violation " + fmt(worst) + ", " + fmt(secs) + " s");
  return o;
}

Outcome refinement(const Context &ctx) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<ExperimentReport> all;
  for (const std::string id :
       {"riesz", "frac-seminorm", "frac-perimeter", "gradient", "heat-pairing", "heat-trace", "minkowski"}) {
    const auto rs = run_refine(ctx.config, id);
    all.insert(all.end(), rs.begin(), rs.end());
  }
  const double secs = seconds_since(t0);
  ctx.keep(all);
  double worst_factor = 0.0;
  for (const auto &r : all) {
    const auto &t = r.data.at("trend");
    o.require(r.verdict == Verdict::TrendPass, r.id);
    o.require(t.at("h").size() == 3, r.id + " uses 3 rungs");
    for (const auto &f : t.at("factors"))
      if (f.is_number())
        worst_factor = std::max(worst_factor, f.get<double>());
  }
  o.require(all.size() == 14, "7 functionals x 2 dimensions");
  o.require(secs <= 600.0, "runtime <= 10 min");
  o.note(std::to_string(all.size()) + " ladders, max contraction factor " + fmt(worst_factor) + ", " + fmt(secs) + " s");
  return o;
}

/// Closed-form Young quotient of the 1-d Gaussian triple exp(-p' x^2), exp(-q' x^2),
/// exp(-r' x^2) with constant factor c(s) per exponent.
double gaussian_young_quotient(double p, double q, double r, const std::function<double(double)> &c) {
  const auto conj = [](double s) { return s / (s - 1.0); };
  const double a = conj(p), b = conj(q), e = conj(r);
  // int int exp(-(a x^2 + b (x-y)^2 + e y^2)) = pi / sqrt(ab + ae + be)
  const double integral = std::numbers::pi / std::sqrt(a * b + a * e + b * e);
  const auto norm = [](double k, double s) { return std::pow(std::numbers::pi / (k * s), 0.5 / s); };
  return integral / (c(p) * c(q) * c(r) * norm(a, p) * norm(b, q) * norm(e, r));
}

Outcome young(const Context &ctx) {
  Outcome o;
  const auto rs = run_refine(ctx.config, "young");
  ctx.keep(rs);
  const ExperimentReport &r = rs.at(0);
  const auto &q = r.data.at("gaussian_quotient");
  const auto &n = r.data.at("n");
  o.require(r.verdict == Verdict::TrendPass, r.id);
  o.require(n.back().get<double>() == 512.0, "finest rung n = 512");
  o.require(std::fabs(q.back().get<double>() - 1.0) <= 1e-2, "quotient within 1e-2 of 1");
  o.require(r.data.at("monotone").get<bool>(), "monotone along the ladder");
  const double delta = r.data.at("random_slack").get<double>();
  o.require(r.data.at("random_triples").get<int>() == 200, "200 random triples");
  o.require(r.data.at("random_max_quotient").get<double>() <= 1.0 + delta, "random triples <= 1 + delta");

  // convolution-form (2, 4/3, 4) is the trilinear form with r = 4/3
  const auto with_root = [](double s) { return young_constant(s); };
  const auto without_root = [](double s) {
    const double t = s / (s - 1.0);
    return std::pow(s, 1.0 / s) / std::pow(t, 1.0 / t);
  };
  const double exact_root = gaussian_young_quotient(2.0, 4.0 / 3.0, 4.0 / 3.0, with_root);
  const double exact_plain = gaussian_young_quotient(2.0, 4.0 / 3.0, 4.0 / 3.0, without_root);
  o.require(std::fabs(exact_root - 1.0) <= 1e-12, "closed-form Gaussian quotient is 1 with the square-root constant");
  o.require(std::fabs(exact_plain - 1.0) > 1e-2, "the constant without the root is not attained");
  o.require(r.data.at("constant").contains("note"), "constant resolution documented in the report");
  o.note("quotients " + fmt(q[0].get<double>()) + "/" + fmt(q[1].get<double>()) + "/" + fmt(q[2].get<double>()) +
         ", random max " + fmt(r.data.at("random_max_quotient").get<double>()) + ", closed form " + fmt(exact_root) +
         " (without root " + fmt(exact_plain) + ")");
  return o;
}

Outcome hls(const Context &ctx) {
  Outcome o;
  const auto rs = run_refine(ctx.config, "hls");
  ctx.keep(rs);
  const ExperimentReport &r = rs.at(0);
  const double c = r.data.at("constant").get<double>();
  const double q = r.data.at("quotient").back().get<double>();
  o.require(r.verdict == Verdict::Pass, r.id);
  o.require(r.data.at("n").back().get<double>() == 1024.0, "n = 1024");
  o.require(std::fabs(q / c - 1.0) <= 0.02, "optimizer quotient within 2%");
  o.require(r.data.at("random_max_quotient").get<double>() <= c * (1.0 + 1e-9), "random pairs below the constant");

  using big = boost::multiprecision::cpp_bin_float_50;
  const big pi = boost::math::constants::pi<big>();
  const big lambda = 1, d = 3;
  const big exact = pow(pi, lambda / 2) * boost::math::tgamma((d - lambda) / 2) / boost::math::tgamma(d - lambda / 2) *
                    pow(boost::math::tgamma(d) / boost::math::tgamma(d / 2), 1 - lambda / d);
  const double oracle = exact.convert_to<double>();
  const double rel = std::fabs(hls_constant(1.0, 3) / oracle - 1.0);
  o.require(rel <= 1e-10, "hls_constant(1, 3) against 50-digit Gamma");
  o.note("quotient " + fmt(q) + " vs constant " + fmt(c) + " (" + fmt(100 * std::fabs(q / c - 1)) +
         "%), hls_constant(1,3) relative error " + fmt(rel));
  return o;
}

Outcome spectral(const Context &ctx) {
  Outcome o;
  const auto rs = run_spectral(ctx.config);
  ctx.keep(rs);
  const ExperimentReport *fk = find(rs, "spectral/faber-krahn");
  const ExperimentReport *ht = find(rs, "spectral/heat-trace/d2");
  const ExperimentReport *pf = find(rs, "spectral/perimeter");
  o.require(fk && ht && pf, "all spectral reports present");
  if (!o.pass)
    return o;
  const double h = fk->data.at("h").get<double>();
  const double ls = fk->data.at("lambda1_square").get<double>();
  const double ld = fk->data.at("lambda1_disk").get<double>();
  const double j = boost::math::cyl_bessel_j_zero(0.0, 1);
  const double gap = 2 * std::numbers::pi * std::numbers::pi - std::numbers::pi * j * j;
  const double rel = std::fabs((ls - ld) / gap - 1.0);
  o.require(h <= 1.0 / 64.0, "h <= 1/64");
  o.require(ls > ld, "lambda1(square) > lambda1(disk)");
  o.require(rel <= 0.15, "gap within 15% of analytic");
  o.require(ht->verdict == Verdict::TrendPass && ht->data.at("cases").get<int>() == 20,
            "heat-trace trend over 20 pairs");
  const double per = pf->data.at("estimate").get<double>();
  o.require(std::fabs(per - 4.0) <= 0.4, "perimeter 4 +- 10%");
  o.note("gap error " + fmt(100 * rel) + "% at h=1/" + fmt(1 / h) + ", perimeter " + fmt(per));
  return o;
}

Outcome bll(const Context &ctx) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto rs = run_refine(ctx.config, "bll");
  const double secs = seconds_since(t0);
  ctx.keep(rs);
  const ExperimentReport *ri = find(rs, "refine/bll/riesz-instance");
  const ExperimentReport *rnd = find(rs, "refine/bll/random-specs");
  o.require(ri && rnd, "both BLL reports present");
  if (!o.pass)
    return o;
  const double est = ri->data.at("estimate").get<double>(), se = ri->data.at("std_error").get<double>();
  const double oracle = ri->data.at("fft_oracle").get<double>();
  o.require(ri->data.at("samples").get<double>() >= 1e6, "10^6 samples");
  o.require(std::fabs(est - oracle) <= 3 * se, "Riesz instance within 3 SE");
  double worst = -INFINITY;
  const auto &specs = rnd->data.at("specs");
  for (const auto &s : specs) {
    const double excess = s.at("excess_in_se").get<double>();
    worst = std::max(worst, excess);
    o.require(s.at("n").get<int>() <= 4 && s.at("m").get<int>() <= 3, "spec shape N <= 4, M <= 3");
  }
  o.require(specs.size() == 10, "10 random specs");
  o.require(worst <= 5.0, "I[f] <= I[f*] + 5 SE");
  o.require(secs <= 300.0, "runtime <= 5 min");
  o.note("Riesz instance z=" + fmt(std::fabs(est - oracle) / se) + ", random max excess " + fmt(worst) + " SE, " +
         fmt(secs) + " s");
  return o;
}

/// ||rho - 1_{ball + a}||_1 over every whole-cell shift, written from scratch.
double independent_asymmetry(const ScalarField &rho) {
  const Grid &g = rho.grid();
  double mass = 0.0;
  for (double v : rho.values())
    mass += v;
  mass *= g.cell_volume();
  const ScalarField ball = bathtub_fill(mass, g);
  const int n0 = g.extents[0], n1 = g.extents[1];
  double best = INFINITY;
  for (int a0 = -(n0 - 1); a0 <= n0 - 1; ++a0)
    for (int a1 = -(n1 - 1); a1 <= n1 - 1; ++a1) {
      double dist = 0.0;
      // ball cells shifted out of the box count fully
      for (int i = 0; i < n0; ++i)
        for (int j = 0; j < n1; ++j) {
          const double b = ball.at({i, j, 0});
          const int si = i + a0, sj = j + a1;
          if (b != 0.0 && (si < 0 || si >= n0 || sj < 0 || sj >= n1))
            dist += b;
        }
      for (int i = 0; i < n0; ++i)
        for (int j = 0; j < n1; ++j) {
          const int bi = i - a0, bj = j - a1;
          const double b = bi >= 0 && bi < n0 && bj >= 0 && bj < n1 ? ball.at({bi, bj, 0}) : 0.0;
          dist += std::fabs(rho.at({i, j, 0}) - b);
        }
      best = std::min(best, dist * g.cell_volume());
    }
  return best / (2.0 * mass);
}

Outcome stability(const Context &ctx) {
  Outcome o;
  const auto rs = run_stability(ctx.config);
  ctx.keep(rs);
  for (const auto &r : rs)
    o.require(r.verdict == Verdict::Pass, r.id);
  const ExperimentReport *tb = find(rs, "stability/two-ball");
  const ExperimentReport *au = find(rs, "stability/asymmetry-audit");
  const ExperimentReport *l2 = find(rs, "stability/layered/d2");
  const ExperimentReport *eq = find(rs, "stability/equality");
  o.require(tb && au && l2 && eq, "stability reports present");
  if (!o.pass)
    return o;

  double lo = INFINITY, hi = 0.0;
  for (const auto &m : tb->data.at("members")) {
    const double ratio = m.at("ball_kernel").at("ratio").get<double>();
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  o.require(lo > 0.0 && hi / lo <= 3.0, "two-ball ratio positive within x3");

  const auto &pairs = au->data.at("search_vs_brute_force");
  o.require(pairs.size() == 50, "50 asymmetry cases");
  for (const auto &p : pairs)
    o.require(p[0].get<double>() == p[1].get<double>(), "search equals exhaustive search");

  // rebuild a few audit inputs and compare with an exhaustive search written here
  const Grid grid = Grid::cube(2, 24, 0.25);
  double worst = 0.0;
  for (std::size_t k = 0; k < 5; ++k) {
    Rng rng(derive_seed(ctx.config.seed, "stability/asymmetry", k));
    RandomFieldParams p = ctx.config.fields;
    p.bumps = rng.integer(1, 3);
    p.support_fraction = 0.6;
    const BumpSum b = random_bumps(rng, 2, grid.half_width(0), p);
    std::vector<double> v(grid.size());
    const ScalarField base = b.sample(grid);
    for (std::size_t f = 0; f < v.size(); ++f)
      v[f] = std::clamp(std::min(1.0, 1.5 * base[f]) * rng.uniform(0.7, 1.0), 0.0, 1.0);
    const double mine = independent_asymmetry(ScalarField(grid, std::move(v)));
    worst = std::max(worst, std::fabs(mine - pairs[k][0].get<double>()));
  }
  o.require(worst <= 1e-12, "independent exhaustive search agrees");

  for (const std::string id : {"stability/layered/d2", "stability/layered/d3"}) {
    const ExperimentReport *l = find(rs, id);
    o.require(l && std::fabs(l->data.at("layered").get<double>() / l->data.at("direct").get<double>() - 1) <= 0.01,
              id + " within 1%");
  }
  o.require(eq->value <= eq->tolerance, "equality deficits within slack");
  o.note("two-ball ratios " + fmt(lo) + ".." + fmt(hi) + ", layered d2 " + fmt(l2->value) + ", independent asymmetry " +
         fmt(worst));
  return o;
}

Outcome choquard(const Context &ctx) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentReport r = run_choquard(ctx.config);
  const double secs = seconds_since(t0);
  ctx.keep({r});
  o.require(r.data.at("grid").at("n").get<int>() == 32, "32^3 grid");
  o.require(r.verdict == Verdict::Pass, r.id);
  o.require(r.data.at("checkpoint_max_increase").get<double>() <= 1e-8, "nonincreasing after every rearrangement");
  o.require(r.data.at("fixed_point").get<bool>() && r.data.at("decreasing_along_cell_order").get<bool>(),
            "converged profile is symmetric decreasing");
  o.require(secs <= 600.0, "runtime <= 10 min");
  o.note("E=" + fmt(r.data.at("final_energy").get<double>()) + ", checkpoint increase " +
         fmt(r.data.at("checkpoint_max_increase").get<double>()) + ", single rearrangement jump " +
         fmt(r.data.at("rearrange_max_jump").get<double>()) + ", " + fmt(secs) + " s");
  return o;
}

Outcome probes(const Context &ctx) {
  Outcome o;
  const auto rs = run_probe_continuity(ctx.config);
  ctx.keep(rs);
  std::string ratios;
  for (const auto &r : rs) {
    const auto &d = r.data.at("distance");
    const double ratio = d.back().get<double>() / d.front().get<double>();
    const bool plateau_w1 = r.id == "probe/plateau/W1,2";
    o.require(d.size() == 8, r.id + " 8 steps");
    o.require(plateau_w1 ? ratio >= 0.5 : ratio < 0.1, r.id + (plateau_w1 ? " stays above 50%" : " decays below 10%"));
    ratios += (ratios.empty() ? "" : ", ") + r.id.substr(6) + " " + fmt(ratio);
  }
  o.note("final/initial: " + ratios);
  return o;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"symkit acceptance criteria"};
  int only = 0;
  int jobs = 1;
  std::string out;
  app.add_option("--criterion", only, "run a single criterion (1-9)")->check(CLI::Range(1, 9));
  app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", out, "also write the underlying reports here");
  CLI11_PARSE(app, argc, argv);

  Context ctx{SuiteConfig::defaults(), out};
  ctx.config.jobs = jobs;

  const std::map<int, std::pair<const char *, std::function<Outcome(const Context &)>>> criteria = {
      {1, {"exact discrete suite", exact_suite}},
      {2, {"refinement contracts", refinement}},
      {3, {"sharp Young", young}},
      {4, {"sharp HLS", hls}},
      {5, {"spectral isoperimetry", spectral}},
      {6, {"BLL Monte Carlo", bll}},
      {7, {"stability", stability}},
      {8, {"Choquard descent", choquard}},
      {9, {"continuity probes", probes}},
  };
  bool all = true;
  for (const auto &[k, c] : criteria) {
    if (only && k != only)
      continue;
    Outcome o;
    try {
      o = c.second(ctx);
    } catch (const std::exception &e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("criterion %d %-22s %s  %s\n", k, c.first, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
