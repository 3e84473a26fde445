#include "symkit/stability.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "symkit/functionals.hpp"
#include "symkit/rearrange.hpp"
#include "symkit/sharp.hpp"

namespace symkit {
namespace {

constexpr int kCoarseStride = 4;
constexpr std::size_t kRestarts = 8;

double mass_of(const ScalarField &rho) {
  double m = 0.0;
  for (double v : rho.values())
    m += v;
  return m * rho.grid().cell_volume();
}

void require_density(const ScalarField &rho, const char *op) {
  for (double v : rho.values())
    if (v < 0.0 || v > 1.0 + 1e-12)
      throw DomainError(std::string(op) + ": density must take values in [0, 1]");
  if (!(mass_of(rho) > 0.0))
    throw DomainError(std::string(op) + ": zero mass");
}

struct ShiftSearch {
  const ScalarField &rho;
  const ScalarField &ball;
  std::map<Index, double> memo;

  double eval(const Index &a) {
    if (auto it = memo.find(a); it != memo.end())
      return it->second;
    const double v = bathtub_distance(rho, ball, a);
    memo.emplace(a, v);
    return v;
  }

  bool in_range(const Index &a) const {
    const Grid &g = rho.grid();
    for (int k = 0; k < g.dim; ++k)
      if (std::abs(a[k]) > g.extents[k] - 1)
        return false;
    return true;
  }

  /// Steepest descent over the 3^d - 1 neighboring shifts.
  Index descend(Index a) {
    const int d = rho.grid().dim;
    double cur = eval(a);
    for (;;) {
      Index best = a;
      double best_v = cur;
      const int total = d == 1 ? 3 : d == 2 ? 9 : 27;
      for (int c = 0; c < total; ++c) {
        Index b = a;
        int rest = c;
        for (int k = 0; k < d; ++k) {
          b[k] += rest % 3 - 1;
          rest /= 3;
        }
        if (b == a || !in_range(b))
          continue;
        const double v = eval(b);
        if (v < best_v) {
          best_v = v;
          best = b;
        }
      }
      if (best == a)
        return a;
      a = best;
      cur = best_v;
    }
  }
};

Point centroid(const ScalarField &f) {
  const Grid &g = f.grid();
  Point c{0.0, 0.0, 0.0};
  double w = 0.0;
  for_each_index(g, [&](const Index &i, std::size_t k) {
    for (int a = 0; a < g.dim; ++a)
      c[a] += f[k] * i[a];
    w += f[k];
  });
  for (int a = 0; a < g.dim; ++a)
    c[a] /= w;
  return c;
}

} // namespace

double bathtub_distance(const ScalarField &rho, const ScalarField &ball, const Index &shift) {
  const Grid &g = rho.grid();
  // ||rho||_1 - sum over the shifted ball support of rho, plus |rho - B| on that support
  double total = 0.0;
  for (double v : rho.values())
    total += v;
  double covered = 0.0, diff = 0.0;
  for_each_index(g, [&](const Index &i, std::size_t c) {
    const double b = ball[c];
    if (b == 0.0)
      return;
    Index j = i;
    for (int k = 0; k < g.dim; ++k)
      j[k] += shift[k];
    const double r = rho.at_or_zero(j);
    covered += r;
    diff += std::fabs(r - b);
  });
  return (total - covered + diff) * g.cell_volume();
}

AsymmetryResult asymmetry_search(const ScalarField &rho) {
  require_density(rho, "asymmetry");
  const Grid &g = rho.grid();
  const double mass = mass_of(rho);
  const ScalarField ball = bathtub_fill(mass, g);
  ShiftSearch search{rho, ball, {}};

  const Point cr = centroid(rho), cb = centroid(ball);
  Index start{0, 0, 0};
  for (int k = 0; k < g.dim; ++k)
    start[k] = std::clamp(int(std::lround(cr[k] - cb[k])), -(g.extents[k] - 1), g.extents[k] - 1);
  Index best = search.descend(start);

  // coarse scan of every shift on the stride lattice
  std::vector<std::pair<double, Index>> scan;
  Index lo{0, 0, 0}, hi{0, 0, 0};
  for (int k = 0; k < g.dim; ++k) {
    hi[k] = (g.extents[k] - 1) / kCoarseStride * kCoarseStride;
    lo[k] = -hi[k];
  }
  Index a;
  for (a[0] = lo[0]; a[0] <= hi[0]; a[0] += kCoarseStride)
    for (a[1] = lo[1]; a[1] <= hi[1]; a[1] += kCoarseStride)
      for (a[2] = lo[2]; a[2] <= hi[2]; a[2] += kCoarseStride)
        scan.emplace_back(search.eval(a), a);
  const std::size_t keep = std::min(kRestarts, scan.size());
  std::partial_sort(scan.begin(), scan.begin() + long(keep), scan.end());
  for (std::size_t t = 0; t < keep; ++t) {
    const Index cand = search.descend(scan[t].second);
    const double v = search.eval(cand), vb = search.eval(best);
    if (v < vb || (v == vb && cand < best))
      best = cand;
  }
  return {search.eval(best) / (2.0 * mass), best};
}

double asymmetry(const ScalarField &rho) { return asymmetry_search(rho).value; }

DeficitReport ball_kernel_deficit(const ScalarField &rho, double radius) {
  require_density(rho, "ball_kernel_deficit");
  const Grid &g = rho.grid();
  DeficitReport r;
  r.parameter = "R";
  r.parameter_value = radius;
  r.mass = mass_of(rho);
  r.left = ball_kernel_energy(rho, radius);
  r.right = ball_kernel_energy(bathtub_fill(r.mass, g), radius);
  r.deficit = r.right - r.left;
  r.asymmetry = asymmetry(rho);
  if (r.asymmetry > 0.0)
    r.ratio = r.deficit / (r.mass * r.mass * r.asymmetry * r.asymmetry);
  const double ball_volume = unit_ball_volume(g.dim) * std::pow(radius, g.dim);
  r.window = std::pow(ball_volume, 1.0 / g.dim) / (2.0 * std::pow(r.mass, 1.0 / g.dim));
  return r;
}

DeficitReport riesz_deficit(const ScalarField &rho, double lambda) {
  require_density(rho, "riesz_deficit");
  const Grid &g = rho.grid();
  if (!(lambda > 0.0 && lambda < g.dim))
    throw DomainError("riesz_deficit: need 0 < lambda < d");
  DeficitReport r;
  r.parameter = "lambda";
  r.parameter_value = lambda;
  r.mass = mass_of(rho);
  r.left = riesz_energy(rho, lambda);
  r.right = riesz_energy(bathtub_fill(r.mass, g), lambda);
  r.deficit = r.right - r.left;
  r.asymmetry = asymmetry(rho);
  if (r.asymmetry > 0.0)
    r.ratio = r.deficit / (std::pow(r.mass, 2.0 - lambda / g.dim) * r.asymmetry * r.asymmetry);
  return r;
}

DeficitReport fractional_isoperimetric_deficit(const GridSet &a, double s) {
  if (!(s > 0.0 && s < 1.0))
    throw DomainError("fractional_isoperimetric_deficit: need 0 < s < 1");
  DeficitReport r;
  r.parameter = "s";
  r.parameter_value = s;
  r.mass = measure(a);
  r.left = fractional_perimeter(a, s);
  r.right = fractional_perimeter(set_symmetrize(a), s);
  r.deficit = r.left - r.right;
  r.asymmetry = asymmetry(indicator(a));
  if (r.asymmetry > 0.0)
    r.ratio = r.deficit / (r.right * r.asymmetry * r.asymmetry);
  return r;
}

double ResidualDistribution::operator()(double tau) const {
  const auto it = std::upper_bound(levels.begin(), levels.end(), tau);
  if (it == levels.begin())
    return values.empty() ? 0.0 : values.front();
  return values[std::size_t(it - levels.begin()) - 1];
}

ResidualDistribution residual_distribution(const ScalarField &u, double eta) {
  if (!u.nonneg())
    throw DomainError("residual_distribution: u must be nonnegative");
  const Grid &g = u.grid();
  ResidualDistribution out;
  out.eta = eta < 0.0 ? g.spacing : eta;

  std::vector<double> critical_values;
  for_each_index(g, [&](const Index &i, std::size_t c) {
    double g2 = 0.0;
    for (int k = 0; k < g.dim; ++k) {
      Index up = i, dn = i;
      ++up[k];
      --dn[k];
      const double dk = (u.at_or_zero(up) - u.at_or_zero(dn)) / (2.0 * g.spacing);
      g2 += dk * dk;
    }
    if (std::sqrt(g2) <= out.eta)
      critical_values.push_back(u[c]);
  });
  std::sort(critical_values.begin(), critical_values.end());

  out.levels.push_back(0.0);
  std::vector<double> vals(u.values().begin(), u.values().end());
  std::sort(vals.begin(), vals.end());
  for (double v : vals)
    if (v > out.levels.back())
      out.levels.push_back(v);
  const double hd = g.cell_volume();
  for (double tau : out.levels) {
    const auto above = critical_values.end() - std::upper_bound(critical_values.begin(), critical_values.end(), tau);
    out.values.push_back(double(above) * hd);
  }
  return out;
}

ScalarField probe_perturbation(const ScalarField &u, ProbeKind kind) {
  const Grid &g = u.grid();
  const int d = g.dim;
  double top = 0.0;
  for (double v : u.values())
    top = std::max(top, v);
  if (!(top > 0.0))
    throw DomainError("continuity_probe: u must be positive somewhere");

  if (kind == ProbeKind::Plateau) {
    std::vector<double> flat(u.size(), 0.0);
    for (std::size_t c = 0; c < u.size(); ++c)
      flat[c] = u[c] >= top * (1.0 - 1e-12) ? 1.0 : 0.0;
    const ScalarField plateau(g, std::move(flat));
    const Point c = centroid(plateau);
    Point ctr{0.0, 0.0, 0.0};
    for (int k = 0; k < d; ++k)
      ctr[k] = (c[k] - 0.5 * (g.extents[k] - 1)) * g.spacing;
    const double r = 0.9 * std::pow(mass_of(plateau) / unit_ball_volume(d), 1.0 / d);
    return ScalarField::sample(g, [&](const Point &x) {
      double y2 = 0.0;
      for (int k = 0; k < d; ++k)
        y2 += (x[k] - ctr[k]) * (x[k] - ctr[k]);
      y2 /= r * r;
      if (y2 >= 1.0)
        return 0.0;
      return top * std::cos(4.0 * std::numbers::pi * (x[0] - ctr[0]) / r) * (1.0 - y2) * (1.0 - y2);
    });
  }

  const GridSet supp = support(u);
  const double R = std::pow(measure(supp) / unit_ball_volume(d), 1.0 / d);
  const Point c = centroid(u);
  Point ctr{0.0, 0.0, 0.0};
  for (int k = 0; k < d; ++k)
    ctr[k] = (c[k] - 0.5 * (g.extents[k] - 1)) * g.spacing;
  ctr[0] += 0.3 * R;
  const double w = 0.25 * R;
  return ScalarField::sample(g, [&](const Point &x) {
    double r2 = 0.0;
    for (int k = 0; k < d; ++k)
      r2 += (x[k] - ctr[k]) * (x[k] - ctr[k]);
    return top * std::exp(-0.5 * r2 / (w * w));
  });
}

ContinuityProbe continuity_probe(const ScalarField &u, ProbeKind kind, int n_steps, ProbeSpace space) {
  if (!u.nonneg())
    throw DomainError("continuity_probe: u must be nonnegative");
  if (n_steps < 1)
    throw DomainError("continuity_probe: need at least one step");
  const ScalarField psi = probe_perturbation(u, kind);
  const ScalarField us = rearrange(u);
  auto norm = [&](const ScalarField &v) {
    if (space.kind == ProbeSpace::Kind::W1p)
      return gradient_pnorm(v, space.p);
    return std::pow(std::max(0.0, fractional_seminorm(v, space.s, space.p)), 1.0 / space.p);
  };

  ContinuityProbe out;
  double amp = 1.0;
  for (int step = 0; step < n_steps; ++step, amp *= 0.5) {
    const ScalarField delta = amp * psi;
    const ScalarField un = u + delta;
    out.amplitudes.push_back(amp);
    out.perturbation.push_back(norm(delta));
    out.distance.push_back(norm(rearrange(un) - us));
  }
  return out;
}

} // namespace symkit
