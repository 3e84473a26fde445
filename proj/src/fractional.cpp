#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>

#include "symkit/functionals.hpp"
#include "symkit/sharp.hpp"

namespace symkit {
namespace {

/// Smooth cutoff: 1 on [0, 1], 0 on [2, inf).
double cutoff(double t) {
  if (t <= 1.0)
    return 1.0;
  if (t >= 2.0)
    return 0.0;
  const double a = std::exp(-1.0 / (2.0 - t)), b = std::exp(-1.0 / (t - 1.0));
  return a / (a + b);
}

double compute_lattice_zeta(int d, double a) {
  // sum of |z|^-a cutoff(|z|/R) over the lattice, plus the integral of the smooth
  // remainder |z|^-a (1 - cutoff(|z|/R))
  const int R = d == 1 ? 256 : d == 2 ? 64 : 24;
  const int M = 2 * R;
  double sum = 0.0;
  const int ylim = d >= 2 ? M : 0, zlim = d >= 3 ? M : 0;
  for (int i = -M; i <= M; ++i)
    for (int j = -ylim; j <= ylim; ++j)
      for (int k = -zlim; k <= zlim; ++k) {
        const double r2 = double(i) * i + double(j) * j + double(k) * k;
        if (r2 == 0.0)
          continue;
        const double r = std::sqrt(r2);
        if (r >= M)
          continue;
        sum += std::pow(r, -a) * cutoff(r / R);
      }

  // Simpson on [R, 2R]
  const int steps = 4000;
  const double dr = double(R) / steps;
  double band = 0.0;
  for (int t = 0; t <= steps; ++t) {
    const double r = R + t * dr;
    const double w = (t == 0 || t == steps) ? 1.0 : (t % 2 ? 4.0 : 2.0);
    band += w * std::pow(r, d - 1 - a) * (1.0 - cutoff(r / R));
  }
  band *= dr / 3.0;
  const double outer = std::pow(double(M), d - a) / (a - d);
  return sum + d * unit_ball_volume(d) * (band + outer);
}

} // namespace

double lattice_zeta(int d, double exponent) {
  if (d < 1 || d > 3)
    throw DomainError("lattice_zeta: unsupported dimension");
  if (!(exponent > d))
    throw DomainError("lattice_zeta: exponent must exceed d");
  static std::mutex mu;
  static std::map<std::pair<int, double>, double> cache;
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find({d, exponent}); it != cache.end())
      return it->second;
  }
  const double v = compute_lattice_zeta(d, exponent);
  std::lock_guard lock(mu);
  cache.emplace(std::pair{d, exponent}, v);
  return v;
}

double fractional_seminorm(const ScalarField &u, double s, double p) {
  if (!(s > 0.0 && s < 1.0))
    throw DomainError("fractional_seminorm: need 0 < s < 1");
  if (!(p >= 1.0) || !std::isfinite(p))
    throw DomainError("fractional_seminorm: need 1 <= p < inf");
  const Grid &g = u.grid();
  const int d = g.dim;
  const double h = g.spacing, hd = g.cell_volume();
  const double sigma = d + s * p;
  const double S = lattice_zeta(d, sigma) * std::pow(h, -sigma);
  const ScalarField kern = sample_kernel(FracKernel{s, p}, g);
  const KernelOperator K(kern, g);

  if (p == 2.0) {
    double u2 = 0.0;
    for (double v : u.values())
      u2 += v * v;
    return 2.0 * (S * u2 * hd * hd - K.form(u, u));
  }

  // in-box pairs, each unordered pair once
  const Grid &kg = kern.grid();
  double inner = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const Index a = g.unflat(i);
    for (std::size_t j = i + 1; j < u.size(); ++j) {
      const double diff = std::fabs(u[i] - u[j]);
      if (diff == 0.0)
        continue;
      const Index b = g.unflat(j);
      Index k;
      for (int t = 0; t < 3; ++t)
        k[t] = a[t] - b[t] + (kg.extents[t] - 1) / 2;
      inner += (p == 1.0 ? diff : std::pow(diff, p)) * kern[kg.flat(k)];
    }
  }

  // pairs with one point outside the box
  const ScalarField box(g, std::vector<double>(g.size(), 1.0));
  const ScalarField in_box = K.apply(box);
  double outer = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (u[i] != 0.0)
      outer += std::pow(std::fabs(u[i]), p) * (S - in_box[i] / hd);
  return (2.0 * inner + 2.0 * outer) * hd * hd;
}

double fractional_perimeter(const GridSet &a, double s) {
  if (!(s > 0.0 && s < 1.0))
    throw DomainError("fractional_perimeter: need 0 < s < 1");
  if (a.empty())
    throw DomainError("fractional_perimeter: empty set");
  const Grid &g = a.grid();
  const double hd = g.cell_volume();
  const double sigma = g.dim + s;
  const double S = lattice_zeta(g.dim, sigma) * std::pow(g.spacing, -sigma);
  const ScalarField ind = indicator(a);
  const KernelOperator K(FracKernel{s, 1.0}, g);
  return double(a.count()) * S * hd * hd - K.form(ind, ind);
}

} // namespace symkit
