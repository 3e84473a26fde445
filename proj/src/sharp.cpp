#include "symkit/sharp.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "symkit/functionals.hpp"
#include "symkit/kernel.hpp"

namespace symkit {
namespace {

double conjugate(double s) { return s / (s - 1.0); }

/// Cholesky of the leading d x d block; false when not positive definite.
bool cholesky(const std::array<double, 9> &J, int d, std::array<double, 9> &L) {
  L.fill(0.0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j <= i; ++j) {
      double s = J[std::size_t(i * 3 + j)];
      for (int k = 0; k < j; ++k)
        s -= L[std::size_t(i * 3 + k)] * L[std::size_t(j * 3 + k)];
      if (i == j) {
        if (!(s > 0.0))
          return false;
        L[std::size_t(i * 3 + i)] = std::sqrt(s);
      } else {
        L[std::size_t(i * 3 + j)] = s / L[std::size_t(j * 3 + j)];
      }
    }
  return true;
}

/// Diagonal of J^-1 from the Cholesky factor: (J^-1)_kk = |L^-1 e_k|^2.
std::array<double, 3> inverse_diagonal(const std::array<double, 9> &L, int d) {
  std::array<double, 3> diag{0.0, 0.0, 0.0};
  for (int col = 0; col < d; ++col) {
    double y[3] = {0.0, 0.0, 0.0};
    for (int i = 0; i < d; ++i) {
      double s = i == col ? 1.0 : 0.0;
      for (int k = 0; k < i; ++k)
        s -= L[std::size_t(i * 3 + k)] * y[k];
      y[i] = s / L[std::size_t(i * 3 + i)];
    }
    for (int i = 0; i < d; ++i)
      diag[std::size_t(col)] += y[i] * y[i];
  }
  return diag;
}

double gaussian(const GaussianTriple &t, int d, double c, const Point &ctr, const Point &x) {
  double q = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      q += (x[i] - ctr[i]) * t.J[std::size_t(i * 3 + j)] * (x[j] - ctr[j]);
  return std::exp(-c * q);
}

/// int over the box of (gamma^2 + |x - a|^2)^-d, composite Gauss-Legendre per axis.
double hls_box_integral(const HLSOptimizer &opt, const Grid &grid) {
  const int d = grid.dim;
  const double g2 = opt.gamma * opt.gamma;
  if (d == 1) {
    const double w = grid.half_width(0), a = opt.center[0];
    return (std::atan((w - a) / opt.gamma) + std::atan((w + a) / opt.gamma)) / opt.gamma;
  }
  static const double xg[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                               0.9061798459386640};
  static const double wg[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                               0.4786286704993665, 0.2369268850561891};
  const int panels = d == 2 ? 200 : 64;
  std::vector<std::vector<double>> nodes(static_cast<std::size_t>(d)), weights(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    const double w = grid.half_width(k);
    const double len = 2.0 * w / panels;
    for (int pnl = 0; pnl < panels; ++pnl)
      for (int t = 0; t < 5; ++t) {
        nodes[std::size_t(k)].push_back(-w + (pnl + 0.5 * (xg[t] + 1.0)) * len - opt.center[k]);
        weights[std::size_t(k)].push_back(0.5 * len * wg[t]);
      }
  }
  const std::size_t m = nodes[0].size();
  double s = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const double r2 = nodes[0][i] * nodes[0][i] + nodes[1][j] * nodes[1][j];
      const double w = weights[0][i] * weights[1][j];
      if (d == 2) {
        const double q = g2 + r2;
        s += w / (q * q);
        continue;
      }
      for (std::size_t k = 0; k < m; ++k) {
        const double q = g2 + r2 + nodes[2][k] * nodes[2][k];
        s += w * weights[2][k] / (q * q * q);
      }
    }
  return s;
}

} // namespace

double unit_ball_volume(int d) {
  if (d < 1)
    throw DomainError("unit_ball_volume: need d >= 1");
  return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

double young_constant(double s) {
  if (!(s >= 1.0))
    throw DomainError("young_constant: need 1 <= s <= inf");
  if (s == 1.0 || std::isinf(s))
    return 1.0;
  const double sp = conjugate(s);
  return std::sqrt(std::pow(s, 1.0 / s) / std::pow(sp, 1.0 / sp));
}

void GaussianTriple::validate(int d) const {
  for (double s : {p, q, r})
    if (!(s > 1.0) || std::isinf(s))
      throw DomainError("GaussianTriple: exponents must lie in (1, inf)");
  if (std::fabs(1.0 / p + 1.0 / q + 1.0 / r - 2.0) > 1e-12)
    throw DomainError("GaussianTriple: need 1/p + 1/q + 1/r = 2");
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (J[std::size_t(i * 3 + j)] != J[std::size_t(j * 3 + i)])
        throw DomainError("GaussianTriple: J must be symmetric");
  std::array<double, 9> L;
  if (!cholesky(J, d, L))
    throw DomainError("GaussianTriple: J must be positive definite");
}

YoungTriple young_gaussian_triple(const GaussianTriple &t, const Grid &grid, double max_outside) {
  const int d = grid.dim;
  t.validate(d);
  std::array<double, 9> L;
  cholesky(t.J, d, L);
  const auto jinv = inverse_diagonal(L, d);

  // marginal of exp(-c x.Jx) along axis k is normal with variance (J^-1)_kk / (2c)
  auto outside = [&](double c, const Point &ctr) {
    double frac = 0.0;
    for (int k = 0; k < d; ++k) {
      const double sigma = std::sqrt(jinv[std::size_t(k)] / (2.0 * c));
      const double w = grid.half_width(k);
      frac += 0.5 * std::erfc((w - ctr[k]) / (std::numbers::sqrt2 * sigma)) +
              0.5 * std::erfc((w + ctr[k]) / (std::numbers::sqrt2 * sigma));
    }
    return frac;
  };
  const double cp = conjugate(t.p), cq = conjugate(t.q), cr = conjugate(t.r);
  for (auto [c, ctr] : {std::pair{cp, t.a}, std::pair{cq, t.b}, std::pair{cr, t.c}})
    if (outside(c, ctr) > max_outside)
      throw DomainError("young_gaussian_triple: box too small for the Gaussian tails");

  return {ScalarField::sample(grid, [&](const Point &x) { return t.A * gaussian(t, d, cp, t.a, x); }),
          ScalarField::sample(grid, [&](const Point &x) { return t.B * gaussian(t, d, cq, t.b, x); }),
          ScalarField::sample(grid, [&](const Point &x) { return t.C * gaussian(t, d, cr, t.c, x); })};
}

double young_quotient(const ScalarField &f, const ScalarField &g, const ScalarField &h, double p,
                      double q, double r) {
  for (double s : {p, q, r})
    if (!(s >= 1.0))
      throw DomainError("young_quotient: exponents must lie in [1, inf]");
  if (std::fabs(1.0 / p + 1.0 / q + 1.0 / r - 2.0) > 1e-9)
    throw DomainError("young_quotient: exponent identity 1/p + 1/q + 1/r = 2 violated");
  const double nf = lp_norm(f, p), ng = lp_norm(g, q), nh = lp_norm(h, r);
  if (nf == 0.0 || ng == 0.0 || nh == 0.0)
    throw DomainError("young_quotient: zero norm");
  const double c = std::pow(young_constant(p) * young_constant(q) * young_constant(r), f.grid().dim);
  return std::fabs(riesz_triple_cellwise(f, g, h)) / (c * nf * ng * nh);
}

double hls_constant(double lambda, int d) {
  if (d < 1)
    throw DomainError("hls_constant: need d >= 1");
  if (!(lambda > 0.0 && lambda < d))
    throw DomainError("hls_constant: need 0 < lambda < d");
  const double dd = d;
  return std::pow(std::numbers::pi, 0.5 * lambda) * std::tgamma(0.5 * (dd - lambda)) /
         std::tgamma(dd - 0.5 * lambda) *
         std::pow(std::tgamma(dd) / std::tgamma(0.5 * dd), 1.0 - lambda / dd);
}

double hls_total_pnorm(const HLSOptimizer &opt, int d) {
  const double p = opt.exponent(d);
  return std::pow(std::fabs(opt.amplitude), p) * std::pow(std::numbers::pi, 0.5 * d) *
         std::tgamma(0.5 * d) / std::tgamma(double(d)) * std::pow(opt.gamma, -d);
}

double hls_tail_fraction(const HLSOptimizer &opt, const Grid &grid) {
  const int d = grid.dim;
  const double total = hls_total_pnorm(opt, d);
  const double box = std::pow(std::fabs(opt.amplitude), opt.exponent(d)) * hls_box_integral(opt, grid);
  return std::max(0.0, 1.0 - box / total);
}

ScalarField hls_optimizer(const HLSOptimizer &opt, const Grid &grid, double max_tail) {
  const int d = grid.dim;
  if (!(opt.lambda > 0.0 && opt.lambda < d))
    throw DomainError("hls_optimizer: need 0 < lambda < d");
  if (!(opt.gamma > 0.0))
    throw DomainError("hls_optimizer: gamma must be positive");
  const double tail = hls_tail_fraction(opt, grid);
  if (tail > max_tail)
    throw DomainError("hls_optimizer: tail mass budget exceeded (" + std::to_string(tail) + " > " +
                      std::to_string(max_tail) + ")");
  const double e = -0.5 * (2.0 * d - opt.lambda);
  return ScalarField::sample(grid, [&](const Point &x) {
    double r2 = 0.0;
    for (int k = 0; k < d; ++k)
      r2 += (x[k] - opt.center[k]) * (x[k] - opt.center[k]);
    return opt.amplitude * std::pow(opt.gamma * opt.gamma + r2, e);
  });
}

double hls_quotient(const ScalarField &f, const ScalarField &h, double lambda) {
  require_same_grid(f.grid(), h.grid(), "hls_quotient");
  const int d = f.grid().dim;
  if (!(lambda > 0.0 && lambda < d))
    throw DomainError("hls_quotient: need 0 < lambda < d");
  const double p = 2.0 * d / (2.0 * d - lambda);
  const double nf = lp_norm(f, p), nh = lp_norm(h, p);
  if (nf == 0.0 || nh == 0.0)
    throw DomainError("hls_quotient: zero norm");
  const KernelOperator K(cellwise_kernel(PowerLaw{lambda}, f.grid()), f.grid());
  return std::fabs(K.form(f, h)) / (nf * nh);
}

HLSEvaluation hls_optimizer_quotient(const HLSOptimizer &opt, const Grid &grid, double max_tail) {
  const int d = grid.dim;
  const ScalarField f = hls_optimizer(opt, grid, max_tail);
  const double p = opt.exponent(d);
  HLSEvaluation ev{};
  ev.raw_quotient = hls_quotient(f, f, opt.lambda);
  ev.tail_fraction = hls_tail_fraction(opt, grid);
  const double box_pp = std::pow(lp_norm(f, p), p);
  const double full_pp = box_pp + ev.tail_fraction * hls_total_pnorm(opt, d);
  ev.quotient = ev.raw_quotient * std::pow(box_pp / full_pp, 2.0 / p);
  // missing pairs are bounded through the Euler-Lagrange equation by twice the tail share
  ev.truncation_bound = 2.0 * ev.tail_fraction;
  return ev;
}

} // namespace symkit
