#include <cmath>
#include <limits>

#include "symkit/functionals.hpp"
#include "symkit/rearrange.hpp"
#include "symkit/sharp.hpp"

namespace symkit {

double riesz_energy(const ScalarField &rho, double lambda) {
  if (!(lambda > 0.0 && lambda < rho.grid().dim))
    throw DomainError("riesz_energy: need 0 < lambda < d");
  if (!rho.nonneg())
    throw DomainError("riesz_energy: rho must be nonnegative");
  return KernelOperator(PowerLaw{lambda}, rho.grid()).form(rho, rho);
}

double ball_kernel_energy(const ScalarField &rho, double radius) {
  return KernelOperator(BallIndicator{radius}, rho.grid()).form(rho, rho);
}

double power_energy(const ScalarField &rho, double alpha) {
  return KernelOperator(PowerGrowth{alpha}, rho.grid()).form(rho, rho);
}

double choquard_energy(const ScalarField &u) {
  if (u.grid().dim != 3)
    throw DomainError("choquard_energy: defined for d = 3 only");
  const double kinetic = gradient_pnorm(u, 2.0);
  return kinetic * kinetic - riesz_energy(transform(u, [](double v) { return v * v; }), 1.0);
}

double pointwise_decay_check(const ScalarField &f, double p) {
  if (!(p > 0.0) || std::isinf(p))
    throw DomainError("pointwise_decay_check: need 0 < p < inf");
  const Grid &g = f.grid();
  const ScalarField fs = rearrange(f);
  const double scale = std::pow(unit_ball_volume(g.dim), -1.0 / p) * lp_norm(f, p);
  double worst = -std::numeric_limits<double>::infinity();
  for_each_index(g, [&](const Index &i, std::size_t c) {
    const std::int64_t r2 = g.doubled_radius2(i);
    if (r2 == 0)
      return;
    const double r = 0.5 * g.spacing * std::sqrt(double(r2));
    worst = std::max(worst, fs[c] - scale * std::pow(r, -g.dim / p));
  });
  return std::isinf(worst) ? 0.0 : worst;
}

} // namespace symkit
