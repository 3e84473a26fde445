#include <cmath>
#include <limits>
#include <string>

#include "symkit/functionals.hpp"

namespace symkit {

double lp_norm(const ScalarField &f, double p) {
  if (!(p > 0.0))
    throw DomainError("lp_norm: p must be positive");
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : f.values())
      m = std::max(m, std::fabs(v));
    return m;
  }
  double s = 0.0;
  if (p == 2.0)
    for (double v : f.values())
      s += v * v;
  else if (p == 1.0)
    for (double v : f.values())
      s += std::fabs(v);
  else
    for (double v : f.values())
      s += std::pow(std::fabs(v), p);
  return std::pow(s * f.grid().cell_volume(), 1.0 / p);
}

double pairing(const ScalarField &f, const ScalarField &g) {
  require_same_grid(f.grid(), g.grid(), "pairing");
  double s = 0.0;
  for (std::size_t c = 0; c < f.size(); ++c)
    s += f[c] * g[c];
  return s * f.grid().cell_volume();
}

ConvexProfile ConvexProfile::power(double p) {
  if (!(p >= 1.0) || !std::isfinite(p))
    throw DomainError("ConvexProfile::power: need 1 <= p < inf");
  ConvexProfile j;
  j.exponent_ = p;
  return j;
}

ConvexProfile ConvexProfile::piecewise_linear(std::vector<double> breakpoints,
                                              std::vector<double> slopes) {
  if (breakpoints.empty() || breakpoints.size() != slopes.size())
    throw DomainError("ConvexProfile: need one slope per breakpoint");
  if (breakpoints[0] != 0.0)
    throw DomainError("ConvexProfile: first breakpoint must be 0");
  for (std::size_t k = 0; k < slopes.size(); ++k) {
    if (!(slopes[k] >= 0.0))
      throw DomainError("ConvexProfile: slopes must be nonnegative");
    if (k > 0 && !(breakpoints[k] > breakpoints[k - 1]))
      throw DomainError("ConvexProfile: breakpoints must increase");
    if (k > 0 && slopes[k] < slopes[k - 1])
      throw DomainError("ConvexProfile: slopes must be nondecreasing");
  }
  ConvexProfile j;
  j.values_.assign(breakpoints.size(), 0.0);
  for (std::size_t k = 1; k < breakpoints.size(); ++k)
    j.values_[k] = j.values_[k - 1] + slopes[k - 1] * (breakpoints[k] - breakpoints[k - 1]);
  j.breaks_ = std::move(breakpoints);
  j.slopes_ = std::move(slopes);
  return j;
}

double ConvexProfile::operator()(double t) const {
  if (t <= 0.0)
    return 0.0;
  if (exponent_ > 0.0)
    return exponent_ == 1.0 ? t : exponent_ == 2.0 ? t * t : std::pow(t, exponent_);
  std::size_t k = breaks_.size() - 1;
  while (breaks_[k] > t)
    --k;
  return values_[k] + slopes_[k] * (t - breaks_[k]);
}

SupermodularF SupermodularF::j_expansion(ConvexProfile j) {
  SupermodularF F(Kind::JExpansion);
  F.j_ = std::move(j);
  return F;
}

double SupermodularF::operator()(double u, double v) const {
  switch (kind_) {
  case Kind::Product:
    return u * v;
  case Kind::Min:
    return std::min(u, v);
  case Kind::JExpansion:
    return j_(u) + j_(v) - j_(std::fabs(u - v));
  }
  return 0.0;
}

double supermodular_pairing(const SupermodularF &F, const ScalarField &f, const ScalarField &g) {
  require_same_grid(f.grid(), g.grid(), "supermodular_pairing");
  if (F.needs_nonneg() && (!f.nonneg() || !g.nonneg()))
    throw DomainError("supermodular_pairing: inputs must be nonnegative");
  double s = 0.0;
  for (std::size_t c = 0; c < f.size(); ++c)
    s += F(f[c], g[c]);
  return s * f.grid().cell_volume();
}

ExpansionGaps expansion_gaps(const ConvexProfile &j, const ScalarField &f, const ScalarField &g) {
  require_same_grid(f.grid(), g.grid(), "expansion_gaps");
  if (!f.nonneg() || !g.nonneg())
    throw DomainError("expansion_gaps: inputs must be nonnegative");
  double diff = 0.0, sum = 0.0;
  for (std::size_t c = 0; c < f.size(); ++c) {
    diff += j(std::fabs(f[c] - g[c]));
    sum += j(f[c] + g[c]);
  }
  const double hd = f.grid().cell_volume();
  return {diff * hd, sum * hd};
}

double hanner_sum(const ScalarField &f, const ScalarField &g, double p) {
  require_same_grid(f.grid(), g.grid(), "hanner_sum");
  if (!(p >= 1.0) || !std::isfinite(p))
    throw DomainError("hanner_sum: need 1 <= p < inf");
  double s = 0.0;
  for (std::size_t c = 0; c < f.size(); ++c)
    s += std::pow(std::fabs(f[c] - g[c]), p) + std::pow(std::fabs(f[c] + g[c]), p);
  return s * f.grid().cell_volume();
}

} // namespace symkit
