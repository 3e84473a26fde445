#pragma once

#include <array>

#include "symkit/field.hpp"

namespace symkit {

/// omega_d = pi^(d/2) / Gamma(d/2 + 1)
double unit_ball_volume(int d);

/// Sharp Young factor C_s = (s^(1/s) / s'^(1/s'))^(1/2), 1 at s = 1 and s = inf.
double young_constant(double s);

/// Real member of the equality family in Young's inequality:
///   f = A exp(-p' (x-a).J(x-a)),  g = B exp(-q' (x-b).J(x-b)),  h = C exp(-r' (x-c).J(x-c)).
struct GaussianTriple {
  double p = 2.0, q = 2.0, r = 1.0;
  double A = 1.0, B = 1.0, C = 1.0;
  Point a{}, b{}, c{};
  std::array<double, 9> J{1, 0, 0, 0, 1, 0, 0, 0, 1}; ///< row-major, leading d x d block used

  /// Throws DomainError unless 1 < p, q, r < inf, 1/p + 1/q + 1/r = 2 (to 1e-12) and J is
  /// symmetric positive definite.
  void validate(int d) const;
};

struct YoungTriple {
  ScalarField f, g, h;
};

/// Samples the three Gaussians. Throws DomainError when more than `max_outside`
/// of any Gaussian's mass lies outside the box.
YoungTriple young_gaussian_triple(const GaussianTriple &t, const Grid &grid, double max_outside = 1e-10);

/// |int int f(x) g(x-y) h(y)| / ((C_p C_q C_r)^d ||f||_p ||g||_q ||h||_r).
///
/// The integral is taken exactly for the piecewise-constant functions the fields
/// represent, so the quotient is a continuum Young quotient and never exceeds 1 beyond
/// rounding. g may live on any grid with the same spacing.
double young_quotient(const ScalarField &f, const ScalarField &g, const ScalarField &h, double p,
                      double q, double r);

/// C_{lambda,d} = pi^(lambda/2) Gamma((d-lambda)/2) / Gamma(d - lambda/2) (Gamma(d)/Gamma(d/2))^(1-lambda/d)
double hls_constant(double lambda, int d);

/// f(x) = A (gamma^2 + |x - a|^2)^(-(2d - lambda)/2)
struct HLSOptimizer {
  double lambda = 0.5;
  double amplitude = 1.0;
  Point center{};
  double gamma = 1.0;

  /// p = 2d / (2d - lambda)
  double exponent(int d) const { return 2.0 * d / (2.0 * d - lambda); }
};

/// Fraction of ||f||_p^p outside the box, from the exact profile.
double hls_tail_fraction(const HLSOptimizer &opt, const Grid &grid);
/// int |f|^p over all of R^d.
double hls_total_pnorm(const HLSOptimizer &opt, int d);

/// Samples the optimizer. Throws DomainError when hls_tail_fraction exceeds `max_tail`.
ScalarField hls_optimizer(const HLSOptimizer &opt, const Grid &grid, double max_tail = 1e-6);

/// |int int f(x) |x-y|^-lambda h(y)| / (||f||_p ||h||_p), the double integral taken exactly
/// for the piecewise-constant functions the fields represent.
double hls_quotient(const ScalarField &f, const ScalarField &h, double lambda);

struct HLSEvaluation {
  double quotient;          ///< with ||f||_p^p completed by the analytic tail
  double raw_quotient;      ///< box-only norms
  double tail_fraction;     ///< share of ||f||_p^p outside the box
  double truncation_bound;  ///< bound on the relative loss from the box-truncated double integral
};

/// hls_quotient(f, f) for the sampled optimizer with the norm tail restored analytically.
HLSEvaluation hls_optimizer_quotient(const HLSOptimizer &opt, const Grid &grid, double max_tail = 1e-6);

} // namespace symkit
