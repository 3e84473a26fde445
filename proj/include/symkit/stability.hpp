#pragma once

#include <string>
#include <vector>

#include "symkit/field.hpp"

namespace symkit {

struct AsymmetryResult {
  double value = 0.0; ///< A[rho] in [0, 1]
  Index shift{0, 0, 0}; ///< best whole-cell translation of the bathtub ball
};

/// A[rho] = inf_a ||rho - 1_{E*+a}||_1 / (2 ||rho||_1) over whole-cell shifts a, with
/// E* the bathtub fill of mass ||rho||_1. Parts of the shifted ball leaving the box
/// count fully. Search: centroid start and local descent, then a stride-4 scan of all
/// shifts with descent from the best scan points.
AsymmetryResult asymmetry_search(const ScalarField &rho);
double asymmetry(const ScalarField &rho);
/// ||rho - 1_{E*+a}||_1 for one shift (in cells).
double bathtub_distance(const ScalarField &rho, const ScalarField &ball, const Index &shift);

struct DeficitReport {
  double left = 0.0;      ///< functional at the input
  double right = 0.0;     ///< functional at the symmetrized input
  double deficit = 0.0;   ///< signed gap in the direction the inequality asserts >= 0
  double asymmetry = 0.0; ///< A[rho]
  double ratio = 0.0;     ///< deficit over its normalization times A^2; 0 when A = 0
  double mass = 0.0;      ///< ||rho||_1 (measure for sets)
  double window = 0.0;    ///< |B_R|^(1/d) / (2 ||rho||_1^(1/d)) for ball kernels, else 0
  std::string parameter;  ///< "R", "lambda" or "s"
  double parameter_value = 0.0;
};

/// Ball-kernel energy of rho against the bathtub ball; ratio = deficit / (||rho||_1^2 A^2).
DeficitReport ball_kernel_deficit(const ScalarField &rho, double radius);
/// Riesz energy of rho against the bathtub ball; ratio = deficit / (||rho||_1^(2-lambda/d) A^2).
DeficitReport riesz_deficit(const ScalarField &rho, double lambda);
/// per_s(A) - per_s(A*); ratio = deficit / (per_s(A*) A[1_A]^2).
DeficitReport fractional_isoperimetric_deficit(const GridSet &a, double s);

struct ResidualDistribution {
  std::vector<double> levels; ///< 0 followed by the distinct positive values of u
  std::vector<double> values; ///< G_u at each level
  double eta = 0.0;

  double operator()(double tau) const;
};

/// G_u(tau) = |{u > tau} and {|grad u| <= eta}| with centered differences. eta < 0
/// selects the default eta = h.
ResidualDistribution residual_distribution(const ScalarField &u, double eta = -1.0);

enum class ProbeKind { Plateau, Smooth };

struct ProbeSpace {
  enum class Kind { W1p, Wsp } kind = Kind::W1p;
  double s = 0.5;
  double p = 2.0;

  static ProbeSpace w1p(double p) { return {Kind::W1p, 0.0, p}; }
  static ProbeSpace wsp(double s, double p) { return {Kind::Wsp, s, p}; }
};

struct ContinuityProbe {
  std::vector<double> amplitudes;   ///< 1/n for each step
  std::vector<double> perturbation; ///< ||u_n - u|| in the chosen norm
  std::vector<double> distance;     ///< ||u_n* - u*|| in the chosen norm
};

/// u_n = u + (1/n) psi for n = 1, 2, 4, ..., 2^(n_steps-1). psi is an oscillatory bump
/// on the top plateau of u (Plateau) or an off-center smooth bump (Smooth).
/// The W1p distance is the L^p norm of |grad(u_n* - u*)|; the Wsp distance is the
/// fractional seminorm of the difference raised to 1/p.
ContinuityProbe continuity_probe(const ScalarField &u, ProbeKind kind, int n_steps, ProbeSpace space);

/// The perturbation psi used by continuity_probe.
ScalarField probe_perturbation(const ScalarField &u, ProbeKind kind);

} // namespace symkit
