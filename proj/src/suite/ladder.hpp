#pragma once

#include <functional>
#include <string>
#include <vector>

#include "common.hpp"

namespace symkit::suite {

/// One comparison: `gap` >= 0 in the direction the inequality asserts.
struct Comparison {
  double gap = 0.0;
  double scale = 0.0;
};

using CaseFn = std::function<std::vector<Comparison>(std::size_t k, const Grid &grid)>;

/// Runs `cases` random cases (config.refine_cases when negative) on every rung of the
/// d-dimensional ladder and applies the refinement contract to the worst violation.
ExperimentReport ladder_experiment(const SuiteConfig &config, const std::string &prefix,
                                   const std::string &name, int d, const CaseFn &fn,
                                   int cases = -1);

/// Case 0 is a translate of a radial profile (continuum gap zero); the others are random.
BumpSum case_bumps(Rng &rng, std::size_t k, int d, double L, const RandomFieldParams &fields);
BallUnion case_balls(Rng &rng, std::size_t k, int d, double L, const RandomFieldParams &fields);

/// Random domain and potential sized for the dense eigensolver.
struct SpectralCase {
  GridSet omega;
  ScalarField v;
};

/// Case 0 is a single ball with a concentric potential well off the lattice; the
/// others are random.
SpectralCase spectral_case(Rng &rng, std::size_t k, const Grid &grid, const RandomFieldParams &fields);
/// heat_trace(Omega*, V_*) - heat_trace(Omega, V) at each t.
std::vector<Comparison> heat_trace_comparison(const SpectralCase &sc, const std::vector<double> &ts);

} // namespace symkit::suite
