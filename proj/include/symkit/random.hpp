#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "symkit/field.hpp"

namespace symkit {

/// Seeded generator whose output sequence is identical on every platform: the
/// engine is std::mt19937_64 and all conversions to reals are done here rather
/// than by the implementation-defined standard distributions.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }
  /// [0, 1) with 53 random bits.
  double uniform() { return double(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  /// Standard normal (Box-Muller).
  double normal();
  /// Uniform integer in [lo, hi].
  int integer(int lo, int hi);

private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Independent seed for a named sub-stream, so adding cases to one experiment does
/// not shift the random numbers seen by another.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream, std::uint64_t index = 0);

struct RandomFieldParams {
  double blur_width = 0.35;      ///< typical bump width, in units of the box half-width
  double support_fraction = 0.5; ///< bump centers lie in this fraction of the box
  int bumps = 4;
};

/// sum_k a_k exp(-|x - c_k|^2 / (2 w_k^2)); a continuum function, so the same
/// BumpSum sampled on a refinement ladder gives a consistent family of fields.
struct BumpSum {
  int dim = 1;
  std::vector<Point> centers;
  std::vector<double> widths;
  std::vector<double> amplitudes;

  double operator()(const Point &x) const;
  ScalarField sample(const Grid &grid) const;
};

/// Random bumps inside [-half_width, half_width]^d. Amplitudes lie in [0.2, 1], or in
/// [-1, 1] when `signed_amplitudes`.
BumpSum random_bumps(Rng &rng, int d, double half_width, const RandomFieldParams &params,
                     bool signed_amplitudes = false);

/// Union of balls; continuum set, sampled by cell centers.
struct BallUnion {
  int dim = 1;
  std::vector<Point> centers;
  std::vector<double> radii;

  bool contains(const Point &x) const;
  GridSet sample(const Grid &grid) const;
};

BallUnion random_balls(Rng &rng, int d, double half_width, const RandomFieldParams &params);

/// Independent cell values for the exact discrete suite: each cell is nonzero with
/// probability `support_fraction`. With `levels` > 0 the magnitudes are drawn from
/// that many distinct values, which produces ties.
ScalarField random_cells(Rng &rng, const Grid &grid, double support_fraction, bool signed_values,
                         int levels = 0);

} // namespace symkit
