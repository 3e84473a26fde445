#include "symkit/random.hpp"

#include <cmath>
#include <numbers>

namespace symkit {

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u = 0.0;
  while (u == 0.0)
    u = uniform();
  const double v = uniform();
  const double r = std::sqrt(-2.0 * std::log(u));
  spare_ = r * std::sin(2.0 * std::numbers::pi * v);
  has_spare_ = true;
  return r * std::cos(2.0 * std::numbers::pi * v);
}

int Rng::integer(int lo, int hi) {
  const std::uint64_t span = std::uint64_t(std::int64_t(hi) - lo) + 1;
  return lo + int(eng_() % span);
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream, std::uint64_t index) {
  // FNV-1a over the stream name, then splitmix64 finalization
  std::uint64_t x = 0xcbf29ce484222325ull;
  for (char c : stream) {
    x ^= std::uint8_t(c);
    x *= 0x100000001b3ull;
  }
  x ^= seed + 0x9e3779b97f4a7c15ull * (index + 1);
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

double BumpSum::operator()(const Point &x) const {
  double s = 0.0;
  for (std::size_t k = 0; k < centers.size(); ++k) {
    double r2 = 0.0;
    for (int a = 0; a < dim; ++a) {
      const double z = x[a] - centers[k][a];
      r2 += z * z;
    }
    s += amplitudes[k] * std::exp(-r2 / (2.0 * widths[k] * widths[k]));
  }
  return s;
}

ScalarField BumpSum::sample(const Grid &grid) const {
  return ScalarField::sample(grid, [this](const Point &x) { return (*this)(x); });
}

BumpSum random_bumps(Rng &rng, int d, double half_width, const RandomFieldParams &params,
                     bool signed_amplitudes) {
  BumpSum b;
  b.dim = d;
  const double reach = params.support_fraction * half_width;
  for (int k = 0; k < params.bumps; ++k) {
    Point c{0.0, 0.0, 0.0};
    for (int a = 0; a < d; ++a)
      c[a] = rng.uniform(-reach, reach);
    b.centers.push_back(c);
    b.widths.push_back(params.blur_width * half_width * rng.uniform(0.5, 1.5));
    b.amplitudes.push_back(signed_amplitudes ? rng.uniform(-1.0, 1.0) : rng.uniform(0.2, 1.0));
  }
  return b;
}

bool BallUnion::contains(const Point &x) const {
  for (std::size_t k = 0; k < centers.size(); ++k) {
    double r2 = 0.0;
    for (int a = 0; a < dim; ++a) {
      const double z = x[a] - centers[k][a];
      r2 += z * z;
    }
    if (r2 < radii[k] * radii[k])
      return true;
  }
  return false;
}

GridSet BallUnion::sample(const Grid &grid) const {
  return GridSet::from_predicate(grid, [this](const Point &x) { return contains(x); });
}

BallUnion random_balls(Rng &rng, int d, double half_width, const RandomFieldParams &params) {
  BallUnion u;
  u.dim = d;
  const double reach = params.support_fraction * half_width;
  for (int k = 0; k < params.bumps; ++k) {
    Point c{0.0, 0.0, 0.0};
    for (int a = 0; a < d; ++a)
      c[a] = rng.uniform(-reach, reach);
    u.centers.push_back(c);
    u.radii.push_back(params.blur_width * half_width * rng.uniform(0.5, 1.5));
  }
  return u;
}

ScalarField random_cells(Rng &rng, const Grid &grid, double support_fraction, bool signed_values,
                         int levels) {
  std::vector<double> v(grid.size(), 0.0);
  for (double &x : v) {
    if (rng.uniform() >= support_fraction)
      continue;
    x = levels > 0 ? double(rng.integer(1, levels)) / levels : rng.uniform(0.0, 1.0);
    if (signed_values && rng.uniform() < 0.5)
      x = -x;
  }
  return ScalarField(grid, std::move(v));
}

} // namespace symkit
