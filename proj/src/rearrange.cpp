#include "symkit/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>

namespace symkit {

CellOrder::CellOrder(const Grid &grid) : grid_(grid), cells_(grid.size()), rank_(grid.size()) {
  std::vector<std::int64_t> r2(grid.size());
  for_each_index(grid, [&](const Index &i, std::size_t f) { r2[f] = grid.doubled_radius2(i); });
  std::iota(cells_.begin(), cells_.end(), std::size_t{0});
  std::stable_sort(cells_.begin(), cells_.end(),
                   [&](std::size_t a, std::size_t b) { return r2[a] < r2[b]; });
  for (std::size_t k = 0; k < cells_.size(); ++k)
    rank_[cells_[k]] = k;
}

GridSet set_symmetrize(const GridSet &a) {
  const CellOrder order(a.grid());
  const std::size_t k = a.count();
  std::vector<std::uint8_t> m(a.grid().size(), 0);
  for (std::size_t c = 0; c < k; ++c)
    m[order.cells()[c]] = 1;
  return GridSet(a.grid(), std::move(m));
}

ScalarField rearrange(const ScalarField &f) {
  const CellOrder order(f.grid());
  std::vector<double> sorted(f.size());
  for (std::size_t c = 0; c < f.size(); ++c)
    sorted[c] = std::fabs(f[c]);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  std::vector<double> out(f.size());
  for (std::size_t k = 0; k < out.size(); ++k)
    out[order.cells()[k]] = sorted[k];
  return ScalarField(f.grid(), std::move(out));
}

ScalarField steiner_symmetrize(const ScalarField &f, int axis) {
  const Grid &g = f.grid();
  if (axis < 0 || axis >= g.dim)
    throw DomainError("steiner_symmetrize: axis " + std::to_string(axis) + " out of range");

  const int n = g.extents[axis];
  const CellOrder line_order(Grid(1, Index{n, 1, 1}, g.spacing));
  std::size_t stride = 1;
  for (int k = axis + 1; k < 3; ++k)
    stride *= std::size_t(g.extents[k]);

  std::vector<double> out(f.size());
  std::vector<double> line(static_cast<std::size_t>(n));
  // every cell with index 0 along `axis` starts a line
  for_each_index(g, [&](const Index &i, std::size_t start) {
    if (i[axis] != 0)
      return;
    for (int t = 0; t < n; ++t)
      line[std::size_t(t)] = std::fabs(f[start + std::size_t(t) * stride]);
    std::sort(line.begin(), line.end(), std::greater<>());
    for (int k = 0; k < n; ++k)
      out[start + line_order.cells()[std::size_t(k)] * stride] = line[std::size_t(k)];
  });
  return ScalarField(g, std::move(out));
}

namespace {

IncreasingRearrangement place_ascending(const ScalarField &v, const GridSet &omega,
                                        std::vector<std::size_t> members) {
  const CellOrder order(v.grid());
  std::vector<double> out(v.size(), 0.0);
  std::vector<std::uint8_t> mask(v.size(), 0);
  for (std::size_t k = 0; k < members.size(); ++k) {
    const std::size_t dst = order.cells()[k];
    out[dst] = v[members[k]];
    mask[dst] = 1;
  }
  return {ScalarField(v.grid(), std::move(out)), GridSet(omega.grid(), std::move(mask))};
}

std::vector<std::size_t> members_of(const ScalarField &v, const GridSet &omega) {
  require_same_grid(v.grid(), omega.grid(), "increasing_rearrangement");
  std::vector<std::size_t> m;
  for (std::size_t c = 0; c < omega.grid().size(); ++c)
    if (omega[c])
      m.push_back(c);
  if (m.empty())
    throw DomainError("increasing_rearrangement: empty domain");
  return m;
}

} // namespace

IncreasingRearrangement increasing_rearrangement(const ScalarField &v, const GridSet &omega) {
  auto m = members_of(v, omega);
  std::stable_sort(m.begin(), m.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  return place_ascending(v, omega, std::move(m));
}

IncreasingRearrangement increasing_rearrangement_via(const ScalarField &v, const GridSet &omega,
                                                     const std::function<double(double)> &phi) {
  auto m = members_of(v, omega);
  std::vector<double> key(v.size(), 0.0);
  for (std::size_t c : m) {
    key[c] = phi(v[c]);
    if (!(key[c] > 0.0))
      throw DomainError("increasing_rearrangement_via: phi must be positive");
  }
  // Sorting phi(V) 1_Omega descending is what rearrange() does; keys that collide in
  // floating point are ordered by the underlying V.
  std::stable_sort(m.begin(), m.end(), [&](std::size_t a, std::size_t b) {
    if (key[a] != key[b])
      return key[a] > key[b];
    return v[a] < v[b];
  });
  return place_ascending(v, omega, std::move(m));
}

ScalarField bathtub_fill(double mass, const Grid &grid) {
  if (!(mass >= 0.0))
    throw DomainError("bathtub_fill: mass must be nonnegative");
  const double cell = grid.cell_volume();
  double q = mass / cell;
  const double total = double(grid.size());
  if (q > total * (1.0 + 1e-12))
    throw DomainError("bathtub_fill: mass exceeds box volume");
  // snap quotients that are integers up to rounding
  if (std::fabs(q - std::round(q)) <= 1e-9 * std::max(1.0, q))
    q = std::round(q);
  q = std::min(q, total);
  const auto full = std::size_t(std::floor(q));
  const double frac = q - double(full);

  const CellOrder order(grid);
  std::vector<double> out(grid.size(), 0.0);
  for (std::size_t k = 0; k < full; ++k)
    out[order.cells()[k]] = 1.0;
  if (frac > 0.0 && full < out.size())
    out[order.cells()[full]] = frac;
  return ScalarField(grid, std::move(out));
}

ScalarField truncate(const ScalarField &f, double eps, std::optional<double> cap) {
  if (!(eps >= 0.0))
    throw DomainError("truncate: eps must be nonnegative");
  if (cap && !(*cap > 0.0))
    throw DomainError("truncate: cap must be positive");
  return transform(f, [eps, cap](double v) {
    const double t = std::max(std::fabs(v) - eps, 0.0);
    return cap ? std::min(t, *cap) : t;
  });
}

} // namespace symkit
