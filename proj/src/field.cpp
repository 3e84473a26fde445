#include "symkit/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace symkit {

ScalarField::ScalarField(const Grid &grid) : grid_(grid), values_(grid.size(), 0.0) {}

ScalarField::ScalarField(const Grid &grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw DomainError("field has " + std::to_string(values_.size()) + " values, grid has " +
                      std::to_string(grid_.size()) + " cells");
  for (double v : values_) {
    if (!std::isfinite(v))
      throw DomainError("field values must be finite");
    if (v < 0.0)
      nonneg_ = false;
  }
}

ScalarField ScalarField::sample(const Grid &grid, const std::function<double(const Point &)> &fn) {
  std::vector<double> v(grid.size());
  for_each_index(grid, [&](const Index &i, std::size_t f) { v[f] = fn(grid.center(i)); });
  return ScalarField(grid, std::move(v));
}

GridSet::GridSet(const Grid &grid, std::vector<std::uint8_t> mask)
    : grid_(grid), mask_(std::move(mask)) {
  if (mask_.size() != grid_.size())
    throw DomainError("mask size does not match grid");
  for (auto &m : mask_)
    m = m ? 1 : 0;
}

GridSet GridSet::from_predicate(const Grid &grid, const std::function<bool(const Point &)> &pred) {
  std::vector<std::uint8_t> m(grid.size());
  for_each_index(grid, [&](const Index &i, std::size_t f) { m[f] = pred(grid.center(i)) ? 1 : 0; });
  return GridSet(grid, std::move(m));
}

std::size_t GridSet::count() const {
  return std::size_t(std::count(mask_.begin(), mask_.end(), std::uint8_t{1}));
}

double measure(const GridSet &a) { return double(a.count()) * a.grid().cell_volume(); }

double DistributionFunction::operator()(double tau) const {
  if (levels.empty() || tau < 0.0)
    return measures.empty() ? 0.0 : measures.front();
  // last level <= tau
  auto it = std::upper_bound(levels.begin(), levels.end(), tau);
  if (it == levels.begin())
    return measures.front();
  return measures[std::size_t(it - levels.begin()) - 1];
}

DistributionFunction distribution_function(const ScalarField &f) {
  std::vector<double> a(f.size());
  for (std::size_t k = 0; k < f.size(); ++k)
    a[k] = std::fabs(f[k]);
  std::sort(a.begin(), a.end());
  const double cell = f.grid().cell_volume();

  DistributionFunction d;
  d.levels.push_back(0.0);
  // cells strictly above 0
  std::size_t above = std::size_t(a.end() - std::upper_bound(a.begin(), a.end(), 0.0));
  d.measures.push_back(double(above) * cell);
  std::size_t k = a.size() - above;
  while (k < a.size()) {
    const double level = a[k];
    while (k < a.size() && a[k] == level)
      ++k;
    d.levels.push_back(level);
    d.measures.push_back(double(a.size() - k) * cell);
  }
  return d;
}

ScalarField layer_cake_reconstruct(const ScalarField &f, std::size_t quadrature_levels) {
  if (quadrature_levels == 0)
    throw DomainError("layer_cake_reconstruct: need at least one level");
  const auto dist = distribution_function(f);
  // dist.levels = {0, t_1 < t_2 < ... < t_m}
  std::vector<double> taus(dist.levels.begin() + 1, dist.levels.end());
  if (taus.size() > quadrature_levels) {
    std::vector<double> picked;
    for (std::size_t q = 1; q <= quadrature_levels; ++q)
      picked.push_back(taus[q * taus.size() / quadrature_levels - 1]);
    taus = std::move(picked);
  }
  // |f|(x) = sum_k (t_k - t_{k-1}) 1{|f| > t_{k-1}}(x), t_0 = 0
  std::vector<double> out(f.size(), 0.0);
  double prev = 0.0;
  for (double t : taus) {
    const double gap = t - prev;
    for (std::size_t c = 0; c < f.size(); ++c)
      if (std::fabs(f[c]) > prev)
        out[c] += gap;
    prev = t;
  }
  return ScalarField(f.grid(), std::move(out));
}

ScalarField abs(const ScalarField &f) {
  return transform(f, [](double v) { return std::fabs(v); });
}

ScalarField indicator(const GridSet &a) {
  std::vector<double> v(a.grid().size());
  for (std::size_t k = 0; k < v.size(); ++k)
    v[k] = a[k] ? 1.0 : 0.0;
  return ScalarField(a.grid(), std::move(v));
}

GridSet superlevel_set(const ScalarField &f, double tau) {
  std::vector<std::uint8_t> m(f.size());
  for (std::size_t k = 0; k < m.size(); ++k)
    m[k] = std::fabs(f[k]) > tau ? 1 : 0;
  return GridSet(f.grid(), std::move(m));
}

GridSet support(const ScalarField &f) { return superlevel_set(f, 0.0); }

ScalarField operator+(const ScalarField &a, const ScalarField &b) {
  require_same_grid(a.grid(), b.grid(), "operator+");
  std::vector<double> v(a.size());
  for (std::size_t k = 0; k < v.size(); ++k)
    v[k] = a[k] + b[k];
  return ScalarField(a.grid(), std::move(v));
}

ScalarField operator-(const ScalarField &a, const ScalarField &b) {
  require_same_grid(a.grid(), b.grid(), "operator-");
  std::vector<double> v(a.size());
  for (std::size_t k = 0; k < v.size(); ++k)
    v[k] = a[k] - b[k];
  return ScalarField(a.grid(), std::move(v));
}

ScalarField operator*(double s, const ScalarField &a) {
  return transform(a, [s](double v) { return s * v; });
}

ScalarField transform(const ScalarField &a, const std::function<double(double)> &fn) {
  std::vector<double> v(a.size());
  for (std::size_t k = 0; k < v.size(); ++k)
    v[k] = fn(a[k]);
  return ScalarField(a.grid(), std::move(v));
}

} // namespace symkit
