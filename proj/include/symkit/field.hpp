#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "symkit/grid.hpp"

namespace symkit {

/// Real function sampled at the cell centers of a Grid, extended by zero outside the box.
///
/// Immutable after construction; all values are finite. Operations that need a
/// padded domain build an explicitly padded copy.
class ScalarField {
public:
  ScalarField() = default;
  /// Zero field.
  explicit ScalarField(const Grid &grid);
  /// Throws DomainError on size mismatch or non-finite values.
  ScalarField(const Grid &grid, std::vector<double> values);

  /// Samples `fn` at every cell center.
  static ScalarField sample(const Grid &grid, const std::function<double(const Point &)> &fn);

  const Grid &grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t f) const { return values_[f]; }
  double at(const Index &i) const { return values_[grid_.flat(i)]; }
  /// Value at a (possibly outside) lattice index; zero outside the box.
  double at_or_zero(const Index &i) const { return grid_.contains(i) ? at(i) : 0.0; }
  std::size_t size() const { return values_.size(); }
  bool nonneg() const { return nonneg_; }

  /// Moves the storage out; the field is left empty.
  std::vector<double> release() && { return std::move(values_); }

private:
  Grid grid_;
  std::vector<double> values_;
  bool nonneg_ = true;
};

/// Finite-measure set encoded as a cell mask.
class GridSet {
public:
  GridSet() = default;
  explicit GridSet(const Grid &grid) : grid_(grid), mask_(grid.size(), 0) {}
  GridSet(const Grid &grid, std::vector<std::uint8_t> mask);

  static GridSet from_predicate(const Grid &grid, const std::function<bool(const Point &)> &pred);

  const Grid &grid() const { return grid_; }
  std::span<const std::uint8_t> mask() const { return mask_; }
  bool operator[](std::size_t f) const { return mask_[f] != 0; }
  bool at_or_false(const Index &i) const { return grid_.contains(i) && mask_[grid_.flat(i)]; }
  std::size_t count() const;
  bool empty() const { return count() == 0; }

private:
  Grid grid_;
  std::vector<std::uint8_t> mask_;
};

/// Step function tau -> |{|f| > tau}| over the distinct levels of |f|.
///
/// levels[0] = 0 < levels[1] < ...; measures[k] is the measure of {|f| > levels[k]}
/// and the function is constant on [levels[k], levels[k+1]).
struct DistributionFunction {
  std::vector<double> levels;
  std::vector<double> measures;

  double operator()(double tau) const;
  friend bool operator==(const DistributionFunction &, const DistributionFunction &) = default;
};

double measure(const GridSet &a);
DistributionFunction distribution_function(const ScalarField &f);

/// Rebuilds |f| as a finite sum of superlevel indicators weighted by level gaps.
///
/// `quadrature_levels` caps the number of layers; with at least as many layers as
/// distinct positive values of |f| the reconstruction is exact. With fewer, the
/// layers are taken at evenly spaced quantiles of the distinct levels, which rounds
/// each value of |f| up to the next retained level.
ScalarField layer_cake_reconstruct(const ScalarField &f, std::size_t quadrature_levels);

ScalarField abs(const ScalarField &f);
ScalarField indicator(const GridSet &a);
/// {|f| > tau}
GridSet superlevel_set(const ScalarField &f, double tau);
/// Cells with a nonzero value.
GridSet support(const ScalarField &f);

ScalarField operator+(const ScalarField &a, const ScalarField &b);
ScalarField operator-(const ScalarField &a, const ScalarField &b);
ScalarField operator*(double s, const ScalarField &a);
/// Pointwise map.
ScalarField transform(const ScalarField &a, const std::function<double(double)> &fn);

} // namespace symkit
