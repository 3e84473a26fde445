#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "symkit/field.hpp"

namespace symkit {

/// Total order on the cells of a grid: ascending distance of the cell center to the
/// origin, ties broken by storage (lexicographic) index. Prefixes of this order are
/// the discrete centered balls.
///
/// Distances are compared in exact integer arithmetic, so the order is identical on
/// every platform.
class CellOrder {
public:
  explicit CellOrder(const Grid &grid);

  const Grid &grid() const { return grid_; }
  /// cells()[k] is the flat index of the k-th cell.
  const std::vector<std::size_t> &cells() const { return cells_; }
  /// rank()[flat] is the position of a cell in the order.
  const std::vector<std::size_t> &rank() const { return rank_; }

private:
  Grid grid_;
  std::vector<std::size_t> cells_;
  std::vector<std::size_t> rank_;
};

/// Discrete A*: the first count(A) cells of CellOrder.
GridSet set_symmetrize(const GridSet &a);

/// Symmetric decreasing rearrangement: |values| sorted descending, written along CellOrder.
ScalarField rearrange(const ScalarField &f);

/// One-dimensional rearrangement applied to every grid line parallel to `axis`.
ScalarField steiner_symmetrize(const ScalarField &f, int axis);

struct IncreasingRearrangement {
  ScalarField potential; ///< V_* on the cells of `domain`, zero elsewhere
  GridSet domain;        ///< Omega*
};

/// V_* on Omega*: the Omega-values of V sorted ascending along CellOrder.
IncreasingRearrangement increasing_rearrangement(const ScalarField &v, const GridSet &omega);

/// Same result routed through a strictly decreasing positive `phi`: rearranges
/// phi(V) 1_Omega and carries the original V values along with the permutation, so
/// the output does not depend on which phi is used.
IncreasingRearrangement increasing_rearrangement_via(const ScalarField &v, const GridSet &omega,
                                                     const std::function<double(double)> &phi);

/// Density 1 on the first floor(mass / h^d) cells of CellOrder and the fractional
/// remainder on the next one.
ScalarField bathtub_fill(double mass, const Grid &grid);

/// min((|f| - eps)_+, cap); no upper cutoff when `cap` is empty.
ScalarField truncate(const ScalarField &f, double eps, std::optional<double> cap = std::nullopt);

} // namespace symkit
