#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>

#include "symkit/error.hpp"

namespace symkit {

using Index = std::array<int, 3>;
using Point = std::array<double, 3>;

/// Uniform, origin-centered, cell-centered grid in d = 1, 2 or 3 dimensions.
///
/// Cell i along an axis with n cells has its center at (i - (n-1)/2) * h, so the
/// grid is symmetric about the origin for either parity of n. Storage is row-major
/// with the last axis fastest. Unused trailing axes have extent 1.
struct Grid {
  int dim = 1;
  Index extents{1, 1, 1};
  double spacing = 1.0;

  Grid() = default;
  Grid(int d, Index n, double h) : dim(d), extents(n), spacing(h) {
    if (d < 1 || d > 3)
      throw DomainError("unsupported dimension " + std::to_string(d));
    if (!(h > 0.0) || !std::isfinite(h))
      throw DomainError("grid spacing must be positive and finite");
    for (int k = 0; k < 3; ++k) {
      if (k >= d)
        extents[k] = 1;
      else if (extents[k] < 1)
        throw DomainError("grid extents must be positive");
    }
  }

  /// Same extent n along every axis.
  static Grid cube(int d, int n, double h) { return Grid(d, Index{n, n, n}, h); }

  std::size_t size() const {
    return std::size_t(extents[0]) * std::size_t(extents[1]) * std::size_t(extents[2]);
  }
  double cell_volume() const { return std::pow(spacing, dim); }
  double box_volume() const { return double(size()) * cell_volume(); }

  /// Half-width of the box along `axis` (cell faces at +-n h / 2).
  double half_width(int axis) const { return 0.5 * extents[axis] * spacing; }

  std::size_t flat(const Index &i) const {
    return (std::size_t(i[0]) * extents[1] + std::size_t(i[1])) * extents[2] + std::size_t(i[2]);
  }
  Index unflat(std::size_t f) const {
    Index i{0, 0, 0};
    i[2] = int(f % extents[2]);
    f /= extents[2];
    i[1] = int(f % extents[1]);
    i[0] = int(f / extents[1]);
    return i;
  }
  bool contains(const Index &i) const {
    for (int k = 0; k < 3; ++k)
      if (i[k] < 0 || i[k] >= extents[k])
        return false;
    return true;
  }

  /// 2 i - (n - 1): the cell-center coordinate in units of h / 2, exact in integers.
  int doubled_offset(int axis, int i) const { return 2 * i - (extents[axis] - 1); }

  /// Squared distance of the cell center to the origin in units of (h / 2)^2.
  std::int64_t doubled_radius2(const Index &i) const {
    std::int64_t r2 = 0;
    for (int k = 0; k < dim; ++k) {
      const std::int64_t o = doubled_offset(k, i[k]);
      r2 += o * o;
    }
    return r2;
  }

  double coord(int axis, int i) const { return (i - 0.5 * (extents[axis] - 1)) * spacing; }
  Point center(const Index &i) const {
    Point x{0.0, 0.0, 0.0};
    for (int k = 0; k < dim; ++k)
      x[k] = coord(k, i[k]);
    return x;
  }

  /// True when cell centers sit on the displacement lattice h Z^d (all extents odd).
  bool on_displacement_lattice() const {
    for (int k = 0; k < dim; ++k)
      if (extents[k] % 2 == 0)
        return false;
    return true;
  }

  /// Grid of all pairwise displacements x - y between cells: extents 2n - 1, odd.
  Grid displacement_grid() const {
    Index n{1, 1, 1};
    for (int k = 0; k < dim; ++k)
      n[k] = 2 * extents[k] - 1;
    return Grid(dim, n, spacing);
  }

  friend bool operator==(const Grid &a, const Grid &b) {
    return a.dim == b.dim && a.extents == b.extents && a.spacing == b.spacing;
  }
};

/// Throws GridMismatch unless `a` and `b` are the same grid.
inline void require_same_grid(const Grid &a, const Grid &b, const char *op) {
  if (!(a == b))
    throw GridMismatch(std::string(op) + ": operands live on different grids");
}

/// Visit every cell index of `g` in storage order.
template <class F> void for_each_index(const Grid &g, F &&fn) {
  Index i{0, 0, 0};
  std::size_t f = 0;
  for (i[0] = 0; i[0] < g.extents[0]; ++i[0])
    for (i[1] = 0; i[1] < g.extents[1]; ++i[1])
      for (i[2] = 0; i[2] < g.extents[2]; ++i[2])
        fn(i, f++);
}

} // namespace symkit
