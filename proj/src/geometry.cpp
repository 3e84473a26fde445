#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "symkit/functionals.hpp"

namespace symkit {
namespace {

/// One pass of the lower-envelope squared distance transform along a strided line.
void edt_line(double *data, std::size_t stride, int n, std::vector<double> &f, std::vector<int> &v,
              std::vector<double> &z) {
  for (int q = 0; q < n; ++q)
    f[std::size_t(q)] = data[std::size_t(q) * stride];
  int k = 0;
  v[0] = 0;
  z[0] = -std::numeric_limits<double>::infinity();
  z[1] = std::numeric_limits<double>::infinity();
  auto meet = [&](int q, int p) {
    return ((f[std::size_t(q)] + double(q) * q) - (f[std::size_t(p)] + double(p) * p)) / (2.0 * (q - p));
  };
  for (int q = 1; q < n; ++q) {
    double s = meet(q, v[std::size_t(k)]);
    while (s <= z[std::size_t(k)]) {
      --k;
      s = meet(q, v[std::size_t(k)]);
    }
    ++k;
    v[std::size_t(k)] = q;
    z[std::size_t(k)] = s;
    z[std::size_t(k) + 1] = std::numeric_limits<double>::infinity();
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[std::size_t(k) + 1] < q)
      ++k;
    const int p = v[std::size_t(k)];
    data[std::size_t(q) * stride] = double(q - p) * (q - p) + f[std::size_t(p)];
  }
}

} // namespace

double perimeter(const GridSet &a) {
  const Grid &g = a.grid();
  std::size_t faces = 0;
  for_each_index(g, [&](const Index &i, std::size_t c) {
    if (!a[c])
      return;
    for (int k = 0; k < g.dim; ++k)
      for (int s : {-1, 1}) {
        Index j = i;
        j[k] += s;
        faces += a.at_or_false(j) ? 0 : 1;
      }
  });
  return double(faces) * std::pow(g.spacing, g.dim - 1);
}

double minkowski_content(const GridSet &a, double eps) {
  const Grid &g = a.grid();
  if (!(eps >= g.spacing))
    throw DomainError("minkowski_content: eps below grid resolution");
  if (a.empty())
    return 0.0;

  // squared distance (in cells) to the nearest complement cell, on the box padded by
  // one layer of complement cells
  Index n{1, 1, 1};
  for (int k = 0; k < g.dim; ++k)
    n[k] = g.extents[k] + 2;
  const Grid pg(g.dim, n, g.spacing);
  const double far = 1e12;
  std::vector<double> dist(pg.size(), 0.0);
  for_each_index(g, [&](const Index &i, std::size_t c) {
    if (a[c])
      dist[pg.flat({i[0] + 1, g.dim > 1 ? i[1] + 1 : 0, g.dim > 2 ? i[2] + 1 : 0})] = far;
  });

  const int longest = std::max({n[0], n[1], n[2]});
  std::vector<double> f(static_cast<std::size_t>(longest)), z(std::size_t(longest) + 1);
  std::vector<int> v(static_cast<std::size_t>(longest));
  for (int axis = 0; axis < g.dim; ++axis) {
    std::size_t stride = 1;
    for (int k = axis + 1; k < 3; ++k)
      stride *= std::size_t(n[k]);
    for_each_index(pg, [&](const Index &i, std::size_t c) {
      if (i[axis] == 0)
        edt_line(dist.data() + c, stride, n[axis], f, v, z);
    });
  }

  const double h = g.spacing;
  std::size_t count = 0;
  for_each_index(g, [&](const Index &i, std::size_t c) {
    if (!a[c])
      return;
    const double d2 = dist[pg.flat({i[0] + 1, g.dim > 1 ? i[1] + 1 : 0, g.dim > 2 ? i[2] + 1 : 0})];
    if (std::sqrt(d2) * h - 0.5 * h < eps)
      ++count;
  });
  return double(count) * g.cell_volume() / eps;
}

double gradient_pnorm(const ScalarField &u, double p) {
  if (!(p >= 1.0))
    throw DomainError("gradient_pnorm: need p >= 1");
  const Grid &g = u.grid();
  const double h = g.spacing;
  const bool sup = std::isinf(p);
  Index lo{0, 0, 0};
  for (int k = 0; k < g.dim; ++k)
    lo[k] = -1;
  double acc = 0.0;
  Index i;
  for (i[0] = lo[0]; i[0] < g.extents[0]; ++i[0])
    for (i[1] = lo[1]; i[1] < g.extents[1]; ++i[1])
      for (i[2] = lo[2]; i[2] < g.extents[2]; ++i[2]) {
        const double here = u.at_or_zero(i);
        double g2 = 0.0;
        for (int k = 0; k < g.dim; ++k) {
          Index j = i;
          ++j[k];
          const double dk = (u.at_or_zero(j) - here) / h;
          g2 += dk * dk;
        }
        if (g2 == 0.0)
          continue;
        if (sup)
          acc = std::max(acc, std::sqrt(g2));
        else
          acc += p == 2.0 ? g2 : std::pow(g2, 0.5 * p);
      }
  if (sup)
    return acc;
  return std::pow(acc * g.cell_volume(), 1.0 / p);
}

} // namespace symkit
