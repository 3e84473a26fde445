#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "fft.hpp"
#include "symkit/functionals.hpp"

namespace symkit {
namespace {

struct Box {
  Index lo{0, 0, 0};
  Index hi{-1, -1, -1}; // inclusive; hi < lo marks an empty box
  bool empty() const { return hi[0] < lo[0]; }
  int extent(int k) const { return hi[k] - lo[k] + 1; }
};

Box support_box(const ScalarField &f) {
  Box b;
  bool any = false;
  for_each_index(f.grid(), [&](const Index &i, std::size_t c) {
    if (f[c] == 0.0)
      return;
    if (!any) {
      b.lo = b.hi = i;
      any = true;
      return;
    }
    for (int k = 0; k < 3; ++k) {
      b.lo[k] = std::min(b.lo[k], i[k]);
      b.hi[k] = std::max(b.hi[k], i[k]);
    }
  });
  return b;
}

std::vector<double> crop(const ScalarField &f, const Box &b) {
  std::vector<double> out;
  out.reserve(std::size_t(b.extent(0)) * b.extent(1) * b.extent(2));
  Index i;
  for (i[0] = b.lo[0]; i[0] <= b.hi[0]; ++i[0])
    for (i[1] = b.lo[1]; i[1] <= b.hi[1]; ++i[1])
      for (i[2] = b.lo[2]; i[2] <= b.hi[2]; ++i[2])
        out.push_back(f.at(i));
  return out;
}

void require_compatible(const Grid &a, const Grid &b, const char *op) {
  if (a.dim != b.dim || a.spacing != b.spacing)
    throw GridMismatch(std::string(op) + ": operands differ in dimension or spacing");
}

ScalarField convolve_impl(const ScalarField &g, const ScalarField &h, int pad, bool auto_pad) {
  require_compatible(g.grid(), h.grid(), "convolve");
  const int d = g.grid().dim;
  Index n{1, 1, 1};
  for (int k = 0; k < d; ++k)
    n[k] = g.grid().extents[k] + h.grid().extents[k] - 1;
  const Grid out_grid(d, n, g.grid().spacing);

  const Box bg = support_box(g), bh = support_box(h);
  if (bg.empty() || bh.empty())
    return ScalarField(out_grid);

  std::vector<int> shape, gshape, hshape;
  for (int k = 0; k < d; ++k) {
    const int need = bg.extent(k) + bh.extent(k) - 1;
    const int avail = std::max(g.grid().extents[k], h.grid().extents[k]) + pad;
    if (!auto_pad && avail < need)
      throw InsufficientPadding("convolve: axis " + std::to_string(k) + " needs " +
                                std::to_string(need) + " cells, padded buffer has " +
                                std::to_string(avail));
    shape.push_back(detail::fft_good_size(need));
    gshape.push_back(bg.extent(k));
    hshape.push_back(bh.extent(k));
  }

  const detail::RealFftPlan plan(shape);
  detail::FftwBuffer<double> a(plan.real_size()), b(plan.real_size());
  detail::FftwBuffer<fftw_complex> sa(plan.complex_size()), sb(plan.complex_size());
  const auto cg = crop(g, bg), ch = crop(h, bh);
  detail::embed(cg.data(), gshape, a.data, shape);
  detail::embed(ch.data(), hshape, b.data, shape);
  plan.forward(a.data, sa.data);
  plan.forward(b.data, sb.data);
  for (std::size_t c = 0; c < sa.size; ++c) {
    const double ar = sa[c][0], ai = sa[c][1], br = sb[c][0], bi = sb[c][1];
    sa[c][0] = ar * br - ai * bi;
    sa[c][1] = ar * bi + ai * br;
  }
  plan.backward(sa.data, a.data);

  const double scale = g.grid().cell_volume() / double(plan.real_size());
  Index L{1, 1, 1}, e{1, 1, 1};
  for (int k = 0; k < d; ++k) {
    L[k] = shape[std::size_t(k)];
    e[k] = bg.extent(k) + bh.extent(k) - 1;
  }
  std::vector<double> out(out_grid.size(), 0.0);
  Index j;
  for (j[0] = 0; j[0] < e[0]; ++j[0])
    for (j[1] = 0; j[1] < e[1]; ++j[1])
      for (j[2] = 0; j[2] < e[2]; ++j[2]) {
        Index dst;
        for (int k = 0; k < 3; ++k)
          dst[k] = j[k] + bg.lo[k] + bh.lo[k];
        const std::size_t src = (std::size_t(j[0]) * L[1] + std::size_t(j[1])) * L[2] + std::size_t(j[2]);
        out[out_grid.flat(dst)] = a[src] * scale;
      }
  return ScalarField(out_grid, std::move(out));
}

/// Average of g over a displacement spread by one triangular density per axis.
ScalarField triangle_smear(const ScalarField &g) {
  const Grid &gg = g.grid();
  std::vector<double> cur(g.values().begin(), g.values().end());
  Index n = gg.extents;
  for (int axis = 0; axis < gg.dim; ++axis) {
    const bool odd = n[axis] % 2 == 1;
    Index m = n;
    m[axis] = n[axis] + (odd ? 2 : 1);
    const Grid src(gg.dim, n, gg.spacing), dst(gg.dim, m, gg.spacing);
    std::vector<double> next(dst.size(), 0.0);
    for_each_index(dst, [&](const Index &i, std::size_t f) {
      auto at = [&](int j) {
        Index s = i;
        s[axis] = j;
        return src.contains(s) ? cur[src.flat(s)] : 0.0;
      };
      const int k = i[axis];
      next[f] = odd ? 0.75 * at(k - 1) + 0.125 * (at(k) + at(k - 2)) : 0.5 * (at(k) + at(k - 1));
    });
    cur = std::move(next);
    n = m;
  }
  return ScalarField(Grid(gg.dim, n, gg.spacing), std::move(cur));
}

double multilinear(const ScalarField &w, const Point &p) {
  const Grid &g = w.grid();
  Index base{0, 0, 0};
  double frac[3] = {0.0, 0.0, 0.0};
  for (int k = 0; k < g.dim; ++k) {
    const double t = p[k] / g.spacing + 0.5 * (g.extents[k] - 1);
    const double fl = std::floor(t);
    if (fl < -1.0 || fl > g.extents[k] - 1)
      return 0.0;
    base[k] = int(fl);
    frac[k] = t - fl;
  }
  double s = 0.0;
  for (int corner = 0; corner < (1 << g.dim); ++corner) {
    Index i = base;
    double wgt = 1.0;
    for (int k = 0; k < g.dim; ++k) {
      const int bit = (corner >> k) & 1;
      i[k] += bit;
      wgt *= bit ? frac[k] : 1.0 - frac[k];
    }
    if (wgt != 0.0)
      s += wgt * w.at_or_zero(i);
  }
  return s;
}

} // namespace

ScalarField convolve(const ScalarField &g, const ScalarField &h, int pad) {
  if (pad < 0)
    throw DomainError("convolve: pad must be nonnegative");
  return convolve_impl(g, h, pad, false);
}

ScalarField convolve(const ScalarField &g, const ScalarField &h) { return convolve_impl(g, h, 0, true); }

double riesz_triple(const ScalarField &f, const KernelSpec &kernel, const ScalarField &h) {
  require_same_grid(f.grid(), h.grid(), "riesz_triple");
  return KernelOperator(kernel, f.grid()).form(f, h);
}

double riesz_triple(const ScalarField &f, const ScalarField &g, const ScalarField &h) {
  require_same_grid(f.grid(), h.grid(), "riesz_triple");
  return KernelOperator(g, f.grid()).form(f, h);
}

double riesz_triple_cellwise(const ScalarField &f, const ScalarField &g, const ScalarField &h) {
  require_same_grid(f.grid(), h.grid(), "riesz_triple_cellwise");
  require_compatible(f.grid(), g.grid(), "riesz_triple_cellwise");
  return KernelOperator(triangle_smear(g), f.grid()).form(f, h);
}

ScalarField cellwise_kernel(const KernelSpec &kernel, const Grid &operand) {
  validate(kernel, operand.dim);
  if (std::holds_alternative<FracKernel>(kernel))
    throw DomainError("cellwise_kernel: FracKernel is not locally integrable");
  const int d = operand.dim;
  const Grid dg = operand.displacement_grid();
  const double h = dg.spacing;
  std::vector<double> v(dg.size());

  if (d == 1 && std::holds_alternative<PowerLaw>(kernel)) {
    // second difference of the double antiderivative of |z|^-lambda
    const double lam = std::get<PowerLaw>(kernel).lambda;
    auto F2 = [lam](double y) { return std::pow(std::fabs(y), 2.0 - lam) / ((1.0 - lam) * (2.0 - lam)); };
    const int c = (dg.extents[0] - 1) / 2;
    for (int k = 0; k < dg.extents[0]; ++k) {
      const double z = (k - c) * h;
      v[std::size_t(k)] = (F2(z + h) - 2.0 * F2(z) + F2(z - h)) / (h * h);
    }
    return ScalarField(dg, std::move(v));
  }

  const int near = d == 1 ? 8 : d == 2 ? 3 : 2;
  const int m = d == 1 ? 256 : d == 2 ? 48 : 16;
  std::vector<double> node(static_cast<std::size_t>(m)), weight(static_cast<std::size_t>(m));
  for (int t = 0; t < m; ++t) {
    node[std::size_t(t)] = (-1.0 + (t + 0.5) * 2.0 / m) * h;
    weight[std::size_t(t)] = (1.0 - std::fabs(node[std::size_t(t)]) / h) * 2.0 / m;
  }
  const int total = d == 1 ? m : d == 2 ? m * m : m * m * m;

  for_each_index(dg, [&](const Index &i, std::size_t f) {
    double z[3] = {0.0, 0.0, 0.0};
    int cheb = 0;
    for (int k = 0; k < d; ++k) {
      const int off = i[k] - (dg.extents[k] - 1) / 2;
      cheb = std::max(cheb, std::abs(off));
      z[k] = off * h;
    }
    if (cheb > near) {
      v[f] = kernel_profile(kernel, d, std::sqrt(z[0] * z[0] + z[1] * z[1] + z[2] * z[2]));
      return;
    }
    double s = 0.0;
    for (int c = 0; c < total; ++c) {
      int rest = c;
      double w = 1.0, r2 = 0.0;
      for (int k = 0; k < d; ++k) {
        const int t = rest % m;
        rest /= m;
        w *= weight[std::size_t(t)];
        const double y = z[k] + node[std::size_t(t)];
        r2 += y * y;
      }
      s += w * kernel_profile(kernel, d, std::sqrt(r2));
    }
    v[f] = s;
  });
  return ScalarField(dg, std::move(v));
}

double weighted_F_energy(const SupermodularF &F, const ScalarField &f, const ScalarField &g,
                         const ScalarField &W, double a, double b) {
  require_same_grid(f.grid(), g.grid(), "weighted_F_energy");
  require_compatible(f.grid(), W.grid(), "weighted_F_energy");
  if (a == 0.0 || b == 0.0)
    throw DomainError("weighted_F_energy: a and b must be nonzero");
  if (!f.nonneg() || !g.nonneg() || !W.nonneg())
    throw DomainError("weighted_F_energy: inputs must be nonnegative");

  const Grid &grid = f.grid();
  const int d = grid.dim;
  std::vector<std::size_t> fx, gy;
  for (std::size_t c = 0; c < f.size(); ++c) {
    if (f[c] != 0.0)
      fx.push_back(c);
    if (g[c] != 0.0)
      gy.push_back(c);
  }
  double s = 0.0;
  for (std::size_t i : fx) {
    const Point x = grid.center(grid.unflat(i));
    for (std::size_t j : gy) {
      const Point y = grid.center(grid.unflat(j));
      Point p{0.0, 0.0, 0.0};
      for (int k = 0; k < d; ++k)
        p[k] = a * x[k] + b * y[k];
      const double w = multilinear(W, p);
      if (w != 0.0)
        s += F(f[i], g[j]) * w;
    }
  }
  const double hd = grid.cell_volume();
  return s * hd * hd;
}

} // namespace symkit
