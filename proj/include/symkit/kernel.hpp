#pragma once

#include <memory>
#include <variant>

#include "symkit/field.hpp"

namespace symkit {

/// |z|^-lambda, 0 < lambda < d.
struct PowerLaw {
  double lambda;
};
/// |z|^-(d + s p), 0 < s < 1, p >= 1. Only ever evaluated off the diagonal.
struct FracKernel {
  double s;
  double p;
};
/// 1_{|z| < R}.
struct BallIndicator {
  double radius;
};
/// (4 pi t)^-d/2 exp(-|z|^2 / 4t).
struct HeatGaussian {
  double t;
};
/// |z|^alpha, alpha > 0 (symmetric increasing).
struct PowerGrowth {
  double alpha;
};

using KernelSpec = std::variant<PowerLaw, FracKernel, BallIndicator, HeatGaussian, PowerGrowth>;

/// Throws DomainError when the parameters are outside their range for dimension d.
void validate(const KernelSpec &k, int d);

/// Radial profile at r > 0.
double kernel_profile(const KernelSpec &k, int d, double r);

/// Value assigned to the cell at displacement zero on a lattice of spacing h.
///
/// PowerLaw and BallIndicator use the average over the central cell, taken with a
/// 32^d midpoint rule; FracKernel returns 0 (the diagonal is excluded); the others
/// are point values.
double kernel_central_value(const KernelSpec &k, int d, double h);

/// Samples the kernel at every displacement x - y between cells of `operand`
/// (a grid with extents 2n - 1 centered at zero).
ScalarField sample_kernel(const KernelSpec &k, const Grid &operand);

/// Convolution with a fixed kernel, evaluated on a fixed operand grid.
///
/// apply(u)(x) = sum_y K(x - y) u(y) h^d for every cell center x of the operand grid.
/// The kernel is any field with odd extents (so its cell centers lie on h Z^d and
/// its own center sits at displacement zero). Its transform is computed once;
/// apply() is safe to call concurrently.
class KernelOperator {
public:
  KernelOperator(const ScalarField &kernel, const Grid &operand);
  KernelOperator(const KernelSpec &kernel, const Grid &operand);
  ~KernelOperator();
  KernelOperator(KernelOperator &&) noexcept;
  KernelOperator &operator=(KernelOperator &&) noexcept;

  const Grid &operand_grid() const;
  ScalarField apply(const ScalarField &u) const;
  /// sum_x f(x) apply(u)(x) h^d
  double form(const ScalarField &f, const ScalarField &u) const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

} // namespace symkit
