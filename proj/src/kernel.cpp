#include "symkit/kernel.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "fft.hpp"

namespace symkit {
namespace {

template <class... Ts> struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

constexpr int kCellSubsamples = 32;

/// Midpoint-rule average of fn(|z|) over the cell [-h/2, h/2]^d.
template <class F> double central_cell_average(int d, double h, F fn) {
  const int m = kCellSubsamples;
  double sum = 0.0;
  int idx[3] = {0, 0, 0};
  const int total = d == 1 ? m : d == 2 ? m * m : m * m * m;
  for (int c = 0; c < total; ++c) {
    int rest = c;
    double r2 = 0.0;
    for (int k = 0; k < d; ++k) {
      idx[k] = rest % m;
      rest /= m;
      const double z = ((idx[k] + 0.5) / m - 0.5) * h;
      r2 += z * z;
    }
    sum += fn(std::sqrt(r2));
  }
  return sum / total;
}

} // namespace

void validate(const KernelSpec &k, int d) {
  std::visit(overloaded{
                 [d](const PowerLaw &p) {
                   if (!(p.lambda > 0.0 && p.lambda < d))
                     throw DomainError("PowerLaw: need 0 < lambda < d");
                 },
                 [](const FracKernel &f) {
                   if (!(f.s > 0.0 && f.s < 1.0))
                     throw DomainError("FracKernel: need 0 < s < 1");
                   if (!(f.p >= 1.0) || !std::isfinite(f.p))
                     throw DomainError("FracKernel: need 1 <= p < inf");
                 },
                 [](const BallIndicator &b) {
                   if (!(b.radius > 0.0) || !std::isfinite(b.radius))
                     throw DomainError("BallIndicator: radius must be positive");
                 },
                 [](const HeatGaussian &g) {
                   if (!(g.t > 0.0) || !std::isfinite(g.t))
                     throw DomainError("HeatGaussian: t must be positive");
                 },
                 [](const PowerGrowth &g) {
                   if (!(g.alpha > 0.0) || !std::isfinite(g.alpha))
                     throw DomainError("PowerGrowth: alpha must be positive");
                 },
             },
             k);
}

double kernel_profile(const KernelSpec &k, int d, double r) {
  return std::visit(
      overloaded{
          [r](const PowerLaw &p) { return std::pow(r, -p.lambda); },
          [r, d](const FracKernel &f) { return std::pow(r, -(d + f.s * f.p)); },
          [r](const BallIndicator &b) { return r < b.radius ? 1.0 : 0.0; },
          [r, d](const HeatGaussian &g) {
            return std::pow(4.0 * std::numbers::pi * g.t, -0.5 * d) * std::exp(-r * r / (4.0 * g.t));
          },
          [r](const PowerGrowth &g) { return std::pow(r, g.alpha); },
      },
      k);
}

double kernel_central_value(const KernelSpec &k, int d, double h) {
  return std::visit(overloaded{
                        [d, h](const PowerLaw &p) {
                          // the unit-cell average scales exactly as h^-lambda
                          return std::pow(h, -p.lambda) *
                                 central_cell_average(d, 1.0, [&](double r) {
                                   return std::pow(r, -p.lambda);
                                 });
                        },
                        [](const FracKernel &) { return 0.0; },
                        [d, h](const BallIndicator &b) {
                          return central_cell_average(
                              d, h, [&](double r) { return r < b.radius ? 1.0 : 0.0; });
                        },
                        [d, h, &k](const HeatGaussian &) { return kernel_profile(k, d, 0.0); },
                        [](const PowerGrowth &) { return 0.0; },
                    },
                    k);
}

ScalarField sample_kernel(const KernelSpec &k, const Grid &operand) {
  validate(k, operand.dim);
  const Grid dg = operand.displacement_grid();
  const double h = dg.spacing;
  std::vector<double> v(dg.size());
  for_each_index(dg, [&](const Index &i, std::size_t f) {
    const std::int64_t r2 = dg.doubled_radius2(i);
    v[f] = r2 == 0 ? 0.0 : kernel_profile(k, dg.dim, 0.5 * h * std::sqrt(double(r2)));
  });
  const Index mid{(dg.extents[0] - 1) / 2, (dg.extents[1] - 1) / 2, (dg.extents[2] - 1) / 2};
  v[dg.flat(mid)] = kernel_central_value(k, dg.dim, h);
  return ScalarField(dg, std::move(v));
}

struct KernelOperator::Impl {
  Grid operand;
  Index kernel_extents;
  std::vector<int> shape;
  std::unique_ptr<detail::RealFftPlan> plan;
  std::unique_ptr<detail::FftwBuffer<fftw_complex>> spectrum;
  double scale = 1.0;
};

KernelOperator::KernelOperator(const ScalarField &kernel, const Grid &operand)
    : impl_(std::make_unique<Impl>()) {
  const Grid &kg = kernel.grid();
  if (kg.dim != operand.dim || kg.spacing != operand.spacing)
    throw GridMismatch("KernelOperator: kernel and operand grids differ in dimension or spacing");
  if (!kg.on_displacement_lattice())
    throw GridMismatch("KernelOperator: kernel grid needs odd extents");

  const int d = operand.dim;
  impl_->operand = operand;
  impl_->kernel_extents = kg.extents;
  std::vector<int> kshape(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    const int m = kg.extents[k], n = operand.extents[k];
    impl_->shape.push_back(detail::fft_good_size(std::max(m, n + (m - 1) / 2)));
    kshape[std::size_t(k)] = m;
  }
  impl_->plan = std::make_unique<detail::RealFftPlan>(impl_->shape);
  const auto &plan = *impl_->plan;
  impl_->scale = operand.cell_volume() / double(plan.real_size());

  detail::FftwBuffer<double> buf(plan.real_size());
  detail::embed(kernel.values().data(), kshape, buf.data, impl_->shape);
  impl_->spectrum = std::make_unique<detail::FftwBuffer<fftw_complex>>(plan.complex_size());
  plan.forward(buf.data, impl_->spectrum->data);
}

KernelOperator::KernelOperator(const KernelSpec &kernel, const Grid &operand)
    : KernelOperator(sample_kernel(kernel, operand), operand) {}

KernelOperator::~KernelOperator() = default;
KernelOperator::KernelOperator(KernelOperator &&) noexcept = default;
KernelOperator &KernelOperator::operator=(KernelOperator &&) noexcept = default;

const Grid &KernelOperator::operand_grid() const { return impl_->operand; }

ScalarField KernelOperator::apply(const ScalarField &u) const {
  const Impl &m = *impl_;
  require_same_grid(u.grid(), m.operand, "KernelOperator::apply");
  const int d = m.operand.dim;
  const auto &plan = *m.plan;

  std::vector<int> ushape(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k)
    ushape[std::size_t(k)] = m.operand.extents[k];
  detail::FftwBuffer<double> buf(plan.real_size());
  detail::FftwBuffer<fftw_complex> spec(plan.complex_size());
  detail::embed(u.values().data(), ushape, buf.data, m.shape);
  plan.forward(buf.data, spec.data);
  for (std::size_t c = 0; c < spec.size; ++c) {
    const double ar = spec[c][0], ai = spec[c][1];
    const double br = (*m.spectrum)[c][0], bi = (*m.spectrum)[c][1];
    spec[c][0] = ar * br - ai * bi;
    spec[c][1] = ar * bi + ai * br;
  }
  plan.backward(spec.data, buf.data);

  // operand cell i sits at full-convolution index i + (m - 1) / 2
  Index off{0, 0, 0}, L{1, 1, 1};
  for (int k = 0; k < d; ++k) {
    off[k] = (m.kernel_extents[k] - 1) / 2;
    L[k] = m.shape[std::size_t(k)];
  }
  std::vector<double> out(m.operand.size());
  for_each_index(m.operand, [&](const Index &i, std::size_t f) {
    const std::size_t src =
        (std::size_t(i[0] + off[0]) * L[1] + std::size_t(i[1] + off[1])) * L[2] +
        std::size_t(i[2] + off[2]);
    out[f] = buf[src] * m.scale;
  });
  return ScalarField(m.operand, std::move(out));
}

double KernelOperator::form(const ScalarField &f, const ScalarField &u) const {
  require_same_grid(f.grid(), impl_->operand, "KernelOperator::form");
  const ScalarField ku = apply(u);
  double s = 0.0;
  for (std::size_t c = 0; c < f.size(); ++c)
    s += f[c] * ku[c];
  return s * f.grid().cell_volume();
}

} // namespace symkit
