#include "fft.hpp"

#include <algorithm>
#include <mutex>
#include <new>
#include <stdexcept>

namespace symkit::detail {
namespace {

// The FFTW planner is not reentrant.
std::mutex &planner_mutex() {
  static std::mutex m;
  return m;
}

} // namespace

int fft_good_size(int n) {
  for (int m = std::max(n, 1);; ++m) {
    int r = m;
    for (int p : {2, 3, 5, 7})
      while (r % p == 0)
        r /= p;
    if (r == 1)
      return m;
  }
}

template <class T> FftwBuffer<T>::FftwBuffer(std::size_t n) : size(n) {
  data = static_cast<T *>(fftw_malloc(sizeof(T) * std::max<std::size_t>(n, 1)));
  if (!data)
    throw std::bad_alloc();
  std::fill(reinterpret_cast<double *>(data),
            reinterpret_cast<double *>(data) + n * sizeof(T) / sizeof(double), 0.0);
}

template <class T> FftwBuffer<T>::~FftwBuffer() { fftw_free(data); }

template struct FftwBuffer<double>;
template struct FftwBuffer<fftw_complex>;

RealFftPlan::RealFftPlan(std::vector<int> shape) : shape_(std::move(shape)) {
  real_size_ = 1;
  for (int n : shape_)
    real_size_ *= std::size_t(n);
  complex_size_ = real_size_ / std::size_t(shape_.back()) * std::size_t(shape_.back() / 2 + 1);

  FftwBuffer<double> r(real_size_);
  FftwBuffer<fftw_complex> c(complex_size_);
  const int rank = int(shape_.size());
  std::lock_guard lock(planner_mutex());
  fwd_ = fftw_plan_dft_r2c(rank, shape_.data(), r.data, c.data, FFTW_ESTIMATE);
  bwd_ = fftw_plan_dft_c2r(rank, shape_.data(), c.data, r.data, FFTW_ESTIMATE);
  if (!fwd_ || !bwd_)
    throw std::runtime_error("FFTW planning failed");
}

RealFftPlan::~RealFftPlan() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(fwd_);
  fftw_destroy_plan(bwd_);
}

void RealFftPlan::forward(double *in, fftw_complex *out) const {
  fftw_execute_dft_r2c(fwd_, in, out);
}

void RealFftPlan::backward(fftw_complex *in, double *out) const {
  fftw_execute_dft_c2r(bwd_, in, out);
}

void embed(const double *src, const std::vector<int> &src_shape, double *dst,
           const std::vector<int> &dst_shape) {
  const std::size_t rank = src_shape.size();
  std::size_t dst_total = 1;
  for (int n : dst_shape)
    dst_total *= std::size_t(n);
  std::fill(dst, dst + dst_total, 0.0);

  // copy contiguous rows along the last axis
  const int row = src_shape[rank - 1];
  std::size_t rows = 1;
  for (std::size_t k = 0; k + 1 < rank; ++k)
    rows *= std::size_t(src_shape[k]);
  std::vector<int> idx(rank, 0);
  for (std::size_t r = 0; r < rows; ++r) {
    std::size_t off = 0;
    for (std::size_t k = 0; k + 1 < rank; ++k)
      off = off * std::size_t(dst_shape[k]) + std::size_t(idx[k]);
    off *= std::size_t(dst_shape[rank - 1]);
    std::copy(src + r * std::size_t(row), src + (r + 1) * std::size_t(row), dst + off);
    for (std::size_t k = rank - 1; k-- > 0;) {
      if (++idx[k] < src_shape[k])
        break;
      idx[k] = 0;
    }
  }
}

} // namespace symkit::detail
