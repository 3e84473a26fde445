#pragma once

// Thin RAII layer over FFTW's real-to-complex transforms.

#include <complex>
#include <cstddef>
#include <vector>

#include <fftw3.h>

namespace symkit::detail {

/// Smallest m >= n whose only prime factors are 2, 3, 5 and 7.
int fft_good_size(int n);

template <class T> struct FftwBuffer {
  T *data = nullptr;
  std::size_t size = 0;

  explicit FftwBuffer(std::size_t n);
  ~FftwBuffer();
  FftwBuffer(const FftwBuffer &) = delete;
  FftwBuffer &operator=(const FftwBuffer &) = delete;
  T &operator[](std::size_t i) { return data[i]; }
  const T &operator[](std::size_t i) const { return data[i]; }
};

/// Forward and backward plans for one real array shape (row-major, last axis fastest).
/// Execution uses FFTW's new-array interface, so one plan serves concurrent callers
/// that bring their own buffers.
class RealFftPlan {
public:
  explicit RealFftPlan(std::vector<int> shape);
  ~RealFftPlan();
  RealFftPlan(const RealFftPlan &) = delete;
  RealFftPlan &operator=(const RealFftPlan &) = delete;

  const std::vector<int> &shape() const { return shape_; }
  std::size_t real_size() const { return real_size_; }
  std::size_t complex_size() const { return complex_size_; }

  /// Real array (real_size) to half spectrum (complex_size). Clobbers nothing in `in`.
  void forward(double *in, fftw_complex *out) const;
  /// Half spectrum to real array, unnormalized. Destroys `in`.
  void backward(fftw_complex *in, double *out) const;

private:
  std::vector<int> shape_;
  std::size_t real_size_ = 0;
  std::size_t complex_size_ = 0;
  fftw_plan fwd_ = nullptr;
  fftw_plan bwd_ = nullptr;
};

/// Embeds a row-major block of extents `src_shape` into a zeroed array of extents
/// `dst_shape` starting at the origin.
void embed(const double *src, const std::vector<int> &src_shape, double *dst,
           const std::vector<int> &dst_shape);

} // namespace symkit::detail
