#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>
#include <vector>

#include "symkit/functionals.hpp"

namespace symkit {
namespace {

constexpr std::uint64_t kChunk = 8192;

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Uniform in [0, 1), a pure function of (seed, counter).
double uniform(std::uint64_t seed, std::uint64_t counter) {
  return double(splitmix(splitmix(seed) ^ counter) >> 11) * 0x1.0p-53;
}

struct Interval {
  double lo, hi;
};

/// Inverse of a small square matrix, or empty when (numerically) singular.
std::vector<double> invert(std::vector<double> a, int m) {
  std::vector<double> inv(std::size_t(m * m), 0.0);
  for (int i = 0; i < m; ++i)
    inv[std::size_t(i * m + i)] = 1.0;
  double scale = 0.0;
  for (double v : a)
    scale = std::max(scale, std::fabs(v));
  for (int col = 0; col < m; ++col) {
    int piv = col;
    for (int r = col + 1; r < m; ++r)
      if (std::fabs(a[std::size_t(r * m + col)]) > std::fabs(a[std::size_t(piv * m + col)]))
        piv = r;
    if (std::fabs(a[std::size_t(piv * m + col)]) <= 1e-12 * scale)
      return {};
    for (int c = 0; c < m; ++c) {
      std::swap(a[std::size_t(col * m + c)], a[std::size_t(piv * m + c)]);
      std::swap(inv[std::size_t(col * m + c)], inv[std::size_t(piv * m + c)]);
    }
    const double p = a[std::size_t(col * m + col)];
    for (int c = 0; c < m; ++c) {
      a[std::size_t(col * m + c)] /= p;
      inv[std::size_t(col * m + c)] /= p;
    }
    for (int r = 0; r < m; ++r) {
      if (r == col)
        continue;
      const double f = a[std::size_t(r * m + col)];
      if (f == 0.0)
        continue;
      for (int c = 0; c < m; ++c) {
        a[std::size_t(r * m + c)] -= f * a[std::size_t(col * m + c)];
        inv[std::size_t(r * m + c)] -= f * inv[std::size_t(col * m + c)];
      }
    }
  }
  return inv;
}

/// Support of f along one axis as an interval of cell faces; empty when f == 0.
bool support_interval(const ScalarField &f, int axis, Interval &out) {
  const Grid &g = f.grid();
  int lo = std::numeric_limits<int>::max(), hi = -1;
  for_each_index(g, [&](const Index &i, std::size_t c) {
    if (f[c] != 0.0) {
      lo = std::min(lo, i[axis]);
      hi = std::max(hi, i[axis]);
    }
  });
  if (hi < 0)
    return false;
  out = {g.coord(axis, lo) - 0.5 * g.spacing, g.coord(axis, hi) + 0.5 * g.spacing};
  return true;
}

double lookup(const ScalarField &f, const double *y) {
  const Grid &g = f.grid();
  Index i{0, 0, 0};
  for (int k = 0; k < g.dim; ++k) {
    const double t = std::floor(y[k] / g.spacing + 0.5 * g.extents[k]);
    if (t < 0.0 || t >= g.extents[k])
      return 0.0;
    i[k] = int(t);
  }
  return f.at(i);
}

} // namespace

void BLLSpec::validate() const {
  if (n < 1 || m < 1 || m > n)
    throw DomainError("BLLSpec: need 1 <= M <= N");
  if (b.size() != std::size_t(n) * std::size_t(m))
    throw DomainError("BLLSpec: coefficient matrix must be N x M");
  if (fields.size() != std::size_t(n))
    throw DomainError("BLLSpec: need one field per row");
  for (int r = 0; r < n; ++r) {
    bool any = false;
    for (int c = 0; c < m; ++c)
      any = any || coeff(r, c) != 0.0;
    if (!any)
      throw DomainError("BLLSpec: row " + std::to_string(r) + " of b is zero");
    if (!fields[std::size_t(r)].nonneg())
      throw DomainError("BLLSpec: fields must be nonnegative");
    if (fields[std::size_t(r)].grid().dim != fields[0].grid().dim)
      throw DomainError("BLLSpec: fields must share the dimension");
  }
}

MCEstimate bll_integral(const BLLSpec &spec, std::uint64_t samples, std::uint64_t seed, int jobs) {
  spec.validate();
  if (samples == 0)
    throw DomainError("bll_integral: zero samples");
  const int N = spec.n, M = spec.m, d = spec.fields[0].grid().dim;
  MCEstimate est;
  est.samples = samples;
  est.seed = seed;

  // supports[n][k]
  std::vector<std::array<Interval, 3>> supports(static_cast<std::size_t>(N));
  for (int r = 0; r < N; ++r)
    for (int k = 0; k < d; ++k)
      if (!support_interval(spec.fields[std::size_t(r)], k, supports[std::size_t(r)][std::size_t(k)]))
        return est; // a zero factor makes the integral vanish

  // choose the invertible M-row subsystem giving the smallest sampling box
  std::vector<int> rows(std::size_t(N), 0);
  std::fill(rows.begin(), rows.begin() + M, 1);
  std::vector<Interval> best;
  double best_vol = std::numeric_limits<double>::infinity();
  do {
    std::vector<int> pick;
    for (int r = 0; r < N; ++r)
      if (rows[std::size_t(r)])
        pick.push_back(r);
    std::vector<double> sub(std::size_t(M * M));
    for (int i = 0; i < M; ++i)
      for (int c = 0; c < M; ++c)
        sub[std::size_t(i * M + c)] = spec.coeff(pick[std::size_t(i)], c);
    const auto inv = invert(sub, M);
    if (inv.empty())
      continue;
    std::vector<Interval> box(std::size_t(M * d));
    double vol = 1.0;
    for (int var = 0; var < M; ++var)
      for (int k = 0; k < d; ++k) {
        double center = 0.0, radius = 0.0;
        for (int i = 0; i < M; ++i) {
          const Interval &s = supports[std::size_t(pick[std::size_t(i)])][std::size_t(k)];
          const double w = inv[std::size_t(var * M + i)];
          center += w * 0.5 * (s.lo + s.hi);
          radius += std::fabs(w) * 0.5 * (s.hi - s.lo);
        }
        box[std::size_t(var * d + k)] = {center - radius, center + radius};
        vol *= 2.0 * radius;
      }
    if (vol < best_vol) {
      best_vol = vol;
      best = std::move(box);
    }
  } while (std::prev_permutation(rows.begin(), rows.end()));
  if (best.empty())
    throw DomainError("bll_integral: unbounded integration region (b has rank < M)");

  const std::uint64_t dims = std::uint64_t(M * d);
  const std::uint64_t chunks = (samples + kChunk - 1) / kChunk;
  std::vector<double> sums(chunks, 0.0), squares(chunks, 0.0);

  auto run_chunk = [&](std::uint64_t ch) {
    std::vector<double> x(dims);
    double y[3];
    double s = 0.0, s2 = 0.0;
    const std::uint64_t end = std::min(samples, (ch + 1) * kChunk);
    for (std::uint64_t smp = ch * kChunk; smp < end; ++smp) {
      for (std::uint64_t c = 0; c < dims; ++c) {
        const Interval &iv = best[c];
        x[c] = iv.lo + uniform(seed, smp * dims + c) * (iv.hi - iv.lo);
      }
      double v = 1.0;
      for (int r = 0; r < N && v != 0.0; ++r) {
        for (int k = 0; k < d; ++k) {
          y[k] = 0.0;
          for (int var = 0; var < M; ++var)
            y[k] += spec.coeff(r, var) * x[std::size_t(var * d + k)];
        }
        v *= lookup(spec.fields[std::size_t(r)], y);
      }
      s += v;
      s2 += v * v;
    }
    sums[ch] = s;
    squares[ch] = s2;
  };

  const int workers = std::max(1, std::min<int>(jobs, int(chunks)));
  if (workers == 1) {
    for (std::uint64_t ch = 0; ch < chunks; ++ch)
      run_chunk(ch);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::uint64_t ch; (ch = next.fetch_add(1)) < chunks;)
          run_chunk(ch);
      });
    for (auto &t : pool)
      t.join();
  }

  double s = 0.0, s2 = 0.0;
  for (std::uint64_t ch = 0; ch < chunks; ++ch) {
    s += sums[ch];
    s2 += squares[ch];
  }
  const double S = double(samples);
  const double mean = s / S;
  const double var = samples > 1 ? std::max(0.0, (s2 - S * mean * mean) / (S - 1.0)) : 0.0;
  est.value = best_vol * mean;
  est.std_error = best_vol * std::sqrt(var / S);
  return est;
}

} // namespace symkit
