#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "symkit/suite.hpp"

namespace symkit::suite {

inline std::string digest(const SuiteConfig &config, const std::string &id) {
  auto cfg = to_json(config);
  cfg.erase("jobs");
  cfg.erase("output");
  const std::string text = cfg.dump() + '|' + id;
  std::uint64_t x = 0xcbf29ce484222325ull;
  for (char c : text) {
    x ^= std::uint8_t(c);
    x *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

class Stopwatch {
public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline ExperimentReport start_report(const SuiteConfig &config, const std::string &id) {
  ExperimentReport r;
  r.id = id;
  r.digest = digest(config, id);
  return r;
}

/// out[k] = fn(k) for k < n on up to `jobs` threads; results land by index, so the
/// output does not depend on scheduling. The first exception is rethrown.
template <class T, class F> std::vector<T> parallel_map(std::size_t n, int jobs, F fn) {
  std::vector<T> out(n);
  const int workers = int(std::min<std::size_t>(std::size_t(std::max(jobs, 1)), n));
  if (workers <= 1) {
    for (std::size_t k = 0; k < n; ++k)
      out[k] = fn(k);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t k; (k = next++) < n;) {
        try {
          out[k] = fn(k);
        } catch (...) {
          std::lock_guard lock(mu);
          if (!err)
            err = std::current_exception();
        }
      }
    });
  for (auto &t : pool)
    t.join();
  if (err)
    std::rethrow_exception(err);
  return out;
}

/// Amount by which `small <= large` fails, relative to the larger magnitude.
inline double relative_excess(double small, double large) {
  const double m = std::max({std::fabs(small), std::fabs(large), 1e-300});
  return std::max(0.0, small - large) / m;
}

inline Grid rung_grid(const LadderRung &r) { return Grid::cube(r.dim, r.n, r.h); }

} // namespace symkit::suite
