#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <lapacke.h>

#include "symkit/functionals.hpp"

namespace symkit {
namespace {

constexpr std::size_t kMaxDenseCells = 5000;

/// Column-major dense operator -Laplacian + V restricted to the cells of omega.
std::vector<double> dirichlet_matrix(const GridSet &omega, const ScalarField &v, std::size_t &n) {
  require_same_grid(omega.grid(), v.grid(), "dirichlet_spectrum");
  const Grid &g = omega.grid();
  std::vector<std::size_t> cells;
  std::vector<long> slot(g.size(), -1);
  for (std::size_t c = 0; c < g.size(); ++c)
    if (omega[c]) {
      slot[c] = long(cells.size());
      cells.push_back(c);
    }
  n = cells.size();
  if (n == 0)
    throw DomainError("dirichlet_spectrum: empty domain");
  if (n > kMaxDenseCells)
    throw DomainError("dirichlet_spectrum: " + std::to_string(n) + " cells exceed the dense cap of " +
                      std::to_string(kMaxDenseCells));

  const double ih2 = 1.0 / (g.spacing * g.spacing);
  std::vector<double> a(n * n, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    const Index i = g.unflat(cells[r]);
    a[r * n + r] = 2.0 * g.dim * ih2 + v[cells[r]];
    for (int k = 0; k < g.dim; ++k)
      for (int s : {-1, 1}) {
        Index j = i;
        j[k] += s;
        if (!g.contains(j))
          continue;
        const long col = slot[g.flat(j)];
        if (col >= 0)
          a[std::size_t(col) * n + r] = -ih2;
      }
  }
  return a;
}

} // namespace

double heat_pairing(const ScalarField &u, double t) {
  if (!(t > 0.0))
    throw DomainError("heat_pairing: t must be positive");
  return KernelOperator(HeatGaussian{t}, u.grid()).form(u, u);
}

std::vector<double> dirichlet_spectrum(const GridSet &omega, const ScalarField &v, std::size_t k) {
  std::size_t n = 0;
  auto a = dirichlet_matrix(omega, v, n);
  if (k == 0 || k > n)
    throw DomainError("dirichlet_spectrum: requested " + std::to_string(k) + " eigenvalues of " +
                      std::to_string(n));
  std::vector<double> w(n);
  lapack_int found = 0;
  std::vector<lapack_int> isuppz(2 * k);
  double z_dummy = 0.0;
  const lapack_int info =
      LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'N', 'I', 'U', lapack_int(n), a.data(), lapack_int(n), 0.0,
                     0.0, 1, lapack_int(k), 0.0, &found, w.data(), &z_dummy, 1, isuppz.data());
  if (info != 0)
    throw std::runtime_error("dirichlet_spectrum: eigensolver failed with info " + std::to_string(info));
  w.resize(std::size_t(found));
  return w;
}

std::vector<double> dirichlet_spectrum(const GridSet &omega, const ScalarField &v) {
  std::size_t n = 0;
  auto a = dirichlet_matrix(omega, v, n);
  std::vector<double> w(n);
  const lapack_int info =
      LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'U', lapack_int(n), a.data(), lapack_int(n), w.data());
  if (info != 0)
    throw std::runtime_error("dirichlet_spectrum: eigensolver failed with info " + std::to_string(info));
  return w;
}

double heat_trace_from_spectrum(std::span<const double> eigenvalues, double t) {
  if (!(t > 0.0))
    throw DomainError("heat_trace: t must be positive");
  double s = 0.0;
  // smallest terms first
  for (auto it = eigenvalues.rbegin(); it != eigenvalues.rend(); ++it)
    s += std::exp(-t * *it);
  return s;
}

double heat_trace(const GridSet &omega, const ScalarField &v, double t) {
  return heat_trace_from_spectrum(dirichlet_spectrum(omega, v), t);
}

std::vector<double> heat_trace(const GridSet &omega, const ScalarField &v, std::span<const double> ts) {
  const auto w = dirichlet_spectrum(omega, v);
  std::vector<double> out;
  out.reserve(ts.size());
  for (double t : ts)
    out.push_back(heat_trace_from_spectrum(w, t));
  return out;
}

double heat_perimeter_estimate(const GridSet &omega, std::span<const double> ts) {
  if (ts.size() < 3)
    throw DomainError("heat_perimeter_estimate: degenerate fit, need at least 3 times");
  const int d = omega.grid().dim;
  const auto w = dirichlet_spectrum(omega, ScalarField(omega.grid()));
  const double area = measure(omega);

  // (4 pi t)^(d/2) Tr(t) - |Omega| = a - per sqrt(pi t)/2 + c t, unknowns (a, per, c)
  const std::size_t m = ts.size();
  std::vector<double> A(m * 3), y(m);
  for (std::size_t r = 0; r < m; ++r) {
    const double t = ts[r];
    if (!(t > 0.0))
      throw DomainError("heat_perimeter_estimate: times must be positive");
    y[r] = std::pow(4.0 * std::numbers::pi * t, 0.5 * d) * heat_trace_from_spectrum(w, t) - area;
    A[r] = 1.0;
    A[m + r] = -0.5 * std::sqrt(std::numbers::pi * t);
    A[2 * m + r] = t;
  }
  std::vector<double> sv(3);
  lapack_int rank = 0;
  const lapack_int info = LAPACKE_dgelsd(LAPACK_COL_MAJOR, lapack_int(m), 3, 1, A.data(),
                                         lapack_int(m), y.data(), lapack_int(m), sv.data(), 1e-12, &rank);
  if (info != 0 || rank < 3)
    throw DomainError("heat_perimeter_estimate: degenerate fit");
  return y[1];
}

} // namespace symkit
