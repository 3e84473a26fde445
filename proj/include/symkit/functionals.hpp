#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "symkit/field.hpp"
#include "symkit/kernel.hpp"

namespace symkit {

// ---------------------------------------------------------------------------
// Norms and pairings

/// (sum |f_i|^p h^d)^(1/p); p = +infinity gives max |f_i|. Throws for p <= 0.
double lp_norm(const ScalarField &f, double p);
/// sum f_i g_i h^d
double pairing(const ScalarField &f, const ScalarField &g);

/// Nonnegative convex j on [0, inf) with j(0) = 0.
class ConvexProfile {
public:
  /// t^p, p >= 1
  static ConvexProfile power(double p);
  /// Slopes[k] applies on [breakpoints[k], breakpoints[k+1]); breakpoints[0] = 0 and
  /// slopes must be nonnegative and nondecreasing.
  static ConvexProfile piecewise_linear(std::vector<double> breakpoints, std::vector<double> slopes);

  double operator()(double t) const;

private:
  ConvexProfile() = default;
  double exponent_ = 0.0; // 0 marks the piecewise-linear form
  std::vector<double> breaks_;
  std::vector<double> slopes_;
  std::vector<double> values_; // j at each breakpoint
};

/// Supermodular F with F(0, 0) = 0.
class SupermodularF {
public:
  enum class Kind { Product, Min, JExpansion };

  static SupermodularF product() { return SupermodularF(Kind::Product); }
  static SupermodularF min() { return SupermodularF(Kind::Min); }
  /// F(u, v) = j(u) + j(v) - j(|u - v|)
  static SupermodularF j_expansion(ConvexProfile j);

  Kind kind() const { return kind_; }
  bool needs_nonneg() const { return kind_ != Kind::Product; }
  double operator()(double u, double v) const;

private:
  explicit SupermodularF(Kind k) : kind_(k), j_(ConvexProfile::power(1.0)) {}
  Kind kind_;
  ConvexProfile j_;
};

/// sum F(f_i, g_i) h^d
double supermodular_pairing(const SupermodularF &F, const ScalarField &f, const ScalarField &g);

struct ExpansionGaps {
  double difference; ///< sum j(|f - g|) h^d
  double sum;        ///< sum j(f + g) h^d
};
ExpansionGaps expansion_gaps(const ConvexProfile &j, const ScalarField &f, const ScalarField &g);

/// ||f - g||_p^p + ||f + g||_p^p, 1 <= p < inf.
double hanner_sum(const ScalarField &f, const ScalarField &g, double p);

// ---------------------------------------------------------------------------
// Convolution and Riesz-type integrals

/// Full linear convolution (g * h)(x) = sum_y g(x - y) h(y) h^d.
///
/// The operands must share dimension and spacing. The result lives on the grid with
/// extents n_g + n_h - 1, which is again origin-centered. Each operand is cropped to
/// the bounding box of its support; `pad` extra cells per axis are added to the larger
/// operand extent, and InsufficientPadding is thrown when that buffer is too short to
/// hold the linear convolution of the supports.
ScalarField convolve(const ScalarField &g, const ScalarField &h, int pad);
/// Same, with the padding chosen automatically.
ScalarField convolve(const ScalarField &g, const ScalarField &h);

/// sum_{x,y} f(x) K(x - y) h(y) h^2d with K sampled on the displacement lattice.
double riesz_triple(const ScalarField &f, const KernelSpec &kernel, const ScalarField &h);
/// Kernel given as a field with odd extents (its cells centered on h Z^d).
double riesz_triple(const ScalarField &f, const ScalarField &g, const ScalarField &h);

/// Exact value of the integral for the piecewise-constant functions that f, g and h
/// represent (g may use any extents with the same spacing).
double riesz_triple_cellwise(const ScalarField &f, const ScalarField &g, const ScalarField &h);

/// Kernel averaged over x in one cell and y in another: the displacement x - y is
/// distributed as the cell-center offset plus a product of triangular densities on
/// [-h, h]. With this kernel, pairings of piecewise-constant fields are exact integrals.
ScalarField cellwise_kernel(const KernelSpec &kernel, const Grid &operand);

/// sum_{x,y} F(f(x), g(y)) W(a x + b y) h^2d; W is interpolated multilinearly between
/// its cell centers and is zero beyond them. O(N^2).
double weighted_F_energy(const SupermodularF &F, const ScalarField &f, const ScalarField &g,
                         const ScalarField &W, double a, double b);

// ---------------------------------------------------------------------------
// Brascamp-Lieb-Luttinger integrals

/// I[f_1..f_N] = int prod_n f_n(sum_m b(n, m) x_m) dx_1..dx_M over (R^d)^M.
struct BLLSpec {
  int n = 0; ///< rows (functions)
  int m = 0; ///< columns (integration variables)
  std::vector<double> b; ///< row-major n x m
  std::vector<ScalarField> fields;

  double coeff(int row, int col) const { return b[std::size_t(row) * std::size_t(m) + std::size_t(col)]; }
  /// Throws DomainError on shape errors, all-zero rows or negative fields.
  void validate() const;
};

struct MCEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

/// Monte Carlo estimate with f_n read as piecewise constant on their cells. Samples
/// are uniform in a bounding box of the integrand's support found by interval
/// arithmetic; the estimate does not depend on `jobs`.
MCEstimate bll_integral(const BLLSpec &spec, std::uint64_t samples, std::uint64_t seed,
                        int jobs = 1);

// ---------------------------------------------------------------------------
// Fractional seminorms and perimeters

/// sum over i != j of |u_i - u_j|^p |x_i - x_j|^(-d - s p) h^2d, with i and j ranging
/// over the whole lattice h Z^d (u vanishes outside the box).
double fractional_seminorm(const ScalarField &u, double s, double p);

/// int_A int_{A^c} |x - y|^(-d - s) on the lattice, A^c including everything
/// outside the box.
double fractional_perimeter(const GridSet &a, double s);

/// sum over z in Z^d \ {0} of |z|^-exponent, exponent > d.
double lattice_zeta(int d, double exponent);

// ---------------------------------------------------------------------------
// Perimeter-type and gradient functionals

/// Exposed cell faces times h^(d-1).
double perimeter(const GridSet &a);

/// |{x in A : dist(x, A^c) < eps}| / eps, distances taken from a Euclidean
/// distance transform between cell centers minus h/2. Requires eps >= h.
double minkowski_content(const GridSet &a, double eps);

/// || |grad u| ||_p with forward differences and zero extension; p = inf allowed.
double gradient_pnorm(const ScalarField &u, double p);

// ---------------------------------------------------------------------------
// Heat semigroup and spectra

/// (u, e^{t Laplacian} u) with the Gaussian kernel sampled on the full displacement lattice.
double heat_pairing(const ScalarField &u, double t);

/// Lowest k eigenvalues (ascending) of the Dirichlet Laplacian (2d+1-point stencil) on
/// the cells of omega plus diag(V). At most 5000 cells.
std::vector<double> dirichlet_spectrum(const GridSet &omega, const ScalarField &v, std::size_t k);
/// All eigenvalues.
std::vector<double> dirichlet_spectrum(const GridSet &omega, const ScalarField &v);

double heat_trace(const GridSet &omega, const ScalarField &v, double t);
std::vector<double> heat_trace(const GridSet &omega, const ScalarField &v, std::span<const double> ts);
/// Heat trace from precomputed eigenvalues.
double heat_trace_from_spectrum(std::span<const double> eigenvalues, double t);

/// Least-squares fit of (4 pi t)^(d/2) Tr e^{t Laplacian} = |Omega| - sqrt(pi t)/2 per + c t
/// over `ts`; returns per.
double heat_perimeter_estimate(const GridSet &omega, std::span<const double> ts);

// ---------------------------------------------------------------------------
// Energies

/// sum rho(x) |x - y|^-lambda rho(y) h^2d, singular cell by central-cell average.
double riesz_energy(const ScalarField &rho, double lambda);
/// sum rho(x) 1_{|x - y| < R} rho(y) h^2d
double ball_kernel_energy(const ScalarField &rho, double radius);
/// sum rho(x) |x - y|^alpha rho(y) h^2d
double power_energy(const ScalarField &rho, double alpha);
/// ||grad u||_2^2 - riesz_energy(u^2, 1); d = 3 only.
double choquard_energy(const ScalarField &u);

/// max over cells other than the origin cell of f*(x) - omega_d^(-1/p) |x|^(-d/p) ||f||_p.
double pointwise_decay_check(const ScalarField &f, double p);

} // namespace symkit
