#pragma once

// Spherical functions, the spherical transform and Plancherel inversion for
// the hyperbolic plane H^2 = SL(2,R)/SO(2), curvature -1, rho = 1/2.
//
// Normalizations: the G-integral of a K-bi-invariant function is reduced to
// int_0^inf f(t) sinh(t) dt (the Haar constant is absorbed into kappa), and
// the Plancherel measure is omega(dl) = kappa * l * tanh(pi l) dl on [0, inf).

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "levy/group.hpp"

namespace levy {

inline constexpr double kRho = 0.5;
inline constexpr int kDefaultKOrder = 32;

/// Quadrature of the K-integral at radius t, written in the Abel coordinate
/// u = A(k a_t) in (-t, t). Nodes are Gauss-Legendre in psi with
/// u = t sin(psi); `coeff` carries the folded real weights such that
///   phi_l(a_t) = sum_m coeff[m] * cos(l * abel[m]).
struct SphericalNodes {
  double t = 0.0;
  std::vector<double> abel;
  std::vector<double> coeff;
};

/// Node count adequate for every l in [0, lambda_max] at radius t.
int spherical_node_count(double t, double lambda_max, int base_order);
SphericalNodes spherical_nodes(double t, int n);

/// The same quadrature expressed on K itself: 2n angles theta with
/// probability weights (they sum to 1) and the NAK projection A(k_theta a_t).
struct KQuadrature {
  std::vector<double> angle;
  std::vector<double> weight;
  std::vector<double> projection;
};
KQuadrature k_quadrature(double t, int n);

/// Radii beyond this are treated as phi = 0 (|phi_l| <= phi_0 < 1e-60 there).
inline constexpr double kSphericalCutoffRadius = 300.0;

/// phi_l(g) as the K-integral of exp((i l + rho) A(k g)); A is taken from the
/// Iwasawa decomposition at every node. SL2R only.
std::complex<double> spherical_function(double lambda, const GroupElement& g,
                                        int base_order = kDefaultKOrder);

/// phi_l(a_t) through the folded cosine series (same nodes, real arithmetic).
double spherical_function_radial(double lambda, double t, int base_order = kDefaultKOrder);

/// Uniform radial grid on [0, t_max] with Simpson weights times the volume
/// density sinh(t).
struct RadialGrid {
  double t_max = 20.0;
  int intervals = 4000;
  double step = 0.0;
  std::vector<double> nodes;
  std::vector<double> volume_weights;

  static RadialGrid make(double t_max = 20.0, int intervals = 4000);
};

double plancherel_density(double lambda);

struct SpectralGridOptions {
  double lambda_max = 40.0;
  int n_nodes = 2000;
  int k_order = kDefaultKOrder;
  /// When set, kappa is taken as given instead of being calibrated.
  double kappa = 0.0;
};

/// Discretization of a* = [0, lambda_max]: uniform nodes and trapezoid
/// weights multiplied by the Plancherel density.
class SpectralGrid {
 public:
  static SpectralGrid make(const SpectralGridOptions& options = {});

  double lambda_max() const noexcept { return lambda_max_; }
  double step() const noexcept { return step_; }
  double rho() const noexcept { return kRho; }
  double kappa() const noexcept { return kappa_; }
  int k_order() const noexcept { return k_order_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  std::span<const double> nodes() const noexcept { return nodes_; }
  /// Plancherel weights omega_j (kappa included).
  std::span<const double> weights() const noexcept { return weights_; }

  /// out[j] += scale * phi_{l_j}(a_t).
  void accumulate_row(double t, double scale, std::span<double> out) const;
  std::vector<double> row(double t) const;

 private:
  double lambda_max_ = 0.0;
  double step_ = 0.0;
  double kappa_ = 1.0;
  int k_order_ = kDefaultKOrder;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// A K-bi-invariant function sampled on a RadialGrid, with optional exact
/// callable used for off-grid evaluation.
struct RadialFunction {
  RadialGrid grid;
  std::vector<double> values;
  double support = 0.0;
  std::function<double(double)> exact;

  static RadialFunction from_function(const RadialGrid& grid, std::function<double(double)> f,
                                      double support);
  static RadialFunction zero(const RadialGrid& grid);
  double operator()(double t) const;
};

/// exp(-t^2 / (2 w^2)) cut where it drops below 1e-17.
RadialFunction gaussian_bump(const RadialGrid& grid, double width);
/// exp(1 - 1 / (1 - (t/R)^2)) on [0, R): C-infinity, compact support.
RadialFunction smooth_bump(const RadialGrid& grid, double radius);
/// Smooth bump of half-width `halfwidth` centered at `center` > halfwidth.
RadialFunction shell_bump(const RadialGrid& grid, double center, double halfwidth);

RadialFunction linear_combination(double alpha, const RadialFunction& f, double beta,
                                  const RadialFunction& g);

struct SpectralVector {
  std::vector<std::complex<double>> values;
};

SpectralVector spherical_transform(const RadialFunction& f, const SpectralGrid& grid);

/// out[j] = sum_i scales[i] * phi_{l_j}(a_{radii[i]}), reduced in a fixed
/// order so the result does not depend on the worker count.
std::vector<double> spherical_sum(const SpectralGrid& grid, std::span<const double> radii,
                                  std::span<const double> scales);

struct Reconstruction {
  double value = 0.0;
  double imag_residue = 0.0;
  double tail_fraction = 0.0;
  bool truncation_warning = false;
};

/// Fraction of sum |omega_j c_j| carried by the top 10% of the grid.
double spectral_tail_fraction(std::span<const std::complex<double>> weighted, std::size_t n);
inline constexpr double kTailWarningThreshold = 1e-6;

Reconstruction inverse_transform(const SpectralVector& f_hat, const SpectralGrid& grid,
                                 const GroupElement& g);
Reconstruction inverse_transform_radial(const SpectralVector& f_hat, const SpectralGrid& grid,
                                        double t);

/// Rows phi_{l_j}(a_{t_i}) for a fixed set of radii, for repeated synthesis.
class SphericalTable {
 public:
  SphericalTable(const SpectralGrid& grid, std::vector<double> radii);

  std::span<const double> radii() const noexcept { return radii_; }
  /// out_i = sum_j coefficients_j * phi_{l_j}(a_{t_i}).
  std::vector<double> synthesize(std::span<const double> coefficients) const;

 private:
  std::size_t n_cols_ = 0;
  std::vector<double> radii_;
  std::vector<double> rows_;
};

/// int_G f g with the radial volume density.
double inner_product(const RadialFunction& f, const RadialFunction& g);

struct ParsevalPair {
  double lhs = 0.0;
  double rhs = 0.0;
};

double spectral_inner_product(const SpectralVector& f_hat, const SpectralVector& g_hat,
                              const SpectralGrid& grid);
ParsevalPair parseval(const RadialFunction& f, const RadialFunction& g, const SpectralGrid& grid);

}  // namespace levy
