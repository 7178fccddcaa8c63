#pragma once

// Characteristic exponents of bi-invariant convolution semigroups on the
// hyperbolic plane from their characteristics (a, nu):
//   eta(l) = a (l^2 + rho^2) + int_{t > 0} (1 - phi_l(a_t)) nu(dt),
// with nu a radial Levy measure (the K-bi-invariant measure on G is the
// K x K-lift of nu through the polar decomposition).

#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "levy/group.hpp"
#include "levy/spherical.hpp"

namespace levy {

enum class LevyKind { zero, point_masses, exponential, stable_like };

std::string_view to_string(LevyKind kind);
LevyKind levy_kind_from_string(std::string_view name);

struct PointMass {
  double radius = 0.0;
  double rate = 0.0;
};

/// Radial Levy measure. Shipped densities:
///   point_masses: sum_i rate_i delta_{radius_i};
///   exponential:  scale * e^{-t} on t > cutoff;
///   stable_like:  scale * t^{-1-alpha} on cutoff < t < upper, alpha in (0, 2).
/// Jumps below `cutoff` are replaced by a diffusion term (small_jump_diffusion).
struct RadialLevyMeasure {
  LevyKind kind = LevyKind::zero;
  std::vector<PointMass> masses;
  double scale = 0.0;
  double cutoff = 0.0;
  double alpha = 1.0;
  double upper = std::numeric_limits<double>::infinity();

  static RadialLevyMeasure zero();
  static RadialLevyMeasure point_masses(std::vector<PointMass> masses);
  static RadialLevyMeasure exponential(double scale, double cutoff = 0.0);
  static RadialLevyMeasure stable_like(double scale, double alpha, double cutoff, double upper);

  /// Throws measure_invalid when the parameters do not define a Levy measure
  /// the simulator can realize.
  void validate() const;

  /// Density of the absolutely continuous kinds (0 for the others).
  double density(double t) const;
  /// Total mass of the retained jumps (t > cutoff): the Poisson jump rate.
  double jump_rate() const;
  /// int (t^2 ^ 1) nu(dt) over the full (untruncated) measure.
  double levy_condition_integral() const;
  /// int_0^cutoff t^2 n(t) dt: second moment of the discarded small jumps.
  double small_jump_second_moment() const;
  /// Every rate and scale multiplied by `factor`.
  RadialLevyMeasure scaled(double factor) const;
  bool is_zero() const;
};

struct ProcessParams {
  GroupId group = GroupId::SL2R;
  double a = 0.0;
  RadialLevyMeasure levy;
  /// Declares the law invariant under inversion. On rank-one spaces every
  /// bi-invariant law has a real exponent, so this flag is a declaration
  /// checked by requires_symmetric guards rather than a different formula.
  bool symmetric = true;

  void validate() const;
  /// a plus the variance of the small jumps folded in below the cutoff.
  double effective_diffusion() const;
  /// Constant process (a = 0 and no jumps).
  bool degenerate() const;
};

/// a (l^2 + rho^2).
double beta(double lambda, double a);

/// Nodes and weights (measure already included) for int g(t) nu(dt) on the
/// retained jumps. `far_mass` is the mass beyond the last node, where phi is
/// below 1e-10 and is treated as 0.
struct JumpQuadrature {
  std::vector<double> radius;
  std::vector<double> weight;
  double far_mass = 0.0;
};
JumpQuadrature jump_quadrature(const RadialLevyMeasure& nu, double lambda_max);

/// int (1 - phi_l(a_t)) nu(dt), using the grid's K-quadrature order.
std::complex<double> jump_integral(double lambda, const RadialLevyMeasure& nu,
                                   const SpectralGrid& grid);

struct ExponentTable {
  SpectralGrid grid;
  ProcessParams params;
  std::vector<std::complex<double>> eta;
  std::vector<double> beta;
};

ExponentTable exponent_table(const ProcessParams& params, const SpectralGrid& grid);

/// sup_j |eta_j| / (1 + l_j^2 + rho^2).
double growth_bound_ratio(const ExponentTable& table);

/// Characteristics of mu_t * mu_t~: exponent 2 Re(eta).
ProcessParams symmetrize(const ProcessParams& params);

/// The cosine form of the symmetric exponent,
///   a (l^2 + rho^2) + int int_K (1 - cos((l + rho) A(k a_t))) dk nu(dt),
/// evaluated as a diagnostic and compared with the table.
struct CosineFormReport {
  std::vector<double> lambda;
  std::vector<double> cosine_form;
  std::vector<double> exponent;
  double max_abs_difference = 0.0;
  double max_relative_difference = 0.0;
};
CosineFormReport cosine_form_report(const ExponentTable& table, std::size_t stride = 50);

}  // namespace levy
