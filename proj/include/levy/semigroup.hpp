#pragma once

// Fourier-side evaluation of the Markov semigroup T_t, its generator, the
// Dirichlet form, the Green energy and the harmonic-transience integral.
// Everything acts through the multipliers e^{-t eta} and -eta on an
// ExponentTable's grid.

#include <complex>
#include <span>
#include <vector>

#include "levy/exponent.hpp"
#include "levy/spherical.hpp"

namespace levy {

/// e^{-t eta_j} f_hat_j.
SpectralVector semigroup_multiplier(const ExponentTable& table, const SpectralVector& f_hat, double t);
/// -eta_j f_hat_j.
SpectralVector generator_multiplier(const ExponentTable& table, const SpectralVector& f_hat);

/// T_t f(g) = sum_j w_j f_hat_j phi_j(g) e^{-t eta_j}.
Reconstruction apply_semigroup(const ExponentTable& table, const SpectralVector& f_hat, double t,
                               const GroupElement& g);
Reconstruction apply_semigroup_radial(const ExponentTable& table, const SpectralVector& f_hat, double t,
                                      double radius);

/// A f(g) = -sum_j w_j f_hat_j phi_j(g) eta_j. Throws decay_error when the
/// weighted integrand still carries more than kTailWarningThreshold of its
/// mass in the top tenth of the grid.
double apply_generator(const ExponentTable& table, const SpectralVector& f_hat, const GroupElement& g);
double apply_generator_radial(const ExponentTable& table, const SpectralVector& f_hat, double radius);

/// int_G h g where h = sum_j w_j c_j phi_j, evaluated on g's radial grid
/// (only nodes inside g's support are synthesized).
double radial_pairing(const SpectralGrid& grid, const SpectralVector& coefficients, const RadialFunction& g);

/// (<T_t f, g> by radial integration, <e^{-t eta} f_hat, g_hat>_omega).
ParsevalPair parseval_semigroup(const ExponentTable& table, const RadialFunction& f, const RadialFunction& g,
                                double t);

/// E(f, g) = sum_j w_j f_hat_j eta_j conj(g_hat_j); symmetric params only.
double dirichlet_form(const ExponentTable& table, const SpectralVector& f_hat, const SpectralVector& g_hat);

struct EnergyReport {
  double value = 0.0;
  bool divergent = false;
  double tail_estimate = 0.0;
  double grid_refinement_delta = 0.0;
  /// Values on successively refined meshes (coarsest first).
  std::vector<double> refinement_values;
};

inline constexpr double kDivergenceIntegrandLimit = 1e12;

/// sum_j w_j |f_hat_j|^2 / Re(eta_j). The refinement delta compares against
/// the same sum on every second node; the tail estimate is the share of the
/// top tenth of the grid.
EnergyReport green_energy(const ExponentTable& table, const SpectralVector& f_hat);

/// int_0^T <T_t f, f> dt by the trapezoid rule on a graded time mesh, with
/// <T_t f, f> evaluated by radial quadrature, plus the tail bound
/// sum_j w_j |f_hat_j|^2 e^{-T m} / m, m = min_j Re(eta_j).
struct TimeDomainEnergy {
  double integral = 0.0;
  double tail_bound = 0.0;
  double total = 0.0;
  std::size_t time_points = 0;
};
TimeDomainEnergy time_domain_energy(const ExponentTable& table, const RadialFunction& f, double horizon = 50.0);

/// int_{[0, cutoff]} omega(dl) / Re(eta_l) by the trapezoid rule at the table
/// spacing h and at h/2, h/4 (the exponent is recomputed on the finer
/// meshes). Flagged divergent when Re(eta) <= 0 on a node of positive
/// weight, when the integrand exceeds kDivergenceIntegrandLimit, or when the
/// refinement delta fails to halve.
EnergyReport harmonic_transience_integral(const ExponentTable& table, double cutoff);

/// Node-wise integrand omega-density / Re(eta) on [0, cutoff] (for reports).
struct HarmonicIntegrand {
  std::vector<double> lambda;
  std::vector<double> density;
  std::vector<double> re_eta;
  std::vector<double> integrand;
};
HarmonicIntegrand harmonic_integrand(const ExponentTable& table, double cutoff);

}  // namespace levy
