#include "levy/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "levy/error.hpp"
#include "levy/simd/kernels.hpp"

namespace levy {

namespace {

void require_aligned(const ExponentTable& table, const SpectralVector& v) {
  if (v.values.size() != table.grid.size()) {
    throw Error(ErrorKind::invalid_argument, "spectral vector is not aligned with the exponent table");
  }
}

// Support nodes of g with their volume-weighted values.
struct SupportSamples {
  std::vector<double> radii;
  std::vector<double> weighted;
};

SupportSamples support_samples(const RadialFunction& g) {
  SupportSamples s;
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    const double w = g.grid.volume_weights[i] * g.values[i];
    if (w != 0.0) {
      s.radii.push_back(g.grid.nodes[i]);
      s.weighted.push_back(w);
    }
  }
  return s;
}

std::vector<double> real_weighted(const SpectralGrid& grid, const SpectralVector& c) {
  const auto w = grid.weights();
  std::vector<double> out(grid.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = w[j] * c.values[j].real();
  return out;
}

}  // namespace

SpectralVector semigroup_multiplier(const ExponentTable& table, const SpectralVector& f_hat, double t) {
  require_aligned(table, f_hat);
  if (!(std::isfinite(t) && t >= 0.0)) throw Error(ErrorKind::invalid_argument, "time must be finite and >= 0");
  SpectralVector out;
  out.values.resize(f_hat.values.size());
  for (std::size_t j = 0; j < out.values.size(); ++j) out.values[j] = std::exp(-t * table.eta[j]) * f_hat.values[j];
  return out;
}

SpectralVector generator_multiplier(const ExponentTable& table, const SpectralVector& f_hat) {
  require_aligned(table, f_hat);
  SpectralVector out;
  out.values.resize(f_hat.values.size());
  for (std::size_t j = 0; j < out.values.size(); ++j) out.values[j] = -table.eta[j] * f_hat.values[j];
  return out;
}

Reconstruction apply_semigroup_radial(const ExponentTable& table, const SpectralVector& f_hat, double t,
                                      double radius) {
  return inverse_transform_radial(semigroup_multiplier(table, f_hat, t), table.grid, radius);
}

Reconstruction apply_semigroup(const ExponentTable& table, const SpectralVector& f_hat, double t,
                               const GroupElement& g) {
  return inverse_transform(semigroup_multiplier(table, f_hat, t), table.grid, g);
}

double apply_generator_radial(const ExponentTable& table, const SpectralVector& f_hat, double radius) {
  const auto r = inverse_transform_radial(generator_multiplier(table, f_hat), table.grid, radius);
  if (r.truncation_warning) {
    throw Error(ErrorKind::decay_error, "eta * f_hat does not decay on the grid (tail fraction " +
                                            std::to_string(r.tail_fraction) + ")");
  }
  return r.value;
}

double apply_generator(const ExponentTable& table, const SpectralVector& f_hat, const GroupElement& g) {
  if (g.group() != GroupId::SL2R) throw Error(ErrorKind::unsupported_group, "generator is implemented for SL2R");
  return apply_generator_radial(table, f_hat, cartan_radial(g));
}

double radial_pairing(const SpectralGrid& grid, const SpectralVector& coefficients, const RadialFunction& g) {
  const auto s = support_samples(g);
  if (s.radii.empty()) return 0.0;
  const SphericalTable rows(grid, s.radii);
  const auto h = rows.synthesize(real_weighted(grid, coefficients));
  return simd::active_kernels().dot(h, s.weighted);
}

ParsevalPair parseval_semigroup(const ExponentTable& table, const RadialFunction& f, const RadialFunction& g,
                                double t) {
  const auto f_hat = spherical_transform(f, table.grid);
  const auto g_hat = spherical_transform(g, table.grid);
  const auto tf_hat = semigroup_multiplier(table, f_hat, t);
  return {radial_pairing(table.grid, tf_hat, g), spectral_inner_product(tf_hat, g_hat, table.grid)};
}

double dirichlet_form(const ExponentTable& table, const SpectralVector& f_hat, const SpectralVector& g_hat) {
  if (!table.params.symmetric) {
    throw Error(ErrorKind::requires_symmetric, "the Dirichlet form is defined for symmetric semigroups");
  }
  require_aligned(table, f_hat);
  require_aligned(table, g_hat);
  const auto w = table.grid.weights();
  double acc = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    acc += w[j] * (f_hat.values[j] * table.eta[j] * std::conj(g_hat.values[j])).real();
  }
  return acc;
}

EnergyReport green_energy(const ExponentTable& table, const SpectralVector& f_hat) {
  require_aligned(table, f_hat);
  const auto w = table.grid.weights();
  const std::size_t n = w.size();
  EnergyReport r;
  std::vector<double> terms(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double mass = w[j] * std::norm(f_hat.values[j]);
    if (mass == 0.0) continue;
    const double re = table.eta[j].real();
    if (re <= 0.0 || mass / re > kDivergenceIntegrandLimit) {
      r.divergent = true;
      r.value = std::numeric_limits<double>::infinity();
      return r;
    }
    terms[j] = mass / re;
  }
  double total = 0.0;
  double tail = 0.0;
  double coarse = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    total += terms[j];
    if (j >= n - n / 10) tail += terms[j];
    // Trapezoid on every second node: interior even nodes carry double weight.
    if (j % 2 == 0) coarse += (j == 0 || j + 1 >= n) ? terms[j] : 2.0 * terms[j];
  }
  r.value = total;
  r.tail_estimate = tail;
  r.refinement_values = {coarse, total};
  r.grid_refinement_delta = std::abs(total - coarse);
  return r;
}

TimeDomainEnergy time_domain_energy(const ExponentTable& table, const RadialFunction& f, double horizon) {
  if (!(horizon > 0.0)) throw Error(ErrorKind::invalid_argument, "horizon must be > 0");
  const auto f_hat = spherical_transform(f, table.grid);
  const auto s = support_samples(f);
  TimeDomainEnergy out;
  if (s.radii.empty()) return out;
  const SphericalTable rows(table.grid, s.radii);
  const auto w = table.grid.weights();
  const auto& kernels = simd::active_kernels();

  // Graded mesh: fine where <T_t f, f> still carries high-frequency decay.
  std::vector<double> times{0.0};
  while (times.back() < horizon) {
    const double t = times.back();
    const double dt = t < 1.0 ? 0.005 : (t < 5.0 ? 0.02 : 0.05);
    times.push_back(std::min(horizon, t + dt));
  }
  std::vector<double> coeff(table.grid.size());
  auto pairing = [&](double t) {
    for (std::size_t j = 0; j < coeff.size(); ++j) {
      coeff[j] = w[j] * (std::exp(-t * table.eta[j]) * f_hat.values[j]).real();
    }
    return kernels.dot(rows.synthesize(coeff), s.weighted);
  };
  double prev = pairing(0.0);
  for (std::size_t k = 1; k < times.size(); ++k) {
    const double cur = pairing(times[k]);
    out.integral += 0.5 * (times[k] - times[k - 1]) * (prev + cur);
    prev = cur;
  }
  double min_eta = std::numeric_limits<double>::infinity();
  double mass = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double m = w[j] * std::norm(f_hat.values[j]);
    if (m == 0.0) continue;
    mass += m;
    min_eta = std::min(min_eta, table.eta[j].real());
  }
  out.tail_bound = min_eta > 0.0 ? mass * std::exp(-horizon * min_eta) / min_eta
                                 : std::numeric_limits<double>::infinity();
  out.total = out.integral + out.tail_bound;
  out.time_points = times.size();
  return out;
}

HarmonicIntegrand harmonic_integrand(const ExponentTable& table, double cutoff) {
  HarmonicIntegrand h;
  const auto nodes = table.grid.nodes();
  for (std::size_t j = 0; j < nodes.size() && nodes[j] <= cutoff + 1e-12; ++j) {
    const double density = table.grid.kappa() * plancherel_density(nodes[j]);
    const double re = table.eta[j].real();
    h.lambda.push_back(nodes[j]);
    h.density.push_back(density);
    h.re_eta.push_back(re);
    h.integrand.push_back(re > 0.0 ? density / re : std::numeric_limits<double>::infinity());
  }
  return h;
}

EnergyReport harmonic_transience_integral(const ExponentTable& table, double cutoff) {
  if (!(cutoff > 0.0) || cutoff > table.grid.lambda_max() * (1.0 + 1e-12)) {
    throw Error(ErrorKind::invalid_argument, "harmonic cutoff must lie in (0, lambda_max]");
  }
  const double h = table.grid.step();
  const int n = std::max(1, static_cast<int>(std::lround(cutoff / h)));
  SpectralGridOptions opt;
  opt.lambda_max = n * h;
  opt.n_nodes = 4 * n + 1;
  opt.k_order = table.grid.k_order();
  opt.kappa = table.grid.kappa();
  const auto fine = exponent_table(table.params, SpectralGrid::make(opt));
  const auto density = harmonic_integrand(fine, opt.lambda_max);

  EnergyReport r;
  for (std::size_t j = 1; j < density.lambda.size(); ++j) {
    if (!(density.re_eta[j] > 0.0) || density.integrand[j] > kDivergenceIntegrandLimit) {
      r.divergent = true;
      r.value = std::numeric_limits<double>::infinity();
      return r;
    }
  }
  const double fine_step = opt.lambda_max / (opt.n_nodes - 1);
  for (int stride : {4, 2, 1}) {
    const std::size_t last = density.lambda.size() - 1;
    double acc = 0.0;
    for (std::size_t j = 0; j <= last; j += stride) {
      const double g = j == 0 && density.re_eta[0] <= 0.0 ? 0.0 : density.integrand[j];
      acc += (j == 0 || j == last ? 0.5 : 1.0) * g;
    }
    r.refinement_values.push_back(acc * stride * fine_step);
  }
  const double d1 = std::abs(r.refinement_values[1] - r.refinement_values[0]);
  const double d2 = std::abs(r.refinement_values[2] - r.refinement_values[1]);
  r.value = r.refinement_values[2];
  r.grid_refinement_delta = d2;
  const double floor = 1e-12 * std::abs(r.value);
  if (d2 > floor && d2 > 0.5 * d1) r.divergent = true;
  return r;
}

}  // namespace levy
