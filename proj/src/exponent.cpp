#include "levy/exponent.hpp"

#include <algorithm>
#include <cmath>

#include "levy/error.hpp"
#include "levy/quadrature.hpp"

namespace levy {

namespace {

constexpr int kPanelOrder = 16;
// phi_l(a_t) e^{-t} < 1e-15 beyond this distance from the cutoff.
constexpr double kExponentialSpan = 24.0;

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }

void add_panel(JumpQuadrature& q, double lo, double hi, const RadialLevyMeasure& nu) {
  const auto rule = gauss_legendre(kPanelOrder, lo, hi);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    q.radius.push_back(rule.nodes[i]);
    q.weight.push_back(rule.weights[i] * nu.density(rule.nodes[i]));
  }
}

}  // namespace

std::string_view to_string(LevyKind kind) {
  switch (kind) {
    case LevyKind::zero: return "zero";
    case LevyKind::point_masses: return "point_masses";
    case LevyKind::exponential: return "exponential";
    case LevyKind::stable_like: return "stable_like";
  }
  return "unknown";
}

LevyKind levy_kind_from_string(std::string_view name) {
  for (auto k : {LevyKind::zero, LevyKind::point_masses, LevyKind::exponential, LevyKind::stable_like}) {
    if (to_string(k) == name) return k;
  }
  throw Error(ErrorKind::invalid_argument, "unknown Levy measure kind '" + std::string(name) + "'");
}

RadialLevyMeasure RadialLevyMeasure::zero() { return {}; }

RadialLevyMeasure RadialLevyMeasure::point_masses(std::vector<PointMass> masses) {
  RadialLevyMeasure m;
  m.kind = LevyKind::point_masses;
  m.masses = std::move(masses);
  return m;
}

RadialLevyMeasure RadialLevyMeasure::exponential(double scale, double cutoff) {
  RadialLevyMeasure m;
  m.kind = LevyKind::exponential;
  m.scale = scale;
  m.cutoff = cutoff;
  return m;
}

RadialLevyMeasure RadialLevyMeasure::stable_like(double scale, double alpha, double cutoff, double upper) {
  RadialLevyMeasure m;
  m.kind = LevyKind::stable_like;
  m.scale = scale;
  m.alpha = alpha;
  m.cutoff = cutoff;
  m.upper = upper;
  return m;
}

void RadialLevyMeasure::validate() const {
  switch (kind) {
    case LevyKind::zero:
      return;
    case LevyKind::point_masses:
      for (const auto& m : masses) {
        if (!(std::isfinite(m.radius) && m.radius > 0.0) || !finite_nonneg(m.rate)) {
          throw Error(ErrorKind::measure_invalid, "point masses need radius > 0 and rate >= 0");
        }
      }
      return;
    case LevyKind::exponential:
      if (!finite_nonneg(scale) || !finite_nonneg(cutoff)) {
        throw Error(ErrorKind::measure_invalid, "exponential density needs scale >= 0 and cutoff >= 0");
      }
      return;
    case LevyKind::stable_like:
      if (!(alpha > 0.0 && alpha < 2.0)) {
        throw Error(ErrorKind::measure_invalid,
                    "stable-like density needs alpha in (0, 2); int t^2 n(t) dt diverges at 0 otherwise");
      }
      if (!finite_nonneg(scale)) throw Error(ErrorKind::measure_invalid, "stable-like density needs scale >= 0");
      if (!(std::isfinite(cutoff) && cutoff > 0.0)) {
        throw Error(ErrorKind::measure_invalid, "stable-like density needs a small-jump cutoff > 0");
      }
      if (!(std::isfinite(upper) && upper > cutoff)) {
        throw Error(ErrorKind::measure_invalid, "stable-like density needs a finite upper radius above the cutoff");
      }
      return;
  }
}

double RadialLevyMeasure::density(double t) const {
  switch (kind) {
    case LevyKind::exponential:
      return t > 0.0 ? scale * std::exp(-t) : 0.0;
    case LevyKind::stable_like:
      return (t > 0.0 && t < upper) ? scale * std::pow(t, -1.0 - alpha) : 0.0;
    default:
      return 0.0;
  }
}

double RadialLevyMeasure::jump_rate() const {
  switch (kind) {
    case LevyKind::zero:
      return 0.0;
    case LevyKind::point_masses: {
      double r = 0.0;
      for (const auto& m : masses) r += m.rate;
      return r;
    }
    case LevyKind::exponential:
      return scale * std::exp(-cutoff);
    case LevyKind::stable_like:
      return scale * (std::pow(cutoff, -alpha) - std::pow(upper, -alpha)) / alpha;
  }
  return 0.0;
}

double RadialLevyMeasure::levy_condition_integral() const {
  switch (kind) {
    case LevyKind::zero:
      return 0.0;
    case LevyKind::point_masses: {
      double r = 0.0;
      for (const auto& m : masses) r += m.rate * std::min(m.radius * m.radius, 1.0);
      return r;
    }
    case LevyKind::exponential:
      return scale * (2.0 - 4.0 * std::exp(-1.0));
    case LevyKind::stable_like: {
      const double m = std::min(1.0, upper);
      double r = scale * std::pow(m, 2.0 - alpha) / (2.0 - alpha);
      if (upper > 1.0) r += scale * (1.0 - std::pow(upper, -alpha)) / alpha;
      return r;
    }
  }
  return 0.0;
}

double RadialLevyMeasure::small_jump_second_moment() const {
  if (cutoff <= 0.0) return 0.0;
  switch (kind) {
    case LevyKind::exponential: {
      const auto rule = gauss_legendre(kPanelOrder, 0.0, cutoff);
      double r = 0.0;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double t = rule.nodes[i];
        r += rule.weights[i] * t * t * std::exp(-t);
      }
      return scale * r;
    }
    case LevyKind::stable_like:
      return scale * std::pow(cutoff, 2.0 - alpha) / (2.0 - alpha);
    default:
      return 0.0;
  }
}

RadialLevyMeasure RadialLevyMeasure::scaled(double factor) const {
  RadialLevyMeasure m = *this;
  m.scale *= factor;
  for (auto& p : m.masses) p.rate *= factor;
  return m;
}

bool RadialLevyMeasure::is_zero() const {
  return kind == LevyKind::zero || (jump_rate() == 0.0 && small_jump_second_moment() == 0.0);
}

void ProcessParams::validate() const {
  if (!finite_nonneg(a)) throw Error(ErrorKind::invalid_argument, "diffusion coefficient a must be >= 0");
  levy.validate();
}

double ProcessParams::effective_diffusion() const {
  return a + levy.small_jump_second_moment() / (2.0 * space_dimension(group));
}

bool ProcessParams::degenerate() const { return a == 0.0 && levy.is_zero(); }

double beta(double lambda, double a) {
  if (!finite_nonneg(a)) throw Error(ErrorKind::invalid_argument, "diffusion coefficient a must be >= 0");
  return a * (lambda * lambda + kRho * kRho);
}

JumpQuadrature jump_quadrature(const RadialLevyMeasure& nu, double lambda_max) {
  nu.validate();
  JumpQuadrature q;
  const double panel = std::min(1.0, 12.0 / std::max(1.0, std::abs(lambda_max)));
  switch (nu.kind) {
    case LevyKind::zero:
      break;
    case LevyKind::point_masses:
      for (const auto& m : nu.masses) {
        q.radius.push_back(m.radius);
        q.weight.push_back(m.rate);
      }
      break;
    case LevyKind::exponential: {
      if (nu.scale == 0.0) break;
      const double lo = nu.cutoff;
      const double hi = nu.cutoff + kExponentialSpan;
      const int n = static_cast<int>(std::ceil((hi - lo) / panel));
      for (int p = 0; p < n; ++p) add_panel(q, lo + p * (hi - lo) / n, lo + (p + 1) * (hi - lo) / n, nu);
      q.far_mass = nu.scale * std::exp(-hi);
      break;
    }
    case LevyKind::stable_like: {
      if (nu.scale == 0.0) break;
      // Geometric grading away from the cutoff, where the density is steepest.
      double lo = nu.cutoff;
      while (lo < nu.upper) {
        const double hi = std::min({2.0 * lo, lo + panel, nu.upper});
        add_panel(q, lo, hi, nu);
        lo = hi;
      }
      break;
    }
  }
  return q;
}

std::complex<double> jump_integral(double lambda, const RadialLevyMeasure& nu, const SpectralGrid& grid) {
  const auto q = jump_quadrature(nu, lambda);
  double acc = q.far_mass;
  for (std::size_t i = 0; i < q.radius.size(); ++i) {
    acc += q.weight[i] * (1.0 - spherical_function_radial(lambda, q.radius[i], grid.k_order()));
  }
  return {acc, 0.0};
}

ExponentTable exponent_table(const ProcessParams& params, const SpectralGrid& grid) {
  params.validate();
  if (params.group != GroupId::SL2R) {
    throw Error(ErrorKind::unsupported_group, "characteristic exponents are implemented for SL2R");
  }
  const auto q = jump_quadrature(params.levy, grid.lambda_max());
  double mass = q.far_mass;
  for (double w : q.weight) mass += w;
  const auto phi_sum = spherical_sum(grid, q.radius, q.weight);
  const double a_eff = params.effective_diffusion();

  ExponentTable table{grid, params, {}, {}};
  table.eta.resize(grid.size());
  table.beta.resize(grid.size());
  const auto nodes = grid.nodes();
  for (std::size_t j = 0; j < grid.size(); ++j) {
    table.beta[j] = beta(nodes[j], a_eff);
    table.eta[j] = {table.beta[j] + (mass - phi_sum[j]), 0.0};
    if (table.eta[j].real() < 0.0) {
      throw Error(ErrorKind::assertion, "negative real part of the exponent at lambda = " +
                                            std::to_string(nodes[j]));
    }
  }
  return table;
}

double growth_bound_ratio(const ExponentTable& table) {
  double r = 0.0;
  const auto nodes = table.grid.nodes();
  for (std::size_t j = 0; j < table.eta.size(); ++j) {
    r = std::max(r, std::abs(table.eta[j]) / (1.0 + nodes[j] * nodes[j] + kRho * kRho));
  }
  return r;
}

ProcessParams symmetrize(const ProcessParams& params) {
  ProcessParams s = params;
  s.a = 2.0 * params.a;
  s.levy = params.levy.scaled(2.0);
  s.symmetric = true;
  return s;
}

CosineFormReport cosine_form_report(const ExponentTable& table, std::size_t stride) {
  const auto& params = table.params;
  const auto q = jump_quadrature(params.levy, table.grid.lambda_max());
  const double a_eff = params.effective_diffusion();
  const auto nodes = table.grid.nodes();
  CosineFormReport r;
  for (std::size_t j = 0; j < nodes.size(); j += std::max<std::size_t>(stride, 1)) {
    const double l = nodes[j];
    double value = beta(l, a_eff) + q.far_mass;
    for (std::size_t i = 0; i < q.radius.size(); ++i) {
      const double t = q.radius[i];
      const auto k = k_quadrature(t, spherical_node_count(t, l + kRho, table.grid.k_order()));
      double avg = 0.0;
      for (std::size_t m = 0; m < k.angle.size(); ++m) avg += k.weight[m] * std::cos((l + kRho) * k.projection[m]);
      value += q.weight[i] * (1.0 - avg);
    }
    const double eta = table.eta[j].real();
    const double diff = std::abs(value - eta);
    r.lambda.push_back(l);
    r.cosine_form.push_back(value);
    r.exponent.push_back(eta);
    r.max_abs_difference = std::max(r.max_abs_difference, diff);
    if (eta > 0.0) r.max_relative_difference = std::max(r.max_relative_difference, diff / eta);
  }
  return r;
}

}  // namespace levy
