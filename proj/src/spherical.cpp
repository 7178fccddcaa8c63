#include "levy/spherical.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "levy/error.hpp"
#include "levy/parallel.hpp"
#include "levy/quadrature.hpp"
#include "levy/simd/kernels.hpp"

namespace levy {

namespace {

constexpr double kPi = std::numbers::pi;

void require_finite(double lambda) {
  if (!std::isfinite(lambda)) throw Error(ErrorKind::invalid_argument, "non-finite spectral parameter");
}

void require_order(int base_order) {
  if (base_order < 16) throw Error(ErrorKind::invalid_argument, "K-quadrature order must be >= 16");
}

struct AbelNode {
  double u;
  double jacobian;  // t cos(psi) w / sqrt(cosh t - cosh u)
};

// Gauss-Legendre in psi on [0, pi/2] with u = t sin(psi). The factor
// t cos(psi) / sqrt(cosh t - cosh u) is smooth in psi: it removes the inverse
// square-root endpoint singularity of the Abel form of the K-integral.
std::vector<AbelNode> abel_nodes(double t, int n) {
  const auto& rule = gauss_legendre(n);
  std::vector<AbelNode> out(n);
  for (int m = 0; m < n; ++m) {
    const double psi = 0.25 * kPi * (rule.nodes[m] + 1.0);
    const double w = 0.25 * kPi * rule.weights[m];
    const double sp = std::sin(psi);
    const double cp = std::cos(psi);
    const double u = t * sp;
    const double t_minus_u = t * cp * cp / (1.0 + sp);
    const double d = 2.0 * std::sinh(0.5 * (t + u)) * std::sinh(0.5 * t_minus_u);
    out[m] = {u, t * cp * w / std::sqrt(d)};
  }
  return out;
}

}  // namespace

int spherical_node_count(double t, double lambda_max, int base_order) {
  require_order(base_order);
  const int extra = static_cast<int>(std::ceil(0.6 * std::abs(lambda_max) * t + 0.5 * t));
  const int n = base_order + extra;
  return (n + 3) / 4 * 4;
}

SphericalNodes spherical_nodes(double t, int n) {
  SphericalNodes s;
  s.t = t;
  if (t <= 0.0) {
    s.abel = {0.0};
    s.coeff = {1.0};
    return s;
  }
  const auto nodes = abel_nodes(t, n);
  s.abel.resize(n);
  s.coeff.resize(n);
  for (int m = 0; m < n; ++m) {
    s.abel[m] = nodes[m].u;
    s.coeff[m] = std::numbers::sqrt2 / kPi * nodes[m].jacobian;
  }
  return s;
}

KQuadrature k_quadrature(double t, int n) {
  KQuadrature q;
  if (t <= 0.0) {
    q.angle = {0.0};
    q.weight = {1.0};
    q.projection = {0.0};
    return q;
  }
  const auto nodes = abel_nodes(t, n);
  const double em2t = std::expm1(2.0 * t);
  const double scale = 1.0 / (std::numbers::sqrt2 * kPi);
  q.angle.reserve(2 * n);
  q.weight.reserve(2 * n);
  q.projection.reserve(2 * n);
  for (const auto& node : nodes) {
    // A(k_theta a_t) = -log(e^{-t} cos^2 + e^{t} sin^2) equals +u or -u at
    // sin^2(theta) = expm1(t -+ u) / expm1(2t).
    for (int sign : {1, -1}) {
      const double a = sign * node.u;
      const double s2 = std::expm1(t - a) / em2t;
      q.angle.push_back(std::asin(std::sqrt(std::clamp(s2, 0.0, 1.0))));
      q.weight.push_back(scale * std::exp(-0.5 * a) * node.jacobian);
      q.projection.push_back(a);
    }
  }
  return q;
}

std::complex<double> spherical_function(double lambda, const GroupElement& g, int base_order) {
  require_finite(lambda);
  if (g.group() != GroupId::SL2R) {
    throw Error(ErrorKind::unsupported_group, "spherical functions are implemented for SL2R");
  }
  const CartanCoords c = cartan(g);
  if (c.t > kSphericalCutoffRadius) return {0.0, 0.0};
  const auto q = k_quadrature(c.t, spherical_node_count(c.t, lambda, base_order));
  // A(k k1^{-1} g) = A(k a_t k2) = A(k a_t): shift the nodes by k1^{-1}.
  const GroupElement k1_inv = rotation(-c.k1_angle);
  const std::complex<double> exponent(kRho, lambda);
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t m = 0; m < q.angle.size(); ++m) {
    const GroupElement k = multiply(rotation(q.angle[m]), k1_inv);
    const double a = nak_projection(multiply(k, g));
    acc += q.weight[m] * std::exp(exponent * a);
  }
  return acc;
}

double spherical_function_radial(double lambda, double t, int base_order) {
  require_finite(lambda);
  if (t < 0.0) throw Error(ErrorKind::invalid_argument, "radius must be >= 0");
  if (t > kSphericalCutoffRadius) return 0.0;
  const auto s = spherical_nodes(t, spherical_node_count(t, lambda, base_order));
  double acc = 0.0;
  for (std::size_t m = 0; m < s.abel.size(); ++m) acc += s.coeff[m] * std::cos(lambda * s.abel[m]);
  return acc;
}

RadialGrid RadialGrid::make(double t_max, int intervals) {
  if (!(t_max > 0.0)) throw Error(ErrorKind::invalid_argument, "radial grid needs t_max > 0");
  RadialGrid g;
  g.t_max = t_max;
  g.intervals = intervals;
  g.step = t_max / intervals;
  g.volume_weights = simpson_weights(intervals, g.step);
  g.nodes.resize(intervals + 1);
  for (int i = 0; i <= intervals; ++i) {
    g.nodes[i] = i * g.step;
    g.volume_weights[i] *= std::sinh(g.nodes[i]);
  }
  return g;
}

double plancherel_density(double lambda) {
  const double l = std::abs(lambda);
  return l * std::tanh(kPi * l);
}

SpectralGrid SpectralGrid::make(const SpectralGridOptions& options) {
  if (!(options.lambda_max > 0.0) || options.n_nodes < 3) {
    throw Error(ErrorKind::invalid_argument, "spectral grid needs lambda_max > 0 and >= 3 nodes");
  }
  require_order(options.k_order);
  SpectralGrid g;
  g.lambda_max_ = options.lambda_max;
  g.k_order_ = options.k_order;
  g.step_ = options.lambda_max / (options.n_nodes - 1);
  const auto trap = trapezoid_weights(options.n_nodes - 1, g.step_);
  g.nodes_.resize(options.n_nodes);
  g.weights_.resize(options.n_nodes);
  for (int j = 0; j < options.n_nodes; ++j) {
    g.nodes_[j] = j * g.step_;
    g.weights_[j] = trap[j] * plancherel_density(g.nodes_[j]);
  }
  if (options.kappa > 0.0) {
    g.kappa_ = options.kappa;
  } else {
    // One-scalar calibration on a fixed Gaussian reference: make the
    // reconstruction at the base point exact.
    const RadialGrid radial = RadialGrid::make();
    const RadialFunction ref = gaussian_bump(radial, 0.5);
    g.kappa_ = 1.0;
    const SpectralVector ref_hat = spherical_transform(ref, g);
    double recon = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) recon += g.weights_[j] * ref_hat.values[j].real();
    g.kappa_ = ref(0.0) / recon;
  }
  for (double& w : g.weights_) w *= g.kappa_;
  return g;
}

void SpectralGrid::accumulate_row(double t, double scale, std::span<double> out) const {
  if (t > kSphericalCutoffRadius || scale == 0.0) return;
  auto s = spherical_nodes(t, spherical_node_count(t, lambda_max_, k_order_));
  for (double& c : s.coeff) c *= scale;
  simd::active_kernels().cosine_series(s.coeff, s.abel, 0.0, step_, out);
}

std::vector<double> SpectralGrid::row(double t) const {
  std::vector<double> out(size(), 0.0);
  accumulate_row(t, 1.0, out);
  return out;
}

RadialFunction RadialFunction::from_function(const RadialGrid& grid, std::function<double(double)> f,
                                             double support) {
  if (support > grid.t_max) {
    throw Error(ErrorKind::invalid_argument, "support exceeds the radial grid");
  }
  RadialFunction r;
  r.grid = grid;
  r.support = support;
  r.values.assign(grid.nodes.size(), 0.0);
  for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
    if (grid.nodes[i] <= support) r.values[i] = f(grid.nodes[i]);
  }
  r.exact = [f = std::move(f), support](double t) { return t <= support ? f(t) : 0.0; };
  return r;
}

RadialFunction RadialFunction::zero(const RadialGrid& grid) {
  return from_function(grid, [](double) { return 0.0; }, 0.0);
}

double RadialFunction::operator()(double t) const {
  if (exact) return exact(t);
  if (t >= grid.t_max) return 0.0;
  const double x = t / grid.step;
  const auto i = static_cast<std::size_t>(x);
  const double f = x - static_cast<double>(i);
  return (1.0 - f) * values[i] + f * values[i + 1];
}

RadialFunction gaussian_bump(const RadialGrid& grid, double width) {
  const double support = std::min(grid.t_max, width * std::sqrt(2.0 * 39.2));
  return RadialFunction::from_function(
      grid, [width](double t) { return std::exp(-t * t / (2.0 * width * width)); }, support);
}

RadialFunction smooth_bump(const RadialGrid& grid, double radius) {
  return RadialFunction::from_function(
      grid,
      [radius](double t) {
        const double x = t / radius;
        return x < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - x * x)) : 0.0;
      },
      radius);
}

RadialFunction shell_bump(const RadialGrid& grid, double center, double halfwidth) {
  return RadialFunction::from_function(
      grid,
      [center, halfwidth](double t) {
        const double x = (t - center) / halfwidth;
        return std::abs(x) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - x * x)) : 0.0;
      },
      center + halfwidth);
}

RadialFunction linear_combination(double alpha, const RadialFunction& f, double beta,
                                  const RadialFunction& g) {
  if (f.values.size() != g.values.size()) {
    throw Error(ErrorKind::invalid_argument, "radial functions live on different grids");
  }
  RadialFunction r;
  r.grid = f.grid;
  r.support = std::max(f.support, g.support);
  r.values.resize(f.values.size());
  for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] = alpha * f.values[i] + beta * g.values[i];
  if (f.exact && g.exact) {
    r.exact = [alpha, beta, fe = f.exact, ge = g.exact](double t) { return alpha * fe(t) + beta * ge(t); };
  }
  return r;
}

std::vector<double> spherical_sum(const SpectralGrid& grid, std::span<const double> radii,
                                  std::span<const double> scales) {
  if (radii.size() != scales.size()) {
    throw Error(ErrorKind::invalid_argument, "radii and scales differ in length");
  }
  constexpr std::size_t kChunk = 32;
  const std::size_t n_chunks = (radii.size() + kChunk - 1) / kChunk;
  std::vector<std::vector<double>> partial(n_chunks);
  parallel_for(n_chunks, [&](std::size_t c) {
    partial[c].assign(grid.size(), 0.0);
    const std::size_t end = std::min(radii.size(), (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) grid.accumulate_row(radii[i], scales[i], partial[c]);
  });
  std::vector<double> out(grid.size(), 0.0);
  for (const auto& p : partial) {
    for (std::size_t j = 0; j < grid.size(); ++j) out[j] += p[j];
  }
  return out;
}

SpectralVector spherical_transform(const RadialFunction& f, const SpectralGrid& grid) {
  const auto& radial = f.grid;
  std::vector<double> radii;
  std::vector<double> scales;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    const double s = radial.volume_weights[i] * f.values[i];
    if (s != 0.0) {
      radii.push_back(radial.nodes[i]);
      scales.push_back(s);
    }
  }
  const auto sum = spherical_sum(grid, radii, scales);
  SpectralVector out;
  out.values.assign(sum.begin(), sum.end());
  return out;
}

double spectral_tail_fraction(std::span<const std::complex<double>> weighted, std::size_t n) {
  const std::size_t start = n - n / 10;
  double total = 0.0;
  double tail = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double a = std::abs(weighted[j]);
    total += a;
    if (j >= start) tail += a;
  }
  return total > 0.0 ? tail / total : 0.0;
}

Reconstruction inverse_transform_radial(const SpectralVector& f_hat, const SpectralGrid& grid, double t) {
  if (f_hat.values.size() != grid.size()) {
    throw Error(ErrorKind::invalid_argument, "spectral vector is not aligned with the grid");
  }
  const auto row = grid.row(t);
  const auto w = grid.weights();
  std::vector<std::complex<double>> weighted(grid.size());
  Reconstruction r;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    weighted[j] = w[j] * f_hat.values[j];
    r.value += weighted[j].real() * row[j];
    r.imag_residue += weighted[j].imag() * row[j];
  }
  r.tail_fraction = spectral_tail_fraction(weighted, grid.size());
  r.truncation_warning = r.tail_fraction > kTailWarningThreshold;
  return r;
}

Reconstruction inverse_transform(const SpectralVector& f_hat, const SpectralGrid& grid,
                                 const GroupElement& g) {
  if (g.group() != GroupId::SL2R) {
    throw Error(ErrorKind::unsupported_group, "inversion is implemented for SL2R");
  }
  return inverse_transform_radial(f_hat, grid, cartan_radial(g));
}

SphericalTable::SphericalTable(const SpectralGrid& grid, std::vector<double> radii)
    : n_cols_(grid.size()), radii_(std::move(radii)), rows_(radii_.size() * grid.size(), 0.0) {
  parallel_for(radii_.size(), [&](std::size_t i) {
    grid.accumulate_row(radii_[i], 1.0, std::span<double>(rows_).subspan(i * n_cols_, n_cols_));
  });
}

std::vector<double> SphericalTable::synthesize(std::span<const double> coefficients) const {
  if (coefficients.size() != n_cols_) {
    throw Error(ErrorKind::invalid_argument, "coefficient vector is not aligned with the table");
  }
  std::vector<double> out(radii_.size());
  simd::active_kernels().matvec(rows_, n_cols_, coefficients, out);
  return out;
}

double inner_product(const RadialFunction& f, const RadialFunction& g) {
  if (f.values.size() != g.values.size()) {
    throw Error(ErrorKind::invalid_argument, "radial functions live on different grids");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) acc += f.grid.volume_weights[i] * f.values[i] * g.values[i];
  return acc;
}

double spectral_inner_product(const SpectralVector& f_hat, const SpectralVector& g_hat,
                              const SpectralGrid& grid) {
  const auto w = grid.weights();
  double acc = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    acc += w[j] * (f_hat.values[j] * std::conj(g_hat.values[j])).real();
  }
  return acc;
}

ParsevalPair parseval(const RadialFunction& f, const RadialFunction& g, const SpectralGrid& grid) {
  const auto f_hat = spherical_transform(f, grid);
  const auto g_hat = spherical_transform(g, grid);
  return {inner_product(f, g), spectral_inner_product(f_hat, g_hat, grid)};
}

}  // namespace levy
