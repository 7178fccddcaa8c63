#include <doctest.h>

#include <cmath>
#include <random>

#include "levy/error.hpp"
#include "levy/spherical.hpp"
#include "support.hpp"

using namespace levy;
using levy::testing::kPi;

namespace {

// phi_l(a_t) = P_{-1/2 + i l}(cosh t), evaluated with mpmath legenp at 40
// digits.
struct FrozenPhi {
  double lambda;
  double t;
  double value;
};
constexpr FrozenPhi kFrozenPhi[] = {
    {0, 0.5, 0.98459519569583316},      {0, 2, 0.79565169560597402},       {0.3, 1, 0.92001846817798134},
    {1, 0.1, 0.99687874041976538},      {1, 1, 0.72207522827937457},       {1, 3, -0.12357799553709858},
    {2.5, 2, -0.13835031608493262},     {5, 0.7, -0.36437951157963019},    {10, 1.5, -0.010994272013759777},
    {20, 0.3, 0.14935217676060245},     {3, 5, -0.0019015017875114832},    {0.5, 8, -0.02987556937613591},
    {37, 0.05, 0.31086596984486094},    {12, 4, -0.043948787307209661},
};

const SpectralGrid& default_grid() {
  static const SpectralGrid g = SpectralGrid::make();
  return g;
}

const RadialGrid& default_radial() {
  static const RadialGrid g = RadialGrid::make();
  return g;
}

// int_K phi(sigma k tau) dk by the periodic trapezoid rule in the angle.
double k_average(double lambda, const GroupElement& sigma, const GroupElement& tau, int n = 256) {
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    acc += spherical_function(lambda, sigma * rotation(2.0 * kPi * i / n) * tau).real();
  }
  return acc / n;
}

}  // namespace

TEST_SUITE("spherical") {
  TEST_CASE("frozen reference values") {
    for (const auto& f : kFrozenPhi) {
      INFO("lambda " << f.lambda << " t " << f.t);
      CHECK(std::abs(spherical_function_radial(f.lambda, f.t) - f.value) < 1e-10);
      const auto z = spherical_function(f.lambda, boost(f.t));
      CHECK(std::abs(z.real() - f.value) < 1e-10);
      CHECK(std::abs(z.imag()) < 1e-10);
    }
  }

  TEST_CASE("phi at the identity is 1 and the K-weights are a probability") {
    for (double l : {0.0, 0.7, 13.0}) {
      CHECK(spherical_function(l, GroupElement::identity(GroupId::SL2R)).real() == doctest::Approx(1.0));
    }
    for (double t : {0.1, 1.0, 6.0}) {
      const auto kq = k_quadrature(t, spherical_node_count(t, 40.0, kDefaultKOrder));
      double s = 0.0;
      for (double w : kq.weight) s += w;
      CHECK(s == doctest::Approx(1.0).epsilon(1e-13));
    }
  }

  TEST_CASE("bounded by 1 on random (lambda, g)") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> l(-30.0, 30.0);
    for (int i = 0; i < 1000; ++i) {
      CHECK(std::abs(spherical_function(l(rng), testing::random_sl2r(rng, 6.0))) <= 1.0 + 1e-12);
    }
  }

  TEST_CASE("bi-invariance and evenness in lambda") {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 50; ++i) {
      const auto g = testing::random_sl2r(rng);
      const double l = 0.37 * i;
      const auto base = spherical_function(l, g);
      CHECK(std::abs(spherical_function(l, rotation(0.3 * i) * g * rotation(1.1)) - base) < 1e-10);
      CHECK(std::abs(spherical_function(-l, g) - base) < 1e-10);
    }
  }

  TEST_CASE("functional equation on random samples") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> l(0.0, 6.0);
    for (int i = 0; i < 15; ++i) {
      const double lambda = l(rng);
      const auto s = testing::random_sl2r(rng, 2.5);
      const auto t = testing::random_sl2r(rng, 2.5);
      const double lhs = k_average(lambda, s, t);
      const double rhs = (spherical_function(lambda, s) * spherical_function(lambda, t)).real();
      CHECK(std::abs(lhs - rhs) < 1e-6);
    }
  }

  TEST_CASE("non-finite lambda and SU2 are rejected") {
    CHECK_THROWS_AS(spherical_function(std::nan(""), boost(1.0)), Error);
    CHECK_THROWS_AS(spherical_function(1.0, GroupElement::identity(GroupId::SU2)), Error);
  }

  TEST_CASE("plancherel density") {
    CHECK(plancherel_density(0.0) == 0.0);
    CHECK(plancherel_density(-2.0) == doctest::Approx(plancherel_density(2.0)));
    // lambda tanh(pi lambda) ~ lambda: density / lambda^2 stays bounded.
    for (double l : {1.0, 10.0, 100.0, 1000.0}) CHECK(plancherel_density(l) / (l * l) <= 1.0);
    CHECK(plancherel_density(50.0) == doctest::Approx(50.0));
  }

  TEST_CASE("transform is linear and vanishes on zero") {
    const auto& grid = default_grid();
    const auto f = gaussian_bump(default_radial(), 0.5);
    const auto g = smooth_bump(default_radial(), 1.5);
    const auto zero = spherical_transform(RadialFunction::zero(default_radial()), grid);
    for (const auto& z : zero.values) CHECK(z == std::complex<double>(0.0));
    const auto fh = spherical_transform(f, grid);
    const auto gh = spherical_transform(g, grid);
    const auto ch = spherical_transform(linear_combination(2.0, f, -0.5, g), grid);
    double worst = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
      worst = std::max(worst, std::abs(ch.values[j] - (2.0 * fh.values[j] - 0.5 * gh.values[j])));
    }
    CHECK(worst < 1e-10);
  }

  TEST_CASE("narrow unit-mass shell at t = 1 transforms to phi(a_1)") {
    const auto fine = RadialGrid::make(2.0, 8000);
    auto f = shell_bump(fine, 1.0, 0.02);
    double mass = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i) mass += fine.volume_weights[i] * f.values[i];
    for (double& v : f.values) v /= mass;
    SpectralGridOptions o;
    o.lambda_max = 5.0;
    o.n_nodes = 11;
    o.kappa = 1.0;
    const auto grid = SpectralGrid::make(o);
    const auto fh = spherical_transform(f, grid);
    const auto nodes = grid.nodes();
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      CHECK(std::abs(fh.values[j].real() - spherical_function_radial(nodes[j], 1.0)) < 1e-3);
    }
  }

  TEST_CASE("inversion round trip on a smooth bump") {
    const auto& grid = default_grid();
    const auto f = smooth_bump(default_radial(), 2.0);
    const auto fh = spherical_transform(f, grid);
    double worst = 0.0;
    for (double t = 0.0; t <= 3.0; t += 0.05) {
      const auto r = inverse_transform_radial(fh, grid, t);
      worst = std::max(worst, std::abs(r.value - f(t)));
    }
    CHECK(worst <= 1e-3);
    std::mt19937_64 rng(31);
    for (int i = 0; i < 10; ++i) {
      const auto g = testing::random_sl2r(rng, 2.5);
      CHECK(std::abs(inverse_transform(fh, grid, g).value - f(cartan_radial(g))) <= 1e-3);
    }
    SpectralVector zero{std::vector<std::complex<double>>(grid.size())};
    CHECK(inverse_transform_radial(zero, grid, 0.7).value == 0.0);
  }

  TEST_CASE("inversion converges under lambda refinement") {
    const auto f = gaussian_bump(default_radial(), 0.5);
    const auto& g1 = default_grid();
    SpectralGridOptions o;
    o.lambda_max = 80.0;
    o.n_nodes = 4000;
    const auto g2 = SpectralGrid::make(o);
    const auto h1 = spherical_transform(f, g1);
    const auto h2 = spherical_transform(f, g2);
    for (double t : {0.0, 0.3, 1.0, 2.0}) {
      CHECK(std::abs(inverse_transform_radial(h1, g1, t).value - inverse_transform_radial(h2, g2, t).value) <= 1e-4);
    }
  }

  TEST_CASE("truncation warning for a spectrum that does not decay") {
    const auto& grid = default_grid();
    SpectralVector flat{std::vector<std::complex<double>>(grid.size(), 1.0)};
    const auto r = inverse_transform_radial(flat, grid, 0.5);
    CHECK(r.truncation_warning);
    CHECK(r.tail_fraction > kTailWarningThreshold);
  }

  TEST_CASE("Plancherel and Parseval identities") {
    const auto& grid = default_grid();
    const auto& rg = default_radial();
    const auto f = smooth_bump(rg, 2.0);
    const auto g = gaussian_bump(rg, 0.7);
    const auto ff = parseval(f, f, grid);
    CHECK(std::abs(ff.lhs - ff.rhs) <= 1e-3 * ff.lhs);
    const auto fg = parseval(f, g, grid);
    CHECK(std::abs(fg.lhs - fg.rhs) <= 1e-3 * std::abs(fg.lhs));
    const auto f0 = parseval(f, RadialFunction::zero(rg), grid);
    CHECK(f0.lhs == 0.0);
    CHECK(f0.rhs == 0.0);
    // Disjoint supports: the radial integral is exactly 0.
    const auto inner = smooth_bump(rg, 1.0);
    const auto outer = shell_bump(rg, 3.0, 0.5);
    const auto d = parseval(inner, outer, grid);
    CHECK(d.lhs == 0.0);
    CHECK(std::abs(d.rhs) <= 1e-3 * std::sqrt(inner_product(inner, inner) * inner_product(outer, outer)));
  }

  TEST_CASE("spherical table matches direct rows") {
    SpectralGridOptions o;
    o.lambda_max = 10.0;
    o.n_nodes = 101;
    o.kappa = 1.0;
    const auto grid = SpectralGrid::make(o);
    const std::vector<double> radii{0.0, 0.25, 1.5, 4.0};
    const SphericalTable table(grid, radii);
    std::vector<double> coeff(grid.size());
    for (std::size_t j = 0; j < coeff.size(); ++j) coeff[j] = std::cos(0.1 * j);
    const auto out = table.synthesize(coeff);
    for (std::size_t i = 0; i < radii.size(); ++i) {
      const auto row = grid.row(radii[i]);
      double ref = 0.0;
      for (std::size_t j = 0; j < row.size(); ++j) ref += coeff[j] * row[j];
      CHECK(out[i] == doctest::Approx(ref).epsilon(1e-12));
    }
    const auto nodes = grid.nodes();
    const auto row = grid.row(1.5);
    for (std::size_t j = 0; j < nodes.size(); j += 10) {
      CHECK(row[j] == doctest::Approx(spherical_function_radial(nodes[j], 1.5)).epsilon(1e-10));
    }
  }
}
