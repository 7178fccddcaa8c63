#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/poisson.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "levy/error.hpp"
#include "levy/simulator.hpp"
#include "support.hpp"

using namespace levy;
using levy::testing::kPi;

namespace {

ProcessParams params(GroupId id, double a, RadialLevyMeasure nu = RadialLevyMeasure::zero()) {
  ProcessParams p;
  p.group = id;
  p.a = a;
  p.levy = std::move(nu);
  return p;
}

SimConfig config(const ProcessParams& p, double horizon, std::size_t n_paths, std::uint64_t seed = 1) {
  SimConfig c;
  c.params = p;
  c.base = base_point(p.group);
  c.horizon = horizon;
  c.n_paths = n_paths;
  c.seed = seed;
  c.escape_margin = default_escape_margin(p.group);
  return c;
}

std::filesystem::path temp_file(const char* name) {
  return std::filesystem::temp_directory_path() / (std::string("levy-test-") + name);
}

}  // namespace

TEST_SUITE("simulator") {
  TEST_CASE("degenerate increments are the identity") {
    std::mt19937_64 rng(1);
    for (GroupId id : {GroupId::SL2R, GroupId::SU2}) {
      for (int i = 0; i < 10; ++i) {
        CHECK(sample_increment(0.1, params(id, 0.0), rng) == GroupElement::identity(id));
      }
    }
  }

  TEST_CASE("jump counts are Poisson") {
    const double rate = 1.0;
    const double horizon = 5.0;
    auto c = config(params(GroupId::SL2R, 0.0, RadialLevyMeasure::point_masses({{1.0, rate}})), horizon, 2000, 3);
    c.step = 0.05;
    std::vector<int> counts(13, 0);
    for (std::size_t i = 0; i < c.n_paths; ++i) {
      counts[std::min<std::size_t>(simulate_path(c, i).jumps, 12)]++;
    }
    const boost::math::poisson_distribution<double> poisson(rate * horizon);
    double chi2 = 0.0;
    int bins = 0;
    for (int k = 0; k <= 12; ++k) {
      const double p = k < 12 ? boost::math::pdf(poisson, k) : boost::math::cdf(complement(poisson, 11));
      const double expect = p * c.n_paths;
      chi2 += (counts[k] - expect) * (counts[k] - expect) / expect;
      ++bins;
    }
    const boost::math::chi_squared_distribution<double> dist(bins - 1);
    const double p_value = boost::math::cdf(complement(dist, chi2));
    INFO("chi2 " << chi2 << " p " << p_value);
    CHECK(p_value > 0.01);
  }

  TEST_CASE("short-time second moment of the diffusion step") {
    std::mt19937_64 rng(12);
    for (GroupId id : {GroupId::SL2R, GroupId::SU2}) {
      const auto p = params(id, 1.0);
      const double h = 1e-3;
      const int n = 100000;
      double acc = 0.0;
      for (int i = 0; i < n; ++i) {
        const double d = cartan_radial(sample_increment(h, p, rng));
        acc += d * d;
      }
      const double expect = 2.0 * space_dimension(id) * p.a * h;
      CHECK(std::abs(acc / n - expect) <= 0.05 * expect);
    }
  }

  TEST_CASE("path structure and determinism") {
    auto c = config(params(GroupId::SL2R, 0.5, RadialLevyMeasure::exponential(1.0, 0.0)), 0.0, 1);
    const auto empty = simulate_path(c, 0);
    REQUIRE(empty.times.size() == 1);
    CHECK(empty.states[0] == identity_state(GroupId::SL2R));

    c.horizon = 2.0;
    c.step = 0.01;
    const auto a = simulate_path(c, 4);
    const auto b = simulate_path(c, 4);
    const auto other = simulate_path(c, 5);
    CHECK(a.times == b.times);
    CHECK(a.states == b.states);
    CHECK(a.jump_flags == b.jump_flags);
    CHECK(a.states != other.states);
    CHECK(a.times.back() == doctest::Approx(2.0));
    CHECK(std::is_sorted(a.times.begin(), a.times.end()));
    std::size_t flagged = 0;
    for (auto f : a.jump_flags) flagged += f;
    CHECK(flagged == a.jumps);
  }

  TEST_CASE("increments compose: Z(s + t) against Z(s) Z'(t)") {
    auto c = config(params(GroupId::SL2R, 0.5, RadialLevyMeasure::exponential(1.0, 0.0)), 1.0, 10000, 41);
    c.step = 2e-3;
    const double t1[] = {1.0};
    const auto whole = distances_at(c, t1)[0];
    c.horizon = 0.5;
    const auto first = elements_at(c, 0.5);
    c.seed = 42;
    const auto second = elements_at(c, 0.5);
    std::vector<double> composed(first.size());
    for (std::size_t i = 0; i < first.size(); ++i) composed[i] = cartan_radial(first[i] * second[i]);
    const double p = testing::ks_two_sample_p(whole, composed);
    INFO("KS p " << p);
    CHECK(p > 0.01);
  }

  TEST_CASE("occupation time") {
    for (GroupId id : {GroupId::SL2R, GroupId::SU2}) {
      auto c = config(params(id, 0.0), 3.0, 1);
      c.step = 0.1;
      const auto still = simulate_path(c, 0);
      for (double r : {0.01, 1.0}) CHECK(occupation_time(still, r, c.base) == doctest::Approx(3.0));
    }
    auto c = config(params(GroupId::SL2R, 1.0, RadialLevyMeasure::point_masses({{1.0, 1.0}})), 5.0, 1);
    for (std::size_t i = 0; i < 20; ++i) {
      const auto path = simulate_path(c, i);
      double prev = 0.0;
      for (double r : {0.1, 0.5, 1.0, 2.0, 4.0}) {
        const double occ = occupation_time(path, r, c.base);
        CHECK(occ >= prev);
        CHECK(occ <= 5.0 + 1e-9);
        prev = occ;
      }
    }
    auto su = config(params(GroupId::SU2, 1.0), 4.0, 1);
    CHECK(occupation_time(simulate_path(su, 0), kPi, su.base) == doctest::Approx(4.0));
  }

  TEST_CASE("potential estimate: degenerate, H2 diffusion and SU2 diffusion") {
    auto still = config(params(GroupId::SL2R, 0.0), 5.0, 4);
    still.step = 0.1;
    const auto s = potential_estimate(still);
    for (const auto& b : s.balls) {
      for (std::size_t k = 0; k < s.horizons.size(); ++k) CHECK(b.occupation[k].mean == doctest::Approx(s.horizons[k]));
      CHECK(decide(b, {}).classification == Classification::recurrent);
    }

    const auto h2 = potential_estimate(config(params(GroupId::SL2R, 1.0), 25.0, 200, 2));
    const auto& r1 = h2.balls[1];
    CHECK(r1.ball.radius == 1.0);
    for (std::size_t k = 1; k < 3; ++k) {
      CHECK(std::abs(r1.occupation[k].mean - r1.occupation[0].mean) <= 3.0 * r1.occupation[k].std_error + 1e-12);
    }
    CHECK(decide(r1, {}).classification == Classification::transient);

    auto su = config(params(GroupId::SU2, 1.0), 10.0, 100, 3);
    su.ball_radii = {0.5};
    const auto s2 = potential_estimate(su);
    CHECK(s2.balls[0].slope.mean > 3.0 * s2.balls[0].slope.std_error);
    CHECK(decide(s2.balls[0], {}).classification == Classification::recurrent);
  }

  TEST_CASE("decision rule") {
    BallStats b;
    b.occupation = {{1.0, 0.1}, {1.0, 0.1}, {1.05, 0.1}};
    b.slope = {0.001, 0.01};
    auto d = decide(b, {});
    CHECK(d.transient_signal);
    CHECK(!d.recurrent_signal);
    CHECK(d.classification == Classification::transient);
    b.occupation = {{1.0, 0.1}, {2.0, 0.1}, {4.0, 0.1}};
    b.slope = {0.04, 0.001};
    d = decide(b, {});
    CHECK(d.classification == Classification::recurrent);
    b.occupation = {{1.0, 0.1}, {1.2, 0.1}, {1.5, 0.1}};
    b.slope = {0.004, 0.01};
    CHECK(decide(b, {}).classification == Classification::inconclusive);
    // Both signals at once is inconclusive as well.
    b.occupation = {{1.0, 0.1}, {1.0, 0.1}, {1.0, 0.1}};
    b.slope = {0.1, 0.001};
    CHECK(decide(b, {}).classification == Classification::inconclusive);
  }

  TEST_CASE("Monte Carlo expectation of constants") {
    const auto c = config(params(GroupId::SL2R, 1.0), 0.5, 50);
    const auto one = mc_expectation([](double) { return 1.0; }, 0.5, c);
    CHECK(one.mean == 1.0);
    CHECK(one.std_error == 0.0);
    const auto zero = mc_expectation([](double) { return 0.0; }, 0.5, c);
    CHECK(zero.mean == 0.0);
    CHECK(zero.std_error == 0.0);
  }

  TEST_CASE("path file round trip and corruption") {
    for (GroupId id : {GroupId::SL2R, GroupId::SU2}) {
      auto c = config(params(id, 0.5, RadialLevyMeasure::point_masses({{1.0, 2.0}})), 3.0, 1);
      c.step = 0.01;
      const auto path = simulate_path(c, 7);
      const auto file = temp_file("path.bin");
      write_path_file(file, path);
      const auto back = read_path_file(file);
      CHECK(back.group == id);
      CHECK(back.times == path.times);
      CHECK(back.states == path.states);
      CHECK(back.jump_flags == path.jump_flags);
      CHECK(back.jumps == path.jumps);
      CHECK(back.stream == path.stream);

      const auto size = std::filesystem::file_size(file);
      std::filesystem::resize_file(file, size - 5);
      try {
        (void)read_path_file(file);
        FAIL("expected io_error");
      } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::io_error);
      }
      std::ofstream(file, std::ios::binary) << "NOTAPATHFILE";
      CHECK_THROWS_AS(read_path_file(file), Error);
      std::filesystem::remove(file);
    }
  }

  TEST_CASE("config validation") {
    auto c = config(params(GroupId::SL2R, 1.0), 1.0, 1);
    c.step = 2.0;
    CHECK_THROWS_AS(c.validate(), Error);
    c.step = 0.01;
    c.ball_radii = {-1.0};
    CHECK_THROWS_AS(c.validate(), Error);
    c.ball_radii = {1.0};
    c.base = base_point(GroupId::SU2);
    CHECK_THROWS_AS(c.validate(), Error);
  }
}
