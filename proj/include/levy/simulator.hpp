#pragma once

// Monte Carlo simulation of bi-invariant Levy processes on SL2R and SU2:
// Gaussian tangent steps pushed through the group exponential on a time grid
// of width h, interleaved with compound-Poisson jumps k1 a_t k2 at their exact
// times. Paths are independent work units with their own RNG stream derived
// from (seed, path index).

#include <array>
#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <vector>

#include "levy/exponent.hpp"
#include "levy/group.hpp"

namespace levy {

/// Ball B_r(center) in M.
struct Ball {
  Point center = base_point(GroupId::SL2R);
  double radius = 0.0;
};

struct SimConfig {
  ProcessParams params;
  double horizon = 25.0;
  double step = 1e-3;
  std::size_t n_paths = 400;
  std::uint64_t seed = 1;
  std::vector<double> ball_radii{0.5, 1.0, 2.0};
  Point base = base_point(GroupId::SL2R);
  /// A path is no longer advanced once d(m, Z m) exceeds the largest tracked
  /// radius plus this margin; its later occupation is taken as 0. Values
  /// <= 0 disable the cutoff.
  double escape_margin = 20.0;

  void validate() const;
};

/// Default escape margin for a group: 20 on SL2R, disabled on the compact
/// group (paths there never escape).
double default_escape_margin(GroupId id);

/// Stable state encoding. SL2R: Z = n_x a_y k_theta stored as
/// (x, y, sin theta, cos theta), which keeps full relative precision far from
/// the base point. SU2: the unit quaternion (w, x, y, z).
using State = std::array<double, 4>;

State identity_state(GroupId id);
GroupElement state_element(GroupId id, const State& s);
/// Z . m for the point m.
Point state_point(GroupId id, const State& s, const Point& m);

struct PathRecord {
  GroupId group = GroupId::SL2R;
  std::vector<double> times;
  std::vector<State> states;
  /// 1 where the entry is the post-jump state at a jump time.
  std::vector<std::uint8_t> jump_flags;
  std::size_t jumps = 0;
  std::uint64_t stream = 0;
};

/// RNG for path `index` of a run seeded with `seed`.
std::mt19937_64 path_rng(std::uint64_t seed, std::uint64_t index);

/// One increment distributed (approximately) as mu_h.
GroupElement sample_increment(double h, const ProcessParams& params, std::mt19937_64& rng);

/// Jump radius drawn from the normalized retained Levy measure.
double sample_jump_radius(const RadialLevyMeasure& nu, std::mt19937_64& rng);

/// Path `index` on [0, horizon]: every grid point k h and every jump time.
PathRecord simulate_path(const SimConfig& config, std::uint64_t index = 0);

/// Time spent by Z^{Phi,m} in B_r(m) on [0, path end], with linear
/// interpolation of the distance between grid points and the left value held
/// up to each jump time.
double occupation_time(const PathRecord& path, double radius, const Point& m);

/// Summary of a per-path sample.
struct SampleStats {
  double mean = 0.0;
  double std_error = 0.0;
};
SampleStats sample_stats(std::span<const double> values);

struct BallStats {
  Ball ball;
  /// Mean occupation and standard error at each horizon.
  std::vector<SampleStats> occupation;
  /// Least-squares slope of occupation against horizon: mean of the
  /// per-path slopes; the standard error combines their sampling error with
  /// the residual error of the straight-line fit to the horizon means.
  SampleStats slope;
  SampleStats last_exit;
};

struct OccupationStats {
  std::vector<double> horizons;
  std::vector<BallStats> balls;
  SampleStats max_distance;
  double max_distance_overall = 0.0;
  std::size_t escaped_paths = 0;
  std::size_t n_paths = 0;
  std::size_t total_jumps = 0;
};

/// Occupation statistics over the nested horizons T, 2T, 4T (T = config
/// horizon) for the balls B_r(m), r in config.ball_radii, plus `extra`.
OccupationStats potential_estimate(const SimConfig& config, std::span<const Ball> extra = {});

enum class Classification { recurrent, transient, inconclusive };
std::string_view to_string(Classification c);

struct DecisionThresholds {
  double recurrent_sigma = 3.0;
  double transient_sigma = 1.0;
};

struct BallDecision {
  double radius = 0.0;
  bool recurrent_signal = false;
  bool transient_signal = false;
  Classification classification = Classification::inconclusive;
};

/// Recurrent if the slope exceeds recurrent_sigma standard errors above 0;
/// transient if the last two horizon means differ by less than
/// transient_sigma standard errors of the last mean; both or neither gives
/// inconclusive.
BallDecision decide(const BallStats& stats, const DecisionThresholds& thresholds);

/// d(m, Z^{Phi,m}(t)) for every path, one row per requested time (sorted
/// ascending). The escape cutoff is not applied.
std::vector<std::vector<double>> distances_at(const SimConfig& config, std::span<const double> times);
/// Z(t) for every path.
std::vector<GroupElement> elements_at(const SimConfig& config, double t);

/// Mean of f(d(m, Z^{Phi,m}(t))) with its standard error.
template <class F>
SampleStats mc_expectation(F&& f, double t, const SimConfig& config) {
  const double times[] = {t};
  const auto d = distances_at(config, times);
  std::vector<double> v(d[0].size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(d[0][i]);
  return sample_stats(v);
}

/// Binary path file: magic "LEVYPATH", u32 version, u32 group id,
/// u64 point count, u64 jump count, u64 stream id, then the times column
/// and four state columns (little-endian f64) and the jump-flag column (u8).
void write_path_file(const std::filesystem::path& file, const PathRecord& path);
PathRecord read_path_file(const std::filesystem::path& file);

}  // namespace levy
