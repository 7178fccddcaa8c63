#include "levy/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numbers>

#include "levy/error.hpp"
#include "levy/parallel.hpp"

namespace levy {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

using Mat = std::array<double, 4>;

// Z <- Z M for Z = n_x a_y k_theta: decompose k_theta M = n_x' a_y' k'.
void right_multiply_sl2r(State& s, const Mat& m) {
  const double sn = s[2];
  const double cs = s[3];
  const double p00 = cs * m[0] - sn * m[2];
  const double p01 = cs * m[1] - sn * m[3];
  const double p10 = sn * m[0] + cs * m[2];
  const double p11 = sn * m[1] + cs * m[3];
  const double den = p10 * p10 + p11 * p11;
  const double r = std::sqrt(den);
  s[0] += s[1] * (p00 * p10 + p01 * p11) / den;
  s[1] /= den;
  s[2] = p10 / r;
  s[3] = p11 / r;
}

void right_multiply_su2(State& q, const State& r) {
  const State p{q[0] * r[0] - q[1] * r[1] - q[2] * r[2] - q[3] * r[3],
                q[0] * r[1] + q[1] * r[0] + q[2] * r[3] - q[3] * r[2],
                q[0] * r[2] - q[1] * r[3] + q[2] * r[0] + q[3] * r[1],
                q[0] * r[3] + q[1] * r[2] - q[2] * r[1] + q[3] * r[0]};
  const double n = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + p[3] * p[3]);
  for (int i = 0; i < 4; ++i) q[i] = p[i] / n;
}

Mat rotation_matrix(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c, -s, s, c};
}

Mat mat_mul(const Mat& a, const Mat& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
          a[2] * b[1] + a[3] * b[3]};
}

// Distance evaluator for B_r(center) along Z . m.
class Target {
 public:
  Target(GroupId id, const Point& m, const Point& center)
      : id_(id), m_(m.representative().entries()), centered_(distance(m, center) == 0.0) {
    if (id == GroupId::SL2R) {
      cx_ = center.x();
      cy_ = center.y();
      base_is_i_ = m_[0] == 1.0 && m_[1] == 0.0 && m_[2] == 0.0 && m_[3] == 1.0;
    } else {
      c_ = center.representative().entries();
    }
  }

  double operator()(const State& s) const {
    if (id_ == GroupId::SL2R) {
      double zx = s[0];
      double zy = s[1];
      if (!base_is_i_) {
        const Mat q = mat_mul({s[3], -s[2], s[2], s[3]}, m_);
        const double den = q[2] * q[2] + q[3] * q[3];
        zx = s[0] + s[1] * (q[0] * q[2] + q[1] * q[3]) / den;
        zy = s[1] / den;
      }
      return hyperbolic_distance(cx_, cy_, zx, zy);
    }
    // d(m, Z m) is the rotation angle of Z (the metric is conjugation invariant).
    if (centered_) return 2.0 * std::atan2(std::sqrt(s[1] * s[1] + s[2] * s[2] + s[3] * s[3]), std::abs(s[0]));
    State zm = s;
    right_multiply_su2(zm, m_);
    return su2_angle(c_, zm);
  }

  bool centered() const noexcept { return centered_; }

 private:
  GroupId id_;
  Mat m_;
  bool centered_ = false;
  double cx_ = 0.0;
  double cy_ = 1.0;
  bool base_is_i_ = true;
  State c_{};
};

// One path, advanced cell by cell. Jumps are placed at exact exponential
// waiting times; the diffusion between events is a single Gaussian tangent
// step of the elapsed length.
class Walker {
 public:
  Walker(const SimConfig& config, std::mt19937_64 rng)
      : id_(config.params.group),
        levy_(config.params.levy),
        h_(config.step),
        sigma_(std::sqrt(2.0 * config.params.effective_diffusion())),
        rate_(config.params.levy.jump_rate()),
        rng_(std::move(rng)),
        state_(identity_state(config.params.group)) {
    next_jump_ = rate_ > 0.0 ? std::exponential_distribution<double>(rate_)(rng_) : kInf;
  }

  const State& state() const noexcept { return state_; }
  double time() const noexcept { return t_; }
  std::size_t jumps() const noexcept { return jumps_; }

  // Advances to t_end. visit(t, state, kind) is called with kind 0 at every
  // grid point (only when `grid_visits` or diffusion is active), kind 1 with
  // the pre-jump state and kind 2 with the post-jump state at a jump time.
  template <class Visit>
  void advance_to(double t_end, bool grid_visits, Visit&& visit) {
    if (sigma_ == 0.0 && !grid_visits) {
      while (next_jump_ <= t_end) {
        t_ = next_jump_;
        visit(t_, state_, 1);
        jump();
        visit(t_, state_, 2);
      }
      t_ = t_end;
      cell_ = static_cast<std::uint64_t>(std::floor(t_end / h_ + 1e-9));
      visit(t_, state_, 0);
      return;
    }
    while (t_end - t_ > 1e-9 * h_) {
      const double grid_next = static_cast<double>(cell_ + 1) * h_;
      const double cell_end = std::min(t_end, grid_next);
      while (next_jump_ <= cell_end) {
        diffuse(next_jump_ - t_);
        t_ = next_jump_;
        visit(t_, state_, 1);
        jump();
        visit(t_, state_, 2);
      }
      diffuse(cell_end - t_);
      t_ = cell_end;
      if (cell_end >= grid_next - 1e-12 * h_) {
        ++cell_;
        t_ = grid_next;
      }
      visit(t_, state_, 0);
    }
  }

 private:
  void diffuse(double dt) {
    if (sigma_ == 0.0 || dt <= 0.0) return;
    const double scale = sigma_ * std::sqrt(dt);
    if (id_ == GroupId::SL2R) {
      const double v0 = scale * normal_(rng_);
      const double v1 = scale * normal_(rng_);
      const double s = 0.5 * std::hypot(v0, v1);
      const double ch = std::cosh(s);
      const double shc = s > 1e-8 ? std::sinh(s) / s : 1.0 + s * s / 6.0;
      const double p = 0.5 * shc * v0;
      const double q = 0.5 * shc * v1;
      right_multiply_sl2r(state_, {ch + p, q, q, ch - p});
    } else {
      const double v0 = scale * normal_(rng_);
      const double v1 = scale * normal_(rng_);
      const double v2 = scale * normal_(rng_);
      const double r = std::sqrt(v0 * v0 + v1 * v1 + v2 * v2);
      const double c = std::cos(0.5 * r);
      const double sc = r > 1e-12 ? std::sin(0.5 * r) / r : 0.5;
      right_multiply_su2(state_, {c, sc * v0, sc * v1, sc * v2});
    }
  }

  void jump() {
    const double t = sample_jump_radius(levy_, rng_);
    if (id_ == GroupId::SL2R) {
      std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
      const double th1 = angle(rng_);
      const double th2 = angle(rng_);
      const Mat a{std::exp(0.5 * t), 0.0, 0.0, std::exp(-0.5 * t)};
      right_multiply_sl2r(state_, mat_mul(mat_mul(rotation_matrix(th1), a), rotation_matrix(th2)));
    } else {
      double v0, v1, v2, n;
      do {
        v0 = normal_(rng_);
        v1 = normal_(rng_);
        v2 = normal_(rng_);
        n = std::sqrt(v0 * v0 + v1 * v1 + v2 * v2);
      } while (n == 0.0);
      const double s = std::sin(0.5 * t) / n;
      right_multiply_su2(state_, {std::cos(0.5 * t), s * v0, s * v1, s * v2});
    }
    ++jumps_;
    next_jump_ += std::exponential_distribution<double>(rate_)(rng_);
  }

  GroupId id_;
  const RadialLevyMeasure& levy_;
  double h_;
  double sigma_;
  double rate_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_;
  State state_;
  double t_ = 0.0;
  std::uint64_t cell_ = 0;
  double next_jump_ = kInf;
  std::size_t jumps_ = 0;
};

// Time in [t0, t1] with the linearly interpolated distance below r, and the
// last time inside the ball on that segment (or -1).
struct SegmentResult {
  double inside = 0.0;
  double last_inside = -1.0;
};

SegmentResult segment_occupation(double t0, double d0, double t1, double d1, double r) {
  const double len = t1 - t0;
  if (d0 < r && d1 < r) return {len, t1};
  if (d0 >= r && d1 >= r) return {0.0, -1.0};
  const double s = (r - d0) / (d1 - d0);
  if (d0 < r) return {len * s, t0 + len * s};
  return {len * (1.0 - s), t1};
}

}  // namespace

void SimConfig::validate() const {
  params.validate();
  if (base.group() != params.group) throw Error(ErrorKind::invalid_argument, "base point is on another group");
  if (!(std::isfinite(horizon) && horizon >= 0.0)) throw Error(ErrorKind::invalid_argument, "horizon must be >= 0");
  if (!(step > 0.0) || (horizon > 0.0 && step > horizon)) {
    throw Error(ErrorKind::invalid_argument, "step must satisfy 0 < h <= horizon");
  }
  if (n_paths < 1) throw Error(ErrorKind::invalid_argument, "n_paths must be >= 1");
  for (double r : ball_radii) {
    if (!(r > 0.0)) throw Error(ErrorKind::invalid_argument, "ball radii must be > 0");
  }
}

double default_escape_margin(GroupId id) { return id == GroupId::SL2R ? 20.0 : 0.0; }

State identity_state(GroupId id) {
  return id == GroupId::SL2R ? State{0.0, 1.0, 0.0, 1.0} : State{1.0, 0.0, 0.0, 0.0};
}

GroupElement state_element(GroupId id, const State& s) {
  if (id == GroupId::SU2) return GroupElement::from_entries_unchecked(id, s);
  const double sy = std::sqrt(s[1]);
  const Mat na{sy, s[0] / sy, 0.0, 1.0 / sy};
  return GroupElement::from_entries_unchecked(id, mat_mul(na, {s[3], -s[2], s[2], s[3]}));
}

Point state_point(GroupId id, const State& s, const Point& m) {
  if (id == GroupId::SU2) {
    State q = s;
    right_multiply_su2(q, m.representative().entries());
    return Point(GroupElement::from_entries_unchecked(id, q));
  }
  const Mat q = mat_mul({s[3], -s[2], s[2], s[3]}, m.representative().entries());
  const double den = q[2] * q[2] + q[3] * q[3];
  const double x = s[0] + s[1] * (q[0] * q[2] + q[1] * q[3]) / den;
  const double y = s[1] / den;
  const double sy = std::sqrt(y);
  return Point(GroupElement::from_entries_unchecked(id, {sy, x / sy, 0.0, 1.0 / sy}));
}

std::mt19937_64 path_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(splitmix64(seed)), static_cast<std::uint32_t>(splitmix64(seed) >> 32),
                    static_cast<std::uint32_t>(splitmix64(index ^ 0x5851f42d4c957f2dULL)),
                    static_cast<std::uint32_t>(splitmix64(index ^ 0x5851f42d4c957f2dULL) >> 32)};
  return std::mt19937_64(seq);
}

double sample_jump_radius(const RadialLevyMeasure& nu, std::mt19937_64& rng) {
  switch (nu.kind) {
    case LevyKind::zero:
      throw Error(ErrorKind::invalid_argument, "the zero measure has no jumps");
    case LevyKind::point_masses: {
      std::vector<double> rates;
      for (const auto& m : nu.masses) rates.push_back(m.rate);
      std::discrete_distribution<std::size_t> pick(rates.begin(), rates.end());
      return nu.masses[pick(rng)].radius;
    }
    case LevyKind::exponential:
      return nu.cutoff + std::exponential_distribution<double>(1.0)(rng);
    case LevyKind::stable_like: {
      const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      const double lo = std::pow(nu.cutoff, -nu.alpha);
      const double hi = std::pow(nu.upper, -nu.alpha);
      return std::pow(lo - u * (lo - hi), -1.0 / nu.alpha);
    }
  }
  return 0.0;
}

GroupElement sample_increment(double h, const ProcessParams& params, std::mt19937_64& rng) {
  if (!(h > 0.0)) throw Error(ErrorKind::invalid_argument, "increment length must be > 0");
  SimConfig c;
  c.params = params;
  c.step = h;
  c.horizon = h;
  c.base = base_point(params.group);
  Walker w(c, std::mt19937_64(rng()));
  w.advance_to(h, false, [](double, const State&, int) {});
  return state_element(params.group, w.state());
}

PathRecord simulate_path(const SimConfig& config, std::uint64_t index) {
  config.validate();
  const GroupId id = config.params.group;
  PathRecord rec;
  rec.group = id;
  rec.stream = index;
  rec.times.push_back(0.0);
  rec.states.push_back(identity_state(id));
  rec.jump_flags.push_back(0);
  Walker w(config, path_rng(config.seed, index));
  w.advance_to(config.horizon, true, [&](double t, const State& s, int kind) {
    if (kind == 1) return;
    if (t <= rec.times.back()) {
      // A jump that lands exactly on a grid point replaces the grid entry.
      rec.states.back() = s;
      rec.jump_flags.back() = rec.jump_flags.back() | (kind == 2 ? 1 : 0);
      return;
    }
    rec.times.push_back(t);
    rec.states.push_back(s);
    rec.jump_flags.push_back(kind == 2 ? 1 : 0);
  });
  rec.jumps = w.jumps();
  return rec;
}

double occupation_time(const PathRecord& path, double radius, const Point& m) {
  if (!(radius > 0.0)) throw Error(ErrorKind::invalid_argument, "radius must be > 0");
  if (m.group() != path.group) throw Error(ErrorKind::invalid_argument, "base point is on another group");
  const Target target(path.group, m, m);
  double total = 0.0;
  double prev = target(path.states[0]);
  for (std::size_t i = 1; i < path.times.size(); ++i) {
    const double cur = target(path.states[i]);
    const double next = path.jump_flags[i] ? prev : cur;
    total += segment_occupation(path.times[i - 1], prev, path.times[i], next, radius).inside;
    prev = cur;
  }
  return total;
}

SampleStats sample_stats(std::span<const double> values) {
  SampleStats s;
  const std::size_t n = values.size();
  if (n == 0) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(n);
  if (n < 2) return s;
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.std_error = std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
  return s;
}

OccupationStats potential_estimate(const SimConfig& config, std::span<const Ball> extra) {
  config.validate();
  const GroupId id = config.params.group;
  std::vector<Ball> balls;
  for (double r : config.ball_radii) balls.push_back({config.base, r});
  for (const auto& b : extra) {
    if (b.center.group() != id || !(b.radius > 0.0)) {
      throw Error(ErrorKind::invalid_argument, "cover balls need a center on the group and radius > 0");
    }
    balls.push_back(b);
  }
  std::vector<Target> targets;
  double reach = 0.0;
  const Target home(id, config.base, config.base);
  for (const auto& b : balls) {
    targets.emplace_back(id, config.base, b.center);
    reach = std::max(reach, home(identity_state(id)) + distance(config.base, b.center) + b.radius);
  }
  const std::vector<double> horizons{config.horizon, 2.0 * config.horizon, 4.0 * config.horizon};
  const bool use_escape = config.escape_margin > 0.0;
  const double escape_at = reach + config.escape_margin;

  const std::size_t nb = balls.size();
  const std::size_t nh = horizons.size();
  struct PathResult {
    std::vector<double> occupation;  // [ball][horizon]
    std::vector<double> last_exit;   // [ball]
    double max_distance = 0.0;
    bool escaped = false;
    std::size_t jumps = 0;
  };
  std::vector<PathResult> results(config.n_paths);

  parallel_for(config.n_paths, [&](std::size_t p) {
    PathResult& res = results[p];
    res.occupation.assign(nb * nh, 0.0);
    res.last_exit.assign(nb, 0.0);
    std::vector<double> running(nb, 0.0);
    std::vector<double> prev_d(nb);
    Walker w(config, path_rng(config.seed, p));
    for (std::size_t b = 0; b < nb; ++b) prev_d[b] = targets[b](w.state());
    double prev_t = 0.0;
    double prev_home = home(w.state());
    bool pending_jump = false;
    auto visit = [&](double t, const State& s, int kind) {
      const double d_home = home(s);
      res.max_distance = std::max(res.max_distance, d_home);
      if (kind == 2) {
        // Restart segments from the post-jump state.
        for (std::size_t b = 0; b < nb; ++b) prev_d[b] = targets[b].centered() ? d_home : targets[b](s);
        prev_home = d_home;
        prev_t = t;
        pending_jump = false;
        return;
      }
      pending_jump = kind == 1;
      for (std::size_t b = 0; b < nb; ++b) {
        const double d = targets[b].centered() ? d_home : targets[b](s);
        const auto seg = segment_occupation(prev_t, prev_d[b], t, d, balls[b].radius);
        running[b] += seg.inside;
        if (seg.last_inside >= 0.0) res.last_exit[b] = seg.last_inside;
        prev_d[b] = d;
      }
      prev_home = d_home;
      prev_t = t;
    };
    for (std::size_t k = 0; k < nh; ++k) {
      if (!res.escaped) {
        const double target_time = horizons[k];
        // Advance in chunks so the escape test runs regularly.
        const double chunk = std::max(config.step, std::min(1.0, target_time));
        while (w.time() < target_time && !res.escaped) {
          w.advance_to(std::min(target_time, w.time() + chunk), false, visit);
          if (use_escape && prev_home > escape_at && !pending_jump) res.escaped = true;
        }
      }
      for (std::size_t b = 0; b < nb; ++b) res.occupation[b * nh + k] = running[b];
    }
    res.jumps = w.jumps();
  });

  OccupationStats out;
  out.horizons = horizons;
  out.n_paths = config.n_paths;
  std::vector<double> column(config.n_paths);
  for (std::size_t b = 0; b < nb; ++b) {
    BallStats bs{balls[b], {}, {}, {}};
    for (std::size_t k = 0; k < nh; ++k) {
      for (std::size_t p = 0; p < config.n_paths; ++p) column[p] = results[p].occupation[b * nh + k];
      bs.occupation.push_back(sample_stats(column));
    }
    double hbar = 0.0;
    for (double h : horizons) hbar += h / static_cast<double>(nh);
    double sxx = 0.0;
    for (double h : horizons) sxx += (h - hbar) * (h - hbar);
    for (std::size_t p = 0; p < config.n_paths; ++p) {
      double sxy = 0.0;
      for (std::size_t k = 0; k < nh; ++k) sxy += (horizons[k] - hbar) * results[p].occupation[b * nh + k];
      column[p] = sxy / sxx;
    }
    bs.slope = sample_stats(column);
    // Lack of fit of the mean curve to a straight line enters the slope
    // standard error alongside the sampling error.
    double ybar = 0.0;
    for (const auto& o : bs.occupation) ybar += o.mean / static_cast<double>(nh);
    const double intercept = ybar - bs.slope.mean * hbar;
    double ssr = 0.0;
    for (std::size_t k = 0; k < nh; ++k) {
      const double r = bs.occupation[k].mean - (intercept + bs.slope.mean * horizons[k]);
      ssr += r * r;
    }
    const double fit_se2 = ssr / static_cast<double>(nh - 2) / sxx;
    bs.slope.std_error = std::sqrt(bs.slope.std_error * bs.slope.std_error + fit_se2);
    for (std::size_t p = 0; p < config.n_paths; ++p) column[p] = results[p].last_exit[b];
    bs.last_exit = sample_stats(column);
    out.balls.push_back(std::move(bs));
  }
  for (std::size_t p = 0; p < config.n_paths; ++p) {
    column[p] = results[p].max_distance;
    out.max_distance_overall = std::max(out.max_distance_overall, results[p].max_distance);
    out.escaped_paths += results[p].escaped ? 1 : 0;
    out.total_jumps += results[p].jumps;
  }
  out.max_distance = sample_stats(column);
  return out;
}

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::recurrent: return "recurrent";
    case Classification::transient: return "transient";
    case Classification::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

BallDecision decide(const BallStats& stats, const DecisionThresholds& thresholds) {
  BallDecision d;
  d.radius = stats.ball.radius;
  const auto& occ = stats.occupation;
  if (occ.size() < 2) return d;
  d.recurrent_signal = stats.slope.mean > thresholds.recurrent_sigma * stats.slope.std_error;
  const auto& last = occ.back();
  const auto& before = occ[occ.size() - 2];
  d.transient_signal = std::abs(last.mean - before.mean) < thresholds.transient_sigma * last.std_error;
  if (d.recurrent_signal && !d.transient_signal) d.classification = Classification::recurrent;
  if (d.transient_signal && !d.recurrent_signal) d.classification = Classification::transient;
  return d;
}

std::vector<std::vector<double>> distances_at(const SimConfig& config, std::span<const double> times) {
  config.validate();
  if (!std::is_sorted(times.begin(), times.end())) {
    throw Error(ErrorKind::invalid_argument, "times must be sorted");
  }
  const GroupId id = config.params.group;
  const Target home(id, config.base, config.base);
  std::vector<std::vector<double>> out(times.size(), std::vector<double>(config.n_paths));
  parallel_for(config.n_paths, [&](std::size_t p) {
    Walker w(config, path_rng(config.seed, p));
    for (std::size_t k = 0; k < times.size(); ++k) {
      w.advance_to(times[k], false, [](double, const State&, int) {});
      out[k][p] = home(w.state());
    }
  });
  return out;
}

std::vector<GroupElement> elements_at(const SimConfig& config, double t) {
  config.validate();
  const GroupId id = config.params.group;
  std::vector<GroupElement> out(config.n_paths, GroupElement::identity(id));
  parallel_for(config.n_paths, [&](std::size_t p) {
    Walker w(config, path_rng(config.seed, p));
    w.advance_to(t, false, [](double, const State&, int) {});
    out[p] = state_element(id, w.state());
  });
  return out;
}

namespace {

constexpr char kMagic[8] = {'L', 'E', 'V', 'Y', 'P', 'A', 'T', 'H'};
constexpr std::uint32_t kPathFileVersion = 1;

template <class T>
void put(std::ostream& os, T v) {
  if constexpr (std::endian::native == std::endian::big && sizeof(T) > 1) {
    auto bytes = std::bit_cast<std::array<char, sizeof(T)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    os.write(bytes.data(), sizeof(T));
  } else {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
  }
}

template <class T>
T get(std::istream& is) {
  std::array<char, sizeof(T)> bytes{};
  if (!is.read(bytes.data(), sizeof(T))) throw Error(ErrorKind::io_error, "truncated path file");
  if constexpr (std::endian::native == std::endian::big && sizeof(T) > 1) std::reverse(bytes.begin(), bytes.end());
  return std::bit_cast<T>(bytes);
}

}  // namespace

void write_path_file(const std::filesystem::path& file, const PathRecord& path) {
  std::ofstream os(file, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(ErrorKind::io_error, "cannot open " + file.string() + " for writing");
  os.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(os, kPathFileVersion);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(path.group));
  put<std::uint64_t>(os, path.times.size());
  put<std::uint64_t>(os, path.jumps);
  put<std::uint64_t>(os, path.stream);
  for (double t : path.times) put(os, t);
  for (int c = 0; c < 4; ++c) {
    for (const auto& s : path.states) put(os, s[c]);
  }
  for (auto f : path.jump_flags) put(os, f);
  if (!os) throw Error(ErrorKind::io_error, "write failed for " + file.string());
}

PathRecord read_path_file(const std::filesystem::path& file) {
  std::ifstream is(file, std::ios::binary);
  if (!is) throw Error(ErrorKind::io_error, "cannot open " + file.string());
  char magic[8];
  if (!is.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw Error(ErrorKind::io_error, file.string() + " is not a path file");
  }
  if (get<std::uint32_t>(is) != kPathFileVersion) throw Error(ErrorKind::io_error, "unsupported path file version");
  PathRecord rec;
  const auto group = get<std::uint32_t>(is);
  if (group > 1) throw Error(ErrorKind::io_error, "unknown group id in path file");
  rec.group = static_cast<GroupId>(group);
  const auto n = get<std::uint64_t>(is);
  rec.jumps = get<std::uint64_t>(is);
  rec.stream = get<std::uint64_t>(is);
  rec.times.resize(n);
  rec.states.resize(n);
  rec.jump_flags.resize(n);
  for (auto& t : rec.times) t = get<double>(is);
  for (int c = 0; c < 4; ++c) {
    for (auto& s : rec.states) s[c] = get<double>(is);
  }
  for (auto& f : rec.jump_flags) f = get<std::uint8_t>(is);
  return rec;
}

}  // namespace levy
