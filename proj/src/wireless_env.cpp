#include "rtbbo/wireless_env.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "rtbbo/error.hpp"

namespace rtbbo {

namespace {

constexpr double kPi = std::numbers::pi;

// Direction cosines of the four steering directions.
constexpr std::array<double, kBeamShapes> kBeamCosines = {-0.75, -0.25, 0.25, 0.75};

Point vertex(const Point& center, int q, double radius) {
  const double angle = kPi / 3.0 * static_cast<double>(((q % 6) + 6) % 6);
  return {center.x + radius * std::cos(angle), center.y + radius * std::sin(angle)};
}

bool same_point(const Point& a, const Point& b, double scale) {
  return std::hypot(a.x - b.x, a.y - b.y) < 1e-6 * scale;
}

Point lerp(const Point& a, const Point& b, double f) {
  return {a.x + (b.x - a.x) * f, a.y + (b.y - a.y) * f};
}

}  // namespace

void validate(const WirelessConfig& cfg) {
  if (cfg.rings < 0 || cfg.rings > 4) throw_invalid("rings must lie in [0, 4]");
  if (!(cfg.cell_radius_m > 0.0)) throw_invalid("cell radius must be > 0");
  if (cfg.n_antennas < 1) throw_invalid("n_antennas must be >= 1");
  if (cfg.n_paths < 1) throw_invalid("n_paths must be >= 1");
  if (!(std::abs(cfg.rho) <= 1.0)) throw_invalid("|rho| must be <= 1");
  if (cfg.period_ticks < 2 || cfg.gather_tick < 1 ||
      cfg.gather_tick >= cfg.period_ticks) {
    throw_invalid("trajectory ticks must satisfy 1 <= gather_tick < period_ticks");
  }
  if (!(cfg.max_power > 0.0) || !(cfg.medium_power > 0.0) ||
      cfg.medium_power > cfg.max_power) {
    throw_invalid("power levels must satisfy 0 < medium <= max");
  }
}

Eigen::VectorXcd steering_vector(double azimuth_rad, int n_antennas) {
  Eigen::VectorXcd a(n_antennas);
  const double phase = kPi * std::cos(azimuth_rad);
  for (int n = 0; n < n_antennas; ++n) {
    a[n] = std::polar(1.0, phase * n);
  }
  return a;
}

BeamPattern beam_pattern(std::size_t index, const WirelessConfig& cfg) {
  if (index >= kBeamPatterns) {
    throw_invalid("beam pattern index must be < 9, got " + std::to_string(index));
  }
  BeamPattern b;
  b.index = index;
  if (index == kBeamPatterns - 1) {
    b.power = PowerLevel::kOff;
    b.weights = Eigen::VectorXcd::Zero(cfg.n_antennas);
    return b;
  }
  b.power = index < kBeamShapes ? PowerLevel::kMax : PowerLevel::kMedium;
  const double power = b.power == PowerLevel::kMax ? cfg.max_power : cfg.medium_power;
  const double azimuth = std::acos(kBeamCosines[index % kBeamShapes]);
  b.weights = steering_vector(azimuth, cfg.n_antennas) *
              std::sqrt(power / static_cast<double>(cfg.n_antennas));
  return b;
}

double pathloss_gain(double distance_m, const WirelessConfig& cfg) {
  const double d_km = std::max(distance_m, 1.0) / 1000.0;
  const double loss_db =
      cfg.pathloss_intercept_db + cfg.pathloss_slope_db * std::log10(d_km);
  return std::pow(10.0, -loss_db / 10.0);
}

WirelessEnv::WirelessEnv(const WirelessConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {
  validate(cfg_);
  const double R = cfg_.cell_radius_m;

  // Flat-top hexagons in axial coordinates, ordered by ring then angle.
  struct Cell {
    int ring;
    double angle;
    Point center;
  };
  std::vector<Cell> cells;
  for (int q = -cfg_.rings; q <= cfg_.rings; ++q) {
    for (int r = -cfg_.rings; r <= cfg_.rings; ++r) {
      const int ring = std::max({std::abs(q), std::abs(r), std::abs(q + r)});
      if (ring > cfg_.rings) continue;
      const Point c{1.5 * R * q, std::sqrt(3.0) * R * (r + 0.5 * q)};
      double angle = std::atan2(c.y, c.x);
      if (angle < 0) angle += 2.0 * kPi;
      cells.push_back({ring, ring == 0 ? 0.0 : angle, c});
    }
  }
  std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
    if (a.ring != b.ring) return a.ring < b.ring;
    return a.angle < b.angle - 1e-9;
  });
  for (const auto& c : cells) stations_.push_back(c.center);
  const std::size_t n = stations_.size();

  // Group users at shared corners: triples of cells meeting at one vertex
  // where possible, otherwise pairs, otherwise alone.
  std::vector<int> meet_vertex(n, -1);
  groups_.assign(n, 0);
  std::size_t next_group = 0;
  auto members_at = [&](std::size_t cell, int q) {
    std::vector<std::pair<std::size_t, int>> out;  // (cell, local vertex)
    const Point v = vertex(stations_[cell], q, R);
    for (std::size_t other = 0; other < n; ++other) {
      if (other == cell) continue;
      for (int k = 0; k < 6; ++k) {
        if (same_point(vertex(stations_[other], k, R), v, R)) {
          out.emplace_back(other, k);
        }
      }
    }
    return out;
  };
  for (std::size_t c = 0; c < n; ++c) {
    if (meet_vertex[c] >= 0) continue;
    int best_q = 0;
    std::vector<std::pair<std::size_t, int>> best_partners;
    for (int q = 0; q < 6; ++q) {
      std::vector<std::pair<std::size_t, int>> free;
      for (const auto& m : members_at(c, q)) {
        if (meet_vertex[m.first] < 0) free.push_back(m);
      }
      if (free.size() > best_partners.size()) {
        best_partners = free;
        best_q = q;
      }
    }
    meet_vertex[c] = best_q;
    groups_[c] = next_group;
    for (const auto& m : best_partners) {
      meet_vertex[m.first] = m.second;
      groups_[m.first] = next_group;
    }
    ++next_group;
  }

  // Each user walks three edges of its own cell from the opposite corner to
  // the meeting corner.
  for (std::size_t c = 0; c < n; ++c) {
    const int q = meet_vertex[c];
    paths_.push_back({vertex(stations_[c], q + 3, R), vertex(stations_[c], q + 4, R),
                      vertex(stations_[c], q + 5, R), vertex(stations_[c], q, R)});
  }

  for (std::size_t i = 0; i < kBeamPatterns; ++i) patterns_.push_back(beam_pattern(i, cfg_));

  const std::size_t n_coeff = n * n * static_cast<std::size_t>(cfg_.n_paths);
  const double spread = cfg_.angular_spread_deg * kPi / 180.0;
  std::uniform_real_distribution<double> offset(-spread, spread);
  path_offsets_.resize(n_coeff);
  for (auto& o : path_offsets_) o = offset(rng_);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  fading_.resize(n_coeff);
  for (auto& g : fading_) g = {normal(rng_), normal(rng_)};

  noise_power_ = pathloss_gain(R, cfg_) * cfg_.max_power * cfg_.n_antennas /
                 std::pow(10.0, cfg_.edge_snr_db / 10.0);
  channels_.resize(n * n);
  recompute_channels();
}

ActionSpace WirelessEnv::action_space() const {
  return ActionSpace::uniform(n_cells(), kBeamPatterns);
}

Point WirelessEnv::user_position_at(std::size_t user, std::int64_t tick) const {
  const auto& path = paths_.at(user);
  const std::int64_t period = cfg_.period_ticks;
  const std::int64_t tau = ((tick % period) + period) % period;
  double f;
  if (tau <= cfg_.gather_tick) {
    f = static_cast<double>(tau) / static_cast<double>(cfg_.gather_tick);
  } else {
    f = 1.0 - static_cast<double>(tau - cfg_.gather_tick) /
                  static_cast<double>(period - cfg_.gather_tick);
  }
  const double along = 3.0 * f;
  const int edge = std::min(2, static_cast<int>(along));
  return lerp(path[edge], path[edge + 1], along - edge);
}

Point WirelessEnv::user_position(std::size_t user) const {
  return user_position_at(user, tick_);
}

const Eigen::VectorXcd& WirelessEnv::channel(std::size_t station,
                                             std::size_t user) const {
  if (station >= n_cells() || user >= n_cells()) {
    throw_invalid("station/user index out of range");
  }
  return channels_[pair(station, user)];
}

std::complex<double> WirelessEnv::fading(std::size_t station, std::size_t user,
                                         std::size_t path) const {
  if (station >= n_cells() || user >= n_cells() ||
      path >= static_cast<std::size_t>(cfg_.n_paths)) {
    throw_invalid("fading index out of range");
  }
  return fading_[pair(station, user) * static_cast<std::size_t>(cfg_.n_paths) + path];
}

void WirelessEnv::override_channel(std::size_t station, std::size_t user,
                                   Eigen::VectorXcd h) {
  if (station >= n_cells() || user >= n_cells()) {
    throw_invalid("station/user index out of range");
  }
  if (h.size() != cfg_.n_antennas) {
    throw_invalid("channel vector must have one entry per antenna");
  }
  channels_[pair(station, user)] = std::move(h);
}

void WirelessEnv::recompute_channels() {
  const std::size_t n = n_cells();
  const auto paths = static_cast<std::size_t>(cfg_.n_paths);
  const double path_norm = 1.0 / std::sqrt(static_cast<double>(paths));
  std::vector<Point> users(n);
  for (std::size_t j = 0; j < n; ++j) users[j] = user_position(j);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double dx = users[j].x - stations_[i].x;
      const double dy = users[j].y - stations_[i].y;
      const double azimuth = std::atan2(dy, dx);
      const double amp = std::sqrt(pathloss_gain(std::hypot(dx, dy), cfg_)) * path_norm;
      Eigen::VectorXcd h = Eigen::VectorXcd::Zero(cfg_.n_antennas);
      const std::size_t base = pair(i, j) * paths;
      for (std::size_t p = 0; p < paths; ++p) {
        h += fading_[base + p] *
             steering_vector(azimuth + path_offsets_[base + p], cfg_.n_antennas);
      }
      channels_[pair(i, j)] = amp * h;
    }
  }
}

double WirelessEnv::received_power(std::size_t station, std::size_t user,
                                   std::size_t pattern) const {
  if (pattern >= kBeamPatterns) throw_invalid("beam pattern index out of range");
  // Eigen's complex dot is conjugate-linear in the first argument: h^H w.
  return std::norm(channel(station, user).dot(patterns_[pattern].weights));
}

Eigen::VectorXd WirelessEnv::throughputs(const Action& a) const {
  validate(action_space(), a);
  const std::size_t n = n_cells();
  Eigen::VectorXd out(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) {
    const double signal = received_power(k, k, a.values[k]);
    double interference = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != k) interference += received_power(j, k, a.values[j]);
    }
    const double sinr = signal / (interference + noise_power_);
    out[static_cast<Eigen::Index>(k)] = std::log2(1.0 + sinr);
  }
  return out;
}

Eigen::VectorXd WirelessEnv::step(const Action& a) {
  Eigen::VectorXd c = throughputs(a);
  advance();
  return c;
}

void WirelessEnv::advance() {
  ++tick_;
  const double rho = cfg_.rho;
  const double innovation = std::sqrt(std::max(0.0, 1.0 - rho * rho));
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  for (auto& g : fading_) {
    const std::complex<double> eps(normal(rng_), normal(rng_));
    g = rho * g + innovation * eps;
  }
  recompute_channels();
}

}  // namespace rtbbo
