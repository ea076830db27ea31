#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "rtbbo/encoding.hpp"
#include "rtbbo/random.hpp"

namespace rtbbo {

struct WirelessConfig {
  int rings = 1;                  // 1 -> 7 cells, 2 -> 19 cells
  double cell_radius_m = 200.0;   // center to vertex
  int n_antennas = 3;             // uniform linear array, half-wavelength
  int n_paths = 4;                // Rayleigh multipath components
  double rho = 0.90;              // per-tick fading self-correlation
  double pathloss_intercept_db = 120.9;
  double pathloss_slope_db = 37.6;  // per decade of distance in km
  std::int64_t period_ticks = 6000;
  std::int64_t gather_tick = 2000;
  double edge_snr_db = 25.0;      // SNR of an aligned max-power beam at range R
  double angular_spread_deg = 15.0;
  double max_power = 1.0;
  double medium_power = 0.5;
  std::uint64_t seed = 1;
};

void validate(const WirelessConfig& cfg);

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Nine patterns per station: four steering directions at max power
// (0..3), the same directions at medium power (4..7), and off (8).
inline constexpr std::size_t kBeamPatterns = 9;
inline constexpr std::size_t kBeamShapes = 4;

enum class PowerLevel { kMax, kMedium, kOff };

struct BeamPattern {
  std::size_t index = 0;
  PowerLevel power = PowerLevel::kOff;
  Eigen::VectorXcd weights;  // squared norm equals the power level
};

BeamPattern beam_pattern(std::size_t index, const WirelessConfig& cfg);
// Array response exp(j*pi*n*cos(phi)), n = 0..n_antennas-1.
Eigen::VectorXcd steering_vector(double azimuth_rad, int n_antennas);

// Cellular downlink with one user per hexagonal cell. User k is served by
// station k; every other station interferes. Channels combine distance path
// loss with Gauss-Markov Rayleigh fading on each multipath component.
class WirelessEnv {
 public:
  explicit WirelessEnv(const WirelessConfig& cfg);

  const WirelessConfig& config() const noexcept { return cfg_; }
  std::size_t n_cells() const noexcept { return stations_.size(); }
  ActionSpace action_space() const;
  std::int64_t tick() const noexcept { return tick_; }
  double noise_power() const noexcept { return noise_power_; }

  const std::vector<Point>& stations() const noexcept { return stations_; }
  Point user_position(std::size_t user) const;
  // Position of `user` at an arbitrary tick (trajectories have period
  // config().period_ticks).
  Point user_position_at(std::size_t user, std::int64_t tick) const;
  // Index of the group (users meeting at one cell corner) `user` belongs to.
  std::size_t user_group(std::size_t user) const { return groups_.at(user); }

  // Channel from station i to user j.
  const Eigen::VectorXcd& channel(std::size_t station, std::size_t user) const;
  std::complex<double> fading(std::size_t station, std::size_t user,
                              std::size_t path) const;
  // Replaces one channel vector until the next advance(); for tests and
  // hand-built scenarios.
  void override_channel(std::size_t station, std::size_t user, Eigen::VectorXcd h);

  double received_power(std::size_t station, std::size_t user,
                        std::size_t pattern) const;
  // Throughput log2(1 + SINR) of each station-user pair under `a`.
  Eigen::VectorXd throughputs(const Action& a) const;
  // Evaluates `a`, then advances one tick.
  Eigen::VectorXd step(const Action& a);
  // One tick of user motion and fading.
  void advance();

 private:
  void recompute_channels();
  std::size_t pair(std::size_t station, std::size_t user) const {
    return station * stations_.size() + user;
  }

  WirelessConfig cfg_;
  std::vector<Point> stations_;
  std::vector<std::array<Point, 4>> paths_;  // per user: start .. meeting corner
  std::vector<std::size_t> groups_;
  std::vector<BeamPattern> patterns_;
  std::vector<double> path_offsets_;                // pair * n_paths + p
  std::vector<std::complex<double>> fading_;        // pair * n_paths + p
  std::vector<Eigen::VectorXcd> channels_;          // pair
  double noise_power_ = 0.0;
  std::int64_t tick_ = 0;
  Rng rng_;
};

// Per-pair path gain 10^(-(a + b log10(d_km)) / 10).
double pathloss_gain(double distance_m, const WirelessConfig& cfg);

}  // namespace rtbbo
