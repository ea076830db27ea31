#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "rtbbo/fm.hpp"
#include "rtbbo/ising.hpp"
#include "rtbbo/spin.hpp"

namespace rtbbo {

struct IncentiveConfig {
  double initial_c = 1e-6;
  double target_lo = 100.0;  // desired range for the mean repeat counter
  double target_hi = 200.0;
  double adjust_factor = 1.1;
  double c_min = 1e-12;
  double c_max = 1e12;
};

void validate(const IncentiveConfig& cfg);

// Tracks how many consecutive observations each spin kept its value, plus
// the self-tuned exploration coefficient.
struct IncentiveState {
  IncentiveConfig config;
  std::vector<std::int64_t> counters;
  SpinVector last;
  double c_exploration = 1e-6;

  IncentiveState() = default;
  explicit IncentiveState(const IncentiveConfig& cfg);

  bool initialized() const noexcept { return !last.empty(); }
  double mean_counter() const;
};

// counters[i] += 1 if s_new[i] == last[i], else 0; last = s_new. The first
// observation only initializes `last`.
void incentive_update(IncentiveState& st, const SpinVector& s_new);

// Maximization-frame linear coefficient per spin:
//   -c_exploration * counters[i]^2 * last[i]
Eigen::VectorXd incentive_terms(const IncentiveState& st);

// Multiplies c by adjust_factor when the mean counter is above target_hi,
// divides when below target_lo, then clamps to [c_min, c_max].
void adjust_c_exploration(IncentiveState& st);

// Minimization-frame model whose energy is
//   -(r_hat(s) + sum_i incentive[i] s_i) + penalty(s)
// given `surrogate` with energy -r_hat and `penalty` with energy
// -H_encoding. Its argmin is the acquisition argmax.
IsingModel assemble_acquisition(const IsingModel& surrogate,
                                const Eigen::Ref<const Eigen::VectorXd>& incentive,
                                const IsingModel& penalty);

// Same without a constraint term (plain spin actions).
IsingModel assemble_acquisition(const IsingModel& surrogate,
                                const Eigen::Ref<const Eigen::VectorXd>& incentive);

// Ising form (maximization turned into minimization) of sum_m p_m r_hat_m.
IsingModel integrate_multi(std::span<const FMParams> submodels,
                           std::span<const double> weights);

}  // namespace rtbbo
