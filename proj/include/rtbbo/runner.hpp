#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rtbbo/encoding.hpp"
#include "rtbbo/experiment.hpp"

namespace rtbbo {

struct CycleRecord {
  std::int64_t t = 0;
  // Discrete action values; for the synthetic env one 0/1 value per spin.
  Action action;
  Eigen::VectorXd rewards;  // raw, unscaled sub-rewards
  double total_reward = 0.0;
  double mean_counter = 0.0;
  double c_exploration = 0.0;
  bool violation = false;  // the action needed one-hot repair
};

struct TrialResult {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::vector<CycleRecord> records;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<TrialResult> trials;
  // Synthetic env only: white-box total reward per cycle.
  std::vector<double> whitebox;
};

// Per-tick state handed to an optional observer (wireless snapshots).
struct TickView {
  std::int64_t t = 0;
  const WirelessEnv* wireless = nullptr;  // state before the action is applied
  const Action* action = nullptr;
};
using TickObserver = std::function<void(const TickView&)>;

// One independent trial of the sampling loop: observe the reward of the
// current action, update the dataset and incentive, train, solve the
// acquisition and take the decoded solution as the next action. The first
// action is uniform random.
TrialResult run_trial(const ExperimentConfig& cfg, std::size_t trial,
                      const TickObserver& observer = {});

// White-box trace of the synthetic env described by cfg; empty for wireless.
std::vector<double> whitebox_for(const ExperimentConfig& cfg);

// Runs cfg.trials trials (in parallel when cfg.threads allows) plus the
// white-box reference for the synthetic env, unless one is passed in.
// Results are ordered by trial.
ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const TickObserver& trial0_observer = {},
                                const std::vector<double>* whitebox = nullptr);

std::uint64_t trial_seed(const ExperimentConfig& cfg, std::size_t trial);

}  // namespace rtbbo
