#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include <Eigen/Core>

#include "rtbbo/adam.hpp"
#include "rtbbo/fm.hpp"
#include "rtbbo/random.hpp"
#include "rtbbo/sliding_window.hpp"

namespace rtbbo {

struct TrainConfig {
  std::size_t rank = 6;         // K
  std::size_t batch_size = 20;  // L_batch
  std::size_t n_train = 200;    // gradient steps per sampling cycle
  double c_decay = 0.999;       // pre-training decay of the factor matrix
  AdamConfig adam;
  double lr_factors = 0.01;
  double lr_linear = 0.01;  // also used for the bias
  double init_range = 0.001;
};

void validate(const TrainConfig& cfg);

// Adam moments for one surrogate. `t` is shared by all tensors and carries
// over between sampling cycles.
struct AdamState {
  Eigen::MatrixXd m_factors, v_factors;
  Eigen::VectorXd m_linear, v_linear;
  double m_bias = 0.0;
  double v_bias = 0.0;
  std::int64_t t = 0;

  static AdamState zeros(std::size_t n_spins, std::size_t rank);
};

// One sampling cycle of the model training unit for a single surrogate that
// learns reward column `reward_column` of the window:
//   first cycle: V ~ U(-init_range, init_range), w = 0, w0 = 0
//   V <- c_decay * V
//   n_train times: draw batch_size samples uniformly with replacement,
//                  compute batch-mean log-cosh gradients, apply Adam.
void train_cycle(FMParams& params, AdamState& adam, const SlidingWindow& window,
                 const TrainConfig& cfg, bool first_cycle, Rng& rng,
                 std::size_t reward_column = 0);

// Trains one surrogate per reward column (head m learns column m). All heads
// see the same mini-batch indices in each iteration.
void train_cycle(std::span<FMParams> heads, std::span<AdamState> adam,
                 const SlidingWindow& window, const TrainConfig& cfg,
                 bool first_cycle, Rng& rng);

}  // namespace rtbbo
