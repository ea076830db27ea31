#pragma once

#include <cstddef>
#include <span>

#include <Eigen/Core>

#include "rtbbo/ising.hpp"
#include "rtbbo/spin.hpp"

namespace rtbbo {

// Second-order factorization machine over spin features:
//
//   r(s) = sum_{i<j} <v_i, v_j> s_i s_j + sum_i w_i s_i + w0
//
// `factors` holds v_i as rows (N x K).
struct FMParams {
  Eigen::MatrixXd factors;
  Eigen::VectorXd linear;
  double bias = 0.0;

  static FMParams zeros(std::size_t n_spins, std::size_t rank);

  std::size_t n_spins() const noexcept {
    return static_cast<std::size_t>(factors.rows());
  }
  std::size_t rank() const noexcept {
    return static_cast<std::size_t>(factors.cols());
  }
};

// Throws unless 1 <= K <= N and the shapes agree.
void validate(const FMParams& p);

// O(NK) evaluation using
//   sum_{i<j} <v_i,v_j> s_i s_j = 1/2 sum_k [(sum_i v_ik s_i)^2 - sum_i v_ik^2]
// which holds because s_i^2 = 1.
double fm_predict(const FMParams& p, const SpinVector& s);
double fm_predict(const FMParams& p, const Eigen::Ref<const Eigen::VectorXd>& s);

// Ising model with energy(model, s) == -fm_predict(p, s) when `maximize` is
// set (argmax of the surrogate becomes argmin of the energy), and
// == +fm_predict(p, s) otherwise.
IsingModel fm_to_ising(const FMParams& p, bool maximize = true);

// log(cosh(pred - target)), stable for large differences.
double logcosh_loss(double pred, double target);

struct LabeledSpins {
  SpinVector spins;
  double reward = 0.0;
};

struct FMGradients {
  Eigen::MatrixXd factors;
  Eigen::VectorXd linear;
  double bias = 0.0;
};

// Batch-mean gradients of the log-cosh loss. Cost O(L N K): the per-sample
// projections z_k = sum_j v_jk s_j are shared by every v_ik.
FMGradients fm_gradients(const FMParams& p, std::span<const LabeledSpins> batch);

// Matrix form used by the trainer: `spins` is L x N (rows are samples).
FMGradients fm_gradients(const FMParams& p,
                         const Eigen::Ref<const Eigen::MatrixXd>& spins,
                         const Eigen::Ref<const Eigen::VectorXd>& rewards);

}  // namespace rtbbo
