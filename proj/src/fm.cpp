#include "rtbbo/fm.hpp"

#include <cmath>
#include <string>

#include "rtbbo/error.hpp"

namespace rtbbo {

FMParams FMParams::zeros(std::size_t n_spins, std::size_t rank) {
  const auto n = static_cast<Eigen::Index>(n_spins);
  const auto k = static_cast<Eigen::Index>(rank);
  return FMParams{Eigen::MatrixXd::Zero(n, k), Eigen::VectorXd::Zero(n), 0.0};
}

void validate(const FMParams& p) {
  if (p.factors.rows() != p.linear.size()) {
    throw_invalid("factor matrix has " + std::to_string(p.factors.rows()) +
                  " rows but there are " + std::to_string(p.linear.size()) +
                  " linear weights");
  }
  if (p.factors.cols() < 1 || p.factors.cols() > p.factors.rows()) {
    throw_invalid("factor rank must satisfy 1 <= K <= N (K=" +
                  std::to_string(p.factors.cols()) +
                  ", N=" + std::to_string(p.factors.rows()) + ")");
  }
}

double fm_predict(const FMParams& p, const Eigen::Ref<const Eigen::VectorXd>& s) {
  if (s.size() != p.linear.size()) {
    throw_invalid("spin vector has length " + std::to_string(s.size()) +
                  ", surrogate has " + std::to_string(p.linear.size()) +
                  " spins");
  }
  const Eigen::VectorXd z = p.factors.transpose() * s;
  const double pairwise = 0.5 * (z.squaredNorm() - p.factors.squaredNorm());
  return pairwise + p.linear.dot(s) + p.bias;
}

double fm_predict(const FMParams& p, const SpinVector& s) {
  if (s.size() != p.n_spins()) {
    throw_invalid("spin vector has length " + std::to_string(s.size()) +
                  ", surrogate has " + std::to_string(p.n_spins()) + " spins");
  }
  return fm_predict(p, s.as_real());
}

IsingModel fm_to_ising(const FMParams& p, bool maximize) {
  // -1/2 sum_{i != j} J_ij s_i s_j = -sum_{i<j} J_ij s_i s_j, so J = V V^T
  // (diagonal dropped) reproduces the pairwise term with a minus sign.
  const double sign = maximize ? 1.0 : -1.0;
  Eigen::MatrixXd J = sign * (p.factors * p.factors.transpose());
  return IsingModel(std::move(J), -sign * p.linear, -sign * p.bias);
}

double logcosh_loss(double pred, double target) {
  const double d = std::abs(pred - target);
  // log cosh d = d + log((1 + e^{-2d}) / 2)
  return d + std::log1p(std::exp(-2.0 * d)) - std::log(2.0);
}

FMGradients fm_gradients(const FMParams& p,
                         const Eigen::Ref<const Eigen::MatrixXd>& spins,
                         const Eigen::Ref<const Eigen::VectorXd>& rewards) {
  const auto batch = spins.rows();
  if (batch == 0) throw_invalid("fm_gradients: empty batch");
  if (rewards.size() != batch) {
    throw_invalid("fm_gradients: reward count does not match batch size");
  }
  if (spins.cols() != p.factors.rows()) {
    throw_invalid("fm_gradients: spin vectors have length " +
                  std::to_string(spins.cols()) + ", surrogate has " +
                  std::to_string(p.factors.rows()) + " spins");
  }
  const Eigen::MatrixXd z = spins * p.factors;  // L x K
  const double factor_sq = p.factors.squaredNorm();
  const Eigen::VectorXd pred =
      0.5 * (z.rowwise().squaredNorm().array() - factor_sq).matrix() +
      spins * p.linear + Eigen::VectorXd::Constant(batch, p.bias);
  // dL/dr_hat for log-cosh.
  const Eigen::VectorXd g = (pred - rewards).array().tanh().matrix();
  const double inv = 1.0 / static_cast<double>(batch);
  const double g_mean = g.sum() * inv;

  FMGradients out;
  out.factors.noalias() = inv * (spins.transpose() * (g.asDiagonal() * z));
  out.factors -= g_mean * p.factors;
  out.linear.noalias() = inv * (spins.transpose() * g);
  out.bias = g_mean;
  return out;
}

FMGradients fm_gradients(const FMParams& p, std::span<const LabeledSpins> batch) {
  if (batch.empty()) throw_invalid("fm_gradients: empty batch");
  const auto n = static_cast<Eigen::Index>(p.n_spins());
  Eigen::MatrixXd spins(static_cast<Eigen::Index>(batch.size()), n);
  Eigen::VectorXd rewards(static_cast<Eigen::Index>(batch.size()));
  for (std::size_t b = 0; b < batch.size(); ++b) {
    if (batch[b].spins.size() != p.n_spins()) {
      throw_invalid("fm_gradients: spin vector " + std::to_string(b) +
                    " has wrong length");
    }
    spins.row(static_cast<Eigen::Index>(b)) = batch[b].spins.as_real().transpose();
    rewards[static_cast<Eigen::Index>(b)] = batch[b].reward;
  }
  return fm_gradients(p, spins, rewards);
}

}  // namespace rtbbo
