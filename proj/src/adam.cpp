#include "rtbbo/adam.hpp"

#include <cmath>

#include <Eigen/Core>

#include "rtbbo/error.hpp"

namespace rtbbo {

double adam_step(AdamScalarState& state, double param, double grad, double lr,
                 const AdamConfig& cfg) {
  state.t += 1;
  state.m = cfg.beta1 * state.m + (1.0 - cfg.beta1) * grad;
  state.v = cfg.beta2 * state.v + (1.0 - cfg.beta2) * grad * grad;
  const double t = static_cast<double>(state.t);
  const double m_hat = state.m / (1.0 - std::pow(cfg.beta1, t));
  const double v_hat = state.v / (1.0 - std::pow(cfg.beta2, t));
  return param - lr * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
}

void adam_update(std::span<double> params, std::span<const double> grads,
                 std::span<double> m, std::span<double> v, std::int64_t t,
                 double lr, const AdamConfig& cfg) {
  if (grads.size() != params.size() || m.size() != params.size() ||
      v.size() != params.size()) {
    throw_invalid("adam_update: parameter, gradient and moment sizes differ");
  }
  const auto n = static_cast<Eigen::Index>(params.size());
  Eigen::Map<Eigen::ArrayXd> theta(params.data(), n);
  Eigen::Map<Eigen::ArrayXd> m1(m.data(), n);
  Eigen::Map<Eigen::ArrayXd> m2(v.data(), n);
  Eigen::Map<const Eigen::ArrayXd> g(grads.data(), n);
  const double td = static_cast<double>(t);
  const double m_corr = 1.0 / (1.0 - std::pow(cfg.beta1, td));
  const double v_corr = 1.0 / (1.0 - std::pow(cfg.beta2, td));
  m1 = cfg.beta1 * m1 + (1.0 - cfg.beta1) * g;
  m2 = cfg.beta2 * m2 + (1.0 - cfg.beta2) * g.square();
  theta -= lr * (m1 * m_corr) / ((m2 * v_corr).sqrt() + cfg.epsilon);
}

}  // namespace rtbbo
