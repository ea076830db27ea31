#include "rtbbo/trainer.hpp"

#include <string>
#include <vector>

#include "rtbbo/error.hpp"

namespace rtbbo {

void validate(const TrainConfig& cfg) {
  if (cfg.rank < 1) throw_invalid("rank K must be >= 1");
  if (cfg.batch_size < 1) throw_invalid("batch_size must be >= 1");
  if (!(cfg.c_decay > 0.0 && cfg.c_decay <= 1.0)) {
    throw_invalid("c_decay must lie in (0, 1]");
  }
  if (!(cfg.lr_factors >= 0.0) || !(cfg.lr_linear >= 0.0)) {
    throw_invalid("learning rates must be non-negative");
  }
  if (!(cfg.init_range >= 0.0)) throw_invalid("init_range must be >= 0");
  if (!(cfg.adam.beta1 >= 0.0 && cfg.adam.beta1 < 1.0) ||
      !(cfg.adam.beta2 >= 0.0 && cfg.adam.beta2 < 1.0) ||
      !(cfg.adam.epsilon > 0.0)) {
    throw_invalid("Adam requires 0 <= beta < 1 and epsilon > 0");
  }
}

AdamState AdamState::zeros(std::size_t n_spins, std::size_t rank) {
  const auto n = static_cast<Eigen::Index>(n_spins);
  const auto k = static_cast<Eigen::Index>(rank);
  AdamState s;
  s.m_factors = Eigen::MatrixXd::Zero(n, k);
  s.v_factors = Eigen::MatrixXd::Zero(n, k);
  s.m_linear = Eigen::VectorXd::Zero(n);
  s.v_linear = Eigen::VectorXd::Zero(n);
  return s;
}

namespace {

std::span<double> flat(Eigen::MatrixXd& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}
std::span<double> flat(Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

}  // namespace

void train_cycle(std::span<FMParams> heads, std::span<AdamState> adam,
                 const SlidingWindow& window, const TrainConfig& cfg,
                 bool first_cycle, Rng& rng) {
  validate(cfg);
  if (window.empty()) throw_invalid("train_cycle: window is empty");
  if (heads.size() != adam.size()) {
    throw_invalid("train_cycle: one Adam state per surrogate is required");
  }
  if (heads.size() > window.reward_arity()) {
    throw_invalid("train_cycle: more surrogates than reward columns");
  }
  const std::size_t n = window.n_spins();
  for (std::size_t m = 0; m < heads.size(); ++m) {
    FMParams& p = heads[m];
    if (first_cycle) {
      p = FMParams::zeros(n, cfg.rank);
      std::uniform_real_distribution<double> init(-cfg.init_range, cfg.init_range);
      for (Eigen::Index j = 0; j < p.factors.cols(); ++j) {
        for (Eigen::Index i = 0; i < p.factors.rows(); ++i) {
          p.factors(i, j) = init(rng);
        }
      }
      adam[m] = AdamState::zeros(n, cfg.rank);
    }
    validate(p);
    if (p.n_spins() != n) {
      throw_invalid("train_cycle: surrogate has " + std::to_string(p.n_spins()) +
                    " spins, window holds " + std::to_string(n));
    }
    if (adam[m].m_factors.rows() != p.factors.rows() ||
        adam[m].m_factors.cols() != p.factors.cols()) {
      throw_invalid("train_cycle: Adam state shape does not match surrogate");
    }
    if (p.factors.cols() != heads.front().factors.cols() || adam[m].t != adam.front().t) {
      throw_invalid("train_cycle: surrogates must share rank and step count");
    }
    p.factors *= cfg.c_decay;
  }

  // All heads are trained side by side: factor blocks are stacked column-wise
  // so each iteration needs one product per term instead of one per head.
  const auto nn = static_cast<Eigen::Index>(n);
  const auto k = heads.front().factors.cols();
  const auto heads_n = static_cast<Eigen::Index>(heads.size());
  Eigen::MatrixXd V(nn, k * heads_n), mV(nn, k * heads_n), vV(nn, k * heads_n);
  Eigen::MatrixXd W(nn, heads_n), mW(nn, heads_n), vW(nn, heads_n);
  Eigen::VectorXd b(heads_n), mb(heads_n), vb(heads_n);
  for (Eigen::Index m = 0; m < heads_n; ++m) {
    const auto um = static_cast<std::size_t>(m);
    V.middleCols(m * k, k) = heads[um].factors;
    mV.middleCols(m * k, k) = adam[um].m_factors;
    vV.middleCols(m * k, k) = adam[um].v_factors;
    W.col(m) = heads[um].linear;
    mW.col(m) = adam[um].m_linear;
    vW.col(m) = adam[um].v_linear;
    b[m] = heads[um].bias;
    mb[m] = adam[um].m_bias;
    vb[m] = adam[um].v_bias;
  }
  std::int64_t t = adam[0].t;

  const auto batch = static_cast<Eigen::Index>(cfg.batch_size);
  const double inv = 1.0 / static_cast<double>(batch);
  Eigen::MatrixXd spins(batch, nn);
  Eigen::MatrixXd rewards(batch, heads_n);
  Eigen::MatrixXd z(batch, k * heads_n);
  Eigen::MatrixXd pred(batch, heads_n);
  Eigen::MatrixXd g(batch, heads_n);
  Eigen::MatrixXd gV(nn, k * heads_n), gW(nn, heads_n);
  Eigen::VectorXd gb(heads_n);
  std::uniform_int_distribution<std::size_t> pick(0, window.size() - 1);
  for (std::size_t it = 0; it < cfg.n_train; ++it) {
    for (Eigen::Index r = 0; r < batch; ++r) {
      const Sample& s = window[pick(rng)];
      spins.row(r) = s.features;
      rewards.row(r) = s.rewards.head(heads_n).transpose();
    }
    z.noalias() = spins * V;
    pred.noalias() = spins * W;
    for (Eigen::Index m = 0; m < heads_n; ++m) {
      const double factor_sq = V.middleCols(m * k, k).squaredNorm();
      pred.col(m).array() +=
          0.5 * (z.middleCols(m * k, k).rowwise().squaredNorm().array() - factor_sq) + b[m];
    }
    // dL/dr_hat for log-cosh, per sample and head: tanh via the vectorized exp.
    g = 1.0 - 2.0 / ((2.0 * (pred - rewards).array()).exp() + 1.0);
    for (Eigen::Index m = 0; m < heads_n; ++m) {
      z.middleCols(m * k, k) = g.col(m).asDiagonal() * z.middleCols(m * k, k);
    }
    gV.noalias() = inv * (spins.transpose() * z);
    gW.noalias() = inv * (spins.transpose() * g);
    gb = inv * g.colwise().sum().transpose();
    for (Eigen::Index m = 0; m < heads_n; ++m) {
      gV.middleCols(m * k, k) -= gb[m] * V.middleCols(m * k, k);
    }
    t += 1;
    adam_update(flat(V), flat(gV), flat(mV), flat(vV), t, cfg.lr_factors, cfg.adam);
    adam_update(flat(W), flat(gW), flat(mW), flat(vW), t, cfg.lr_linear, cfg.adam);
    adam_update(flat(b), flat(gb), flat(mb), flat(vb), t, cfg.lr_linear, cfg.adam);
  }

  for (Eigen::Index m = 0; m < heads_n; ++m) {
    const auto um = static_cast<std::size_t>(m);
    heads[um].factors = V.middleCols(m * k, k);
    adam[um].m_factors = mV.middleCols(m * k, k);
    adam[um].v_factors = vV.middleCols(m * k, k);
    heads[um].linear = W.col(m);
    adam[um].m_linear = mW.col(m);
    adam[um].v_linear = vW.col(m);
    heads[um].bias = b[m];
    adam[um].m_bias = mb[m];
    adam[um].v_bias = vb[m];
    adam[um].t = t;
  }
}

void train_cycle(FMParams& params, AdamState& adam, const SlidingWindow& window,
                 const TrainConfig& cfg, bool first_cycle, Rng& rng,
                 std::size_t reward_column) {
  if (reward_column >= window.reward_arity()) {
    throw_invalid("train_cycle: reward column out of range");
  }
  if (reward_column == 0) {
    train_cycle(std::span<FMParams>(&params, 1), std::span<AdamState>(&adam, 1),
                window, cfg, first_cycle, rng);
    return;
  }
  // Re-project the requested column so the multi-head path can be reused.
  SlidingWindow column(window.capacity(), 1);
  for (std::size_t i = 0; i < window.size(); ++i) {
    Eigen::VectorXd r(1);
    r[0] = window[i].rewards[static_cast<Eigen::Index>(reward_column)];
    column.push(window[i].spins, r);
  }
  train_cycle(std::span<FMParams>(&params, 1), std::span<AdamState>(&adam, 1),
              column, cfg, first_cycle, rng);
}

}  // namespace rtbbo
