#include "rtbbo/synthetic_env.hpp"

#include <map>
#include <string>

#include "rtbbo/error.hpp"
#include "rtbbo/random.hpp"

namespace rtbbo {

namespace {

IsingModel random_model(std::size_t n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto ni = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(ni, ni);
  for (Eigen::Index i = 0; i < ni; ++i) {
    for (Eigen::Index j = i + 1; j < ni; ++j) {
      J(i, j) = normal(rng);
      J(j, i) = J(i, j);
    }
  }
  return IsingModel(std::move(J), Eigen::VectorXd::Zero(ni));
}

IsingModel sum_of(const std::vector<IsingModel>& models) {
  IsingModel total(models.front().size());
  for (const auto& m : models) total += m;
  return total;
}

}  // namespace

SyntheticDynamicEnv SyntheticDynamicEnv::generate(const SyntheticEnvConfig& cfg) {
  if (cfg.n_spins < 2) throw_invalid("synthetic env needs at least 2 spins");
  if (cfg.n_models < 1) throw_invalid("synthetic env needs at least 1 model");
  Rng rng(cfg.seed);
  std::vector<IsingModel> a, b;
  for (std::size_t m = 0; m < cfg.n_models; ++m) a.push_back(random_model(cfg.n_spins, rng));
  for (std::size_t m = 0; m < cfg.n_models; ++m) b.push_back(random_model(cfg.n_spins, rng));
  return SyntheticDynamicEnv(std::move(a), std::move(b), cfg.change_start,
                             cfg.change_end);
}

SyntheticDynamicEnv::SyntheticDynamicEnv(std::vector<IsingModel> models_a,
                                         std::vector<IsingModel> models_b,
                                         std::int64_t change_start,
                                         std::int64_t change_end)
    : models_a_(std::move(models_a)),
      models_b_(std::move(models_b)),
      change_start_(change_start),
      change_end_(change_end) {
  if (models_a_.empty() || models_a_.size() != models_b_.size()) {
    throw_invalid("synthetic env needs the same non-zero number of A and B models");
  }
  if (change_end_ < change_start_) {
    throw_invalid("synthetic env change window must satisfy start <= end");
  }
  n_spins_ = models_a_.front().size();
  for (const auto* set : {&models_a_, &models_b_}) {
    for (const auto& m : *set) {
      if (m.size() != n_spins_) throw_invalid("synthetic env models differ in size");
    }
  }
  sum_a_ = sum_of(models_a_);
  sum_b_ = sum_of(models_b_);
}

double SyntheticDynamicEnv::alpha(std::int64_t t) const {
  if (t < change_start_) return 1.0;
  if (t >= change_end_) return 0.0;
  return 1.0 - static_cast<double>(t - change_start_) /
                   static_cast<double>(change_end_ - change_start_);
}

Eigen::VectorXd SyntheticDynamicEnv::step(const SpinVector& s, std::int64_t t) const {
  if (t < 0) throw_invalid("cycle index must be >= 0");
  if (s.size() != n_spins_) {
    throw_invalid("synthetic env expects " + std::to_string(n_spins_) +
                  " spins, got " + std::to_string(s.size()));
  }
  const double a = alpha(t);
  const Eigen::VectorXd x = s.as_real();
  Eigen::VectorXd rewards(static_cast<Eigen::Index>(models_a_.size()));
  for (std::size_t m = 0; m < models_a_.size(); ++m) {
    double e = 0.0;
    if (a > 0.0) e += a * energy(models_a_[m], x);
    if (a < 1.0) e += (1.0 - a) * energy(models_b_[m], x);
    rewards[static_cast<Eigen::Index>(m)] = -e;
  }
  return rewards;
}

IsingModel SyntheticDynamicEnv::total_model(std::int64_t t) const {
  const double a = alpha(t);
  if (a == 1.0) return sum_a_;
  if (a == 0.0) return sum_b_;
  return a * sum_a_ + (1.0 - a) * sum_b_;
}

double whitebox_reference(const SyntheticDynamicEnv& env, std::int64_t t,
                          const SBConfig& sb) {
  const IsingModel model = env.total_model(t);
  return -energy(model, sb_solve(model, sb));
}

std::vector<double> whitebox_trace(const SyntheticDynamicEnv& env,
                                   std::int64_t cycles, const SBConfig& sb) {
  std::vector<double> trace(static_cast<std::size_t>(std::max<std::int64_t>(cycles, 0)));
  std::map<double, double> solved;
  for (std::int64_t t = 0; t < cycles; ++t) {
    const double a = env.alpha(t);
    auto it = solved.find(a);
    if (it == solved.end()) {
      it = solved.emplace(a, whitebox_reference(env, t, sb)).first;
    }
    trace[static_cast<std::size_t>(t)] = it->second;
  }
  return trace;
}

}  // namespace rtbbo
