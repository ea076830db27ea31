#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "rtbbo/ising.hpp"
#include "rtbbo/spin.hpp"

namespace rtbbo {

struct SyntheticEnvConfig {
  std::size_t n_spins = 60;
  std::size_t n_models = 10;
  std::int64_t change_start = 2000;
  std::int64_t change_end = 4000;
  std::uint64_t seed = 1;
};

// Black box whose m-th sub-reward is -(alpha(t) E_Am(s) + (1-alpha(t)) E_Bm(s))
// for random Ising models A_m, B_m. alpha is 1 before change_start, 0 after
// change_end and linear in between.
class SyntheticDynamicEnv {
 public:
  // Couplings i.i.d. standard normal (then symmetrized), zero fields.
  static SyntheticDynamicEnv generate(const SyntheticEnvConfig& cfg);

  SyntheticDynamicEnv(std::vector<IsingModel> models_a,
                      std::vector<IsingModel> models_b,
                      std::int64_t change_start, std::int64_t change_end);

  std::size_t n_spins() const noexcept { return n_spins_; }
  std::size_t n_rewards() const noexcept { return models_a_.size(); }
  const std::vector<IsingModel>& models_a() const noexcept { return models_a_; }
  const std::vector<IsingModel>& models_b() const noexcept { return models_b_; }

  double alpha(std::int64_t t) const;
  // Sub-rewards at cycle t; the single (total) reward is their sum.
  Eigen::VectorXd step(const SpinVector& s, std::int64_t t) const;
  // Summed interpolated model at t; energy == -(total reward).
  IsingModel total_model(std::int64_t t) const;

 private:
  std::vector<IsingModel> models_a_;
  std::vector<IsingModel> models_b_;
  IsingModel sum_a_;
  IsingModel sum_b_;
  std::int64_t change_start_;
  std::int64_t change_end_;
  std::size_t n_spins_ = 0;
};

// Total reward SB reaches when it is handed the true model at cycle t.
double whitebox_reference(const SyntheticDynamicEnv& env, std::int64_t t,
                          const SBConfig& sb);

// White-box values for cycles [0, cycles). Only distinct alpha values are
// solved; the static phases reuse one solve each.
std::vector<double> whitebox_trace(const SyntheticDynamicEnv& env,
                                   std::int64_t cycles, const SBConfig& sb);

}  // namespace rtbbo
