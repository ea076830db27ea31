#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rtbbo/adaptation.hpp"
#include "rtbbo/ising.hpp"
#include "rtbbo/synthetic_env.hpp"
#include "rtbbo/trainer.hpp"
#include "rtbbo/wireless_env.hpp"

namespace rtbbo {

enum class EnvKind { kSynthetic, kWireless };

enum class Method {
  kRandom,
  kGreedy,
  kFmsbBaseline,  // cumulative dataset, random mini-batches
  kFmsbS,         // + sliding window
  kFmsbSW,        // + pre-training weight decay
  kRtbboSR,       // + exploration incentive
  kRtbboMR,       // + one surrogate per sub-reward
};

std::string_view to_string(EnvKind env);
std::string_view to_string(Method method);
EnvKind parse_env(std::string_view name);
Method parse_method(std::string_view name);
std::vector<Method> all_methods();
bool uses_surrogate(Method method);

// Building blocks enabled for a run. Method presets fill these in; the
// config may override any of them.
struct Features {
  bool sliding_window = false;
  bool weight_decay = false;
  bool incentive = false;
  bool multi_reward = false;
};

Features preset_features(Method method);

enum class EncodingRule {
  // c = factor * max_i |b_i|, b the linear coefficients of surrogate plus
  // incentive (maximization frame), recomputed every cycle.
  kLinear,
  // c = factor * max_i (|b_i| + sum_j |J_ij|), an upper bound on the gain of
  // any single spin flip.
  kFieldBound,
  kFixed,
};

struct EncodingConfig {
  EncodingRule rule = EncodingRule::kLinear;
  double factor = 2.0;
  double fixed_value = 1.0;
  double floor = 1e-9;  // lower bound for adaptive rules
};

struct RewardScaling {
  double single = 1.0;  // applied to the total reward (single-reward methods)
  double multi = 1.0;   // applied to each sub-reward (multi-reward methods)
};

struct FeatureOverrides {
  std::optional<bool> sliding_window;
  std::optional<bool> weight_decay;
  std::optional<bool> incentive;
  std::optional<bool> multi_reward;
};

struct ExperimentConfig {
  EnvKind env = EnvKind::kSynthetic;
  Method method = Method::kRtbboMR;
  std::int64_t cycles = 6000;
  std::size_t trials = 20;
  std::uint64_t seed = 1;
  bool full_scale = false;
  std::size_t threads = 0;  // 0: hardware concurrency

  SyntheticEnvConfig synthetic;
  WirelessConfig wireless;

  SBConfig sb;           // per-cycle acquisition solve (single shot)
  // false: every cycle of a trial starts SB from the same initial state.
  bool reseed_solver = false;
  SBConfig whitebox_sb;  // reference solve on the true synthetic model
  TrainConfig train;
  std::size_t window = 50;
  IncentiveConfig incentive;
  EncodingConfig encoding;
  RewardScaling scaling;
  std::vector<double> multi_weights;  // empty: all 1
  FeatureOverrides overrides;

  std::size_t moving_average_window = 100;
  std::size_t top_k = 100;
  bool snapshots = false;  // wireless: export per-tick records of trial 0

  Features features() const;
};

// Defaults for an env/method pair (desk scale).
ExperimentConfig default_config(EnvKind env, Method method);
// 19 cells / 36,000 cycles / 50 trials for wireless, 50 trials for synthetic.
void apply_full_scale(ExperimentConfig& cfg);
void validate(const ExperimentConfig& cfg);

// JSON round trip. `config_from_json` starts from default_config of the
// env/method named in the document (or the given fallbacks) and applies
// every key present.
std::string config_to_json(const ExperimentConfig& cfg, int indent = 2);
ExperimentConfig config_from_json(std::string_view text,
                                  std::optional<EnvKind> env = std::nullopt,
                                  std::optional<Method> method = std::nullopt);
// Applies the keys of `patch` (a JSON object) on top of `cfg`.
void merge_config_json(ExperimentConfig& cfg, std::string_view patch);
ExperimentConfig load_config(const std::string& path,
                             std::optional<EnvKind> env = std::nullopt,
                             std::optional<Method> method = std::nullopt);

}  // namespace rtbbo
