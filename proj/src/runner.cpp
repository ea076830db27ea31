#include "rtbbo/runner.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

#include "rtbbo/adaptation.hpp"
#include "rtbbo/baselines.hpp"
#include "rtbbo/error.hpp"
#include "rtbbo/fm.hpp"
#include "rtbbo/random.hpp"
#include "rtbbo/sliding_window.hpp"
#include "rtbbo/synthetic_env.hpp"
#include "rtbbo/trainer.hpp"
#include "rtbbo/wireless_env.hpp"

namespace rtbbo {

namespace {

// Stream indices for derive_seed.
constexpr std::uint64_t kAgentStream = 1;
constexpr std::uint64_t kEnvStream = 2;
constexpr std::uint64_t kSolverStream = 3;

double encoding_coefficient(const EncodingConfig& enc, const IsingModel& objective) {
  if (enc.rule == EncodingRule::kFixed) return enc.fixed_value;
  const Eigen::VectorXd linear = objective.fields().cwiseAbs();
  Eigen::VectorXd bound = linear;
  if (enc.rule == EncodingRule::kFieldBound) {
    bound += objective.couplings().cwiseAbs().rowwise().sum();
  }
  const double peak = bound.size() > 0 ? bound.maxCoeff() : 0.0;
  return std::max(enc.floor, enc.factor * peak);
}

Action spins_to_action(const SpinVector& s) {
  Action a;
  a.values.resize(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) a.values[i] = s[i] > 0 ? 1 : 0;
  return a;
}

SpinVector random_spins(std::size_t n, Rng& rng) {
  std::bernoulli_distribution coin(0.5);
  SpinVector s(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if (coin(rng)) s.set(i, 1);
  }
  return s;
}

// Environment behind a uniform interface: the synthetic env acts directly on
// spins, the wireless env on one-hot encoded beam indices.
class Environment {
 public:
  Environment(const ExperimentConfig& cfg, std::uint64_t seed) {
    if (cfg.env == EnvKind::kSynthetic) {
      synthetic_.emplace(SyntheticDynamicEnv::generate(cfg.synthetic));
    } else {
      WirelessConfig w = cfg.wireless;
      w.seed = derive_seed(cfg.wireless.seed, seed);
      wireless_.emplace(w);
      space_ = wireless_->action_space();
    }
  }

  bool encoded() const { return wireless_.has_value(); }
  const ActionSpace& space() const { return space_; }
  const WirelessEnv* wireless() const { return wireless_ ? &*wireless_ : nullptr; }
  std::size_t n_spins() const {
    return synthetic_ ? synthetic_->n_spins() : space_.n_spins();
  }
  std::size_t n_rewards() const {
    return synthetic_ ? synthetic_->n_rewards() : wireless_->n_cells();
  }

  Eigen::VectorXd step(const SpinVector& s, const Action& a, std::int64_t t) {
    if (synthetic_) return synthetic_->step(s, t);
    return wireless_->step(a);
  }

 private:
  std::optional<SyntheticDynamicEnv> synthetic_;
  std::optional<WirelessEnv> wireless_;
  ActionSpace space_;
};

}  // namespace

std::uint64_t trial_seed(const ExperimentConfig& cfg, std::size_t trial) {
  return derive_seed(cfg.seed, static_cast<std::uint64_t>(trial));
}

TrialResult run_trial(const ExperimentConfig& cfg, std::size_t trial,
                      const TickObserver& observer) {
  validate(cfg);
  const std::uint64_t seed = trial_seed(cfg, trial);
  Environment env(cfg, derive_seed(seed, kEnvStream));
  Rng rng(derive_seed(seed, kAgentStream));
  const std::uint64_t solver_seed = derive_seed(seed ^ cfg.sb.seed, kSolverStream);

  const Features features = cfg.features();
  const bool learn = uses_surrogate(cfg.method);
  const std::size_t n_spins = env.n_spins();
  const std::size_t n_rewards = env.n_rewards();
  const std::size_t heads = features.multi_reward ? n_rewards : 1;
  if (learn && cfg.train.rank > n_spins) {
    throw_config("train.rank exceeds the number of spins");
  }

  std::vector<double> weights = cfg.multi_weights;
  if (weights.empty()) weights.assign(heads, 1.0);
  if (features.multi_reward && weights.size() != heads) {
    throw_config("multi_weights must have one entry per sub-reward");
  }

  SlidingWindow dataset(features.sliding_window ? cfg.window : SlidingWindow::kUnbounded,
                        heads);
  std::vector<FMParams> models(heads);
  std::vector<AdamState> adam(heads);
  IncentiveState incentive(cfg.incentive);
  TrainConfig train = cfg.train;
  if (!features.weight_decay) train.c_decay = 1.0;
  const std::optional<IsingModel> penalty_shape =
      env.encoded() ? std::optional(penalty_model(env.space(), 1.0)) : std::nullopt;

  // First action: uniform random.
  Action action;
  SpinVector spins;
  if (env.encoded()) {
    action = random_action(env.space(), rng);
    spins = encode(env.space(), action);
  } else {
    spins = random_spins(n_spins, rng);
    action = spins_to_action(spins);
  }
  bool violation = false;

  TrialResult result;
  result.trial = trial;
  result.seed = seed;
  result.records.reserve(static_cast<std::size_t>(cfg.cycles));

  for (std::int64_t t = 0; t < cfg.cycles; ++t) {
    if (observer && env.wireless()) {
      TickView view{t, env.wireless(), &action};
      observer(view);
    }
    const Eigen::VectorXd rewards = env.step(spins, action, t);
    const double total = rewards.sum();

    incentive_update(incentive, spins);
    if (learn && features.incentive) adjust_c_exploration(incentive);

    CycleRecord rec;
    rec.t = t;
    rec.action = action;
    rec.rewards = rewards;
    rec.total_reward = total;
    rec.mean_counter = incentive.mean_counter();
    rec.c_exploration = features.incentive && learn ? incentive.c_exploration : 0.0;
    rec.violation = violation;
    result.records.push_back(std::move(rec));

    if (t + 1 == cfg.cycles) break;

    if (cfg.method == Method::kRandom) {
      if (env.encoded()) {
        action = random_action(env.space(), rng);
        spins = encode(env.space(), action);
      } else {
        spins = random_spins(n_spins, rng);
        action = spins_to_action(spins);
      }
      continue;
    }
    if (cfg.method == Method::kGreedy) {
      action = greedy_action(*env.wireless());
      spins = encode(env.space(), action);
      continue;
    }

    if (features.multi_reward) {
      dataset.push(spins, rewards * cfg.scaling.multi);
    } else {
      Eigen::VectorXd single(1);
      single[0] = total * cfg.scaling.single;
      dataset.push(spins, single);
    }
    train_cycle(models, adam, dataset, train, t == 0, rng);

    IsingModel objective = features.multi_reward
                               ? integrate_multi(models, weights)
                               : fm_to_ising(models.front(), true);
    if (features.incentive) {
      objective = assemble_acquisition(objective, incentive_terms(incentive));
    }

    SBConfig sb = cfg.sb;
    sb.seed = cfg.reseed_solver ? derive_seed(solver_seed, static_cast<std::uint64_t>(t))
                                : solver_seed;
    if (env.encoded()) {
      const double c_enc = encoding_coefficient(cfg.encoding, objective);
      const IsingModel acquisition = objective + c_enc * *penalty_shape;
      const SpinVector solution = sb_solve(acquisition, sb);
      const DecodeResult decoded = decode_checked(env.space(), solution, action);
      violation = decoded.repaired_groups > 0;
      action = decoded.action;
      spins = encode(env.space(), action);
    } else {
      spins = sb_solve(objective, sb);
      action = spins_to_action(spins);
    }
  }
  return result;
}

std::vector<double> whitebox_for(const ExperimentConfig& cfg) {
  if (cfg.env != EnvKind::kSynthetic) return {};
  const auto env = SyntheticDynamicEnv::generate(cfg.synthetic);
  return whitebox_trace(env, cfg.cycles, cfg.whitebox_sb);
}

ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const TickObserver& trial0_observer,
                                const std::vector<double>* whitebox) {
  validate(cfg);
  ExperimentResult out;
  out.config = cfg;
  out.trials.resize(cfg.trials);
  if (whitebox != nullptr && cfg.env == EnvKind::kSynthetic) {
    if (whitebox->size() != static_cast<std::size_t>(cfg.cycles)) {
      throw_invalid("white-box trace length does not match cycles");
    }
    out.whitebox = *whitebox;
  } else {
    out.whitebox = whitebox_for(cfg);
  }

  std::size_t workers = cfg.threads != 0 ? cfg.threads
                                         : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(cfg.trials, 1));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t trial = next.fetch_add(1);
      if (trial >= cfg.trials) return;
      try {
        out.trials[trial] =
            run_trial(cfg, trial, trial == 0 ? trial0_observer : TickObserver{});
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(cfg.trials);
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace rtbbo
