// Acceptance suite. Prints one PASS/FAIL line per criterion.
//
//   acceptance [--strict] [criterion ...]
//
// Criteria are numbered 1..9; with no arguments all of them run. The exit
// code is 0 once every selected criterion has been evaluated; --strict makes
// any FAIL exit with 1.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "rtbbo/adaptation.hpp"
#include "rtbbo/encoding.hpp"
#include "rtbbo/experiment.hpp"
#include "rtbbo/fm.hpp"
#include "rtbbo/ising.hpp"
#include "rtbbo/metrics.hpp"
#include "rtbbo/random.hpp"
#include "rtbbo/runner.hpp"
#include "rtbbo/sliding_window.hpp"
#include "rtbbo/trainer.hpp"
#include "rtbbo/wireless_env.hpp"
#include "test_support.hpp"

using namespace rtbbo;
using namespace rtbbo::testing;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

IsingModel random_instance(std::size_t n, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd h(n);
  for (std::size_t i = 0; i < n; ++i) {
    h[i] = g(rng);
    for (std::size_t j = i + 1; j < n; ++j) J(i, j) = J(j, i) = g(rng);
  }
  return IsingModel(J, h);
}

Outcome solver_oracle() {
  const auto start = Clock::now();
  Rng rng(2024);
  SBConfig sb;
  sb.steps = 1000;
  sb.restarts = 10;
  int exact = 0;
  int close = 0;
  for (int i = 0; i < 100; ++i) {
    const IsingModel m = random_instance(12, rng);
    sb.seed = derive_seed(7, i);
    const double best = brute_force_min(m).energy;
    const double got = energy(m, sb_solve(m, sb));
    if (got <= best + 1e-9 * std::max(1.0, std::abs(best))) ++exact;
    if (got - best <= 0.02 * std::abs(best)) ++close;
  }
  const double secs = seconds_since(start);
  return {exact >= 80 && close >= 95 && secs < 30.0,
          fmt("optimal %d/100 (need 80), within 2%% %d/100 (need 95), %.1fs (limit 30s)", exact,
              close, secs)};
}

Outcome gradient_check() {
  const auto start = Clock::now();
  Rng rng(99);
  std::normal_distribution<double> g(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const FMParams p = random_fm(20, 6, rng, 0.3);
    const std::vector<LabeledSpins> datum{{random_spins(20, rng), g(rng)}};
    const FMGradients analytic = fm_gradients(p, datum);
    const FMGradients numeric = finite_difference_gradients(p, datum, 1e-5);
    worst = std::max(worst, max_relative_error(analytic, numeric));
  }
  const double secs = seconds_since(start);
  return {worst <= 1e-4 && secs < 10.0,
          fmt("max relative error %.2e (limit 1e-4), %.2fs (limit 10s)", worst, secs)};
}

Outcome encoding_exactness() {
  const auto start = Clock::now();
  const std::vector<std::vector<std::size_t>> spaces = {
      {2}, {3}, {4}, {2, 2}, {3, 3}, {3, 4, 2}, {2, 3, 4, 5}, {4, 4, 4, 4}, {8, 8}, {16},
      {2, 2, 2, 2, 2, 2, 2, 2}, {5, 5, 6}, {9, 7}};
  std::size_t states = 0;
  std::size_t failures = 0;
  for (const auto& dims : spaces) {
    const ActionSpace sp(dims);
    const auto actions = all_actions(sp);
    const IsingModel pm = penalty_model(sp, 1.0);
    for (const auto& a : actions) {
      if (!(decode(sp, encode(sp, a), actions.back()) == a)) ++failures;
    }
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << sp.n_spins()); ++bits) {
      const SpinVector s = SpinVector::from_bits(bits, sp.n_spins());
      const double p = penalty_value(sp, 1.0, s);
      if (one_hot(sp, s) ? p != 0.0 : !(p < 0.0)) ++failures;
      if (std::abs(energy(pm, s) + p) > 1e-9) ++failures;
      ++states;
    }
  }
  const double secs = seconds_since(start);
  return {failures == 0 && secs < 5.0,
          fmt("%zu spaces, %zu spin states, %zu mismatches, %.2fs (limit 5s)", spaces.size(),
              states, failures, secs)};
}

Outcome acquisition_equivalence() {
  const auto start = Clock::now();
  Rng rng(314);
  const ActionSpace sp({3, 3});
  const auto actions = all_actions(sp);
  int agree = 0;
  for (int rep = 0; rep < 20; ++rep) {
    const FMParams p = random_fm(sp.n_spins(), 3, rng);
    IncentiveState st;
    st.c_exploration = 0.02;
    st.last = encode(sp, actions[rep % actions.size()]);
    std::uniform_int_distribution<int> count(0, 12);
    for (std::size_t i = 0; i < sp.n_spins(); ++i) st.counters.push_back(count(rng));
    const Eigen::VectorXd inc = incentive_terms(st);

    double best = -std::numeric_limits<double>::infinity();
    Action best_action;
    for (const auto& a : actions) {
      const SpinVector s = encode(sp, a);
      const double v = fm_predict(p, s) + inc.dot(s.as_real());
      if (v > best) {
        best = v;
        best_action = a;
      }
    }
    const IsingModel sur = fm_to_ising(p);
    // Largest gain any single spin can offer, so a violating state always
    // has a one-hot neighbour that beats it.
    const Eigen::VectorXd reach =
        (sur.fields() - inc).cwiseAbs() + sur.couplings().cwiseAbs().rowwise().sum();
    const double c = 10.0 * std::max(1.0, reach.maxCoeff());
    const GroundState g = brute_force_min(assemble_acquisition(sur, inc, penalty_model(sp, c)));
    if (one_hot(sp, g.spins) && decode(sp, g.spins, actions.front()) == best_action) ++agree;
  }
  const double secs = seconds_since(start);
  return {agree == 20 && secs < 10.0, fmt("%d/20 problems agree, %.2fs (limit 10s)", agree, secs)};
}

struct BenchRun {
  Method method;
  double all = 0.0;
  double statics = 0.0;
  double changing = 0.0;
  double top100 = 0.0;
};

std::vector<BenchRun> synthetic_runs;
double synthetic_secs = 0.0;

void run_synthetic_benchmark() {
  if (!synthetic_runs.empty()) return;
  const auto start = Clock::now();
  const std::vector<Method> methods = {Method::kFmsbBaseline, Method::kFmsbS, Method::kFmsbSW,
                                       Method::kRtbboSR, Method::kRtbboMR};
  ExperimentConfig base = default_config(EnvKind::kSynthetic, Method::kRtbboMR);
  base.cycles = 6000;
  base.trials = 20;
  const std::vector<double> whitebox = whitebox_for(base);
  for (Method m : methods) {
    ExperimentConfig cfg = default_config(EnvKind::kSynthetic, m);
    cfg.cycles = 6000;
    cfg.trials = 20;
    const ExperimentResult r = run_experiment(cfg, {}, &whitebox);
    const auto rel = relative_performance(r.trials, whitebox);
    const auto curve = top_k_concentration(r.trials, 100);
    BenchRun b{m, range_mean(rel, 0, 6000), range_mean(rel, 1000, 2000),
               range_mean(rel, 2000, 4000), curve.back()};
    std::printf("  %-14s all %.4f static %.4f changing %.4f top100 %.4f (%.0fs)\n",
                std::string(to_string(m)).c_str(), b.all, b.statics, b.changing, b.top100,
                seconds_since(start));
    std::fflush(stdout);
    synthetic_runs.push_back(b);
  }
  synthetic_secs = seconds_since(start);
}

const BenchRun& find(Method m) {
  for (const auto& b : synthetic_runs) {
    if (b.method == m) return b;
  }
  std::abort();
}

Outcome synthetic_benchmark() {
  run_synthetic_benchmark();
  const BenchRun& mr = find(Method::kRtbboMR);
  const BenchRun& sr = find(Method::kRtbboSR);
  const BenchRun& sw = find(Method::kFmsbSW);
  const BenchRun& bl = find(Method::kFmsbBaseline);
  const bool a = mr.statics >= 0.70 && mr.changing >= 0.55;
  const bool b = mr.all >= sr.all && sr.all >= sw.all && sw.all >= bl.all;
  return {a && b && synthetic_secs < 1800.0,
          fmt("(a) rtbbo_mr static %.4f (>=0.70) changing %.4f (>=0.55): %s; "
              "(b) mr %.4f >= sr %.4f >= sw %.4f >= baseline %.4f: %s; %.0fs (limit 1800s)",
              mr.statics, mr.changing, a ? "ok" : "no", mr.all, sr.all, sw.all, bl.all,
              b ? "ok" : "no", synthetic_secs)};
}

Outcome exploration_signature() {
  run_synthetic_benchmark();
  const double s = find(Method::kFmsbS).top100;
  const double mr = find(Method::kRtbboMR).top100;
  return {s - mr >= 0.1,
          fmt("fmsb_s top-100 share %.4f, rtbbo_mr %.4f, gap %.4f (need >= 0.1)", s, mr, s - mr)};
}

Outcome wireless_demo() {
  const auto start = Clock::now();
  const std::vector<Method> methods = {Method::kRandom,  Method::kGreedy,   Method::kFmsbBaseline,
                                       Method::kFmsbS,   Method::kFmsbSW,   Method::kRtbboSR,
                                       Method::kRtbboMR};
  double random_mean = 0.0;
  double greedy_window = 0.0;
  double mr_window = 0.0;
  std::vector<std::pair<Method, double>> surrogate_means;
  for (Method m : methods) {
    ExperimentConfig cfg = default_config(EnvKind::kWireless, m);
    cfg.cycles = 6000;
    cfg.trials = 10;
    const ExperimentResult r = run_experiment(cfg);
    const auto curve = mean_total_reward(r.trials);
    const double all = range_mean(curve, 0, 6000);
    const double window = range_mean(curve, 1500, 2500);
    std::printf("  %-14s throughput %.4f congestion %.4f (%.0fs)\n",
                std::string(to_string(m)).c_str(), all, window, seconds_since(start));
    std::fflush(stdout);
    if (m == Method::kRandom) random_mean = all;
    else if (m == Method::kGreedy) greedy_window = window;
    else surrogate_means.emplace_back(m, all);
    if (m == Method::kRtbboMR) mr_window = window;
  }
  bool a = true;
  std::string worst;
  double worst_ratio = std::numeric_limits<double>::infinity();
  for (const auto& [m, v] : surrogate_means) {
    const double ratio = v / random_mean;
    if (ratio < worst_ratio) {
      worst_ratio = ratio;
      worst = std::string(to_string(m));
    }
    a = a && v >= 1.05 * random_mean;
  }
  const bool b = mr_window >= greedy_window;
  const double secs = seconds_since(start);
  return {a && b && secs < 1800.0,
          fmt("(a) weakest surrogate %s at %.3fx random (need >= 1.05): %s; "
              "(b) rtbbo_mr congestion %.4f vs greedy %.4f: %s; %.0fs (limit 1800s)",
              worst.c_str(), worst_ratio, a ? "ok" : "no", mr_window, greedy_window,
              b ? "ok" : "no", secs)};
}

// Single-reward RT-BBO loop against an environment whose reward never
// changes. Only the incentive can move the action.
Outcome incentive_controller() {
  const auto start = Clock::now();
  const ExperimentConfig cfg = default_config(EnvKind::kSynthetic, Method::kRtbboSR);
  const std::size_t n = 50;
  const std::int64_t cycles = 6000;
  const std::int64_t burn_in = 2000;
  std::vector<double> fractions;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng rng(seed);
    SlidingWindow window(cfg.window, 1);
    FMParams params;
    AdamState adam;
    IncentiveState st(cfg.incentive);
    SBConfig sb = cfg.sb;
    sb.seed = derive_seed(seed, 3);
    SpinVector s = random_spins(n, rng);
    Eigen::VectorXd reward(1);
    reward[0] = cfg.scaling.single;
    std::int64_t inside = 0;
    for (std::int64_t t = 0; t < cycles; ++t) {
      incentive_update(st, s);
      adjust_c_exploration(st);
      if (t >= burn_in) {
        const double mu = st.mean_counter();
        if (mu >= st.config.target_lo && mu <= st.config.target_hi) ++inside;
      }
      window.push(s, reward);
      train_cycle(params, adam, window, cfg.train, t == 0, rng);
      s = sb_solve(assemble_acquisition(fm_to_ising(params), incentive_terms(st)), sb);
    }
    fractions.push_back(static_cast<double>(inside) / static_cast<double>(cycles - burn_in));
  }
  const double secs = seconds_since(start);
  bool ok = secs < 300.0;
  std::string list;
  for (double f : fractions) {
    ok = ok && f >= 0.90;
    list += fmt("%s%.3f", list.empty() ? "" : " ", f);
  }
  return {ok, fmt("share of post-burn-in cycles with mean counter in [100,200] per seed: %s "
                  "(need >= 0.90 each), %.0fs (limit 300s)",
                  list.c_str(), secs)};
}

Outcome fading_statistics() {
  const auto start = Clock::now();
  WirelessEnv env(WirelessConfig{});
  std::vector<std::complex<double>> trace;
  for (int t = 0; t < 10000; ++t) {
    trace.push_back(env.fading(0, 0, 0));
    env.advance();
  }
  std::complex<double> cross = 0.0;
  double power = 0.0;
  for (std::size_t t = 1; t < trace.size(); ++t) cross += trace[t] * std::conj(trace[t - 1]);
  for (const auto& v : trace) power += std::norm(v);
  const double r = (cross.real() / static_cast<double>(trace.size() - 1)) /
                   (power / static_cast<double>(trace.size()));
  const double secs = seconds_since(start);
  return {std::abs(r - 0.90) <= 0.02 && secs < 5.0,
          fmt("lag-1 autocorrelation %.4f (target 0.90 +- 0.02), %.2fs (limit 5s)", r, secs)};
}

}  // namespace

int main(int argc, char** argv) {
  bool strict = false;
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--strict") == 0) {
      strict = true;
    } else {
      const int c = std::atoi(argv[i]);
      if (c < 1 || c > 9) {
        std::fprintf(stderr, "unknown criterion '%s'\n", argv[i]);
        return 2;
      }
      selected.insert(c);
    }
  }
  if (selected.empty()) {
    for (int c = 1; c <= 9; ++c) selected.insert(c);
  }
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"solver oracle equivalence", solver_oracle},
      {"gradient correctness", gradient_check},
      {"encoding exactness", encoding_exactness},
      {"acquisition equivalence", acquisition_equivalence},
      {"synthetic dynamic benchmark", synthetic_benchmark},
      {"exploration signature", exploration_signature},
      {"wireless demonstration", wireless_demo},
      {"incentive controller", incentive_controller},
      {"fading statistics", fading_statistics},
  };
  int failed = 0;
  for (int c : selected) {
    const auto& [name, fn] = criteria[static_cast<std::size_t>(c - 1)];
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", c, name,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return strict && failed > 0 ? 1 : 0;
}
