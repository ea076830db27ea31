#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "rtbbo/error.hpp"
#include "rtbbo/experiment.hpp"
#include "rtbbo/metrics.hpp"
#include "rtbbo/outputs.hpp"
#include "rtbbo/runner.hpp"

using namespace rtbbo;
namespace fs = std::filesystem;

namespace {

ExperimentConfig tiny(Method method, EnvKind env = EnvKind::kSynthetic) {
  ExperimentConfig c = default_config(env, method);
  c.cycles = 30;
  c.trials = 2;
  c.threads = 1;
  c.synthetic.n_spins = 12;
  c.synthetic.n_models = 3;
  c.synthetic.change_start = 10;
  c.synthetic.change_end = 20;
  c.train.n_train = 20;
  c.train.rank = 3;
  c.sb.steps = 200;
  c.whitebox_sb.restarts = 2;
  c.whitebox_sb.steps = 200;
  return c;
}

CycleRecord rec(std::vector<std::uint16_t> values, double total = 0.0) {
  CycleRecord r;
  r.action.values = std::move(values);
  r.total_reward = total;
  return r;
}

bool same_records(const TrialResult& a, const TrialResult& b) {
  if (a.records.size() != b.records.size()) return false;
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    const auto& x = a.records[i];
    const auto& y = b.records[i];
    if (x.t != y.t || !(x.action == y.action) || x.rewards != y.rewards ||
        x.total_reward != y.total_reward || x.mean_counter != y.mean_counter ||
        x.c_exploration != y.c_exploration || x.violation != y.violation) {
      return false;
    }
  }
  return true;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / ("rtbbo_test_" + name)) {
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("method names and presets") {
  for (Method m : all_methods()) CHECK(parse_method(to_string(m)) == m);
  CHECK(parse_env("wireless") == EnvKind::kWireless);
  CHECK_THROWS_AS(parse_method("sgd"), Error);
  CHECK_FALSE(uses_surrogate(Method::kRandom));
  CHECK_FALSE(uses_surrogate(Method::kGreedy));
  CHECK(preset_features(Method::kFmsbBaseline).sliding_window == false);
  const Features sw = preset_features(Method::kFmsbSW);
  CHECK(sw.sliding_window);
  CHECK(sw.weight_decay);
  CHECK_FALSE(sw.incentive);
  const Features mr = preset_features(Method::kRtbboMR);
  CHECK(mr.incentive);
  CHECK(mr.multi_reward);
}

TEST_CASE("config validation and json round trip") {
  ExperimentConfig g = default_config(EnvKind::kSynthetic, Method::kGreedy);
  CHECK_THROWS_AS(validate(g), Error);
  ExperimentConfig c = tiny(Method::kRtbboSR);
  c.overrides.incentive = false;
  c.multi_weights = {1.0, 2.0, 0.5};
  const std::string text = config_to_json(c);
  const ExperimentConfig back = config_from_json(text);
  CHECK(config_to_json(back) == text);
  CHECK(back.features().incentive == false);
  CHECK(back.synthetic.n_spins == 12);

  ExperimentConfig m = tiny(Method::kRtbboMR);
  merge_config_json(m, R"({"cycles": 5, "train": {"rank": 2}})");
  CHECK(m.cycles == 5);
  CHECK(m.train.rank == 2);
  CHECK(m.train.n_train == 20);
  try {
    merge_config_json(m, R"({"trian": {}})");
    FAIL("accepted an unknown key");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kConfig);
  }
  CHECK_THROWS_AS(merge_config_json(m, "{"), Error);
  c.multi_weights = {1.0};
  CHECK_THROWS_AS(validate(c), Error);
}

TEST_CASE("full-scale switch") {
  ExperimentConfig w = default_config(EnvKind::kWireless, Method::kRtbboMR);
  apply_full_scale(w);
  CHECK(w.wireless.rings == 2);
  CHECK(w.cycles == 36000);
  CHECK(w.trials == 50);
}

TEST_CASE("single cycle yields the seeded initial action") {
  for (Method m : {Method::kRandom, Method::kRtbboMR, Method::kFmsbBaseline}) {
    ExperimentConfig c = tiny(m);
    c.cycles = 1;
    const TrialResult a = run_trial(c, 0);
    REQUIRE(a.records.size() == 1);
    CHECK(a.records[0].t == 0);
    CHECK(a.records[0].action.values.size() == 12);
    ExperimentConfig other = tiny(Method::kRandom);
    other.cycles = 1;
    CHECK(run_trial(other, 0).records[0].action == a.records[0].action);
  }
}

TEST_CASE("records are consistent") {
  const ExperimentConfig c = tiny(Method::kRtbboMR);
  const TrialResult r = run_trial(c, 1);
  REQUIRE(r.records.size() == 30);
  CHECK(r.seed == trial_seed(c, 1));
  CHECK(trial_seed(c, 0) != trial_seed(c, 1));
  for (std::size_t i = 0; i < r.records.size(); ++i) {
    const CycleRecord& x = r.records[i];
    CHECK(x.t == static_cast<std::int64_t>(i));
    CHECK(x.rewards.size() == 3);
    CHECK(x.total_reward == doctest::Approx(x.rewards.sum()));
    CHECK(x.c_exploration > 0.0);
    CHECK_FALSE(x.violation);
    for (auto v : x.action.values) CHECK(v <= 1);
  }
}

TEST_CASE("full-loop determinism across thread counts") {
  ExperimentConfig c = tiny(Method::kRtbboSR);
  c.trials = 3;
  const ExperimentResult a = run_experiment(c);
  c.threads = 3;
  const ExperimentResult b = run_experiment(c);
  REQUIRE(a.trials.size() == 3);
  for (std::size_t t = 0; t < 3; ++t) {
    CHECK(a.trials[t].trial == t);
    CHECK(same_records(a.trials[t], b.trials[t]));
  }
  CHECK(a.whitebox == b.whitebox);
  CHECK(a.whitebox.size() == 30);
  CHECK_FALSE(same_records(a.trials[0], a.trials[1]));
}

TEST_CASE("ablation flags compose") {
  ExperimentConfig mr = tiny(Method::kRtbboMR);
  mr.overrides.incentive = false;
  ExperimentConfig sw = mr;
  sw.method = Method::kFmsbSW;
  sw.overrides = {};
  sw.overrides.multi_reward = true;
  CHECK(same_records(run_trial(mr, 0), run_trial(sw, 0)));

  ExperimentConfig s = tiny(Method::kFmsbS);
  ExperimentConfig sw_off = tiny(Method::kFmsbSW);
  sw_off.overrides.weight_decay = false;
  CHECK(same_records(run_trial(s, 0), run_trial(sw_off, 0)));
}

TEST_CASE("random selection earns about zero") {
  ExperimentConfig c = tiny(Method::kRandom);
  c.synthetic.n_spins = 60;
  c.synthetic.n_models = 10;
  c.cycles = 1000;
  const TrialResult r = run_trial(c, 0);
  double acc = 0.0, sq = 0.0;
  for (const auto& x : r.records) {
    acc += x.total_reward;
    sq += x.total_reward * x.total_reward;
  }
  const double n = static_cast<double>(r.records.size());
  const double mean = acc / n;
  const double sd = std::sqrt(sq / n - mean * mean);
  CHECK(std::abs(mean) < 3.0 * sd / std::sqrt(n));
}

TEST_CASE("wireless loop") {
  ExperimentConfig c = tiny(Method::kRtbboMR, EnvKind::kWireless);
  c.cycles = 12;
  int ticks = 0;
  const TrialResult r = run_trial(c, 0, [&](const TickView& v) {
    CHECK(v.wireless != nullptr);
    CHECK(v.t == ticks);
    ++ticks;
  });
  CHECK(ticks == 12);
  CHECK(r.records.size() == 12);
  for (const auto& x : r.records) {
    CHECK(x.rewards.size() == 7);
    for (auto v : x.action.values) CHECK(v < 9);
  }
  const TrialResult g = run_trial(tiny(Method::kGreedy, EnvKind::kWireless), 0);
  CHECK(g.records.size() == 30);
  CHECK(whitebox_for(c).empty());
}

TEST_CASE("relative performance") {
  const std::vector<double> wb{2.0, 4.0, 0.0, -1.0};
  std::vector<CycleRecord> same;
  std::vector<CycleRecord> half;
  for (double w : wb) {
    same.push_back(rec({0}, w));
    half.push_back(rec({0}, w / 2));
  }
  const auto one = relative_performance(same, wb);
  CHECK(one[0] == 1.0);
  CHECK(one[1] == 1.0);
  CHECK(std::isnan(one[2]));
  CHECK(one[3] == 1.0);
  const auto h = relative_performance(half, wb);
  CHECK(h[1] == 0.5);
  CHECK(range_mean(h, 0, 4) == doctest::Approx(0.5));
  CHECK(std::isnan(range_mean(h, 2, 3)));

  std::vector<TrialResult> trials(2);
  trials[0].records = same;
  trials[1].records = half;
  const auto avg = relative_performance(trials, wb);
  CHECK(avg[0] == doctest::Approx(0.75));
  CHECK(std::isnan(avg[2]));
  CHECK_THROWS_AS(relative_performance(same, std::vector<double>{1.0}), Error);
}

TEST_CASE("top-k concentration") {
  std::vector<CycleRecord> same(10, rec({1, 2}));
  const auto c1 = top_k_concentration(same, 5);
  REQUIRE(c1.size() == 5);
  for (double v : c1) CHECK(v == 1.0);

  std::vector<CycleRecord> distinct;
  for (std::uint16_t i = 0; i < 200; ++i) distinct.push_back(rec({i}));
  const auto c2 = top_k_concentration(distinct, 100);
  for (std::size_t r = 0; r < 100; ++r) CHECK(c2[r] == doctest::Approx((r + 1) / 200.0));

  Rng rng(3);
  std::uniform_int_distribution<int> pick(0, 8);
  std::vector<CycleRecord> uniform;
  std::map<std::pair<int, int>, int> counts;
  for (int i = 0; i < 6000; ++i) {
    const int a = pick(rng), b = pick(rng);
    counts[{a, b}]++;
    uniform.push_back(rec({static_cast<std::uint16_t>(a), static_cast<std::uint16_t>(b)}));
  }
  const auto c3 = top_k_concentration(uniform, 100);
  CHECK(counts.size() == 81);
  CHECK(c3[80] == doctest::Approx(1.0));
  CHECK(c3[99] == doctest::Approx(1.0));
  std::vector<int> sorted;
  for (const auto& [k, v] : counts) sorted.push_back(v);
  std::sort(sorted.rbegin(), sorted.rend());
  CHECK(c3[0] == doctest::Approx(sorted[0] / 6000.0));
  CHECK(c3[1] == doctest::Approx((sorted[0] + sorted[1]) / 6000.0));
}

TEST_CASE("moving average") {
  const std::vector<double> v{1, 2, 3, 4, 5};
  const auto m = moving_average(v, 2);
  CHECK(m == std::vector<double>{1.0, 1.5, 2.5, 3.5, 4.5});
  const auto all = moving_average(v, 100);
  CHECK(all[4] == doctest::Approx(3.0));
}

TEST_CASE("output files") {
  TempDir dir("outputs");
  ExperimentConfig c = tiny(Method::kRtbboSR);
  c.cycles = 10;
  const ExperimentResult r = run_experiment(c);
  emit_outputs(r, dir.path / "a");
  emit_outputs(run_experiment(c), dir.path / "b");
  const std::string csv = slurp(dir.path / "a" / "cycles.csv");
  CHECK(csv == slurp(dir.path / "b" / "cycles.csv"));
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 21);
  CHECK(csv.rfind("t,trial,total_reward,relative_performance,", 0) == 0);

  const auto summary = nlohmann::json::parse(slurp(dir.path / "a" / "summary.json"));
  CHECK(summary["trials"] == 2);
  CHECK(summary["method"] == "rtbbo_sr");
  CHECK(summary["top_k"].size() == 100);
  CHECK(summary.contains("relative_performance"));
  const ExperimentConfig resolved = load_config((dir.path / "a" / "config.json").string());
  CHECK(config_to_json(resolved) == config_to_json(c));
  CHECK(report(dir.path / "a").find("rtbbo_sr") != std::string::npos);

  ExperimentResult empty;
  empty.config = c;
  emit_outputs(empty, dir.path / "empty");
  const std::string header_only = slurp(dir.path / "empty" / "cycles.csv");
  CHECK(std::count(header_only.begin(), header_only.end(), '\n') == 1);
  CHECK(nlohmann::json::parse(slurp(dir.path / "empty" / "summary.json"))["trials"] == 0);

  const std::vector<std::string> runs{summary_json(r), summary_json(r)};
  emit_sweep_summary(runs, dir.path / "sweep");
  const std::string table = report(dir.path / "sweep");
  CHECK(std::count(table.begin(), table.end(), '\n') == 3);
  CHECK_THROWS_AS(report(dir.path / "missing"), Error);
}

TEST_CASE("wireless csv and snapshots") {
  TempDir dir("wireless");
  ExperimentConfig c = tiny(Method::kRandom, EnvKind::kWireless);
  c.cycles = 5;
  c.trials = 1;
  {
    SnapshotWriter writer(dir.path / "snap.jsonl");
    const ExperimentResult r = run_experiment(c, std::ref(writer));
    emit_outputs(r, dir.path);
  }
  std::ifstream in(dir.path / "snap.jsonl");
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    CHECK(j["t"] == n);
    CHECK(j["beams"].size() == 7);
    CHECK(j["users"].size() == 7);
    CHECK(j["channel_magnitude"].size() == 7);
    CHECK(j["channel_magnitude"][0].size() == 7);
    ++n;
  }
  CHECK(n == 5);
  std::ifstream csv(dir.path / "cycles.csv");
  std::getline(csv, line);
  std::getline(csv, line);
  CHECK(line.find(",,") != std::string::npos);
  const auto summary = nlohmann::json::parse(slurp(dir.path / "summary.json"));
  CHECK(summary.contains("throughput"));
}
