#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rtbbo/rtbbo.h"

namespace {

struct CommonOptions {
  std::string env = "synthetic";
  std::string method = "rtbbo_mr";
  std::optional<long long> cycles;
  std::optional<long long> trials;
  std::optional<unsigned long long> seed;
  std::optional<long long> threads;
  std::string config;
  std::string out = "out";
  bool full_scale = false;
  bool snapshots = false;
};

int report_failure(const char* what) {
  std::fprintf(stderr, "rtbbo: %s: %s\n", what, rtbbo_last_error());
  return 1;
}

void add_common(CLI::App* cmd, CommonOptions& o, bool with_method) {
  cmd->add_option("--env", o.env, "synthetic | wireless")->capture_default_str();
  if (with_method) {
    cmd->add_option("--method", o.method,
                    "random | greedy | fmsb_baseline | fmsb_s | fmsb_sw | rtbbo_sr | rtbbo_mr")
        ->capture_default_str();
  }
  cmd->add_option("--cycles", o.cycles, "sampling cycles per trial");
  cmd->add_option("--trials", o.trials, "independent trials");
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--threads", o.threads, "worker threads (0: all cores)");
  cmd->add_option("--config", o.config, "JSON config file");
  cmd->add_option("--out", o.out, "output directory")->capture_default_str();
  cmd->add_flag("--full-scale", o.full_scale, "19 cells / 36000 cycles / 50 trials");
  cmd->add_flag("--snapshots", o.snapshots, "wireless: write snapshots.jsonl for trial 0");
}

// Resolves a config: defaults or file first, then command-line overrides.
rtbbo_config* resolve(const CommonOptions& o, bool env_given, bool method_given) {
  rtbbo_config* cfg = nullptr;
  const rtbbo_status st =
      o.config.empty()
          ? rtbbo_config_new(o.env.c_str(), o.method.c_str(), &cfg)
          : rtbbo_config_load(o.config.c_str(), env_given ? o.env.c_str() : nullptr,
                              method_given ? o.method.c_str() : nullptr, &cfg);
  if (st != RTBBO_OK) {
    report_failure("config");
    return nullptr;
  }
  nlohmann::json patch = nlohmann::json::object();
  if (!o.config.empty() && method_given) patch["method"] = o.method;
  if (o.full_scale) patch["full_scale"] = true;
  if (o.cycles) patch["cycles"] = *o.cycles;
  if (o.trials) patch["trials"] = *o.trials;
  if (o.seed) patch["seed"] = *o.seed;
  if (o.threads) patch["threads"] = *o.threads;
  if (o.snapshots) patch["snapshots"] = true;
  if (rtbbo_config_merge_json(cfg, patch.dump().c_str()) != RTBBO_OK) {
    report_failure("config");
    rtbbo_config_free(cfg);
    return nullptr;
  }
  return cfg;
}

int print_report(const std::string& dir) {
  char* text = nullptr;
  if (rtbbo_report(dir.c_str(), &text) != RTBBO_OK) return report_failure("report");
  std::fputs(text, stdout);
  rtbbo_string_free(text);
  return 0;
}

int solve(const std::string& path, long long restarts, unsigned long long seed, bool exact) {
  rtbbo_ising* model = nullptr;
  if (rtbbo_ising_load(path.c_str(), &model) != RTBBO_OK) return report_failure("load");
  const size_t n = rtbbo_ising_size(model);
  std::vector<int8_t> spins(n);
  double energy = 0.0;
  rtbbo_status st;
  if (exact) {
    st = rtbbo_ising_brute_force(model, spins.data(), n, &energy);
  } else {
    rtbbo_sb_config sb;
    rtbbo_sb_config_default(&sb);
    sb.restarts = static_cast<int32_t>(restarts);
    sb.seed = seed;
    st = rtbbo_sb_solve(model, &sb, spins.data(), n, &energy);
  }
  rtbbo_ising_free(model);
  if (st != RTBBO_OK) return report_failure("solve");
  std::printf("energy %.12g\n", energy);
  for (int8_t s : spins) std::putchar(s > 0 ? '+' : '-');
  std::putchar('\n');
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Real-time black-box optimization with an Ising-machine surrogate loop"};
  app.require_subcommand(1);

  CommonOptions run_opts;
  auto* run = app.add_subcommand("run", "run one method and write outputs");
  add_common(run, run_opts, true);

  CommonOptions sweep_opts;
  auto* sweep = app.add_subcommand("sweep", "run every method for one env");
  add_common(sweep, sweep_opts, false);

  std::string report_dir = "out";
  auto* rep = app.add_subcommand("report", "print the summary table of a run or sweep");
  rep->add_option("dir", report_dir, "output directory")->capture_default_str();

  std::string instance;
  long long restarts = 10;
  unsigned long long solve_seed = 0;
  bool exact = false;
  auto* slv = app.add_subcommand("solve", "minimize an Ising instance file");
  slv->add_option("instance", instance, "instance text file")->required();
  slv->add_option("--restarts", restarts, "SB restarts")->capture_default_str();
  slv->add_option("--seed", solve_seed, "SB seed")->capture_default_str();
  slv->add_flag("--exact", exact, "exhaustive search (N <= 24)");

  CLI11_PARSE(app, argc, argv);

  if (*run) {
    rtbbo_config* cfg = resolve(run_opts, run->count("--env") > 0, run->count("--method") > 0);
    if (cfg == nullptr) return 1;
    const rtbbo_status st = rtbbo_run(cfg, run_opts.out.c_str());
    rtbbo_config_free(cfg);
    if (st != RTBBO_OK) return report_failure("run");
    return print_report(run_opts.out);
  }
  if (*sweep) {
    rtbbo_config* cfg = resolve(sweep_opts, sweep->count("--env") > 0, false);
    if (cfg == nullptr) return 1;
    const rtbbo_status st = rtbbo_sweep(cfg, sweep_opts.out.c_str());
    rtbbo_config_free(cfg);
    if (st != RTBBO_OK) return report_failure("sweep");
    return print_report(sweep_opts.out);
  }
  if (*rep) return print_report(report_dir);
  if (*slv) return solve(instance, restarts, solve_seed, exact);
  return 0;
}
