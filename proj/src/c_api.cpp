#include "rtbbo/rtbbo.h"

#include <cstring>
#include <exception>
#include <filesystem>
#include <new>
#include <optional>
#include <string>

#include "rtbbo/error.hpp"
#include "rtbbo/experiment.hpp"
#include "rtbbo/ising.hpp"
#include "rtbbo/outputs.hpp"
#include "rtbbo/runner.hpp"

struct rtbbo_config {
  rtbbo::ExperimentConfig cfg;
};

struct rtbbo_ising {
  rtbbo::IsingModel model;
};

namespace {

thread_local std::string g_last_error;

rtbbo_status fail(rtbbo_status status, const char* what) {
  g_last_error = what;
  return status;
}

template <class F>
rtbbo_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return RTBBO_OK;
  } catch (const rtbbo::Error& e) {
    switch (e.code()) {
      case rtbbo::ErrorCode::kInvalidArgument:
        return fail(RTBBO_ERR_INVALID_ARGUMENT, e.what());
      case rtbbo::ErrorCode::kCapacity:
        return fail(RTBBO_ERR_CAPACITY, e.what());
      case rtbbo::ErrorCode::kConfig:
        return fail(RTBBO_ERR_CONFIG, e.what());
      case rtbbo::ErrorCode::kIo:
        return fail(RTBBO_ERR_IO, e.what());
    }
    return fail(RTBBO_ERR_INTERNAL, e.what());
  } catch (const std::bad_alloc&) {
    return fail(RTBBO_ERR_CAPACITY, "out of memory");
  } catch (const std::exception& e) {
    return fail(RTBBO_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(RTBBO_ERR_INTERNAL, "unknown error");
  }
}

void require(const void* p, const char* name) {
  if (p == nullptr) rtbbo::throw_invalid(std::string(name) + " is NULL");
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

rtbbo::SBConfig to_sb(const rtbbo_sb_config& c) {
  rtbbo::SBConfig sb;
  sb.steps = c.steps;
  sb.a0 = c.a0;
  if (c.c0 > 0.0) sb.c0 = c.c0;
  if (c.eta > 0.0) sb.eta = c.eta;
  sb.dt = c.dt;
  sb.seed = c.seed;
  sb.restarts = c.restarts;
  sb.c0_gain = c.c0_gain;
  sb.field_spin = c.field_spin != 0;
  return sb;
}

void export_spins(const rtbbo::SpinVector& s, int8_t* out, size_t n) {
  if (n != s.size()) rtbbo::throw_invalid("spin buffer length does not match model size");
  for (size_t i = 0; i < n; ++i) out[i] = s[i];
}

void run_into(const rtbbo::ExperimentConfig& cfg, const std::filesystem::path& dir,
              const std::vector<double>* whitebox, rtbbo::ExperimentResult* keep) {
  rtbbo::TickObserver observer;
  std::optional<rtbbo::SnapshotWriter> snapshots;
  if (cfg.snapshots && cfg.env == rtbbo::EnvKind::kWireless && cfg.trials > 0) {
    snapshots.emplace(dir / "snapshots.jsonl");
    observer = [&snapshots](const rtbbo::TickView& v) { (*snapshots)(v); };
  }
  rtbbo::ExperimentResult result = rtbbo::run_experiment(cfg, observer, whitebox);
  rtbbo::emit_outputs(result, dir);
  if (keep != nullptr) *keep = std::move(result);
}

}  // namespace

extern "C" {

const char* rtbbo_last_error(void) { return g_last_error.c_str(); }

const char* rtbbo_version(void) { return "0.1.0"; }

void rtbbo_string_free(char* s) { delete[] s; }

rtbbo_status rtbbo_config_new(const char* env, const char* method, rtbbo_config** out) {
  return guarded([&] {
    require(env, "env");
    require(method, "method");
    require(out, "out");
    auto cfg = rtbbo::default_config(rtbbo::parse_env(env), rtbbo::parse_method(method));
    rtbbo::validate(cfg);
    *out = new rtbbo_config{std::move(cfg)};
  });
}

rtbbo_status rtbbo_config_load(const char* path, const char* env, const char* method,
                               rtbbo_config** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    std::optional<rtbbo::EnvKind> e;
    std::optional<rtbbo::Method> m;
    if (env != nullptr) e = rtbbo::parse_env(env);
    if (method != nullptr) m = rtbbo::parse_method(method);
    *out = new rtbbo_config{rtbbo::load_config(path, e, m)};
  });
}

rtbbo_status rtbbo_config_merge_json(rtbbo_config* cfg, const char* json) {
  return guarded([&] {
    require(cfg, "cfg");
    require(json, "json");
    rtbbo::ExperimentConfig next = cfg->cfg;
    rtbbo::merge_config_json(next, json);
    rtbbo::validate(next);
    cfg->cfg = std::move(next);
  });
}

rtbbo_status rtbbo_config_to_json(const rtbbo_config* cfg, char** out) {
  return guarded([&] {
    require(cfg, "cfg");
    require(out, "out");
    *out = dup_string(rtbbo::config_to_json(cfg->cfg));
  });
}

void rtbbo_config_free(rtbbo_config* cfg) { delete cfg; }

rtbbo_status rtbbo_run(const rtbbo_config* cfg, const char* out_dir) {
  return guarded([&] {
    require(cfg, "cfg");
    require(out_dir, "out_dir");
    run_into(cfg->cfg, out_dir, nullptr, nullptr);
  });
}

rtbbo_status rtbbo_sweep(const rtbbo_config* cfg, const char* out_dir) {
  return guarded([&] {
    require(cfg, "cfg");
    require(out_dir, "out_dir");
    const std::filesystem::path root(out_dir);
    const std::vector<double> whitebox = rtbbo::whitebox_for(cfg->cfg);
    std::vector<std::string> summaries;
    for (rtbbo::Method m : rtbbo::all_methods()) {
      if (m == rtbbo::Method::kGreedy && cfg->cfg.env != rtbbo::EnvKind::kWireless) continue;
      rtbbo::ExperimentConfig c = cfg->cfg;
      c.method = m;
      rtbbo::ExperimentResult r;
      run_into(c, root / std::string(rtbbo::to_string(m)), &whitebox, &r);
      summaries.push_back(rtbbo::summary_json(r));
    }
    rtbbo::emit_sweep_summary(summaries, root);
  });
}

rtbbo_status rtbbo_report(const char* dir, char** out) {
  return guarded([&] {
    require(dir, "dir");
    require(out, "out");
    *out = dup_string(rtbbo::report(dir));
  });
}

rtbbo_status rtbbo_ising_new(size_t n, const double* couplings, const double* fields,
                             double offset, rtbbo_ising** out) {
  return guarded([&] {
    require(out, "out");
    const auto dim = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::VectorXd h = Eigen::VectorXd::Zero(dim);
    if (couplings != nullptr) {
      j = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                         Eigen::RowMajor>>(couplings, dim, dim);
    }
    if (fields != nullptr) h = Eigen::Map<const Eigen::VectorXd>(fields, dim);
    *out = new rtbbo_ising{rtbbo::IsingModel(std::move(j), std::move(h), offset)};
  });
}

rtbbo_status rtbbo_ising_load(const char* path, rtbbo_ising** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new rtbbo_ising{rtbbo::load_instance(path)};
  });
}

void rtbbo_ising_free(rtbbo_ising* model) { delete model; }

size_t rtbbo_ising_size(const rtbbo_ising* model) {
  return model == nullptr ? 0 : model->model.size();
}

rtbbo_status rtbbo_ising_energy(const rtbbo_ising* model, const int8_t* spins, size_t n,
                                double* energy) {
  return guarded([&] {
    require(model, "model");
    require(spins, "spins");
    require(energy, "energy");
    rtbbo::SpinVector s(std::vector<int8_t>(spins, spins + n));
    *energy = rtbbo::energy(model->model, s);
  });
}

rtbbo_status rtbbo_ising_brute_force(const rtbbo_ising* model, int8_t* spins, size_t n,
                                     double* energy) {
  return guarded([&] {
    require(model, "model");
    require(spins, "spins");
    const rtbbo::GroundState g = rtbbo::brute_force_min(model->model);
    export_spins(g.spins, spins, n);
    if (energy != nullptr) *energy = g.energy;
  });
}

void rtbbo_sb_config_default(rtbbo_sb_config* cfg) {
  if (cfg == nullptr) return;
  const rtbbo::SBConfig d;
  cfg->steps = d.steps;
  cfg->a0 = d.a0;
  cfg->c0 = 0.0;
  cfg->eta = 0.0;
  cfg->dt = d.dt;
  cfg->seed = d.seed;
  cfg->restarts = d.restarts;
  cfg->c0_gain = d.c0_gain;
  cfg->field_spin = d.field_spin ? 1 : 0;
}

rtbbo_status rtbbo_sb_solve(const rtbbo_ising* model, const rtbbo_sb_config* cfg,
                            int8_t* spins, size_t n, double* energy) {
  return guarded([&] {
    require(model, "model");
    require(cfg, "cfg");
    require(spins, "spins");
    const rtbbo::SpinVector s = rtbbo::sb_solve(model->model, to_sb(*cfg));
    export_spins(s, spins, n);
    if (energy != nullptr) *energy = rtbbo::energy(model->model, s);
  });
}

}  // extern "C"
