#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "rtbbo/error.hpp"
#include "rtbbo/experiment.hpp"

namespace rtbbo {

using nlohmann::json;

namespace {

constexpr std::pair<Method, std::string_view> kMethodNames[] = {
    {Method::kRandom, "random"},
    {Method::kGreedy, "greedy"},
    {Method::kFmsbBaseline, "fmsb_baseline"},
    {Method::kFmsbS, "fmsb_s"},
    {Method::kFmsbSW, "fmsb_sw"},
    {Method::kRtbboSR, "rtbbo_sr"},
    {Method::kRtbboMR, "rtbbo_mr"},
};

constexpr std::pair<EncodingRule, std::string_view> kRuleNames[] = {
    {EncodingRule::kLinear, "linear"},
    {EncodingRule::kFieldBound, "field_bound"},
    {EncodingRule::kFixed, "fixed"},
};

std::string_view to_string(EncodingRule rule) {
  for (const auto& [r, name] : kRuleNames) {
    if (r == rule) return name;
  }
  return "linear";
}

EncodingRule parse_rule(std::string_view name) {
  for (const auto& [r, n] : kRuleNames) {
    if (n == name) return r;
  }
  throw_config("unknown encoding rule '" + std::string(name) + "'");
}

// Walks the keys of a JSON object, rejecting unknown ones so that typos in
// config files surface immediately.
template <typename Handler>
void for_each_key(const json& obj, const std::string& where, Handler&& handle) {
  if (!obj.is_object()) throw_config(where + " must be a JSON object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!handle(it.key(), it.value())) {
      throw_config("unknown config key '" + where + "." + it.key() + "'");
    }
  }
}

template <typename T>
T get_as(const json& v, const std::string& key) {
  try {
    return v.get<T>();
  } catch (const json::exception& e) {
    throw_config("config key '" + key + "': " + e.what());
  }
}

json sb_to_json(const SBConfig& sb) {
  return json{{"steps", sb.steps},
              {"a0", sb.a0},
              {"c0", sb.c0 ? json(*sb.c0) : json(nullptr)},
              {"c0_gain", sb.c0_gain},
              {"eta", sb.eta ? json(*sb.eta) : json(nullptr)},
              {"field_spin", sb.field_spin},
              {"dt", sb.dt},
              {"seed", sb.seed},
              {"restarts", sb.restarts}};
}

void sb_from_json(const json& j, SBConfig& sb, const std::string& where) {
  for_each_key(j, where, [&](const std::string& k, const json& v) {
    if (k == "steps") sb.steps = get_as<int>(v, k);
    else if (k == "a0") sb.a0 = get_as<double>(v, k);
    else if (k == "c0") sb.c0 = v.is_null() ? std::nullopt : std::optional(get_as<double>(v, k));
    else if (k == "eta") sb.eta = v.is_null() ? std::nullopt : std::optional(get_as<double>(v, k));
    else if (k == "c0_gain") sb.c0_gain = get_as<double>(v, k);
    else if (k == "field_spin") sb.field_spin = get_as<bool>(v, k);
    else if (k == "dt") sb.dt = get_as<double>(v, k);
    else if (k == "seed") sb.seed = get_as<std::uint64_t>(v, k);
    else if (k == "restarts") sb.restarts = get_as<int>(v, k);
    else return false;
    return true;
  });
}

json optional_bool(const std::optional<bool>& b) { return b ? json(*b) : json(nullptr); }

json to_json_value(const ExperimentConfig& c) {
  const auto& s = c.synthetic;
  const auto& w = c.wireless;
  const auto& t = c.train;
  const auto& inc = c.incentive;
  return json{
      {"env", to_string(c.env)},
      {"method", to_string(c.method)},
      {"cycles", c.cycles},
      {"trials", c.trials},
      {"seed", c.seed},
      {"full_scale", c.full_scale},
      {"threads", c.threads},
      {"synthetic",
       {{"n_spins", s.n_spins},
        {"n_models", s.n_models},
        {"change_start", s.change_start},
        {"change_end", s.change_end},
        {"seed", s.seed}}},
      {"wireless",
       {{"rings", w.rings},
        {"cell_radius_m", w.cell_radius_m},
        {"n_antennas", w.n_antennas},
        {"n_paths", w.n_paths},
        {"rho", w.rho},
        {"pathloss_intercept_db", w.pathloss_intercept_db},
        {"pathloss_slope_db", w.pathloss_slope_db},
        {"period_ticks", w.period_ticks},
        {"gather_tick", w.gather_tick},
        {"edge_snr_db", w.edge_snr_db},
        {"angular_spread_deg", w.angular_spread_deg},
        {"max_power", w.max_power},
        {"medium_power", w.medium_power},
        {"seed", w.seed}}},
      {"sb", sb_to_json(c.sb)},
      {"whitebox_sb", sb_to_json(c.whitebox_sb)},
      {"train",
       {{"rank", t.rank},
        {"batch_size", t.batch_size},
        {"n_train", t.n_train},
        {"c_decay", t.c_decay},
        {"beta1", t.adam.beta1},
        {"beta2", t.adam.beta2},
        {"epsilon", t.adam.epsilon},
        {"lr_factors", t.lr_factors},
        {"lr_linear", t.lr_linear},
        {"init_range", t.init_range}}},
      {"window", c.window},
      {"reseed_solver", c.reseed_solver},
      {"incentive",
       {{"initial_c", inc.initial_c},
        {"target_lo", inc.target_lo},
        {"target_hi", inc.target_hi},
        {"adjust_factor", inc.adjust_factor},
        {"c_min", inc.c_min},
        {"c_max", inc.c_max}}},
      {"encoding",
       {{"rule", to_string(c.encoding.rule)},
        {"factor", c.encoding.factor},
        {"fixed_value", c.encoding.fixed_value},
        {"floor", c.encoding.floor}}},
      {"scaling", {{"single", c.scaling.single}, {"multi", c.scaling.multi}}},
      {"multi_weights", c.multi_weights},
      {"features",
       {{"sliding_window", optional_bool(c.overrides.sliding_window)},
        {"weight_decay", optional_bool(c.overrides.weight_decay)},
        {"incentive", optional_bool(c.overrides.incentive)},
        {"multi_reward", optional_bool(c.overrides.multi_reward)}}},
      {"report",
       {{"moving_average_window", c.moving_average_window}, {"top_k", c.top_k}}},
      {"snapshots", c.snapshots},
  };
}

void apply_json(ExperimentConfig& c, const json& doc) {
  for_each_key(doc, "config", [&](const std::string& k, const json& v) {
    if (k == "env") {
      if (parse_env(get_as<std::string>(v, k)) != c.env) {
        throw_config("config 'env' does not match the selected environment");
      }
    } else if (k == "method") {
      if (parse_method(get_as<std::string>(v, k)) != c.method) {
        throw_config("config 'method' does not match the selected method");
      }
    } else if (k == "cycles") c.cycles = get_as<std::int64_t>(v, k);
    else if (k == "trials") c.trials = get_as<std::size_t>(v, k);
    else if (k == "seed") c.seed = get_as<std::uint64_t>(v, k);
    else if (k == "full_scale") {
      if (get_as<bool>(v, k) && !c.full_scale) apply_full_scale(c);
      c.full_scale = get_as<bool>(v, k);
    } else if (k == "threads") c.threads = get_as<std::size_t>(v, k);
    else if (k == "synthetic") {
      auto& s = c.synthetic;
      for_each_key(v, k, [&](const std::string& kk, const json& vv) {
        if (kk == "n_spins") s.n_spins = get_as<std::size_t>(vv, kk);
        else if (kk == "n_models") s.n_models = get_as<std::size_t>(vv, kk);
        else if (kk == "change_start") s.change_start = get_as<std::int64_t>(vv, kk);
        else if (kk == "change_end") s.change_end = get_as<std::int64_t>(vv, kk);
        else if (kk == "seed") s.seed = get_as<std::uint64_t>(vv, kk);
        else return false;
        return true;
      });
    } else if (k == "wireless") {
      auto& w = c.wireless;
      for_each_key(v, k, [&](const std::string& kk, const json& vv) {
        if (kk == "rings") w.rings = get_as<int>(vv, kk);
        else if (kk == "cell_radius_m") w.cell_radius_m = get_as<double>(vv, kk);
        else if (kk == "n_antennas") w.n_antennas = get_as<int>(vv, kk);
        else if (kk == "n_paths") w.n_paths = get_as<int>(vv, kk);
        else if (kk == "rho") w.rho = get_as<double>(vv, kk);
        else if (kk == "pathloss_intercept_db") w.pathloss_intercept_db = get_as<double>(vv, kk);
        else if (kk == "pathloss_slope_db") w.pathloss_slope_db = get_as<double>(vv, kk);
        else if (kk == "period_ticks") w.period_ticks = get_as<std::int64_t>(vv, kk);
        else if (kk == "gather_tick") w.gather_tick = get_as<std::int64_t>(vv, kk);
        else if (kk == "edge_snr_db") w.edge_snr_db = get_as<double>(vv, kk);
        else if (kk == "angular_spread_deg") w.angular_spread_deg = get_as<double>(vv, kk);
        else if (kk == "max_power") w.max_power = get_as<double>(vv, kk);
        else if (kk == "medium_power") w.medium_power = get_as<double>(vv, kk);
        else if (kk == "seed") w.seed = get_as<std::uint64_t>(vv, kk);
        else return false;
        return true;
      });
    } else if (k == "sb") sb_from_json(v, c.sb, k);
    else if (k == "whitebox_sb") sb_from_json(v, c.whitebox_sb, k);
    else if (k == "train") {
      auto& t = c.train;
      for_each_key(v, k, [&](const std::string& kk, const json& vv) {
        if (kk == "rank") t.rank = get_as<std::size_t>(vv, kk);
        else if (kk == "batch_size") t.batch_size = get_as<std::size_t>(vv, kk);
        else if (kk == "n_train") t.n_train = get_as<std::size_t>(vv, kk);
        else if (kk == "c_decay") t.c_decay = get_as<double>(vv, kk);
        else if (kk == "beta1") t.adam.beta1 = get_as<double>(vv, kk);
        else if (kk == "beta2") t.adam.beta2 = get_as<double>(vv, kk);
        else if (kk == "epsilon") t.adam.epsilon = get_as<double>(vv, kk);
        else if (kk == "lr_factors") t.lr_factors = get_as<double>(vv, kk);
        else if (kk == "lr_linear") t.lr_linear = get_as<double>(vv, kk);
        else if (kk == "init_range") t.init_range = get_as<double>(vv, kk);
        else return false;
        return true;
      });
    } else if (k == "window") c.window = get_as<std::size_t>(v, k);
    else if (k == "reseed_solver") c.reseed_solver = get_as<bool>(v, k);
    else if (k == "incentive") {
      auto& inc = c.incentive;
      for_each_key(v, k, [&](const std::string& kk, const json& vv) {
        if (kk == "initial_c") inc.initial_c = get_as<double>(vv, kk);
        else if (kk == "target_lo") inc.target_lo = get_as<double>(vv, kk);
        else if (kk == "target_hi") inc.target_hi = get_as<double>(vv, kk);
        else if (kk == "adjust_factor") inc.adjust_factor = get_as<double>(vv, kk);
        else if (kk == "c_min") inc.c_min = get_as<double>(vv, kk);
        else if (kk == "c_max") inc.c_max = get_as<double>(vv, kk);
        else return false;
        return true;
      });
    } else if (k == "encoding") {
      auto& e = c.encoding;
      for_each_key(v, k, [&](const std::string& kk, const json& vv) {
        if (kk == "rule") e.rule = parse_rule(get_as<std::string>(vv, kk));
        else if (kk == "factor") e.factor = get_as<double>(vv, kk);
        else if (kk == "fixed_value") e.fixed_value = get_as<double>(vv, kk);
        else if (kk == "floor") e.floor = get_as<double>(vv, kk);
        else return false;
        return true;
      });
    } else if (k == "scaling") {
      for_each_key(v, k, [&](const std::string& kk, const json& vv) {
        if (kk == "single") c.scaling.single = get_as<double>(vv, kk);
        else if (kk == "multi") c.scaling.multi = get_as<double>(vv, kk);
        else return false;
        return true;
      });
    } else if (k == "multi_weights") c.multi_weights = get_as<std::vector<double>>(v, k);
    else if (k == "features") {
      auto& o = c.overrides;
      for_each_key(v, k, [&](const std::string& kk, const json& vv) {
        std::optional<bool> value =
            vv.is_null() ? std::nullopt : std::optional(get_as<bool>(vv, kk));
        if (kk == "sliding_window") o.sliding_window = value;
        else if (kk == "weight_decay") o.weight_decay = value;
        else if (kk == "incentive") o.incentive = value;
        else if (kk == "multi_reward") o.multi_reward = value;
        else return false;
        return true;
      });
    } else if (k == "report") {
      for_each_key(v, k, [&](const std::string& kk, const json& vv) {
        if (kk == "moving_average_window") c.moving_average_window = get_as<std::size_t>(vv, kk);
        else if (kk == "top_k") c.top_k = get_as<std::size_t>(vv, kk);
        else return false;
        return true;
      });
    } else if (k == "snapshots") c.snapshots = get_as<bool>(v, k);
    else return false;
    return true;
  });
}

json parse_document(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw_config(std::string("config is not valid JSON: ") + e.what());
  }
}

}  // namespace

std::string_view to_string(EnvKind env) {
  return env == EnvKind::kSynthetic ? "synthetic" : "wireless";
}

std::string_view to_string(Method method) {
  for (const auto& [m, name] : kMethodNames) {
    if (m == method) return name;
  }
  return "unknown";
}

EnvKind parse_env(std::string_view name) {
  if (name == "synthetic") return EnvKind::kSynthetic;
  if (name == "wireless") return EnvKind::kWireless;
  throw_config("unknown env '" + std::string(name) + "' (expected synthetic|wireless)");
}

Method parse_method(std::string_view name) {
  for (const auto& [m, n] : kMethodNames) {
    if (n == name) return m;
  }
  throw_config("unknown method '" + std::string(name) + "'");
}

std::vector<Method> all_methods() {
  std::vector<Method> out;
  for (const auto& [m, name] : kMethodNames) out.push_back(m);
  return out;
}

bool uses_surrogate(Method method) {
  return method != Method::kRandom && method != Method::kGreedy;
}

Features preset_features(Method method) {
  switch (method) {
    case Method::kRandom:
    case Method::kGreedy:
    case Method::kFmsbBaseline:
      return {};
    case Method::kFmsbS:
      return {true, false, false, false};
    case Method::kFmsbSW:
      return {true, true, false, false};
    case Method::kRtbboSR:
      return {true, true, true, false};
    case Method::kRtbboMR:
      return {true, true, true, true};
  }
  return {};
}

Features ExperimentConfig::features() const {
  Features f = preset_features(method);
  if (overrides.sliding_window) f.sliding_window = *overrides.sliding_window;
  if (overrides.weight_decay) f.weight_decay = *overrides.weight_decay;
  if (overrides.incentive) f.incentive = *overrides.incentive;
  if (overrides.multi_reward) f.multi_reward = *overrides.multi_reward;
  return f;
}

ExperimentConfig default_config(EnvKind env, Method method) {
  ExperimentConfig c;
  c.env = env;
  c.method = method;
  c.whitebox_sb.restarts = 10;
  if (env == EnvKind::kSynthetic) {
    c.trials = 20;
    c.scaling = {0.01, 0.01};
    if (method == Method::kRtbboMR) {
      c.train.lr_factors = 0.0015;
      c.train.lr_linear = 0.0003;
    } else {
      c.train.lr_factors = 0.003;
      c.train.lr_linear = 0.0001;
    }
  } else {
    c.trials = 10;
    c.wireless.rings = 1;
    c.scaling = {100000.0 / 19.0, 1000.0};
    c.encoding.factor = 8.0;
    c.train.lr_factors = 0.003;
    c.train.lr_linear = 0.001;
  }
  return c;
}

void apply_full_scale(ExperimentConfig& c) {
  c.full_scale = true;
  c.trials = 50;
  if (c.env == EnvKind::kWireless) {
    c.wireless.rings = 2;
    c.cycles = 36000;
  } else {
    c.cycles = 6000;
  }
}

void validate(const ExperimentConfig& c) {
  if (c.cycles < 0) throw_config("cycles must be >= 0");
  if (c.method == Method::kGreedy && c.env != EnvKind::kWireless) {
    throw_config("method greedy is only available for env=wireless");
  }
  if (c.window < 1) throw_config("window must be >= 1");
  if (c.top_k < 1) throw_config("report.top_k must be >= 1");
  if (c.moving_average_window < 1) throw_config("report.moving_average_window must be >= 1");
  if (!(c.encoding.factor > 0.0) || !(c.encoding.fixed_value > 0.0) ||
      !(c.encoding.floor > 0.0)) {
    throw_config("encoding factor, fixed_value and floor must be > 0");
  }
  if (!(c.scaling.single > 0.0) || !(c.scaling.multi > 0.0)) {
    throw_config("reward scaling factors must be > 0");
  }
  try {
    validate(c.sb);
    validate(c.whitebox_sb);
    validate(c.train);
    validate(c.incentive);
    if (c.env == EnvKind::kSynthetic) {
      if (c.synthetic.n_spins < 2) throw_config("synthetic.n_spins must be >= 2");
      if (c.synthetic.n_models < 1) throw_config("synthetic.n_models must be >= 1");
      if (c.synthetic.change_end < c.synthetic.change_start) {
        throw_config("synthetic change window must satisfy start <= end");
      }
      if (c.train.rank > c.synthetic.n_spins) throw_config("train.rank exceeds n_spins");
    } else {
      validate(c.wireless);
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kConfig) throw;
    throw_config(e.what());
  }
  const std::size_t rewards =
      c.env == EnvKind::kSynthetic
          ? c.synthetic.n_models
          : static_cast<std::size_t>(1 + 3 * c.wireless.rings * (c.wireless.rings + 1));
  if (!c.multi_weights.empty() && c.multi_weights.size() != rewards) {
    throw_config("multi_weights must have one entry per sub-reward");
  }
}

std::string config_to_json(const ExperimentConfig& cfg, int indent) {
  return to_json_value(cfg).dump(indent);
}

void merge_config_json(ExperimentConfig& cfg, std::string_view patch) {
  apply_json(cfg, parse_document(patch));
}

ExperimentConfig config_from_json(std::string_view text, std::optional<EnvKind> env,
                                  std::optional<Method> method) {
  const json doc = parse_document(text);
  if (!doc.is_object()) throw_config("config must be a JSON object");
  EnvKind e = env.value_or(EnvKind::kSynthetic);
  Method m = method.value_or(Method::kRtbboMR);
  if (!env && doc.contains("env")) e = parse_env(get_as<std::string>(doc["env"], "env"));
  if (!method && doc.contains("method")) {
    m = parse_method(get_as<std::string>(doc["method"], "method"));
  }
  ExperimentConfig cfg = default_config(e, m);
  json rest = doc;
  // Explicit env/method arguments take precedence over the document.
  if (env) rest.erase("env");
  if (method) rest.erase("method");
  apply_json(cfg, rest);
  return cfg;
}

ExperimentConfig load_config(const std::string& path, std::optional<EnvKind> env,
                             std::optional<Method> method) {
  std::ifstream in(path);
  if (!in) throw_io("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return config_from_json(buffer.str(), env, method);
}

}  // namespace rtbbo
