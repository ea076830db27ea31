#include "rtbbo/outputs.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <system_error>

#include "json.hpp"
#include "rtbbo/error.hpp"
#include "rtbbo/metrics.hpp"
#include "rtbbo/wireless_env.hpp"

namespace rtbbo {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Shortest round-trip form so reruns give byte-identical files.
std::string num(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw_io("cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw_io("write failed: " + path.string());
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw_io("cannot create " + dir.string() + ": " + ec.message());
}

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;
};

MeanStd mean_std(const std::vector<double>& v) {
  MeanStd out;
  if (v.empty()) return out;
  for (double x : v) out.mean += x;
  out.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - out.mean) * (x - out.mean);
    out.stddev = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return out;
}

json summary_object(const ExperimentResult& r) {
  const ExperimentConfig& cfg = r.config;
  json s;
  s["env"] = std::string(to_string(cfg.env));
  s["method"] = std::string(to_string(cfg.method));
  s["trials"] = r.trials.size();
  s["cycles"] = cfg.cycles;

  std::vector<double> averages;
  std::size_t violations = 0;
  std::size_t records = 0;
  for (const auto& trial : r.trials) {
    double acc = 0.0;
    for (const auto& rec : trial.records) {
      acc += rec.total_reward;
      violations += rec.violation ? 1 : 0;
    }
    records += trial.records.size();
    averages.push_back(trial.records.empty() ? 0.0
                                             : acc / static_cast<double>(trial.records.size()));
  }
  const MeanStd avg = mean_std(averages);
  s["average_reward"] = {{"mean", avg.mean}, {"stddev", avg.stddev}};
  s["violation_rate"] =
      records == 0 ? 0.0 : static_cast<double>(violations) / static_cast<double>(records);

  const auto curve = r.trials.empty() ? std::vector<double>{}
                                      : top_k_concentration(r.trials, cfg.top_k);
  s["top_k"] = curve;

  const auto mean_curve = mean_total_reward(r.trials);
  const auto n = static_cast<std::size_t>(std::max<std::int64_t>(cfg.cycles, 0));
  if (cfg.env == EnvKind::kSynthetic && !r.whitebox.empty() && !r.trials.empty()) {
    const auto rel = relative_performance(r.trials, r.whitebox);
    const auto start = static_cast<std::size_t>(cfg.synthetic.change_start);
    const auto end = static_cast<std::size_t>(cfg.synthetic.change_end);
    s["relative_performance"] = {
        {"all", number_or_null(range_mean(rel, 0, n))},
        {"static", number_or_null(range_mean(rel, start / 2, start))},
        {"changing", number_or_null(range_mean(rel, start, end))},
        {"static_range", {start / 2, start}},
        {"changing_range", {start, end}},
    };
  } else if (cfg.env == EnvKind::kWireless && !r.trials.empty()) {
    const auto gather = static_cast<std::size_t>(cfg.wireless.gather_tick);
    const std::size_t lo = gather >= 500 ? gather - 500 : 0;
    s["throughput"] = {
        {"all", number_or_null(range_mean(mean_curve, 0, n))},
        {"congestion", number_or_null(range_mean(mean_curve, lo, gather + 500))},
        {"congestion_range", {lo, gather + 500}},
    };
  }
  return s;
}

void write_csv(const ExperimentResult& r, const fs::path& path) {
  std::ofstream out = open_out(path);
  out << "t,trial,total_reward,relative_performance,moving_avg_throughput,"
         "mean_counter,c_exploration,violation\n";
  const bool synthetic = r.config.env == EnvKind::kSynthetic;
  for (const auto& trial : r.trials) {
    std::vector<double> rel;
    std::vector<double> smooth;
    if (synthetic && r.whitebox.size() == trial.records.size()) {
      rel = relative_performance(trial.records, r.whitebox);
    }
    if (!synthetic) {
      std::vector<double> totals;
      totals.reserve(trial.records.size());
      for (const auto& rec : trial.records) totals.push_back(rec.total_reward);
      smooth = moving_average(totals, r.config.moving_average_window);
    }
    for (std::size_t i = 0; i < trial.records.size(); ++i) {
      const CycleRecord& rec = trial.records[i];
      out << rec.t << ',' << trial.trial << ',' << num(rec.total_reward) << ','
          << (rel.empty() ? "" : num(rel[i])) << ','
          << (smooth.empty() ? "" : num(smooth[i])) << ',' << num(rec.mean_counter)
          << ',' << num(rec.c_exploration) << ',' << (rec.violation ? 1 : 0) << '\n';
    }
  }
  finish(out, path);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out = open_out(path);
  out << text << '\n';
  finish(out, path);
}

std::string fixed(const json& v, int digits = 4) {
  if (!v.is_number()) return "-";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v.get<double>());
  return buf;
}

void report_row(std::ostringstream& os, const json& s) {
  char line[256];
  const json& avg = s.at("average_reward");
  const json& curve = s.at("top_k");
  std::string extra_a = "-";
  std::string extra_b = "-";
  std::string extra_c = "-";
  if (s.contains("relative_performance")) {
    const json& rp = s["relative_performance"];
    extra_a = fixed(rp["all"]);
    extra_b = fixed(rp["static"]);
    extra_c = fixed(rp["changing"]);
  } else if (s.contains("throughput")) {
    extra_a = fixed(s["throughput"]["all"]);
    extra_b = fixed(s["throughput"]["congestion"]);
    extra_c = fixed(s.value("violation_rate", json()));
  }
  std::snprintf(line, sizeof line, "%-14s %6zu %12s %10s %10s %10s %10s %8s\n",
                s.at("method").get<std::string>().c_str(), s.at("trials").get<std::size_t>(),
                fixed(avg["mean"]).c_str(), fixed(avg["stddev"]).c_str(), extra_a.c_str(),
                extra_b.c_str(), extra_c.c_str(),
                curve.empty() ? "-" : fixed(curve.back(), 3).c_str());
  os << line;
}

}  // namespace

std::string summary_json(const ExperimentResult& result) {
  return summary_object(result).dump(2);
}

void emit_outputs(const ExperimentResult& result, const fs::path& dir) {
  ensure_dir(dir);
  write_csv(result, dir / "cycles.csv");
  write_text(dir / "summary.json", summary_json(result));
  write_text(dir / "config.json", config_to_json(result.config));
}

void emit_sweep_summary(std::span<const std::string> summaries, const fs::path& dir) {
  ensure_dir(dir);
  json runs = json::array();
  for (const auto& s : summaries) runs.push_back(json::parse(s));
  write_text(dir / "summary.json", json{{"runs", runs}}.dump(2));
}

std::string report(const fs::path& dir) {
  const fs::path path = dir / "summary.json";
  std::ifstream in(path);
  if (!in) throw_io("cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw_io(path.string() + ": " + e.what());
  }
  std::vector<json> runs;
  if (doc.contains("runs")) {
    for (const auto& r : doc["runs"]) runs.push_back(r);
  } else {
    runs.push_back(doc);
  }
  std::ostringstream os;
  const bool wireless = !runs.empty() && runs.front().value("env", "") == "wireless";
  char header[256];
  std::snprintf(header, sizeof header, "%-14s %6s %12s %10s %10s %10s %10s %8s\n", "method",
                "trials", "avg_reward", "stddev", wireless ? "thr_all" : "rel_all",
                wireless ? "thr_cong" : "rel_static", wireless ? "violations" : "rel_change", "top_k");
  os << header;
  try {
    for (const auto& r : runs) report_row(os, r);
  } catch (const json::exception& e) {
    throw_io(path.string() + ": malformed summary: " + e.what());
  }
  return os.str();
}

SnapshotWriter::SnapshotWriter(const fs::path& path) : path_(path) {
  if (path.has_parent_path()) ensure_dir(path.parent_path());
  out_ = open_out(path);
}

void SnapshotWriter::operator()(const TickView& view) {
  if (view.wireless == nullptr || view.action == nullptr) return;
  const WirelessEnv& env = *view.wireless;
  json line;
  line["t"] = view.t;
  json users = json::array();
  json stations = json::array();
  for (std::size_t k = 0; k < env.n_cells(); ++k) {
    const Point u = env.user_position(k);
    const Point b = env.stations()[k];
    users.push_back({u.x, u.y});
    stations.push_back({b.x, b.y});
  }
  line["stations"] = stations;
  line["users"] = users;
  json gains = json::array();
  for (std::size_t i = 0; i < env.n_cells(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < env.n_cells(); ++k) row.push_back(env.channel(i, k).norm());
    gains.push_back(row);
  }
  line["channel_magnitude"] = gains;
  line["beams"] = view.action->values;
  const Eigen::VectorXd thr = env.throughputs(*view.action);
  line["throughput"] = std::vector<double>(thr.data(), thr.data() + thr.size());
  out_ << line.dump() << '\n';
  if (!out_) throw_io("write failed: " + path_.string());
}

}  // namespace rtbbo
