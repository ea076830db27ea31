#include "rtbbo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include "rtbbo/error.hpp"

namespace rtbbo {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

std::vector<double> relative_performance(std::span<const CycleRecord> records,
                                         std::span<const double> whitebox) {
  if (records.size() != whitebox.size()) {
    throw_invalid("relative_performance: records and white-box trace differ in length");
  }
  std::vector<double> out(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    out[i] = whitebox[i] == 0.0 ? kNaN : records[i].total_reward / whitebox[i];
  }
  return out;
}

std::vector<double> relative_performance(std::span<const TrialResult> trials,
                                         std::span<const double> whitebox) {
  std::vector<double> sum(whitebox.size(), 0.0);
  std::vector<std::size_t> count(whitebox.size(), 0);
  for (const auto& trial : trials) {
    const auto rel = relative_performance(trial.records, whitebox);
    for (std::size_t i = 0; i < rel.size(); ++i) {
      if (std::isnan(rel[i])) continue;
      sum[i] += rel[i];
      ++count[i];
    }
  }
  for (std::size_t i = 0; i < sum.size(); ++i) {
    sum[i] = count[i] == 0 ? kNaN : sum[i] / static_cast<double>(count[i]);
  }
  return sum;
}

std::vector<double> top_k_concentration(std::span<const CycleRecord> records,
                                        std::size_t k) {
  if (records.empty()) throw_invalid("top_k_concentration: no records");
  std::map<std::vector<std::uint16_t>, std::size_t> freq;
  for (const auto& r : records) ++freq[r.action.values];
  std::vector<std::size_t> counts;
  counts.reserve(freq.size());
  for (const auto& [_, c] : freq) counts.push_back(c);
  std::sort(counts.begin(), counts.end(), std::greater<>());

  std::vector<double> curve(k, 0.0);
  const double total = static_cast<double>(records.size());
  std::size_t acc = 0;
  for (std::size_t r = 0; r < k; ++r) {
    if (r < counts.size()) acc += counts[r];
    curve[r] = static_cast<double>(acc) / total;
  }
  return curve;
}

std::vector<double> top_k_concentration(std::span<const TrialResult> trials,
                                        std::size_t k) {
  std::vector<double> mean(k, 0.0);
  if (trials.empty()) return mean;
  for (const auto& trial : trials) {
    const auto curve = top_k_concentration(trial.records, k);
    for (std::size_t r = 0; r < k; ++r) mean[r] += curve[r];
  }
  for (auto& v : mean) v /= static_cast<double>(trials.size());
  return mean;
}

std::vector<double> moving_average(std::span<const double> values,
                                   std::size_t window) {
  if (window == 0) throw_invalid("moving_average: window must be positive");
  std::vector<double> out(values.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    acc += values[i];
    if (i >= window) acc -= values[i - window];
    out[i] = acc / static_cast<double>(std::min(i + 1, window));
  }
  return out;
}

std::vector<double> mean_total_reward(std::span<const TrialResult> trials) {
  if (trials.empty()) return {};
  const std::size_t n = trials.front().records.size();
  std::vector<double> mean(n, 0.0);
  for (const auto& trial : trials) {
    if (trial.records.size() != n) {
      throw_invalid("mean_total_reward: trials differ in length");
    }
    for (std::size_t i = 0; i < n; ++i) mean[i] += trial.records[i].total_reward;
  }
  for (auto& v : mean) v /= static_cast<double>(trials.size());
  return mean;
}

double range_mean(std::span<const double> values, std::size_t begin,
                  std::size_t end) {
  end = std::min(end, values.size());
  double acc = 0.0;
  std::size_t n = 0;
  for (std::size_t i = begin; i < end; ++i) {
    if (std::isnan(values[i])) continue;
    acc += values[i];
    ++n;
  }
  return n == 0 ? kNaN : acc / static_cast<double>(n);
}

}  // namespace rtbbo
