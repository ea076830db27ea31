#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rtbbo/runner.hpp"

namespace rtbbo {

// Per-cycle total reward divided by the white-box value at that cycle.
// Cycles whose white-box value is 0 are NaN (excluded).
std::vector<double> relative_performance(std::span<const CycleRecord> records,
                                         std::span<const double> whitebox);
// Trial average of the above; NaN samples are skipped.
std::vector<double> relative_performance(std::span<const TrialResult> trials,
                                         std::span<const double> whitebox);

// Cumulative share of cycles covered by the 1..k most frequent actions.
// Entry r-1 is the share of the top r actions; the curve stays flat once all
// distinct actions are counted.
std::vector<double> top_k_concentration(std::span<const CycleRecord> records,
                                        std::size_t k = 100);
// Element-wise mean of the per-trial curves.
std::vector<double> top_k_concentration(std::span<const TrialResult> trials,
                                        std::size_t k = 100);

// Trailing moving average; early entries average what is available.
std::vector<double> moving_average(std::span<const double> values,
                                   std::size_t window);

// Per-cycle total reward averaged over trials.
std::vector<double> mean_total_reward(std::span<const TrialResult> trials);

// Mean of values[begin, end) ignoring NaN; NaN if nothing is left.
double range_mean(std::span<const double> values, std::size_t begin,
                  std::size_t end);

}  // namespace rtbbo
