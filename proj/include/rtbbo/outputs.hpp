#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>

#include "rtbbo/runner.hpp"

namespace rtbbo {

// Writes into `dir` (created if needed):
//   cycles.csv     one row per trial and cycle, raw rewards
//   summary.json   aggregate statistics and the top-k curve
//   config.json    the fully resolved config
void emit_outputs(const ExperimentResult& result, const std::filesystem::path& dir);

// Summary of one experiment as a JSON document.
std::string summary_json(const ExperimentResult& result);

// Combines per-run summaries (as produced by summary_json) into
// dir/summary.json, as written by `sweep`.
void emit_sweep_summary(std::span<const std::string> summaries,
                        const std::filesystem::path& dir);

// Plain-text table built from dir/summary.json (single run or sweep).
std::string report(const std::filesystem::path& dir);

// Observer that appends one JSON line per wireless tick: positions, channel
// norms (row = station, column = user), chosen beams, per-cell throughput.
class SnapshotWriter {
 public:
  explicit SnapshotWriter(const std::filesystem::path& path);
  void operator()(const TickView& view);

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

}  // namespace rtbbo
