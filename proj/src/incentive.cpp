#include <algorithm>
#include <string>

#include "rtbbo/adaptation.hpp"
#include "rtbbo/error.hpp"

namespace rtbbo {

void validate(const IncentiveConfig& cfg) {
  if (!(cfg.initial_c > 0.0)) throw_invalid("initial c_exploration must be > 0");
  if (!(cfg.target_lo >= 0.0 && cfg.target_lo <= cfg.target_hi)) {
    throw_invalid("incentive target range must satisfy 0 <= lo <= hi");
  }
  if (!(cfg.adjust_factor > 1.0)) throw_invalid("adjust_factor must be > 1");
  if (!(cfg.c_min > 0.0 && cfg.c_min <= cfg.c_max)) {
    throw_invalid("incentive clamp range must satisfy 0 < c_min <= c_max");
  }
}

IncentiveState::IncentiveState(const IncentiveConfig& cfg)
    : config(cfg), c_exploration(cfg.initial_c) {
  validate(cfg);
}

double IncentiveState::mean_counter() const {
  if (counters.empty()) return 0.0;
  double sum = 0.0;
  for (auto c : counters) sum += static_cast<double>(c);
  return sum / static_cast<double>(counters.size());
}

void incentive_update(IncentiveState& st, const SpinVector& s_new) {
  if (!st.initialized()) {
    st.counters.assign(s_new.size(), 0);
    st.last = s_new;
    return;
  }
  if (s_new.size() != st.last.size()) {
    throw_invalid("incentive_update: expected " + std::to_string(st.last.size()) +
                  " spins, got " + std::to_string(s_new.size()));
  }
  for (std::size_t i = 0; i < s_new.size(); ++i) {
    st.counters[i] = s_new[i] == st.last[i] ? st.counters[i] + 1 : 0;
  }
  st.last = s_new;
}

Eigen::VectorXd incentive_terms(const IncentiveState& st) {
  const auto n = static_cast<Eigen::Index>(st.counters.size());
  Eigen::VectorXd terms(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto c = static_cast<double>(st.counters[static_cast<std::size_t>(i)]);
    terms[i] = -st.c_exploration * c * c * st.last[static_cast<std::size_t>(i)];
  }
  return terms;
}

void adjust_c_exploration(IncentiveState& st) {
  const double mu = st.mean_counter();
  if (mu > st.config.target_hi) {
    st.c_exploration *= st.config.adjust_factor;
  } else if (mu < st.config.target_lo) {
    st.c_exploration /= st.config.adjust_factor;
  }
  st.c_exploration = std::clamp(st.c_exploration, st.config.c_min, st.config.c_max);
}

}  // namespace rtbbo
