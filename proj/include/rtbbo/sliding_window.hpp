#pragma once

#include <cstddef>
#include <deque>
#include <limits>

#include <Eigen/Core>

#include "rtbbo/spin.hpp"

namespace rtbbo {

struct Sample {
  SpinVector spins;
  Eigen::RowVectorXd features;  // spins as +-1 doubles
  Eigen::VectorXd rewards;
};

// FIFO of the most recent (spins, rewards) samples. A window built with
// kUnbounded capacity never evicts and serves as a cumulative dataset.
class SlidingWindow {
 public:
  static constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();

  SlidingWindow(std::size_t capacity, std::size_t reward_arity);

  // Evicts the oldest sample once size would exceed capacity.
  void push(const SpinVector& spins, const Eigen::Ref<const Eigen::VectorXd>& rewards);

  std::size_t size() const noexcept { return items_.size(); }
  bool empty() const noexcept { return items_.empty(); }
  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t reward_arity() const noexcept { return reward_arity_; }
  std::size_t n_spins() const noexcept { return n_spins_; }

  // 0 is the oldest sample.
  const Sample& operator[](std::size_t i) const { return items_[i]; }
  const Sample& front() const { return items_.front(); }
  const Sample& back() const { return items_.back(); }

 private:
  std::size_t capacity_;
  std::size_t reward_arity_;
  std::size_t n_spins_ = 0;
  std::deque<Sample> items_;
};

}  // namespace rtbbo
