#include "rtbbo/sliding_window.hpp"

#include <string>

#include "rtbbo/error.hpp"

namespace rtbbo {

SlidingWindow::SlidingWindow(std::size_t capacity, std::size_t reward_arity)
    : capacity_(capacity), reward_arity_(reward_arity) {
  if (capacity == 0) throw_invalid("window capacity must be >= 1");
  if (reward_arity == 0) throw_invalid("window reward arity must be >= 1");
}

void SlidingWindow::push(const SpinVector& spins,
                         const Eigen::Ref<const Eigen::VectorXd>& rewards) {
  if (static_cast<std::size_t>(rewards.size()) != reward_arity_) {
    throw_invalid("window expects " + std::to_string(reward_arity_) +
                  " reward(s) per sample, got " + std::to_string(rewards.size()));
  }
  if (items_.empty() && n_spins_ == 0) {
    n_spins_ = spins.size();
  } else if (spins.size() != n_spins_) {
    throw_invalid("window holds " + std::to_string(n_spins_) +
                  "-spin samples, got " + std::to_string(spins.size()));
  }
  if (items_.size() == capacity_) items_.pop_front();
  items_.push_back(Sample{spins, spins.as_real().transpose(), rewards});
}

}  // namespace rtbbo
