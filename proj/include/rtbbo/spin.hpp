#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace rtbbo {

// A configuration of N Ising spins. Every entry is exactly -1 or +1.
class SpinVector {
 public:
  SpinVector() = default;
  explicit SpinVector(std::size_t n, std::int8_t fill = -1);
  explicit SpinVector(std::vector<std::int8_t> values);
  SpinVector(std::initializer_list<int> values);

  // Binarizes real values; sign(0) is +1.
  static SpinVector from_signs(const Eigen::Ref<const Eigen::VectorXd>& x);
  // Spin i is +1 iff bit i of `bits` is set.
  static SpinVector from_bits(std::uint64_t bits, std::size_t n);

  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  std::int8_t operator[](std::size_t i) const { return values_[i]; }
  void set(std::size_t i, int value);
  void flip(std::size_t i) { values_[i] = static_cast<std::int8_t>(-values_[i]); }

  std::span<const std::int8_t> values() const noexcept { return values_; }
  Eigen::VectorXd as_real() const;
  // "+-+-..." form, used as a compact key for action statistics.
  std::string to_string() const;

  friend bool operator==(const SpinVector&, const SpinVector&) = default;

 private:
  std::vector<std::int8_t> values_;
};

}  // namespace rtbbo
