#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rtbbo/ising.hpp"
#include "rtbbo/spin.hpp"

namespace rtbbo {

// n discrete control inputs; input l takes one of d_l >= 2 values and is
// represented by d_l consecutive spins starting at offset(l).
class ActionSpace {
 public:
  ActionSpace() = default;
  explicit ActionSpace(std::vector<std::size_t> cardinalities);
  static ActionSpace uniform(std::size_t n_inputs, std::size_t cardinality);

  std::size_t n_inputs() const noexcept { return cardinalities_.size(); }
  std::size_t n_spins() const noexcept { return n_spins_; }
  std::size_t cardinality(std::size_t l) const { return cardinalities_.at(l); }
  std::size_t offset(std::size_t l) const { return offsets_.at(l); }
  const std::vector<std::size_t>& cardinalities() const noexcept {
    return cardinalities_;
  }
  // Product of cardinalities, saturating at SIZE_MAX.
  std::size_t n_actions() const noexcept;

 private:
  std::vector<std::size_t> cardinalities_;
  std::vector<std::size_t> offsets_;
  std::size_t n_spins_ = 0;
};

// Values x_1..x_n, 0-based.
struct Action {
  std::vector<std::uint16_t> values;
  friend bool operator==(const Action&, const Action&) = default;
};

void validate(const ActionSpace& space, const Action& a);

SpinVector encode(const ActionSpace& space, const Action& a);

struct DecodeResult {
  Action action;
  std::size_t repaired_groups = 0;
};

// Inverse of encode on valid one-hot groups. A group with zero or several +1
// spins keeps previous.values[l].
DecodeResult decode_checked(const ActionSpace& space, const SpinVector& s,
                            const Action& previous);
Action decode(const ActionSpace& space, const SpinVector& s,
              const Action& previous);

// -(c/4) sum_l (sum_{i in group l} s_i + d_l - 2)^2, the one-hot constraint
// term in the maximization frame. Zero exactly on one-hot configurations.
double penalty_value(const ActionSpace& space, double c_encoding,
                     const SpinVector& s);

// Minimization-frame Ising model with energy == -penalty_value.
IsingModel penalty_model(const ActionSpace& space, double c_encoding);

}  // namespace rtbbo
