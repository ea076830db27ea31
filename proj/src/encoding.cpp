#include "rtbbo/encoding.hpp"

#include <limits>
#include <string>

#include "rtbbo/error.hpp"

namespace rtbbo {

ActionSpace::ActionSpace(std::vector<std::size_t> cardinalities)
    : cardinalities_(std::move(cardinalities)) {
  offsets_.reserve(cardinalities_.size());
  for (std::size_t l = 0; l < cardinalities_.size(); ++l) {
    const std::size_t d = cardinalities_[l];
    if (d < 2) {
      throw_invalid("cardinality of input " + std::to_string(l) +
                    " must be >= 2, got " + std::to_string(d));
    }
    if (d > std::numeric_limits<std::uint16_t>::max()) {
      throw_invalid("cardinality of input " + std::to_string(l) + " too large");
    }
    offsets_.push_back(n_spins_);
    n_spins_ += d;
  }
}

ActionSpace ActionSpace::uniform(std::size_t n_inputs, std::size_t cardinality) {
  return ActionSpace(std::vector<std::size_t>(n_inputs, cardinality));
}

std::size_t ActionSpace::n_actions() const noexcept {
  std::size_t total = 1;
  for (auto d : cardinalities_) {
    if (total > std::numeric_limits<std::size_t>::max() / d) {
      return std::numeric_limits<std::size_t>::max();
    }
    total *= d;
  }
  return total;
}

void validate(const ActionSpace& space, const Action& a) {
  if (a.values.size() != space.n_inputs()) {
    throw_invalid("action has " + std::to_string(a.values.size()) +
                  " values, space has " + std::to_string(space.n_inputs()) +
                  " inputs");
  }
  for (std::size_t l = 0; l < a.values.size(); ++l) {
    if (a.values[l] >= space.cardinality(l)) {
      throw_invalid("action value " + std::to_string(a.values[l]) +
                    " out of range for input " + std::to_string(l) +
                    " (cardinality " + std::to_string(space.cardinality(l)) + ")");
    }
  }
}

SpinVector encode(const ActionSpace& space, const Action& a) {
  validate(space, a);
  SpinVector s(space.n_spins(), -1);
  for (std::size_t l = 0; l < a.values.size(); ++l) {
    s.set(space.offset(l) + a.values[l], 1);
  }
  return s;
}

DecodeResult decode_checked(const ActionSpace& space, const SpinVector& s,
                            const Action& previous) {
  if (s.size() != space.n_spins()) {
    throw_invalid("spin vector has length " + std::to_string(s.size()) +
                  ", action space needs " + std::to_string(space.n_spins()));
  }
  validate(space, previous);
  DecodeResult out{previous, 0};
  for (std::size_t l = 0; l < space.n_inputs(); ++l) {
    const std::size_t base = space.offset(l);
    std::size_t hot = 0;
    std::size_t hot_index = 0;
    for (std::size_t i = 0; i < space.cardinality(l); ++i) {
      if (s[base + i] > 0) {
        ++hot;
        hot_index = i;
      }
    }
    if (hot == 1) {
      out.action.values[l] = static_cast<std::uint16_t>(hot_index);
    } else {
      ++out.repaired_groups;
    }
  }
  return out;
}

Action decode(const ActionSpace& space, const SpinVector& s,
              const Action& previous) {
  return decode_checked(space, s, previous).action;
}

double penalty_value(const ActionSpace& space, double c_encoding,
                     const SpinVector& s) {
  if (s.size() != space.n_spins()) {
    throw_invalid("spin vector length does not match action space");
  }
  double total = 0.0;
  for (std::size_t l = 0; l < space.n_inputs(); ++l) {
    const auto d = static_cast<double>(space.cardinality(l));
    double sum = 0.0;
    for (std::size_t i = 0; i < space.cardinality(l); ++i) {
      sum += s[space.offset(l) + i];
    }
    const double excess = sum + d - 2.0;
    total += excess * excess;
  }
  return -0.25 * c_encoding * total;
}

IsingModel penalty_model(const ActionSpace& space, double c_encoding) {
  if (!(c_encoding > 0.0)) throw_invalid("c_encoding must be > 0");
  // (c/4)(S + d - 2)^2 with S^2 = d + 2 sum_{i<j} s_i s_j expands to
  //   -1/2 sum_{i != j} (-c/2) s_i s_j + (c/2)(d - 2) S + (c/4)(d + (d-2)^2).
  const auto n = static_cast<Eigen::Index>(space.n_spins());
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd h = Eigen::VectorXd::Zero(n);
  double offset = 0.0;
  for (std::size_t l = 0; l < space.n_inputs(); ++l) {
    const auto base = static_cast<Eigen::Index>(space.offset(l));
    const auto d = static_cast<Eigen::Index>(space.cardinality(l));
    const auto dd = static_cast<double>(d);
    J.block(base, base, d, d).setConstant(-0.5 * c_encoding);
    h.segment(base, d).setConstant(0.5 * c_encoding * (dd - 2.0));
    offset += 0.25 * c_encoding * (dd + (dd - 2.0) * (dd - 2.0));
  }
  return IsingModel(std::move(J), std::move(h), offset);
}

}  // namespace rtbbo
