#include "rtbbo/ising.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "rtbbo/error.hpp"

namespace rtbbo {

IsingModel::IsingModel(std::size_t n_spins)
    : couplings_(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_spins),
                                       static_cast<Eigen::Index>(n_spins))),
      fields_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_spins))) {}

IsingModel::IsingModel(Eigen::MatrixXd couplings, Eigen::VectorXd fields,
                       double offset)
    : fields_(std::move(fields)), offset_(offset) {
  const auto n = fields_.size();
  if (couplings.rows() != n || couplings.cols() != n) {
    throw_invalid("coupling matrix must be " + std::to_string(n) + "x" +
                  std::to_string(n));
  }
  if (!couplings.allFinite() || !fields_.allFinite() || !std::isfinite(offset)) {
    throw_invalid("Ising model coefficients must be finite");
  }
  couplings_ = 0.5 * (couplings + couplings.transpose());
  couplings_.diagonal().setZero();
}

IsingModel& IsingModel::operator+=(const IsingModel& other) {
  if (other.size() != size()) {
    throw_invalid("cannot add Ising models of size " + std::to_string(size()) +
                  " and " + std::to_string(other.size()));
  }
  couplings_ += other.couplings_;
  fields_ += other.fields_;
  offset_ += other.offset_;
  return *this;
}

IsingModel& IsingModel::operator*=(double scale) {
  couplings_ *= scale;
  fields_ *= scale;
  offset_ *= scale;
  return *this;
}

double energy(const IsingModel& model,
              const Eigen::Ref<const Eigen::VectorXd>& s) {
  if (static_cast<std::size_t>(s.size()) != model.size()) {
    throw_invalid("spin vector has length " + std::to_string(s.size()) +
                  ", model has " + std::to_string(model.size()) + " spins");
  }
  return -0.5 * s.dot(model.couplings() * s) + model.fields().dot(s) +
         model.offset();
}

double energy(const IsingModel& model, const SpinVector& s) {
  if (s.size() != model.size()) {
    throw_invalid("spin vector has length " + std::to_string(s.size()) +
                  ", model has " + std::to_string(model.size()) + " spins");
  }
  return energy(model, s.as_real());
}

GroundState brute_force_min(const IsingModel& model) {
  const std::size_t n = model.size();
  if (n > kBruteForceMaxSpins) {
    throw_capacity("brute_force_min supports at most " +
                   std::to_string(kBruteForceMaxSpins) + " spins, got " +
                   std::to_string(n));
  }
  if (n == 0) return {SpinVector{}, model.offset()};

  // Gray-code walk starting from all spins at -1 (index 0). local[i] holds
  // dH/ds_i = -(J s)_i + h_i, so flipping spin i changes H by -2 s_i local[i].
  const auto& J = model.couplings();
  Eigen::VectorXd s = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), -1.0);
  Eigen::VectorXd local = -(J * s) + model.fields();
  double current = energy(model, s);

  std::uint64_t best_index = 0;
  double best = current;
  std::uint64_t index = 0;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t step = 1; step < total; ++step) {
    const auto bit = static_cast<Eigen::Index>(std::countr_zero(step));
    const double si = s[bit];
    current += -2.0 * si * local[bit];
    s[bit] = -si;
    // J has a zero diagonal, so local[bit] itself is unaffected.
    local.noalias() += (2.0 * si) * J.col(bit);
    index ^= std::uint64_t{1} << bit;

    // Incremental sums drift slightly; treat near-equal energies as ties.
    const double tol = 1e-9 * (1.0 + std::abs(best));
    if (current < best - tol ||
        (std::abs(current - best) <= tol && index < best_index)) {
      best = std::min(best, current);
      best_index = index;
    }
  }
  GroundState out{SpinVector::from_bits(best_index, n), 0.0};
  out.energy = energy(model, out.spins);
  return out;
}

}  // namespace rtbbo
