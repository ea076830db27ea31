#include <string>

#include "rtbbo/adaptation.hpp"
#include "rtbbo/error.hpp"

namespace rtbbo {

IsingModel assemble_acquisition(const IsingModel& surrogate,
                                const Eigen::Ref<const Eigen::VectorXd>& incentive) {
  if (incentive.size() != 0 &&
      static_cast<std::size_t>(incentive.size()) != surrogate.size()) {
    throw_invalid("incentive has " + std::to_string(incentive.size()) +
                  " terms, surrogate has " + std::to_string(surrogate.size()) +
                  " spins");
  }
  if (incentive.size() == 0) return surrogate;
  // A maximization-frame term +b_i s_i becomes the field -b_i.
  return IsingModel(surrogate.couplings(), surrogate.fields() - incentive,
                    surrogate.offset());
}

IsingModel assemble_acquisition(const IsingModel& surrogate,
                                const Eigen::Ref<const Eigen::VectorXd>& incentive,
                                const IsingModel& penalty) {
  if (penalty.size() != surrogate.size()) {
    throw_invalid("penalty has " + std::to_string(penalty.size()) +
                  " spins, surrogate has " + std::to_string(surrogate.size()));
  }
  return assemble_acquisition(surrogate, incentive) + penalty;
}

IsingModel integrate_multi(std::span<const FMParams> submodels,
                           std::span<const double> weights) {
  if (submodels.empty()) throw_invalid("integrate_multi: no submodels");
  if (weights.size() != submodels.size()) {
    throw_invalid("integrate_multi: need one weight per submodel");
  }
  const auto n = submodels.front().factors.rows();
  const auto k = submodels.front().factors.cols();
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd h = Eigen::VectorXd::Zero(n);
  double offset = 0.0;
  for (std::size_t m = 0; m < submodels.size(); ++m) {
    const FMParams& p = submodels[m];
    validate(p);
    if (p.factors.rows() != n || p.factors.cols() != k) {
      throw_invalid("integrate_multi: submodel " + std::to_string(m) +
                    " has a different shape");
    }
    J.noalias() += weights[m] * (p.factors * p.factors.transpose());
    h -= weights[m] * p.linear;
    offset -= weights[m] * p.bias;
  }
  return IsingModel(std::move(J), std::move(h), offset);
}

}  // namespace rtbbo
