#pragma once

#include <cstdint>
#include <span>

namespace rtbbo {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Moments for a single scalar parameter.
struct AdamScalarState {
  double m = 0.0;
  double v = 0.0;
  std::int64_t t = 0;
};

// One Adam update of a scalar parameter. Increments state.t before the bias
// correction and returns the new parameter value.
double adam_step(AdamScalarState& state, double param, double grad, double lr,
                 const AdamConfig& cfg);

// Element-wise Adam update of a parameter block sharing step count `t`
// (already incremented by the caller).
void adam_update(std::span<double> params, std::span<const double> grads,
                 std::span<double> m, std::span<double> v, std::int64_t t,
                 double lr, const AdamConfig& cfg);

}  // namespace rtbbo
