#include "rtbbo/baselines.hpp"

#include <cstdint>

namespace rtbbo {

Action greedy_action(const WirelessEnv& env) {
  Action a;
  a.values.resize(env.n_cells());
  for (std::size_t k = 0; k < env.n_cells(); ++k) {
    std::size_t best = 0;
    double best_power = env.received_power(k, k, 0);
    for (std::size_t x = 1; x < kBeamPatterns; ++x) {
      const double p = env.received_power(k, k, x);
      if (p > best_power) {
        best_power = p;
        best = x;
      }
    }
    a.values[k] = static_cast<std::uint16_t>(best);
  }
  return a;
}

Action random_action(const ActionSpace& space, Rng& rng) {
  Action a;
  a.values.resize(space.n_inputs());
  for (std::size_t l = 0; l < space.n_inputs(); ++l) {
    std::uniform_int_distribution<std::size_t> pick(0, space.cardinality(l) - 1);
    a.values[l] = static_cast<std::uint16_t>(pick(rng));
  }
  return a;
}

}  // namespace rtbbo
