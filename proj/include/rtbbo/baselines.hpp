#pragma once

#include "rtbbo/encoding.hpp"
#include "rtbbo/random.hpp"
#include "rtbbo/wireless_env.hpp"

namespace rtbbo {

// White-box reference: each station independently picks the pattern that
// maximizes its own received power (ties -> lowest index), ignoring
// interference.
Action greedy_action(const WirelessEnv& env);

// Each value uniform over its cardinality.
Action random_action(const ActionSpace& space, Rng& rng);

}  // namespace rtbbo
