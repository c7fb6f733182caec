#pragma once

#include <cstdint>

#include "nornet/network.hpp"
#include "nornet/rng.hpp"

namespace nornet {

// Ancestral sample of every node: diseases from their priors, every other
// node from its leaky noisy-OR given the sampled parents. Requires a valid
// network (throws Error(Validation) otherwise).
Assignment sample_world(const Network& net, std::uint64_t seed);

// Same, drawing from an existing stream. Returns values indexed like
// net.nodes().
std::vector<bool> sample_world_indexed(const Network& net, SplitMix64& rng);

}  // namespace nornet
