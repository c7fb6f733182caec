#include "nornet/sampling.hpp"

namespace nornet {

std::vector<bool> sample_world_indexed(const Network& net, SplitMix64& rng) {
  net.require_valid();
  std::vector<bool> value(net.size(), false);
  for (std::size_t i : net.topological_order()) {
    const Node& node = net.node(i);
    double p;
    if (node.kind == NodeKind::Disease) {
      p = *node.prior;
    } else {
      double all_fail = 1.0 - node.leak;
      for (const ParentLink& parent : net.parents(i)) {
        if (value[parent.node]) all_fail *= 1.0 - parent.eta;
      }
      p = 1.0 - all_fail;
    }
    value[i] = rng.bernoulli(p);
  }
  return value;
}

Assignment sample_world(const Network& net, std::uint64_t seed) {
  SplitMix64 rng(seed);
  const std::vector<bool> value = sample_world_indexed(net, rng);
  Assignment out;
  for (std::size_t i = 0; i < net.size(); ++i) out.emplace(net.node(i).id, value[i]);
  return out;
}

}  // namespace nornet
