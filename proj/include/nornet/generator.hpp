#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>

#include "nornet/network.hpp"

namespace nornet {

struct IntRange {
  std::size_t lo = 1;
  std::size_t hi = 1;
};

struct RealRange {
  double lo = 0.0;
  double hi = 0.0;
};

// Synthetic three-level network profile. fan_in bounds the predecessors of
// each IPS node; fan_out bounds its finding children (IPS->IPS arcs added by
// ips_chain_prob come on top). Findings left without a parent get a single
// disease parent.
struct GeneratorConfig {
  std::string name = "generated";
  std::size_t n_diseases = 2;
  std::size_t n_ips = 2;
  std::size_t n_findings = 38;
  IntRange fan_in{1, 2};
  IntRange fan_out{1, 3};
  double ips_chain_prob = 0.0;
  RealRange eta{0.2, 0.9};
  RealRange leak{0.0, 0.05};
  RealRange prior{0.05, 0.3};
  std::array<double, kPhaseCount> phase_weights{1.0, 1.0, 1.0, 1.0, 1.0};
  std::uint64_t seed = 0;
};

// Throws Error(Config) describing the first infeasible setting.
void check_config(const GeneratorConfig& cfg);

// Deterministic in cfg (including the seed); the result always validates.
Network generate_network(const GeneratorConfig& cfg);

}  // namespace nornet
