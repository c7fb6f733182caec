#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nornet/network.hpp"

namespace nornet {

// Serial composition of a two-edge path: p * q.
double compose_serial(double p, double q);

// Merges already-composed parallel path probabilities into one edge:
// 1 - prod(1 - c_j). Throws Error(Domain) on an empty list.
double merge_parallel(std::span<const double> composed);

// Leak of successor C after absorbing the eliminated node B's leak through
// the B->C edge of activation q: 1 - (1 - rho_b * q)(1 - rho_c).
double absorb_leak(double rho_b, double q, double rho_c);

// Which original paths were folded into one reduced edge.
struct PathProvenance {
  NodeId src;
  NodeId dst;
  std::vector<std::vector<NodeId>> source_paths;
  std::vector<double> composed_etas;  // product of original etas along each path
};

struct ReductionReport {
  Network reduced;
  std::vector<PathProvenance> provenance;  // sorted by (src, dst)
  std::size_t param_count_original = 0;
  std::size_t param_count_reduced = 0;
  std::vector<NodeId> eliminated_ips_order;
};

// Edges plus nodes with a nonzero leak.
std::size_t parameter_count(const Network& net);

// Removes one IPS node: every predecessor P (eta p) and successor S (eta q)
// gain an edge P->S of eta p*q, merged in parallel with any existing P->S
// edge; each successor absorbs b's leak once. Throws Error(Domain) if b is
// not an IPS node and Error(Validation) on an invalid network.
Network eliminate_ips(const Network& net, std::string_view ips);

// Eliminates every IPS node in topological order (NodeId tie-break) and
// records provenance for each resulting edge.
ReductionReport level_reduce(const Network& net);

}  // namespace nornet
