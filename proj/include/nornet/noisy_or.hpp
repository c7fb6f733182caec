#pragma once

#include <span>

#include "nornet/network.hpp"

namespace nornet {

// Leaky noisy-OR: P(x | present parents) = 1 - (1 - leak) * prod(1 - eta_i).
// An empty eta list yields the leak itself. Throws Error(Domain) when any
// argument lies outside [0,1].
double noisy_or_prob(double leak, std::span<const double> present_etas);

// P(node present | parents). For a disease the parent assignment is ignored
// and the prior is returned. Throws Error(IncompleteAssignment) if a parent
// is missing from the assignment.
double local_cpd(const Network& net, std::string_view node, const Assignment& parent_assignment);

}  // namespace nornet
