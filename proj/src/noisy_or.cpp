#include "nornet/noisy_or.hpp"

#include <string>

#include "nornet/error.hpp"

namespace nornet {

namespace {

void check_probability(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw Error(ErrorClass::Domain, std::string(what) + " " + std::to_string(x) + " outside [0,1]");
  }
}

}  // namespace

double noisy_or_prob(double leak, std::span<const double> present_etas) {
  check_probability(leak, "leak");
  double all_fail = 1.0 - leak;
  for (double eta : present_etas) {
    check_probability(eta, "eta");
    all_fail *= 1.0 - eta;
  }
  return 1.0 - all_fail;
}

double local_cpd(const Network& net, std::string_view node, const Assignment& parent_assignment) {
  const std::size_t index = net.require_index(node);
  const Node& n = net.node(index);
  if (n.kind == NodeKind::Disease) {
    if (!n.prior) throw Error(ErrorClass::Domain, "disease '" + n.id + "' has no prior");
    return *n.prior;
  }
  std::vector<double> present;
  for (const ParentLink& p : net.parents(index)) {
    const NodeId& pid = net.node(p.node).id;
    auto it = parent_assignment.find(pid);
    if (it == parent_assignment.end()) {
      throw Error(ErrorClass::IncompleteAssignment,
                  "parent '" + pid + "' of '" + n.id + "' has no value");
    }
    if (it->second) present.push_back(p.eta);
  }
  return noisy_or_prob(n.leak, present);
}

}  // namespace nornet
