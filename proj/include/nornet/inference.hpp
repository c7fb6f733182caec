#pragma once

#include <cstddef>
#include <map>
#include <span>

#include "nornet/network.hpp"

namespace nornet {

enum class InferenceMethod { Auto, Enumeration, Elimination };

struct InferenceOptions {
  InferenceMethod method = InferenceMethod::Auto;
  // Auto switches to variable elimination above this many hidden nodes.
  std::size_t enumeration_threshold = 20;
  // Largest parent set materialized as a full table during elimination.
  std::size_t max_parents = 12;
  // Largest intermediate factor (in variables) elimination may build.
  std::size_t max_factor_vars = 24;
};

struct PosteriorResult {
  std::map<NodeId, double> posterior;  // P(disease present | evidence)
  double evidence_likelihood = 1.0;    // P(evidence)
};

// Product of the local terms of a total assignment.
double joint_prob(const Network& net, const Assignment& full_assignment);

// Marginal probability of a partial assignment over any nodes. Nodes that are
// neither assigned nor ancestors of an assigned node are summed out for free.
double probability_of(const Network& net, const Assignment& partial,
                      const InferenceOptions& options = {});

// Exact per-disease posteriors given evidence on findings. Throws
// Error(Domain) for evidence on a non-finding and
// Error(InconsistentEvidence) when P(evidence) = 0.
PosteriorResult posterior(const Network& net, const Assignment& evidence,
                          const InferenceOptions& options = {});

// P(all listed diseases present | evidence).
double conjunction_posterior(const Network& net, const Assignment& evidence,
                             std::span<const NodeId> diseases, const InferenceOptions& options = {});

// P(node present) with no evidence.
double marginal(const Network& net, std::string_view node, const InferenceOptions& options = {});

// Number of hidden nodes a query over the given assigned nodes would sum
// over after barren-node pruning (decides the Auto path).
std::size_t hidden_node_count(const Network& net, const Assignment& assigned);

}  // namespace nornet
