#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace nornet {

using NodeId = std::string;

enum class NodeKind { Disease, IPS, Finding };

std::string_view to_string(NodeKind kind);
std::optional<NodeKind> parse_node_kind(std::string_view text);

inline constexpr int kPhaseCount = 5;

struct Node {
  NodeId id;
  NodeKind kind = NodeKind::Finding;
  double leak = 0.0;
  std::optional<double> prior;  // diseases only
  std::optional<int> phase;     // findings only, 1..kPhaseCount

  friend bool operator==(const Node&, const Node&) = default;
};

struct Edge {
  NodeId src;
  NodeId dst;
  double eta = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// Partial or total assignment of nodes to present (true) / absent (false).
using Assignment = std::map<NodeId, bool>;

struct Violation {
  std::string rule;     // e.g. "level ordering", "DAG", "eta range"
  std::string subject;  // node id or "src->dst"
  std::string detail;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct ParentLink {
  std::size_t node;
  double eta;
};

// Immutable leveled DAG of binary leaky noisy-OR nodes. Nodes are kept sorted
// by id and edges by (src, dst); indices into nodes() are stable for the
// lifetime of the object. Construction never throws on invariant violations:
// they are collected and exposed through validate().
class Network {
 public:
  Network() = default;
  Network(std::string name, std::vector<Node> nodes, std::vector<Edge> edges);

  const std::string& name() const { return name_; }
  std::span<const Node> nodes() const { return nodes_; }
  std::span<const Edge> edges() const { return edges_; }
  std::size_t size() const { return nodes_.size(); }

  std::optional<std::size_t> index_of(std::string_view id) const;
  // Throws Error(Domain) for unknown ids.
  std::size_t require_index(std::string_view id) const;
  const Node& node(std::size_t index) const { return nodes_[index]; }
  const Node& node(std::string_view id) const { return nodes_[require_index(id)]; }

  std::span<const ParentLink> parents(std::size_t index) const { return parents_[index]; }
  std::span<const ParentLink> children(std::size_t index) const { return children_[index]; }
  std::optional<double> eta(std::string_view src, std::string_view dst) const;

  // Kahn order with smallest-id tie-break. Covers every node only when acyclic.
  std::span<const std::size_t> topological_order() const { return topo_; }

  std::vector<std::size_t> indices_of_kind(NodeKind kind) const;
  std::size_t count(NodeKind kind) const;

  const std::vector<Violation>& violations() const { return violations_; }
  bool valid() const { return violations_.empty(); }
  // Throws Error(Validation) listing the first violation.
  void require_valid() const;

  friend bool operator==(const Network& a, const Network& b) {
    return a.name_ == b.name_ && a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
  }

 private:
  void check_invariants();

  std::string name_;
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<ParentLink>> parents_;
  std::vector<std::vector<ParentLink>> children_;
  std::vector<std::size_t> topo_;
  std::vector<Violation> violations_;
};

// Every violated structural or range invariant; empty for a valid network.
std::vector<Violation> validate(const Network& net);

}  // namespace nornet
