#include "nornet/network.hpp"

#include <algorithm>
#include <cctype>
#include <tuple>
#include <functional>
#include <queue>
#include <sstream>

#include "nornet/error.hpp"

namespace nornet {

std::string_view to_string(ErrorClass c) {
  switch (c) {
    case ErrorClass::Domain: return "domain";
    case ErrorClass::IncompleteAssignment: return "incomplete_assignment";
    case ErrorClass::InconsistentEvidence: return "inconsistent_evidence";
    case ErrorClass::Validation: return "validation";
    case ErrorClass::Parse: return "parse";
    case ErrorClass::Config: return "config";
    case ErrorClass::Exhaustion: return "exhaustion";
    case ErrorClass::DegenerateVariance: return "degenerate_variance";
    case ErrorClass::Capacity: return "capacity";
    case ErrorClass::Io: return "io";
  }
  return "unknown";
}

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::Disease: return "disease";
    case NodeKind::IPS: return "ips";
    case NodeKind::Finding: return "finding";
  }
  return "unknown";
}

std::optional<NodeKind> parse_node_kind(std::string_view text) {
  if (text == "disease") return NodeKind::Disease;
  if (text == "ips") return NodeKind::IPS;
  if (text == "finding") return NodeKind::Finding;
  return std::nullopt;
}

namespace {

bool is_probability(double x) { return x >= 0.0 && x <= 1.0; }

bool level_ordering_allows(NodeKind src, NodeKind dst) {
  switch (src) {
    case NodeKind::Disease: return dst == NodeKind::IPS || dst == NodeKind::Finding;
    case NodeKind::IPS: return dst == NodeKind::IPS || dst == NodeKind::Finding;
    case NodeKind::Finding: return false;
  }
  return false;
}

std::string edge_subject(const Edge& e) { return e.src + "->" + e.dst; }

}  // namespace

Network::Network(std::string name, std::vector<Node> nodes, std::vector<Edge> edges)
    : name_(std::move(name)), nodes_(std::move(nodes)), edges_(std::move(edges)) {
  std::stable_sort(nodes_.begin(), nodes_.end(),
                   [](const Node& a, const Node& b) { return a.id < b.id; });
  std::stable_sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.src, a.dst) < std::tie(b.src, b.dst);
  });
  check_invariants();
}

void Network::check_invariants() {
  const std::size_t n = nodes_.size();
  parents_.assign(n, {});
  children_.assign(n, {});

  for (std::size_t i = 0; i < n; ++i) {
    const Node& node = nodes_[i];
    if (!index_.emplace(node.id, i).second) {
      violations_.push_back({"duplicate node", node.id, "node id declared more than once"});
      continue;
    }
    if (node.id.empty() ||
        std::any_of(node.id.begin(), node.id.end(), [](unsigned char c) { return std::isspace(c); })) {
      violations_.push_back({"node id", node.id, "ids must be nonempty without whitespace"});
    }
    if (!is_probability(node.leak)) {
      violations_.push_back({"leak range", node.id, "leak must lie in [0,1]"});
    }
    if (node.kind == NodeKind::Disease) {
      if (node.leak != 0.0) {
        violations_.push_back({"disease leak", node.id, "disease nodes carry leak 0"});
      }
      if (!node.prior) {
        violations_.push_back({"prior", node.id, "disease node requires a prior"});
      } else if (!is_probability(*node.prior)) {
        violations_.push_back({"prior", node.id, "prior must lie in [0,1]"});
      }
    } else if (node.prior) {
      violations_.push_back({"prior", node.id, "only disease nodes carry a prior"});
    }
    if (node.kind == NodeKind::Finding) {
      if (!node.phase) {
        violations_.push_back({"phase", node.id, "finding node requires a phase"});
      } else if (*node.phase < 1 || *node.phase > kPhaseCount) {
        violations_.push_back({"phase", node.id, "phase must lie in 1..5"});
      }
    } else if (node.phase) {
      violations_.push_back({"phase", node.id, "only finding nodes carry a phase"});
    }
  }

  const Edge* previous = nullptr;
  for (const Edge& e : edges_) {
    const bool duplicate = previous && previous->src == e.src && previous->dst == e.dst;
    previous = &e;
    if (duplicate) {
      violations_.push_back({"duplicate edge", edge_subject(e), "at most one edge per (src,dst)"});
      continue;
    }
    auto s = index_.find(e.src);
    auto d = index_.find(e.dst);
    if (s == index_.end() || d == index_.end()) {
      violations_.push_back({"unknown node", edge_subject(e), "edge endpoint is not a declared node"});
      continue;
    }
    if (!(e.eta > 0.0 && e.eta <= 1.0)) {
      violations_.push_back({"eta range", edge_subject(e), "eta must lie in (0,1]"});
    }
    if (!level_ordering_allows(nodes_[s->second].kind, nodes_[d->second].kind)) {
      std::ostringstream os;
      os << to_string(nodes_[s->second].kind) << " -> " << to_string(nodes_[d->second].kind)
         << " is not allowed";
      violations_.push_back({"level ordering", edge_subject(e), os.str()});
    }
    parents_[d->second].push_back({s->second, e.eta});
    children_[s->second].push_back({d->second, e.eta});
  }

  // Kahn's algorithm; index order equals id order because nodes are sorted.
  std::vector<std::size_t> indegree(n, 0);
  for (std::size_t i = 0; i < n; ++i) indegree[i] = parents_[i].size();
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.push(i);
  }
  topo_.reserve(n);
  while (!ready.empty()) {
    std::size_t u = ready.top();
    ready.pop();
    topo_.push_back(u);
    for (const ParentLink& c : children_[u]) {
      if (--indegree[c.node] == 0) ready.push(c.node);
    }
  }
  if (topo_.size() < n) {
    std::string members;
    for (std::size_t i = 0; i < n; ++i) {
      if (indegree[i] > 0) {
        if (!members.empty()) members += ',';
        members += nodes_[i].id;
      }
    }
    violations_.push_back({"DAG", members, "edge relation contains a cycle"});
  }
}

std::optional<std::size_t> Network::index_of(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Network::require_index(std::string_view id) const {
  auto i = index_of(id);
  if (!i) throw Error(ErrorClass::Domain, "unknown node '" + std::string(id) + "'");
  return *i;
}

std::optional<double> Network::eta(std::string_view src, std::string_view dst) const {
  auto s = index_of(src);
  auto d = index_of(dst);
  if (!s || !d) return std::nullopt;
  for (const ParentLink& c : children_[*s]) {
    if (c.node == *d) return c.eta;
  }
  return std::nullopt;
}

std::vector<std::size_t> Network::indices_of_kind(NodeKind kind) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].kind == kind) out.push_back(i);
  }
  return out;
}

std::size_t Network::count(NodeKind kind) const {
  return static_cast<std::size_t>(std::count_if(
      nodes_.begin(), nodes_.end(), [kind](const Node& n) { return n.kind == kind; }));
}

void Network::require_valid() const {
  if (violations_.empty()) return;
  const Violation& v = violations_.front();
  std::string msg = "network '" + name_ + "' is invalid: " + v.rule + " at " + v.subject;
  if (violations_.size() > 1) {
    msg += " (and " + std::to_string(violations_.size() - 1) + " more)";
  }
  throw Error(ErrorClass::Validation, msg);
}

std::vector<Violation> validate(const Network& net) { return net.violations(); }

}  // namespace nornet
