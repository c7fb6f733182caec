#include "nornet/reduction.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <utility>

#include "nornet/error.hpp"

namespace nornet {

double compose_serial(double p, double q) { return p * q; }

double merge_parallel(std::span<const double> composed) {
  if (composed.empty()) throw Error(ErrorClass::Domain, "merge_parallel needs at least one path");
  double all_fail = 1.0;
  for (double c : composed) {
    if (!(c >= 0.0 && c <= 1.0)) {
      throw Error(ErrorClass::Domain, "path probability " + std::to_string(c) + " outside [0,1]");
    }
    all_fail *= 1.0 - c;
  }
  return 1.0 - all_fail;
}

double absorb_leak(double rho_b, double q, double rho_c) {
  return 1.0 - (1.0 - compose_serial(rho_b, q)) * (1.0 - rho_c);
}

std::size_t parameter_count(const Network& net) {
  std::size_t leaks = static_cast<std::size_t>(std::count_if(
      net.nodes().begin(), net.nodes().end(), [](const Node& n) { return n.leak != 0.0; }));
  return net.edges().size() + leaks;
}

namespace {

struct PathSet {
  std::vector<std::vector<NodeId>> paths;
  std::vector<double> etas;
};

using EdgeKey = std::pair<NodeId, NodeId>;

// Mutable working copy used while eliminating nodes one at a time.
struct WorkingGraph {
  std::string name;
  std::map<NodeId, Node> nodes;
  std::map<EdgeKey, double> edges;
  std::map<EdgeKey, PathSet> provenance;
  bool track_provenance = false;

  explicit WorkingGraph(const Network& net, bool track) : name(net.name()), track_provenance(track) {
    for (const Node& n : net.nodes()) nodes.emplace(n.id, n);
    for (const Edge& e : net.edges()) {
      edges.emplace(EdgeKey{e.src, e.dst}, e.eta);
      if (track) provenance.emplace(EdgeKey{e.src, e.dst}, PathSet{{{e.src, e.dst}}, {e.eta}});
    }
  }

  void eliminate(const NodeId& b) {
    std::vector<std::pair<NodeId, double>> preds;
    std::vector<std::pair<NodeId, double>> succs;
    for (const auto& [key, eta] : edges) {
      if (key.second == b) preds.emplace_back(key.first, eta);
      if (key.first == b) succs.emplace_back(key.second, eta);
    }
    const double rho_b = nodes.at(b).leak;

    for (const auto& [s, q] : succs) {
      for (const auto& [p_id, p] : preds) {
        const EdgeKey key{p_id, s};
        const double composed = compose_serial(p, q);
        auto it = edges.find(key);
        if (it == edges.end()) {
          edges.emplace(key, composed);
        } else {
          const double both[] = {it->second, composed};
          it->second = merge_parallel(both);
        }
        if (track_provenance) {
          const PathSet& in = provenance.at({p_id, b});
          const PathSet& out = provenance.at({b, s});
          PathSet& dst = provenance[key];
          for (std::size_t i = 0; i < in.paths.size(); ++i) {
            for (std::size_t j = 0; j < out.paths.size(); ++j) {
              std::vector<NodeId> path = in.paths[i];
              path.insert(path.end(), out.paths[j].begin() + 1, out.paths[j].end());
              dst.paths.push_back(std::move(path));
              dst.etas.push_back(in.etas[i] * out.etas[j]);
            }
          }
        }
      }
      Node& succ = nodes.at(s);
      succ.leak = absorb_leak(rho_b, q, succ.leak);
    }

    for (const auto& [p_id, p] : preds) {
      edges.erase({p_id, b});
      provenance.erase({p_id, b});
    }
    for (const auto& [s, q] : succs) {
      edges.erase({b, s});
      provenance.erase({b, s});
    }
    nodes.erase(b);
  }

  Network build() const {
    std::vector<Node> ns;
    ns.reserve(nodes.size());
    for (const auto& [id, n] : nodes) ns.push_back(n);
    std::vector<Edge> es;
    es.reserve(edges.size());
    for (const auto& [key, eta] : edges) es.push_back({key.first, key.second, eta});
    return Network(name, std::move(ns), std::move(es));
  }
};

}  // namespace

Network eliminate_ips(const Network& net, std::string_view ips) {
  net.require_valid();
  const Node& b = net.node(ips);
  if (b.kind != NodeKind::IPS) {
    throw Error(ErrorClass::Domain, "'" + b.id + "' is a " + std::string(to_string(b.kind)) +
                                        " node, not an IPS node");
  }
  WorkingGraph g(net, false);
  g.eliminate(b.id);
  return g.build();
}

ReductionReport level_reduce(const Network& net) {
  net.require_valid();
  ReductionReport report;
  for (std::size_t i : net.topological_order()) {
    if (net.node(i).kind == NodeKind::IPS) report.eliminated_ips_order.push_back(net.node(i).id);
  }
  WorkingGraph g(net, true);
  for (const NodeId& b : report.eliminated_ips_order) g.eliminate(b);

  report.reduced = g.build();
  for (auto& [key, set] : g.provenance) {
    report.provenance.push_back({key.first, key.second, std::move(set.paths), std::move(set.etas)});
  }
  report.param_count_original = parameter_count(net);
  report.param_count_reduced = parameter_count(report.reduced);
  return report;
}

}  // namespace nornet
