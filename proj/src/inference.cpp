#include "nornet/inference.hpp"

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>

#include "nornet/error.hpp"

namespace nornet {

namespace {

constexpr std::int8_t kHidden = -1;
constexpr std::size_t kMaxEnumerated = 30;

// Evidence projected onto node indices plus the ancestor-closed set of nodes
// the query actually depends on. Everything else is barren and sums to one.
struct Query {
  const Network* net = nullptr;
  std::vector<std::int8_t> state;
  std::vector<char> relevant;
  std::vector<std::size_t> order;   // relevant nodes, topological
  std::vector<std::size_t> hidden;  // relevant and unobserved, id order
};

Query make_query(const Network& net, const Assignment& assigned) {
  net.require_valid();
  Query q;
  q.net = &net;
  q.state.assign(net.size(), kHidden);
  q.relevant.assign(net.size(), 0);
  std::vector<std::size_t> stack;
  for (const auto& [id, value] : assigned) {
    const std::size_t i = net.require_index(id);
    q.state[i] = value ? 1 : 0;
    if (!q.relevant[i]) {
      q.relevant[i] = 1;
      stack.push_back(i);
    }
  }
  while (!stack.empty()) {
    const std::size_t u = stack.back();
    stack.pop_back();
    for (const ParentLink& p : net.parents(u)) {
      if (!q.relevant[p.node]) {
        q.relevant[p.node] = 1;
        stack.push_back(p.node);
      }
    }
  }
  for (std::size_t i : net.topological_order()) {
    if (q.relevant[i]) q.order.push_back(i);
  }
  for (std::size_t i = 0; i < net.size(); ++i) {
    if (q.relevant[i] && q.state[i] == kHidden) q.hidden.push_back(i);
  }
  return q;
}

double present_probability(const Network& net, std::size_t i, const std::vector<std::int8_t>& state) {
  const Node& node = net.node(i);
  if (node.kind == NodeKind::Disease) return *node.prior;
  double all_fail = 1.0 - node.leak;
  for (const ParentLink& p : net.parents(i)) {
    if (state[p.node] == 1) all_fail *= 1.0 - p.eta;
  }
  return 1.0 - all_fail;
}

double local_term(const Network& net, std::size_t i, const std::vector<std::int8_t>& state) {
  const double p = present_probability(net, i, state);
  return state[i] == 1 ? p : 1.0 - p;
}

// ---- enumeration ---------------------------------------------------------

struct EnumerationResult {
  double total = 0.0;
  std::vector<double> present_mass;  // parallel to Query::hidden
};

EnumerationResult enumerate(const Query& q) {
  const std::size_t h = q.hidden.size();
  if (h > kMaxEnumerated) {
    throw Error(ErrorClass::Capacity,
                "enumeration over " + std::to_string(h) + " hidden nodes is not supported");
  }
  const Network& net = *q.net;
  std::vector<std::int8_t> state = q.state;
  EnumerationResult r;
  r.present_mass.assign(h, 0.0);
  const std::uint64_t worlds = std::uint64_t{1} << h;
  for (std::uint64_t mask = 0; mask < worlds; ++mask) {
    for (std::size_t j = 0; j < h; ++j) state[q.hidden[j]] = (mask >> j) & 1U;
    double w = 1.0;
    for (std::size_t i : q.order) {
      w *= local_term(net, i, state);
      if (w == 0.0) break;
    }
    if (w == 0.0) continue;
    r.total += w;
    for (std::size_t j = 0; j < h; ++j) {
      if ((mask >> j) & 1U) r.present_mass[j] += w;
    }
  }
  return r;
}

// ---- variable elimination -----------------------------------------------

struct Factor {
  std::vector<std::size_t> vars;  // sorted node indices; bit j of a row index is vars[j]
  std::vector<double> table;
};

Factor multiply(const Factor& a, const Factor& b, std::size_t max_vars) {
  Factor out;
  std::set_union(a.vars.begin(), a.vars.end(), b.vars.begin(), b.vars.end(),
                 std::back_inserter(out.vars));
  if (out.vars.size() > max_vars) {
    throw Error(ErrorClass::Capacity, "elimination factor over " + std::to_string(out.vars.size()) +
                                          " variables exceeds the configured limit");
  }
  auto positions = [&out](const Factor& f) {
    std::vector<std::size_t> pos;
    for (std::size_t v : f.vars) {
      pos.push_back(static_cast<std::size_t>(
          std::lower_bound(out.vars.begin(), out.vars.end(), v) - out.vars.begin()));
    }
    return pos;
  };
  const auto pa = positions(a);
  const auto pb = positions(b);
  const std::size_t rows = std::size_t{1} << out.vars.size();
  out.table.resize(rows);
  for (std::size_t row = 0; row < rows; ++row) {
    std::size_t ia = 0;
    std::size_t ib = 0;
    for (std::size_t j = 0; j < pa.size(); ++j) ia |= ((row >> pa[j]) & 1U) << j;
    for (std::size_t j = 0; j < pb.size(); ++j) ib |= ((row >> pb[j]) & 1U) << j;
    out.table[row] = a.table[ia] * b.table[ib];
  }
  return out;
}

Factor sum_out(const Factor& f, std::size_t var) {
  const std::size_t k = static_cast<std::size_t>(
      std::find(f.vars.begin(), f.vars.end(), var) - f.vars.begin());
  Factor out;
  for (std::size_t v : f.vars) {
    if (v != var) out.vars.push_back(v);
  }
  out.table.assign(std::size_t{1} << out.vars.size(), 0.0);
  const std::size_t low = (std::size_t{1} << k) - 1;
  for (std::size_t row = 0; row < f.table.size(); ++row) {
    const std::size_t reduced = (row & low) | ((row >> (k + 1)) << k);
    out.table[reduced] += f.table[row];
  }
  return out;
}

Factor local_factor(const Query& q, std::size_t i, const InferenceOptions& options) {
  const Network& net = *q.net;
  if (net.parents(i).size() > options.max_parents) {
    throw Error(ErrorClass::Capacity, "node '" + net.node(i).id + "' has " +
                                          std::to_string(net.parents(i).size()) +
                                          " parents; the elimination limit is " +
                                          std::to_string(options.max_parents));
  }
  Factor f;
  if (q.state[i] == kHidden) f.vars.push_back(i);
  for (const ParentLink& p : net.parents(i)) {
    if (q.state[p.node] == kHidden) f.vars.push_back(p.node);
  }
  std::sort(f.vars.begin(), f.vars.end());
  std::vector<std::int8_t> state = q.state;
  const std::size_t rows = std::size_t{1} << f.vars.size();
  f.table.resize(rows);
  for (std::size_t row = 0; row < rows; ++row) {
    for (std::size_t j = 0; j < f.vars.size(); ++j) state[f.vars[j]] = (row >> j) & 1U;
    f.table[row] = local_term(net, i, state);
  }
  return f;
}

// Min-degree elimination order over the interaction graph, smallest node
// index (= smallest id) on ties, with fill edges added as nodes are removed.
std::vector<std::size_t> min_degree_order(const std::vector<Factor>& factors,
                                          const std::vector<std::size_t>& hidden) {
  std::map<std::size_t, std::set<std::size_t>> adj;
  for (std::size_t v : hidden) adj[v];
  for (const Factor& f : factors) {
    for (std::size_t a : f.vars) {
      for (std::size_t b : f.vars) {
        if (a != b) adj[a].insert(b);
      }
    }
  }
  std::vector<std::size_t> order;
  while (!adj.empty()) {
    auto best = adj.begin();
    for (auto it = adj.begin(); it != adj.end(); ++it) {
      if (it->second.size() < best->second.size()) best = it;
    }
    const std::size_t v = best->first;
    const std::set<std::size_t> neighbours = best->second;
    for (std::size_t a : neighbours) {
      adj[a].erase(v);
      for (std::size_t b : neighbours) {
        if (a != b) adj[a].insert(b);
      }
    }
    adj.erase(v);
    order.push_back(v);
  }
  return order;
}

double eliminate(const Query& q, const InferenceOptions& options) {
  std::vector<Factor> factors;
  factors.reserve(q.order.size());
  for (std::size_t i : q.order) factors.push_back(local_factor(q, i, options));

  for (std::size_t v : min_degree_order(factors, q.hidden)) {
    std::vector<Factor> keep;
    std::optional<Factor> product;
    for (Factor& f : factors) {
      if (std::binary_search(f.vars.begin(), f.vars.end(), v)) {
        product = product ? multiply(*product, f, options.max_factor_vars) : std::move(f);
      } else {
        keep.push_back(std::move(f));
      }
    }
    if (product) keep.push_back(sum_out(*product, v));
    factors = std::move(keep);
  }
  double result = 1.0;
  for (const Factor& f : factors) result *= f.table.at(0);
  return result;
}

bool use_enumeration(const Query& q, const InferenceOptions& options) {
  switch (options.method) {
    case InferenceMethod::Enumeration: return true;
    case InferenceMethod::Elimination: return false;
    case InferenceMethod::Auto: return q.hidden.size() <= options.enumeration_threshold;
  }
  return true;
}

double query_probability(const Query& q, const InferenceOptions& options) {
  return use_enumeration(q, options) ? enumerate(q).total : eliminate(q, options);
}

}  // namespace

double joint_prob(const Network& net, const Assignment& full_assignment) {
  net.require_valid();
  std::vector<std::int8_t> state(net.size(), kHidden);
  for (const auto& [id, value] : full_assignment) state[net.require_index(id)] = value ? 1 : 0;
  for (std::size_t i = 0; i < net.size(); ++i) {
    if (state[i] == kHidden) {
      throw Error(ErrorClass::IncompleteAssignment,
                  "joint_prob needs a value for '" + net.node(i).id + "'");
    }
  }
  double p = 1.0;
  for (std::size_t i = 0; i < net.size(); ++i) p *= local_term(net, i, state);
  return p;
}

double probability_of(const Network& net, const Assignment& partial, const InferenceOptions& options) {
  return query_probability(make_query(net, partial), options);
}

std::size_t hidden_node_count(const Network& net, const Assignment& assigned) {
  return make_query(net, assigned).hidden.size();
}

PosteriorResult posterior(const Network& net, const Assignment& evidence,
                          const InferenceOptions& options) {
  for (const auto& [id, value] : evidence) {
    const Node& n = net.node(id);
    if (n.kind != NodeKind::Finding) {
      throw Error(ErrorClass::Domain, "evidence on " + std::string(to_string(n.kind)) + " node '" +
                                          id + "'; only findings may be observed");
    }
  }
  Query q = make_query(net, evidence);
  PosteriorResult result;

  std::vector<double> present_mass(q.hidden.size(), 0.0);
  if (use_enumeration(q, options)) {
    EnumerationResult r = enumerate(q);
    result.evidence_likelihood = r.total;
    present_mass = std::move(r.present_mass);
  } else {
    result.evidence_likelihood = eliminate(q, options);
    for (std::size_t j = 0; j < q.hidden.size(); ++j) {
      if (net.node(q.hidden[j]).kind != NodeKind::Disease) continue;
      q.state[q.hidden[j]] = 1;
      present_mass[j] = eliminate(q, options);
      q.state[q.hidden[j]] = kHidden;
    }
  }
  if (!(result.evidence_likelihood > 0.0)) {
    throw Error(ErrorClass::InconsistentEvidence, "evidence has probability zero");
  }

  for (std::size_t i : net.indices_of_kind(NodeKind::Disease)) {
    result.posterior[net.node(i).id] = *net.node(i).prior;
  }
  for (std::size_t j = 0; j < q.hidden.size(); ++j) {
    const Node& n = net.node(q.hidden[j]);
    if (n.kind == NodeKind::Disease) {
      result.posterior[n.id] = std::clamp(present_mass[j] / result.evidence_likelihood, 0.0, 1.0);
    }
  }
  return result;
}

double conjunction_posterior(const Network& net, const Assignment& evidence,
                             std::span<const NodeId> diseases, const InferenceOptions& options) {
  Assignment joint = evidence;
  for (const NodeId& d : diseases) {
    if (net.node(d).kind != NodeKind::Disease) {
      throw Error(ErrorClass::Domain, "conjunction member '" + d + "' is not a disease");
    }
    joint[d] = true;
  }
  for (const auto& [id, value] : evidence) {
    if (net.node(id).kind != NodeKind::Finding) {
      throw Error(ErrorClass::Domain, "evidence on non-finding node '" + id + "'");
    }
  }
  const double pe = probability_of(net, evidence, options);
  if (!(pe > 0.0)) throw Error(ErrorClass::InconsistentEvidence, "evidence has probability zero");
  return probability_of(net, joint, options) / pe;
}

double marginal(const Network& net, std::string_view node, const InferenceOptions& options) {
  net.require_index(node);
  return probability_of(net, Assignment{{std::string(node), true}}, options);
}

}  // namespace nornet
