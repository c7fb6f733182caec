#include "nornet/generator.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include "nornet/error.hpp"
#include "nornet/rng.hpp"

namespace nornet {

namespace {

std::string make_id(char prefix, std::size_t i, std::size_t count) {
  const int width = static_cast<int>(std::to_string(count).size());
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c%0*zu", prefix, width, i + 1);
  return buf;
}

void check_range(RealRange r, double lo, double hi, bool open_lo, const char* what) {
  const bool lo_ok = open_lo ? r.lo > lo : r.lo >= lo;
  if (!(lo_ok && r.lo <= r.hi && r.hi <= hi)) {
    throw Error(ErrorClass::Config, std::string(what) + " range is empty or leaves its legal bounds");
  }
}

int draw_phase(SplitMix64& rng, const std::array<double, kPhaseCount>& weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  double u = rng.uniform() * total;
  for (int k = 0; k < kPhaseCount; ++k) {
    if (u < weights[k]) return k + 1;
    u -= weights[k];
  }
  for (int k = kPhaseCount - 1; k >= 0; --k) {
    if (weights[k] > 0.0) return k + 1;
  }
  return kPhaseCount;
}

// First k elements of a partial Fisher-Yates shuffle.
std::vector<std::size_t> choose(SplitMix64& rng, std::vector<std::size_t> pool, std::size_t k) {
  k = std::min(k, pool.size());
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = static_cast<std::size_t>(
        rng.uniform_int(static_cast<std::int64_t>(i), static_cast<std::int64_t>(pool.size() - 1)));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace

void check_config(const GeneratorConfig& cfg) {
  if (cfg.n_diseases == 0) throw Error(ErrorClass::Config, "at least one disease is required");
  if (cfg.n_findings == 0) throw Error(ErrorClass::Config, "at least one finding is required");
  if (cfg.fan_in.lo < 1 || cfg.fan_in.lo > cfg.fan_in.hi) {
    throw Error(ErrorClass::Config, "fan-in range must satisfy 1 <= lo <= hi");
  }
  if (cfg.fan_out.lo < 1 || cfg.fan_out.lo > cfg.fan_out.hi) {
    throw Error(ErrorClass::Config, "fan-out range must satisfy 1 <= lo <= hi");
  }
  if (cfg.n_ips > 0) {
    if (cfg.fan_in.lo > cfg.n_diseases) {
      throw Error(ErrorClass::Config, "fan-in lower bound " + std::to_string(cfg.fan_in.lo) +
                                          " exceeds the " + std::to_string(cfg.n_diseases) +
                                          " available diseases");
    }
    if (cfg.fan_in.hi > cfg.n_diseases && cfg.ips_chain_prob == 0.0) {
      throw Error(ErrorClass::Config, "fan-in upper bound " + std::to_string(cfg.fan_in.hi) +
                                          " exceeds the available predecessors");
    }
    if (cfg.fan_out.hi > cfg.n_findings) {
      throw Error(ErrorClass::Config, "fan-out upper bound " + std::to_string(cfg.fan_out.hi) +
                                          " exceeds the " + std::to_string(cfg.n_findings) +
                                          " available findings");
    }
  }
  if (!(cfg.ips_chain_prob >= 0.0 && cfg.ips_chain_prob <= 1.0)) {
    throw Error(ErrorClass::Config, "ips chain probability must lie in [0,1]");
  }
  check_range(cfg.eta, 0.0, 1.0, true, "eta");
  check_range(cfg.leak, 0.0, 1.0, false, "leak");
  check_range(cfg.prior, 0.0, 1.0, false, "prior");
  double total = 0.0;
  for (double w : cfg.phase_weights) {
    if (!(w >= 0.0)) throw Error(ErrorClass::Config, "phase weights must be nonnegative");
    total += w;
  }
  if (!(total > 0.0)) throw Error(ErrorClass::Config, "phase weights must not all be zero");
}

Network generate_network(const GeneratorConfig& cfg) {
  check_config(cfg);
  SplitMix64 rng(cfg.seed);
  auto eta = [&] { return rng.uniform_real(cfg.eta.lo, cfg.eta.hi); };

  std::vector<Node> nodes;
  std::vector<NodeId> diseases, ips, findings;
  for (std::size_t i = 0; i < cfg.n_diseases; ++i) {
    diseases.push_back(make_id('D', i, cfg.n_diseases));
    nodes.push_back({diseases.back(), NodeKind::Disease, 0.0,
                     rng.uniform_real(cfg.prior.lo, cfg.prior.hi), std::nullopt});
  }
  for (std::size_t i = 0; i < cfg.n_ips; ++i) {
    ips.push_back(make_id('I', i, cfg.n_ips));
    nodes.push_back({ips.back(), NodeKind::IPS, rng.uniform_real(cfg.leak.lo, cfg.leak.hi),
                     std::nullopt, std::nullopt});
  }
  for (std::size_t i = 0; i < cfg.n_findings; ++i) {
    findings.push_back(make_id('F', i, cfg.n_findings));
    const double leak = rng.uniform_real(cfg.leak.lo, cfg.leak.hi);
    nodes.push_back({findings.back(), NodeKind::Finding, leak, std::nullopt,
                     draw_phase(rng, cfg.phase_weights)});
  }

  std::vector<Edge> edges;
  std::vector<char> has_parent(cfg.n_findings, 0);
  for (std::size_t j = 0; j < cfg.n_ips; ++j) {
    // Pool indices < n_diseases are diseases, the rest earlier IPS nodes.
    std::vector<std::size_t> pool(cfg.n_diseases);
    std::iota(pool.begin(), pool.end(), 0);
    for (std::size_t e = 0; e < j; ++e) {
      if (rng.bernoulli(cfg.ips_chain_prob)) pool.push_back(cfg.n_diseases + e);
    }
    const auto k = static_cast<std::size_t>(rng.uniform_int(
        static_cast<std::int64_t>(cfg.fan_in.lo), static_cast<std::int64_t>(cfg.fan_in.hi)));
    for (std::size_t src : choose(rng, pool, k)) {
      const NodeId& id = src < cfg.n_diseases ? diseases[src] : ips[src - cfg.n_diseases];
      edges.push_back({id, ips[j], eta()});
    }
  }
  for (std::size_t j = 0; j < cfg.n_ips; ++j) {
    std::vector<std::size_t> pool(cfg.n_findings);
    std::iota(pool.begin(), pool.end(), 0);
    const auto k = static_cast<std::size_t>(rng.uniform_int(
        static_cast<std::int64_t>(cfg.fan_out.lo), static_cast<std::int64_t>(cfg.fan_out.hi)));
    for (std::size_t f : choose(rng, pool, k)) {
      edges.push_back({ips[j], findings[f], eta()});
      has_parent[f] = 1;
    }
  }
  for (std::size_t f = 0; f < cfg.n_findings; ++f) {
    if (has_parent[f]) continue;
    const auto d = static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(cfg.n_diseases) - 1));
    edges.push_back({diseases[d], findings[f], eta()});
  }

  Network net(cfg.name, std::move(nodes), std::move(edges));
  net.require_valid();
  return net;
}

}  // namespace nornet
