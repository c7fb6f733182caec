#include "nornet/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nornet/error.hpp"

namespace nornet {

namespace {

void check_probability(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw Error(ErrorClass::Domain, std::string(what) + " " + std::to_string(x) + " outside [0,1]");
  }
}

void check_all(std::span<const double> xs, const char* what) {
  for (double x : xs) check_probability(x, what);
}

double product_of_complements(std::span<const double> xs, double scale = 1.0) {
  double r = 1.0;
  for (double x : xs) r *= 1.0 - x * scale;
  return r;
}

struct FanOutOne {
  double q;
  double rho_f;
};

FanOutOne require_fan_out_one(const StarConfig& cfg) {
  if (cfg.q.size() != 1 || cfg.rho_f.size() != 1) {
    throw Error(ErrorClass::Domain, "fan-out-1 star needs exactly one q and one finding leak");
  }
  if (cfg.p.empty()) throw Error(ErrorClass::Domain, "star needs at least one disease");
  check_all(cfg.p, "p");
  check_probability(cfg.q[0], "q");
  check_probability(cfg.rho_i, "rho_I");
  check_probability(cfg.rho_f[0], "rho_F");
  return {cfg.q[0], cfg.rho_f[0]};
}

double three_level_likelihood_term(const StarConfig& cfg, FanOutOne s) {
  const double none = product_of_complements(cfg.p);
  return s.q * (1.0 - cfg.rho_i) * (1.0 - none) + s.rho_f * none;
}

double two_level_likelihood_term(const StarConfig& cfg, FanOutOne s) {
  return (1.0 - product_of_complements(cfg.p, s.q)) * (1.0 - s.rho_f);
}

}  // namespace

FanStats fan_stats(const Network& net) {
  FanStats stats;
  for (std::size_t i : net.indices_of_kind(NodeKind::IPS)) {
    Fan fan{net.parents(i).size(), net.children(i).size()};
    stats.per_ips.emplace(net.node(i).id, fan);
    stats.max_fan_in = std::max(stats.max_fan_in, fan.fan_in);
    stats.max_fan_out = std::max(stats.max_fan_out, fan.fan_out);
    stats.mean_fan_in += static_cast<double>(fan.fan_in);
    stats.mean_fan_out += static_cast<double>(fan.fan_out);
  }
  if (!stats.per_ips.empty()) {
    stats.mean_fan_in /= static_cast<double>(stats.per_ips.size());
    stats.mean_fan_out /= static_cast<double>(stats.per_ips.size());
  }
  return stats;
}

double ratio_r1_exact(const StarConfig& cfg) {
  const FanOutOne s = require_fan_out_one(cfg);
  const double denominator = two_level_likelihood_term(cfg, s);
  if (denominator == 0.0) throw Error(ErrorClass::Domain, "R1 denominator is zero");
  return three_level_likelihood_term(cfg, s) / denominator;
}

double ratio_r1_two_disease(double p1, double p2, double q, double rho_i, double rho_f) {
  for (double x : {p1, p2, q, rho_i, rho_f}) check_probability(x, "argument");
  const double denominator = (1.0 - rho_f) * (p1 + p2 - q * p1 * p2);
  if (denominator == 0.0) throw Error(ErrorClass::Domain, "R1 denominator is zero");
  return (1.0 - rho_i) * (p1 + p2 - p1 * p2) / denominator;
}

RatioR2 ratio_r2(double p, std::span<const double> q, std::span<const double> rho_f) {
  if (q.empty() || q.size() != rho_f.size()) {
    throw Error(ErrorClass::Domain, "R2 needs n >= 1 q values and as many finding leaks");
  }
  check_probability(p, "p");
  check_all(q, "q");
  check_all(rho_f, "rho_F");
  double all_q = 1.0;
  double all_leaks = 1.0;
  double reduced = 1.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    all_q *= q[i];
    all_leaks *= rho_f[i];
    reduced *= p * q[i];
  }
  if (reduced == 0.0) throw Error(ErrorClass::Domain, "R2 denominator is zero");
  RatioR2 r;
  r.exact = (p * all_q + (1.0 - p) * all_leaks) / reduced;
  r.approx = 1.0 / std::pow(p, static_cast<double>(q.size() - 1));
  return r;
}

ClosedFormPosteriors closed_form_posteriors(const StarConfig& cfg, double prior_d, double p_f) {
  const FanOutOne s = require_fan_out_one(cfg);
  if (!(prior_d > 0.0 && prior_d <= 1.0) || !(p_f > 0.0 && p_f <= 1.0)) {
    throw Error(ErrorClass::Domain, "P(d) and P(f) must lie in (0,1]");
  }
  const double scale = prior_d / p_f;
  return {three_level_likelihood_term(cfg, s) * scale, two_level_likelihood_term(cfg, s) * scale};
}

std::string_view to_string(Bias bias) {
  switch (bias) {
    case Bias::Exact: return "exact";
    case Bias::Overestimate: return "overestimate";
    case Bias::Underestimate: return "underestimate";
    case Bias::Mixed: return "mixed";
  }
  return "unknown";
}

Bias predict_bias(std::size_t fan_in, std::size_t fan_out) {
  if (fan_in <= 1 && fan_out <= 1) return Bias::Exact;
  if (fan_out <= 1) return Bias::Overestimate;
  if (fan_in <= 1) return Bias::Underestimate;
  return Bias::Mixed;
}

std::map<NodeId, Bias> predict_bias(const FanStats& stats) {
  std::map<NodeId, Bias> out;
  for (const auto& [id, fan] : stats.per_ips) out.emplace(id, predict_bias(fan.fan_in, fan.fan_out));
  return out;
}

std::optional<Star> detect_star(const Network& net) {
  const auto ips = net.indices_of_kind(NodeKind::IPS);
  if (ips.size() != 1) return std::nullopt;
  const std::size_t centre = ips.front();
  for (const Edge& e : net.edges()) {
    const bool into = e.dst == net.node(centre).id && net.node(e.src).kind == NodeKind::Disease;
    const bool out = e.src == net.node(centre).id && net.node(e.dst).kind == NodeKind::Finding;
    if (!into && !out) return std::nullopt;
  }
  Star star;
  star.ips = net.node(centre).id;
  star.config.rho_i = net.node(centre).leak;
  for (std::size_t d : net.indices_of_kind(NodeKind::Disease)) {
    auto eta = net.eta(net.node(d).id, star.ips);
    if (!eta) return std::nullopt;
    star.diseases.push_back(net.node(d).id);
    star.config.p.push_back(*eta);
    star.config.priors.push_back(*net.node(d).prior);
  }
  for (std::size_t f : net.indices_of_kind(NodeKind::Finding)) {
    auto eta = net.eta(star.ips, net.node(f).id);
    if (!eta) return std::nullopt;
    star.findings.push_back(net.node(f).id);
    star.config.q.push_back(*eta);
    star.config.rho_f.push_back(net.node(f).leak);
  }
  if (star.diseases.empty() || star.findings.empty()) return std::nullopt;
  return star;
}

std::map<NodeId, IpsPathLength> ips_path_lengths(const Network& net) {
  struct Agg {
    double paths = 0.0;
    double ips_total = 0.0;
    std::size_t max_ips = 0;
  };
  net.require_valid();
  std::vector<Agg> agg(net.size());
  const auto order = net.topological_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const std::size_t u = *it;
    const Node& node = net.node(u);
    Agg a;
    if (node.kind == NodeKind::Finding) {
      a.paths = 1.0;
    } else {
      const double self = node.kind == NodeKind::IPS ? 1.0 : 0.0;
      for (const ParentLink& c : net.children(u)) {
        const Agg& b = agg[c.node];
        if (b.paths == 0.0) continue;
        a.paths += b.paths;
        a.ips_total += b.ips_total + self * b.paths;
        a.max_ips = std::max(a.max_ips, b.max_ips + static_cast<std::size_t>(self));
      }
    }
    agg[u] = a;
  }
  std::map<NodeId, IpsPathLength> out;
  for (std::size_t d : net.indices_of_kind(NodeKind::Disease)) {
    const Agg& a = agg[d];
    IpsPathLength l;
    l.paths = static_cast<std::size_t>(a.paths);
    l.max_ips = a.max_ips;
    l.mean_ips = a.paths > 0.0 ? a.ips_total / a.paths : 0.0;
    out.emplace(net.node(d).id, l);
  }
  return out;
}

}  // namespace nornet
