#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "nornet/network.hpp"

namespace nornet {

struct Fan {
  std::size_t fan_in = 0;   // arcs terminating at the node
  std::size_t fan_out = 0;  // arcs leaving the node

  friend bool operator==(const Fan&, const Fan&) = default;
};

struct FanStats {
  std::map<NodeId, Fan> per_ips;
  std::size_t max_fan_in = 0;
  std::size_t max_fan_out = 0;
  double mean_fan_in = 0.0;
  double mean_fan_out = 0.0;
};

FanStats fan_stats(const Network& net);

// One IPS node I between m diseases and n findings.
//   p      disease->I etas (m of them)
//   q      I->finding etas (n of them)
//   rho_i  leak of I
//   rho_f  finding leaks (n of them)
struct StarConfig {
  std::vector<double> p;
  std::vector<double> q;
  double rho_i = 0.0;
  std::vector<double> rho_f;
  std::vector<double> priors;
};

// Three-level over two-level P(d|f) for fan-out 1, with the common
// P(d)/P(f) factor cancelled:
//   {q(1-rho_I)[1-prod(1-p_i)] + rho_F prod(1-p_i)} / {[1-prod(1-p_i q)](1-rho_F)}
double ratio_r1_exact(const StarConfig& cfg);

// Two-disease form: (1-rho_I)(p1+p2-p1p2) / [(1-rho_F)(p1+p2-q p1p2)].
double ratio_r1_two_disease(double p1, double p2, double q, double rho_i, double rho_f);

struct RatioR2 {
  double exact = 0.0;
  double approx = 0.0;
};

// Fan-in 1, fan-out n:
//   exact  = [p prod q_i + (1-p) prod rho_Fi] / prod(p q_i)
//   approx = 1 / p^(n-1)
RatioR2 ratio_r2(double p, std::span<const double> q, std::span<const double> rho_f);

struct ClosedFormPosteriors {
  double three_level = 0.0;
  double two_level = 0.0;
};

// Both fan-out-1 posterior expressions including the P(d)/P(f) factor.
ClosedFormPosteriors closed_form_posteriors(const StarConfig& cfg, double prior_d, double p_f);

enum class Bias { Exact, Overestimate, Underestimate, Mixed };

std::string_view to_string(Bias bias);

// Direction in which the two-level network misstates the posterior of a
// present disease given positive findings below an IPS node. Exact assumes
// the IPS node is leak-free.
Bias predict_bias(std::size_t fan_in, std::size_t fan_out);
std::map<NodeId, Bias> predict_bias(const FanStats& stats);

// Recognizes a single-IPS star: diseases feed only the IPS node and every
// finding's only parent is the IPS node.
struct Star {
  NodeId ips;
  std::vector<NodeId> diseases;
  std::vector<NodeId> findings;
  StarConfig config;
};
std::optional<Star> detect_star(const Network& net);

// Number of IPS nodes along disease->finding paths, per disease.
struct IpsPathLength {
  std::size_t paths = 0;
  std::size_t max_ips = 0;
  double mean_ips = 0.0;
};
std::map<NodeId, IpsPathLength> ips_path_lengths(const Network& net);

}  // namespace nornet
