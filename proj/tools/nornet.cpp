// nornet: command-line front end for the leaky noisy-OR toolkit.
//
// Every subcommand is a thin binding over the library; failures print a
// single `error:<class>: <detail>` line on stderr and exit with status 1.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "nornet/analysis.hpp"
#include "nornet/error.hpp"
#include "nornet/experiment.hpp"
#include "nornet/generator.hpp"
#include "nornet/inference.hpp"
#include "nornet/io.hpp"
#include "nornet/network.hpp"
#include "nornet/reduction.hpp"

namespace {

using namespace nornet;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_real(const std::string& s, const std::string& flag) {
  try {
    std::size_t used = 0;
    double x = std::stod(s, &used);
    if (used == s.size()) return x;
  } catch (const std::exception&) {
  }
  throw Error(ErrorClass::Config, "malformed number '" + s + "' in " + flag);
}

std::size_t to_count(const std::string& s, const std::string& flag) {
  try {
    std::size_t used = 0;
    unsigned long long x = std::stoull(s, &used);
    if (used == s.size()) return static_cast<std::size_t>(x);
  } catch (const std::exception&) {
  }
  throw Error(ErrorClass::Config, "malformed integer '" + s + "' in " + flag);
}

// "a..b", or a single value meaning a..a.
std::pair<std::string, std::string> split_range(const std::string& s, const std::string& flag) {
  const std::size_t dots = s.find("..");
  if (dots == std::string::npos) return {s, s};
  if (dots == 0 || dots + 2 >= s.size()) throw Error(ErrorClass::Config, "malformed range in " + flag);
  return {s.substr(0, dots), s.substr(dots + 2)};
}

RealRange real_range(const std::string& s, const std::string& flag) {
  auto [lo, hi] = split_range(s, flag);
  return {to_real(lo, flag), to_real(hi, flag)};
}

IntRange int_range(const std::string& s, const std::string& flag) {
  auto [lo, hi] = split_range(s, flag);
  return {to_count(lo, flag), to_count(hi, flag)};
}

Assignment parse_evidence(const std::string& spec) {
  Assignment evidence;
  for (const std::string& item : split(spec, ',')) {
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw Error(ErrorClass::Domain, "evidence item '" + item + "' is not <id>=<0|1>");
    }
    const std::string value = item.substr(eq + 1);
    if (value != "0" && value != "1") {
      throw Error(ErrorClass::Domain, "evidence value for '" + item.substr(0, eq) + "' must be 0 or 1");
    }
    evidence[item.substr(0, eq)] = value == "1";
  }
  return evidence;
}

InferenceMethod parse_method(const std::string& s) {
  if (s == "auto") return InferenceMethod::Auto;
  if (s == "enumeration") return InferenceMethod::Enumeration;
  if (s == "elimination") return InferenceMethod::Elimination;
  throw Error(ErrorClass::Config, "unknown inference method '" + s + "'");
}

int cmd_validate(const std::string& path) {
  const Network net = parse_network_unchecked(read_text_file(path));
  const auto violations = validate(net);
  if (violations.empty()) {
    std::cout << "ok\n";
    return 0;
  }
  for (const Violation& v : violations) {
    std::cout << "violation: " << v.rule << ": " << v.subject << ": " << v.detail << '\n';
  }
  return 1;
}

struct GenArgs {
  std::size_t diseases = 2, ips = 2, findings = 38;
  std::string fan_in = "1..2", fan_out = "1..3", eta = "0.2..0.9", leak = "0..0.05",
              prior = "0.05..0.3", phase_weights, name = "generated", out;
  double ips_chain = 0.0;
  std::uint64_t seed = 0;
};

int cmd_gen(const GenArgs& a) {
  GeneratorConfig cfg;
  cfg.name = a.name;
  cfg.n_diseases = a.diseases;
  cfg.n_ips = a.ips;
  cfg.n_findings = a.findings;
  cfg.fan_in = int_range(a.fan_in, "--fan-in");
  cfg.fan_out = int_range(a.fan_out, "--fan-out");
  cfg.eta = real_range(a.eta, "--eta");
  cfg.leak = real_range(a.leak, "--leak");
  cfg.prior = real_range(a.prior, "--prior");
  cfg.ips_chain_prob = a.ips_chain;
  cfg.seed = a.seed;
  if (!a.phase_weights.empty()) {
    const auto parts = split(a.phase_weights, ',');
    if (parts.size() != kPhaseCount) throw Error(ErrorClass::Config, "--phase-weights needs five values");
    for (std::size_t k = 0; k < parts.size(); ++k) cfg.phase_weights[k] = to_real(parts[k], "--phase-weights");
  }
  write_text_file(a.out, serialize_network(generate_network(cfg)));
  return 0;
}

int cmd_reduce(const std::string& path, const std::string& out, const std::string& provenance) {
  const ReductionReport report = level_reduce(read_network_file(path));
  write_text_file(out, serialize_network(report.reduced));
  if (!provenance.empty()) write_text_file(provenance, provenance_csv(report));
  std::cout << "param_count_original=" << report.param_count_original << '\n'
            << "param_count_reduced=" << report.param_count_reduced << '\n';
  return 0;
}

int cmd_infer(const std::string& path, const std::string& evidence_spec, const std::string& conjunction,
              const std::string& method) {
  const Network net = read_network_file(path);
  const Assignment evidence = parse_evidence(evidence_spec);
  InferenceOptions options;
  options.method = parse_method(method);
  const PosteriorResult result = posterior(net, evidence, options);
  for (const auto& [id, p] : result.posterior) std::cout << id << ' ' << format_real(p, 12) << '\n';
  std::cout << "evidence_likelihood " << format_real(result.evidence_likelihood, 12) << '\n';
  if (!conjunction.empty()) {
    const auto members = split(conjunction, ',');
    std::cout << "conjunction " << format_real(conjunction_posterior(net, evidence, members, options), 12)
              << '\n';
  }
  return 0;
}

int cmd_sample(const std::string& path, std::size_t n, std::uint64_t seed, bool require_positive,
               const std::string& out) {
  const Network net = read_network_file(path);
  write_text_file(out, cases_csv(net, generate_cases(net, n, seed, require_positive)));
  return 0;
}

int cmd_analyze(const std::string& path) {
  const Network net = read_network_file(path);
  const FanStats stats = fan_stats(net);
  std::cout << "network " << net.name() << " diseases=" << net.count(NodeKind::Disease)
            << " ips=" << net.count(NodeKind::IPS) << " findings=" << net.count(NodeKind::Finding) << '\n';
  for (const auto& [id, fan] : stats.per_ips) {
    std::cout << "ips " << id << " fan_in=" << fan.fan_in << " fan_out=" << fan.fan_out
              << " bias=" << to_string(predict_bias(fan.fan_in, fan.fan_out)) << '\n';
  }
  std::cout << "fan_in_max=" << stats.max_fan_in << " fan_in_mean=" << format_real(stats.mean_fan_in, 6)
            << " fan_out_max=" << stats.max_fan_out
            << " fan_out_mean=" << format_real(stats.mean_fan_out, 6) << '\n';
  for (const auto& [id, len] : ips_path_lengths(net)) {
    std::cout << "disease " << id << " paths=" << len.paths << " ips_on_path_max=" << len.max_ips
              << " ips_on_path_mean=" << format_real(len.mean_ips, 6) << '\n';
  }
  if (auto star = detect_star(net)) {
    const StarConfig& cfg = star->config;
    if (cfg.q.size() == 1) {
      try {
        std::cout << "star r1_exact=" << format_real(ratio_r1_exact(cfg), 12);
        if (cfg.p.size() == 2) {
          std::cout << " r1_two_disease="
                    << format_real(ratio_r1_two_disease(cfg.p[0], cfg.p[1], cfg.q[0], cfg.rho_i, cfg.rho_f[0]), 12);
        }
        std::cout << '\n';
      } catch (const Error& e) {
        std::cout << "star r1 undefined (" << e.what() << ")\n";
      }
    }
    if (cfg.p.size() == 1) {
      try {
        const RatioR2 r2 = ratio_r2(cfg.p[0], cfg.q, cfg.rho_f);
        std::cout << "star r2_exact=" << format_real(r2.exact, 12)
                  << " r2_approx=" << format_real(r2.approx, 12) << '\n';
      } catch (const Error& e) {
        std::cout << "star r2 undefined (" << e.what() << ")\n";
      }
    }
  }
  return 0;
}

int cmd_experiment(const std::string& path, std::size_t n, std::uint64_t seed, std::size_t jobs,
                   bool include_negative, const std::string& out) {
  const Network net = read_network_file(path);
  ExperimentOptions options;
  options.jobs = jobs;
  options.require_positive = !include_negative;
  const ExperimentSummary summary = run_experiment(net, n, seed, options);
  write_text_file(out, report_csv(summary));
  std::cout << "cases=" << summary.n_cases << " param_count_original=" << summary.param_count_original
            << " param_count_reduced=" << summary.param_count_reduced
            << " mean_abs_difference=" << format_real(summary.mean_abs_difference, 9) << '\n';
  for (int k = 0; k < kPhaseCount; ++k) {
    std::cout << "phase " << k + 1
              << " mean_abs_difference=" << format_real(summary.mean_abs_difference_by_phase[k], 9) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Leaky noisy-OR network reduction and diagnostic evaluation"};
  app.require_subcommand(1);

  std::string net_path, out_path, provenance_path, evidence, conjunction, method = "auto";
  std::size_t cases = 100;
  std::uint64_t seed = 0;
  std::size_t jobs = std::max(1U, std::thread::hardware_concurrency());
  bool require_positive = false;
  bool include_negative = false;
  GenArgs gen;

  auto* validate_cmd = app.add_subcommand("validate", "Check a network file against all invariants");
  validate_cmd->add_option("net", net_path, "Network file")->required();

  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic three-level network");
  gen_cmd->add_option("--diseases", gen.diseases)->required();
  gen_cmd->add_option("--ips", gen.ips)->required();
  gen_cmd->add_option("--findings", gen.findings)->required();
  gen_cmd->add_option("--fan-in", gen.fan_in, "Range a..b of IPS predecessors");
  gen_cmd->add_option("--fan-out", gen.fan_out, "Range a..b of IPS finding children");
  gen_cmd->add_option("--eta", gen.eta, "Activation probability range lo..hi");
  gen_cmd->add_option("--leak", gen.leak, "Leak probability range lo..hi");
  gen_cmd->add_option("--prior", gen.prior, "Disease prior range lo..hi");
  gen_cmd->add_option("--ips-chain", gen.ips_chain, "Probability of admitting each IPS->IPS arc candidate");
  gen_cmd->add_option("--phase-weights", gen.phase_weights, "Five comma-separated phase weights");
  gen_cmd->add_option("--name", gen.name, "Network name");
  gen_cmd->add_option("--seed", gen.seed)->required();
  gen_cmd->add_option("-o,--output", gen.out)->required();

  auto* reduce_cmd = app.add_subcommand("reduce", "Eliminate all IPS nodes");
  reduce_cmd->add_option("net", net_path)->required();
  reduce_cmd->add_option("-o,--output", out_path)->required();
  reduce_cmd->add_option("--provenance", provenance_path, "Write per-path provenance CSV");

  auto* infer_cmd = app.add_subcommand("infer", "Exact disease posteriors");
  infer_cmd->add_option("net", net_path)->required();
  infer_cmd->add_option("--evidence", evidence, "Comma-separated <finding>=<0|1>");
  infer_cmd->add_option("--conjunction", conjunction, "Comma-separated diseases queried jointly");
  infer_cmd->add_option("--method", method, "auto, enumeration or elimination");

  auto* sample_cmd = app.add_subcommand("sample", "Draw test cases");
  sample_cmd->add_option("net", net_path)->required();
  sample_cmd->add_option("--cases", cases)->required();
  sample_cmd->add_option("--seed", seed)->required();
  sample_cmd->add_flag("--require-positive", require_positive);
  sample_cmd->add_option("-o,--output", out_path)->required();

  auto* analyze_cmd = app.add_subcommand("analyze", "Fan statistics and error predictors");
  analyze_cmd->add_option("net", net_path)->required();

  auto* experiment_cmd = app.add_subcommand("experiment", "Compare full and reduced networks on sampled cases");
  experiment_cmd->add_option("net", net_path)->required();
  experiment_cmd->add_option("--cases", cases)->required();
  experiment_cmd->add_option("--seed", seed)->required();
  experiment_cmd->add_option("--jobs", jobs, "Worker threads");
  experiment_cmd->add_flag("--include-negative", include_negative,
                           "Keep sampled cases in which no disease is present");
  experiment_cmd->add_option("-o,--output", out_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error:usage: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*validate_cmd) return cmd_validate(net_path);
    if (*gen_cmd) return cmd_gen(gen);
    if (*reduce_cmd) return cmd_reduce(net_path, out_path, provenance_path);
    if (*infer_cmd) return cmd_infer(net_path, evidence, conjunction, method);
    if (*sample_cmd) return cmd_sample(net_path, cases, seed, require_positive, out_path);
    if (*analyze_cmd) return cmd_analyze(net_path);
    if (*experiment_cmd) return cmd_experiment(net_path, cases, seed, jobs, include_negative, out_path);
  } catch (const Error& e) {
    std::cerr << "error:" << to_string(e.error_class()) << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error:internal: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
