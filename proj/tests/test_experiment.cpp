#include <doctest.h>

#include <cmath>

#include "nornet/error.hpp"
#include "nornet/experiment.hpp"
#include "nornet/generator.hpp"
#include "nornet/io.hpp"
#include "nornet/reduction.hpp"
#include "test_support.hpp"

using namespace nornet;
using namespace nornet::testing;

TEST_CASE("generate_network hits the size profiles") {
  GeneratorConfig cfg;
  cfg.seed = 7;
  cfg.n_diseases = 2;
  cfg.n_ips = 2;
  cfg.n_findings = 38;
  CHECK(generate_network(cfg).size() == 42);
  cfg.n_diseases = 3;
  cfg.n_ips = 46;
  cfg.n_findings = 97;
  cfg.fan_in = {1, 3};
  const Network bn3 = generate_network(cfg);
  CHECK(bn3.size() == 146);
  CHECK(bn3.count(NodeKind::IPS) == 46);
  cfg.n_diseases = 4;
  cfg.n_ips = 80;
  cfg.n_findings = 161;
  CHECK(generate_network(cfg).size() == 245);
}

TEST_CASE("generate_network is deterministic") {
  GeneratorConfig cfg;
  cfg.seed = 7;
  cfg.ips_chain_prob = 0.2;
  CHECK(serialize_network(generate_network(cfg)) == serialize_network(generate_network(cfg)));
  GeneratorConfig other = cfg;
  other.seed = 8;
  CHECK(serialize_network(generate_network(cfg)) != serialize_network(generate_network(other)));
}

TEST_CASE("generated networks satisfy the connectivity contract") {
  GeneratorConfig cfg;
  cfg.n_diseases = 3;
  cfg.n_ips = 12;
  cfg.n_findings = 30;
  cfg.fan_in = {1, 3};
  cfg.fan_out = {2, 4};
  cfg.ips_chain_prob = 0.25;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    cfg.seed = seed;
    const Network net = generate_network(cfg);
    CHECK(net.valid());
    for (std::size_t i : net.indices_of_kind(NodeKind::IPS)) {
      CHECK(net.parents(i).size() >= 1);
      CHECK(net.parents(i).size() <= 3);
      CHECK(net.children(i).size() >= 1);
    }
    for (std::size_t f : net.indices_of_kind(NodeKind::Finding)) CHECK(net.parents(f).size() >= 1);
  }
}

TEST_CASE("generate_network configuration errors") {
  auto expect_config_error = [](const GeneratorConfig& cfg) {
    try {
      generate_network(cfg);
      FAIL("expected a configuration error");
    } catch (const Error& e) {
      CHECK(e.error_class() == ErrorClass::Config);
    }
  };
  GeneratorConfig cfg;
  cfg.fan_in = {3, 4};  // two diseases only
  expect_config_error(cfg);
  cfg = {};
  cfg.fan_out = {1, 50};
  expect_config_error(cfg);
  cfg = {};
  cfg.eta = {0.0, 0.5};
  expect_config_error(cfg);
  cfg = {};
  cfg.prior = {0.6, 0.5};
  expect_config_error(cfg);
  cfg = {};
  cfg.phase_weights = {0, 0, 0, 0, 0};
  expect_config_error(cfg);
}

TEST_CASE("phase weights skew the phase assignment") {
  GeneratorConfig cfg;
  cfg.phase_weights = {0, 0, 1, 0, 0};
  for (const Node& n : generate_network(cfg).nodes()) {
    if (n.kind == NodeKind::Finding) CHECK(*n.phase == 3);
  }
}

TEST_CASE("generate_cases partitions findings by phase") {
  const Network net = random_small_network(4);
  const auto cases = generate_cases(net, 20, 5, false);
  REQUIRE(cases.size() == 20);
  for (const TestCase& c : cases) {
    std::size_t total = 0;
    for (int k = 0; k < kPhaseCount; ++k) {
      for (const auto& [id, v] : c.findings_by_phase[k]) CHECK(*net.node(id).phase == k + 1);
      total += c.findings_by_phase[k].size();
    }
    CHECK(total == net.count(NodeKind::Finding));
    CHECK(cumulative_evidence(c, 5).size() == total);
    CHECK(cumulative_evidence(c, 1).size() == c.findings_by_phase[0].size());
    CHECK(c.true_diseases.size() == net.count(NodeKind::Disease));
  }
  CHECK_THROWS_AS(cumulative_evidence(cases[0], 6), Error);
}

TEST_CASE("generate_cases forced, deterministic and bounded") {
  Network certain("certain", {disease("D1", 1.0), disease("D2", 1.0), finding("F", 0.1)},
                  {{"D1", "F", 0.5}, {"D2", "F", 0.5}});
  for (const TestCase& c : generate_cases(certain, 30, 1, false)) {
    for (const auto& [id, v] : c.true_diseases) CHECK(v);
  }

  const Network net = random_small_network(9);
  const auto a = generate_cases(net, 200, 77, true);
  const auto b = generate_cases(net, 200, 77, true);
  CHECK(cases_csv(net, a) == cases_csv(net, b));
  for (const TestCase& c : a) {
    bool any = false;
    for (const auto& [id, v] : c.true_diseases) any = any || v;
    CHECK(any);
  }

  Network never("never", {disease("D", 0.0), finding("F", 0.1)}, {{"D", "F", 0.5}});
  try {
    generate_cases(never, 3, 1, true);
    FAIL("expected exhaustion");
  } catch (const Error& e) {
    CHECK(e.error_class() == ErrorClass::Exhaustion);
  }
  CHECK_THROWS_AS(generate_cases(net, 0, 1, false), Error);
}

TEST_CASE("generate_cases disease frequency within binomial bound") {
  const Network net = chain(0.5, 0.9, 0.9, 0.0, 0.0);
  const int n = 10000;
  int present = 0;
  for (const TestCase& c : generate_cases(net, n, 123, false)) present += c.true_diseases.at("A");
  CHECK(std::fabs(present / double(n) - 0.5) <= 3.0 * std::sqrt(0.25 / n));
}

TEST_CASE("experiment on a two-level network is a fixed point") {
  GeneratorConfig cfg;
  cfg.n_ips = 0;
  cfg.n_findings = 10;
  cfg.seed = 3;
  const Network net = generate_network(cfg);
  const ExperimentSummary s = run_experiment(net, 40, 9);
  CHECK(s.rows.size() == kPhaseCount * (net.count(NodeKind::Disease) + 1));
  CHECK(s.mean_abs_difference == 0.0);
  for (const SummaryRow& r : s.rows) {
    CHECK(r.mean_tp_two_level == r.mean_tp_three_level);
    if (r.t_stat) CHECK(*r.t_stat == 0.0);
    CHECK_FALSE(r.sig95);
  }
}

TEST_CASE("experiment on exact chains gives identical per-phase means") {
  Network net("toy", {disease("A", 0.4), ips("B"), finding("C1", 0.0, 1), finding("C2", 0.0, 2)},
              {{"A", "B", 0.8}, {"B", "C1", 0.7}, {"A", "C2", 0.6}});
  const ExperimentSummary s = run_experiment(net, 60, 2);
  for (const SummaryRow& r : s.rows) {
    if (!r.mean_tp_two_level) continue;
    CHECK(std::fabs(*r.mean_tp_two_level - *r.mean_tp_three_level) < 1e-12);
  }
  CHECK(s.mean_abs_difference < 1e-12);
}

TEST_CASE("exact generated networks give zero t statistics") {
  GeneratorConfig cfg;
  cfg.n_diseases = 3;
  cfg.n_ips = 6;
  cfg.n_findings = 15;
  cfg.fan_in = {1, 1};
  cfg.fan_out = {1, 1};
  cfg.leak = {0.0, 0.0};
  cfg.seed = 21;
  const ExperimentSummary s = run_experiment(generate_network(cfg), 50, 4);
  for (const SummaryRow& r : s.rows) {
    if (r.t_stat) CHECK(*r.t_stat == 0.0);
  }
  CHECK(s.mean_abs_difference < 1e-12);
}

TEST_CASE("experiment is invariant to parallelism") {
  GeneratorConfig cfg;
  cfg.n_diseases = 3;
  cfg.n_ips = 6;
  cfg.n_findings = 20;
  cfg.fan_in = {1, 3};
  cfg.fan_out = {1, 3};
  cfg.seed = 5;
  const Network net = generate_network(cfg);
  ExperimentOptions one, many;
  one.jobs = 1;
  many.jobs = 6;
  CHECK(report_csv(run_experiment(net, 80, 3, one)) == report_csv(run_experiment(net, 80, 3, many)));
}

TEST_CASE("single-disease chain: true-diagnosis mean grows with evidence") {
  std::vector<Node> nodes{disease("A", 0.3)};
  std::vector<Edge> edges;
  for (int k = 1; k <= 5; ++k) {
    const std::string b = "B" + std::to_string(k), c = "C" + std::to_string(k);
    nodes.push_back(ips(b));
    nodes.push_back(finding(c, 0.0, k));
    edges.push_back({"A", b, 0.8});
    edges.push_back({b, c, 0.8});
  }
  const ExperimentSummary s = run_experiment(Network("ladder", nodes, edges), 500, 13);
  double previous = 0.0;
  for (const SummaryRow& r : s.rows) {
    if (r.disease != "A") continue;
    CHECK(*r.mean_tp_three_level >= previous);
    previous = *r.mean_tp_three_level;
  }
}

TEST_CASE("divergence grows with fan ranges on a fixed seed ladder") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    double previous = -1.0;
    const std::vector<IntRange> ladder{{1, 1}, {1, 2}, {2, 3}, {3, 4}};
    for (const IntRange fan : ladder) {
      GeneratorConfig cfg;
      cfg.n_diseases = 3;
      cfg.n_ips = 10;
      cfg.n_findings = 30;
      cfg.fan_in = fan;
      cfg.fan_out = fan;
      cfg.ips_chain_prob = 0.3;
      cfg.seed = seed;
      const double d = run_experiment(generate_network(cfg), 100, 1).mean_abs_difference;
      CAPTURE(seed);
      CAPTURE(fan.hi);
      CHECK(d >= previous);
      previous = d;
    }
  }
}
